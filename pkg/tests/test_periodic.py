import numpy as np
import pytest

import hwp
from hwp import analysis
from hwp.errors import SolverError
from hwp.timefourier import FourierField

T = 2 * np.pi


def grid_n(n):
    return hwp.build_stacked_rectangles(np.pi, 1.0, 1.0, n, n, n)


def test_zero_forcing_gives_trivial_solution():
    grid = grid_n(9)
    rep = hwp.solve_periodic_harmonic(grid, None, None, 3)
    assert analysis.sobolev_time_norm(rep.w, 0, grid) <= 1e-12
    assert analysis.sobolev_time_norm(rep.u, 0, grid) <= 1e-12


def test_analytic_mode_reproduction_second_order():
    rels = {}
    for n in (17, 33):
        grid = grid_n(n)
        g2, w2 = hwp.analytic_mode(2, grid)
        rep = hwp.solve_periodic_harmonic(grid, None, g2, 3)
        rels[n] = (analysis.sobolev_time_norm(rep.w - w2, 0, grid)
                   / analysis.sobolev_time_norm(w2, 0, grid))
        assert rep.max_residual() <= 1e-9
    assert rels[33] < 0.02
    assert rels[17] / rels[33] == pytest.approx(4.0, abs=0.9)


def test_reconstruction_is_real():
    grid = grid_n(9)
    g2, _ = hwp.analytic_mode(2, grid)
    rep = hwp.solve_periodic_harmonic(grid, None, g2, 3)
    ts = np.linspace(0, T, 13)
    for field in (rep.w, rep.u):
        samples = field.sample(ts)
        scale = max(np.max(np.abs(samples)), 1e-300)
        assert np.max(np.abs(samples.imag)) / scale < 1e-10


def test_interface_velocity_matching_weak_identity():
    # int int_Gamma u xi = -int int_Gamma w dt(xi) for random periodic xi
    grid = grid_n(17)
    g2, _ = hwp.analytic_mode(2, grid)
    from hwp.cli import smooth_heat_forcing
    f = smooth_heat_forcing(grid, T, 1)
    rep = hwp.solve_periodic_harmonic(grid, f, g2, 4)
    rng = np.random.default_rng(0)
    wx = np.zeros(grid.nx)
    wx[grid.interface_columns] = grid.hx
    u_tr = rep.u.coeffs[:, -1, :]
    w_tr = rep.w.coeffs[:, 0, :]
    n = rep.u.n_modes
    scale = analysis.sobolev_time_norm(rep.trace_h, 0, grid)
    for _ in range(10):
        xi = FourierField.zeros(T, n, (grid.nx,), "interface")
        for k in range(0, n + 1):
            c = rng.standard_normal() + (1j * rng.standard_normal() if k else 0)
            shape = np.sin(int(rng.integers(1, 4)) * grid.x)
            xi.coeffs[k + n] = c * shape
            xi.coeffs[-k + n] = np.conj(c * shape)
        lhs = rhs = 0.0
        for idx, k in enumerate(range(-n, n + 1)):
            lhs += T * np.real(np.sum(wx * u_tr[idx] * np.conj(xi.coeffs[idx])))
            rhs -= T * np.real(np.sum(wx * w_tr[idx]
                                      * np.conj(1j * k * xi.coeffs[idx])))
        xi_scale = np.sqrt(float(np.sum(np.abs(xi.coeffs) ** 2)))
        assert abs(lhs - rhs) <= 1e-8 * max(1.0, scale * xi_scale)


def test_mean_invariance():
    grid = grid_n(9)
    X, Y = np.meshgrid(grid.x, grid.y_h)
    f = FourierField.zeros(T, 2, (grid.ny_h, grid.nx), "heat")
    f.coeffs[2] = np.sin(X) * (1 + Y)  # pure mean forcing
    rep = hwp.solve_periodic_harmonic(grid, f, None, 2)
    pair = hwp.solve_mean_pair(grid, f.mode(0).real, None)
    assert np.max(np.abs(rep.u.mode(0) - pair.mean_u)) == 0.0
    assert np.max(np.abs(rep.w.mode(0) - pair.mean_w)) == 0.0


def test_trace_primitive_is_interface_trace():
    grid = grid_n(9)
    from hwp.cli import smooth_heat_forcing
    rep = hwp.solve_periodic_harmonic(grid, smooth_heat_forcing(grid, T, 1),
                                      None, 2)
    # h = dt(w) on the interface, H = its mean-free primitive = w trace
    n = rep.w.n_modes
    for k in range(-n, n + 1):
        if k == 0:
            continue
        np.testing.assert_allclose(rep.trace_h.mode(k),
                                   1j * k * rep.w.mode(k)[0, :], atol=1e-15)
        np.testing.assert_allclose(rep.trace_primitive.mode(k),
                                   rep.w.mode(k)[0, :], atol=1e-15)
    prim = hwp.periodic_antiderivative(rep.trace_h, 1)
    assert np.max(np.abs(prim.coeffs - rep.trace_primitive.coeffs)) < 1e-14


# ---------------------------------------------------------------------------
# damped march
# ---------------------------------------------------------------------------

def test_epsilon_march_zero_forcing_converges_immediately():
    grid = grid_n(9)
    params = hwp.EpsilonParams(eps=0.1, n_steps=64, period_tol=1e-9,
                               max_periods=10)
    rep = hwp.epsilon_march(grid, None, None, params, period=T)
    assert rep.params["periods"] == 1
    assert analysis.sobolev_time_norm(rep.w, 0, grid) <= 1e-12


def test_epsilon_march_approaches_harmonic_solution():
    grid = grid_n(17)
    g2, _ = hwp.analytic_mode(2, grid)
    ref = hwp.solve_periodic_harmonic(grid, None, g2, 4)
    params = hwp.EpsilonParams(eps=0.05, n_steps=256, period_tol=1e-6,
                               max_periods=300, n_report_modes=4)
    rep = hwp.epsilon_march(grid, None, g2, params)
    gap = (analysis.sobolev_time_norm(rep.w - ref.w, 0, grid)
           / analysis.sobolev_time_norm(ref.w, 0, grid))
    dt = T / 256
    assert gap < 3.0 * (0.05 + dt)


def test_epsilon_march_interface_velocity_relation():
    grid = grid_n(9)
    g2, _ = hwp.analytic_mode(2, grid)
    params = hwp.EpsilonParams(eps=0.1, n_steps=128, period_tol=1e-7,
                               max_periods=200, n_report_modes=4)
    rep = hwp.epsilon_march(grid, None, g2, params)
    dt = T / 128
    scale = float(np.max(np.abs(rep.w.coeffs[:, 0, :])))  # global trace scale
    for k in (1, 2):
        lhs = rep.u.mode(k)[-1, :]
        rhs = 1j * k * rep.w.mode(k)[0, :]
        assert np.max(np.abs(lhs - rhs)) <= 5 * dt * scale


def test_contraction_strengthens_with_damping():
    grid = grid_n(9)
    g2, _ = hwp.analytic_mode(2, grid)
    rates = {}
    for eps in (0.05, 0.2):
        params = hwp.EpsilonParams(eps=eps, n_steps=128, period_tol=1e-6,
                                   max_periods=400, n_report_modes=4)
        rep = hwp.epsilon_march(grid, None, g2, params)
        rates[eps] = np.median(rep.params["contraction"])
    assert rates[0.2] < rates[0.05]
    # the damping shift sets the decay rate: factor ~ exp(-eps T) per period
    assert rates[0.05] == pytest.approx(np.exp(-0.05 * T), abs=0.12)


def test_epsilon_march_max_periods_error_carries_history():
    grid = grid_n(9)
    g2, _ = hwp.analytic_mode(2, grid)
    params = hwp.EpsilonParams(eps=0.01, n_steps=64, period_tol=1e-12,
                               max_periods=3)
    with pytest.raises(SolverError) as err:
        hwp.epsilon_march(grid, None, g2, params)
    assert len(err.value.history) == 3


def test_epsilon_params_validation():
    with pytest.raises(Exception):
        hwp.EpsilonParams(eps=0.0)
    with pytest.raises(Exception):
        hwp.EpsilonParams(eps=0.1, n_steps=2)
