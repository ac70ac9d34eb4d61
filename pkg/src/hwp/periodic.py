"""Periodic solution computation.

Two routes to the same T-periodic solution of the coupled system:

* solve_periodic_harmonic: spectral in time. Mode 0 is the stationary
  mean-value pair; every mode k >= 1 is one complex sparse solve; negative
  modes follow by conjugation, so reconstructions are real to round-off.

* epsilon_march: the damped construction. A small shift eps > 0 adds
  2 eps w_t + eps^2 w to the wave equation and eps u to the heat equation,
  which makes the period map a contraction; a one-step implicit scheme
  (trapezoidal / Crank-Nicolson) marches the first-order system from rest
  until successive period snapshots agree, then the last period is
  transformed back to Fourier coefficients.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConfigurationError, SolverError
from .mesh import Grid
from . import operators as ops
from . import quadrature as quad
from .timefourier import HEAT, INTERFACE, WAVE, FourierField, time_transform


def _worker_count() -> int:
    raw = os.environ.get("HWP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass
class SolveReport:
    """Solution fields plus diagnostics from one periodic solve."""

    grid: Grid
    u: FourierField             # heat subgrid incl. derived interface trace
    w: FourierField             # wave subgrid
    trace_h: FourierField       # u restricted to the interface row
    trace_primitive: FourierField  # its mean-free primitive (equals w trace)
    mode_residuals: dict[int, float]
    timings: dict[str, float]
    method: str
    params: dict = field(default_factory=dict)

    @property
    def period(self) -> float:
        return self.u.period

    def max_residual(self) -> float:
        return max(self.mode_residuals.values(), default=0.0)


def _trace_fields(grid: Grid, w: FourierField) -> tuple[FourierField, FourierField]:
    """Interface velocity trace h = i w k * (w on the interface row) and its
    mean-free primitive (which is the interface trace of w itself)."""
    n = w.n_modes
    ks = w.wavenumbers().reshape(-1, 1)
    w_trace = w.coeffs[:, 0, :]
    h = FourierField(w.period, 1j * w.omega * ks * w_trace, INTERFACE)
    big_h = FourierField(w.period, w_trace.copy(), INTERFACE)
    big_h.coeffs[n] = 0.0  # primitive is mean-free by construction
    return h, big_h


def solve_periodic_harmonic(grid: Grid, f: FourierField | None,
                            g: FourierField | None, n_modes: int,
                            tol: float = 1e-10) -> SolveReport:
    """Mode-by-mode periodic solve with n_modes temporal frequencies."""
    if n_modes < 0:
        raise ConfigurationError("mode count must be non-negative")
    periods = {x.period for x in (f, g) if x is not None}
    if len(periods) > 1:
        raise ConfigurationError("forcing fields disagree on the period")
    period = periods.pop() if periods else 2.0 * np.pi

    t0 = time.perf_counter()
    shape_w = (grid.ny_w, grid.nx)
    shape_h = (grid.ny_h, grid.nx)
    u_out = FourierField.zeros(period, n_modes, shape_h, HEAT)
    w_out = FourierField.zeros(period, n_modes, shape_w, WAVE)
    residuals: dict[int, float] = {}

    mean_f = f.mode(0).real if f is not None else None
    mean_g = g.mode(0).real if g is not None else None
    pair = ops.solve_mean_pair(grid, mean_f, mean_g, tol=tol)
    u_out.coeffs[n_modes] = pair.mean_u
    w_out.coeffs[n_modes] = pair.mean_w
    residuals[0] = max(pair.residual_heat, pair.residual_wave)
    t_mean = time.perf_counter()

    def solve_one(k: int):
        op = ops.assemble_coupled_mode(grid, k, period)
        f_k = f.mode(k) if f is not None else None
        g_k = g.mode(k) if g is not None else None
        rhs = ops.mode_rhs(op, f_k, g_k)
        try:
            x = ops.solve_linear(op, rhs, tol=tol)
        except SolverError as exc:
            raise SolverError(f"mode k={k}: {exc}", residual=exc.residual) from exc
        w_k, u_k = ops.split_mode_solution(op, x)
        return k, w_k, u_k, ops.mode_residual_fields(op, x, rhs)

    workers = _worker_count()
    ks = range(1, n_modes + 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve_one, ks))
    else:
        results = [solve_one(k) for k in ks]
    for k, w_k, u_k, res in results:
        w_out.coeffs[k + n_modes] = w_k
        w_out.coeffs[-k + n_modes] = np.conj(w_k)
        u_out.coeffs[k + n_modes] = u_k
        u_out.coeffs[-k + n_modes] = np.conj(u_k)
        residuals[k] = res
    t_modes = time.perf_counter()

    h, big_h = _trace_fields(grid, w_out)
    return SolveReport(
        grid=grid, u=u_out, w=w_out, trace_h=h, trace_primitive=big_h,
        mode_residuals=residuals,
        timings={"mean": t_mean - t0, "modes": t_modes - t_mean},
        method="harmonic", params={"n_modes": n_modes, "tol": tol})


# ---------------------------------------------------------------------------
# Damped periodic march
# ---------------------------------------------------------------------------

@dataclass
class EpsilonParams:
    """Parameters of the damped construction.

    eps > 0 is the damping shift; n_steps is the number of time steps per
    period (the step divides the period exactly by construction);
    period_tol is the relative energy-norm threshold on consecutive period
    snapshots; n_report_modes caps the Fourier content of the returned
    fields.
    """

    eps: float
    n_steps: int = 256
    period_tol: float = 1e-7
    max_periods: int = 400
    n_report_modes: int = 16

    def __post_init__(self):
        if self.eps <= 0:
            raise ConfigurationError("damping shift eps must be positive")
        if self.n_steps < 4:
            raise ConfigurationError("need at least 4 steps per period")


class _MarchOperator:
    """Trapezoidal step for the damped first-order system.

    State y = (w, v, u) with w, v on wave unknowns (interface included) and
    u on heat interior unknowns. ODE rows:
        w' = v
        v' = Lap w - 2 eps v - eps^2 w + g     (wave interior)
        u' = Lap u - eps u + f                 (heat interior)
    The v-slot at interface nodes carries the algebraic flux-balance row
    (one-sided derivatives, heat trace = v on the interface), enforced at
    the new time level each step.
    """

    def __init__(self, grid: Grid, eps: float, dt: float):
        self.grid = grid
        self.eps = eps
        self.dt = dt
        wave_ids = ops.wave_index_map(grid)
        self.wave_ids = wave_ids
        nw = int((wave_ids >= 0).sum())
        heat_ids = ops.heat_index_map(grid, 0)
        self.heat_ids = heat_ids
        nh = int((heat_ids >= 0).sum())
        self.nw, self.nh = nw, nh
        self.n = 2 * nw + nh
        hx, hyw, hyh = grid.hx, grid.hy_w, grid.hy_h

        rows, cols, vals = [], [], []

        def add(r, c, v):
            r = np.atleast_1d(r)
            rows.append(r.ravel())
            cols.append(np.atleast_1d(c).ravel())
            vals.append(np.broadcast_to(np.atleast_1d(v), r.shape).astype(float).ravel())

        ow, ov, ou = 0, nw, 2 * nw  # block offsets

        # w' = v on every wave unknown (interface included)
        jall, iall = np.where(wave_ids >= 0)
        rw = wave_ids[jall, iall]
        add(rw + ow, rw + ov, 1.0)

        # v' rows at wave interior nodes
        jj, ii = np.mgrid[1:grid.ny_w - 1, 1:grid.nx - 1]
        r = wave_ids[jj, ii]
        add(r + ov, r + ow, -(2.0 / hx**2 + 2.0 / hyw**2) - eps**2)
        add(r + ov, r + ov, -2.0 * eps)
        for dj, di, coef in ((0, -1, 1 / hx**2), (0, 1, 1 / hx**2),
                             (-1, 0, 1 / hyw**2), (1, 0, 1 / hyw**2)):
            nb = wave_ids[jj + dj, ii + di]
            ok = nb >= 0
            add(r[ok] + ov, nb[ok] + ow, coef)

        # u' rows at heat interior nodes; north neighbor may be the trace v
        jj, ii = np.mgrid[1:grid.ny_h - 1, 1:grid.nx - 1]
        r = heat_ids[jj, ii]
        add(r + ou, r + ou, -(2.0 / hx**2 + 2.0 / hyh**2) - eps)
        for dj, di, coef in ((0, -1, 1 / hx**2), (0, 1, 1 / hx**2), (-1, 0, 1 / hyh**2)):
            nb = heat_ids[jj + dj, ii + di]
            ok = nb >= 0
            add(r[ok] + ou, nb[ok] + ou, coef)
        nb = heat_ids[jj + 1, ii]
        ok = nb >= 0
        add(r[ok] + ou, nb[ok] + ou, 1 / hyh**2)
        top = jj + 1 == grid.ny_h - 1
        add(r[top] + ou, wave_ids[0, ii[top]] + ov, 1 / hyh**2)

        k_ode = sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(self.n, self.n))

        # algebraic flux rows live in the v-slot of interface nodes
        rows, cols, vals = [], [], []
        icols = grid.interface_columns
        r = wave_ids[0, icols]
        add(r + ov, wave_ids[0, icols] + ow, -3.0 / (2 * hyw))
        add(r + ov, wave_ids[1, icols] + ow, 4.0 / (2 * hyw))
        nb = wave_ids[2, icols]
        ok = nb >= 0
        add(r[ok] + ov, nb[ok] + ow, -1.0 / (2 * hyw))
        add(r + ov, wave_ids[0, icols] + ov, -3.0 / (2 * hyh))
        for nb, coef in ((heat_ids[grid.ny_h - 2, icols], 4.0 / (2 * hyh)),
                         (heat_ids[grid.ny_h - 3, icols], -1.0 / (2 * hyh))):
            ok = nb >= 0
            add(r[ok] + ov, nb[ok] + ou, coef)
        k_alg = sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(self.n, self.n))

        alg_rows = wave_ids[0, icols] + ov
        self.is_alg = np.zeros(self.n, dtype=bool)
        self.is_alg[alg_rows] = True
        diag_ode = sp.diags((~self.is_alg).astype(float))

        lhs = (diag_ode - 0.5 * dt * k_ode).tolil()
        rhs = (diag_ode + 0.5 * dt * k_ode).tolil()
        for rr in alg_rows:
            lhs[rr, :] = k_alg[rr, :]
            rhs[rr, :] = 0.0
        self.lu = spla.splu(lhs.tocsc())
        self.rhs_mat = rhs.tocsr()
        self.ow, self.ov, self.ou = ow, ov, ou

        # energy mass: |grad w|^2 (edge form) + |v|^2 + |u|^2
        self.energy_form = ops._sbp_form(grid.ny_w, grid.nx, hx, hyw)
        self.mass_w = quad.trap_mass(grid.ny_w, grid.nx, hx, hyw)
        self.mass_h = quad.trap_mass(grid.ny_h, grid.nx, hx, hyh)

    def scatter(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        grid = self.grid
        w = np.zeros((grid.ny_w, grid.nx))
        v = np.zeros((grid.ny_w, grid.nx))
        u = np.zeros((grid.ny_h, grid.nx))
        mask = self.wave_ids >= 0
        w[mask] = y[self.ow + self.wave_ids[mask]]
        v[mask] = y[self.ov + self.wave_ids[mask]]
        hmask = self.heat_ids >= 0
        u[hmask] = y[self.ou + self.heat_ids[hmask]]
        u[-1, :] = v[0, :]  # heat interface trace is the wave velocity
        return w, v, u

    def energy(self, y: np.ndarray) -> float:
        w, v, u = self.scatter(y)
        grad = float(np.real(w.ravel() @ (self.energy_form @ w.ravel())))
        return grad + quad.norm_sq(self.mass_w, v) + quad.norm_sq(self.mass_h, u)

    def forcing_vector(self, g_t: np.ndarray | None, f_t: np.ndarray | None) -> np.ndarray:
        out = np.zeros(self.n)
        if g_t is not None:
            jj, ii = np.mgrid[1:self.grid.ny_w - 1, 1:self.grid.nx - 1]
            out[self.ov + self.wave_ids[jj, ii]] = g_t[jj, ii]
        if f_t is not None:
            jj, ii = np.mgrid[1:self.grid.ny_h - 1, 1:self.grid.nx - 1]
            out[self.ou + self.heat_ids[jj, ii]] = f_t[jj, ii]
        out[self.is_alg] = 0.0
        return out

    def step(self, y: np.ndarray, force_mid: np.ndarray) -> np.ndarray:
        return self.lu.solve(self.rhs_mat @ y + self.dt * force_mid)


def epsilon_march(grid: Grid, f: FourierField | None, g: FourierField | None,
                  params: EpsilonParams, period: float | None = None) -> SolveReport:
    """March the damped system from rest until the period map contracts.

    Returns the last period as Fourier fields. The scheme is trapezoidal
    (one-step, second order); the flux-balance constraint is enforced at
    the new time level.
    """
    periods = {x.period for x in (f, g) if x is not None}
    if len(periods) > 1:
        raise ConfigurationError("forcing fields disagree on the period")
    if period is None:
        if not periods:
            raise ConfigurationError("need a period when no forcing is given")
        period = periods.pop()
    t0 = time.perf_counter()
    m = params.n_steps
    dt = period / m
    march = _MarchOperator(grid, params.eps, dt)

    times = np.arange(m + 1) * dt
    g_samp = g.sample_real(times) if g is not None else None
    f_samp = f.sample_real(times) if f is not None else None

    def force_mid(step_index: int) -> np.ndarray:
        # trapezoidal average of the forcing at both step ends
        g_t = None if g_samp is None else 0.5 * (g_samp[step_index] + g_samp[step_index + 1])
        f_t = None if f_samp is None else 0.5 * (f_samp[step_index] + f_samp[step_index + 1])
        return march.forcing_vector(g_t, f_t)

    forces = [force_mid(i) for i in range(m)]
    t_setup = time.perf_counter()

    y = np.zeros(march.n)
    snapshot = y.copy()
    contraction: list[float] = []
    diffs: list[float] = []
    converged = False
    n_periods = 0
    for n_periods in range(1, params.max_periods + 1):
        for i in range(m):
            y = march.step(y, forces[i])
        diff = np.sqrt(march.energy(y - snapshot))
        scale = max(np.sqrt(march.energy(y)), 1e-300)
        diffs.append(diff / scale)
        if len(diffs) >= 2 and diffs[-2] > 0:
            contraction.append(diffs[-1] / diffs[-2])
        snapshot = y.copy()
        if diffs[-1] <= params.period_tol:
            converged = True
            break
    if not converged:
        raise SolverError(
            f"period map did not contract below {params.period_tol:.1e} within "
            f"{params.max_periods} periods (last diff {diffs[-1]:.3e})",
            history=diffs)
    t_march = time.perf_counter()

    # one more period, recording the state at every step start
    n_rep = min(params.n_report_modes, (m - 1) // 2)
    w_hist = np.empty((m, grid.ny_w, grid.nx))
    u_hist = np.empty((m, grid.ny_h, grid.nx))
    for i in range(m):
        w_arr, v_arr, u_arr = march.scatter(y)
        w_hist[i] = w_arr
        u_hist[i] = u_arr
        y = march.step(y, forces[i])
    w_field = time_transform(w_hist, "forward", period=period, n_modes=n_rep,
                             domain=WAVE)
    u_field = time_transform(u_hist, "forward", period=period, n_modes=n_rep,
                             domain=HEAT)
    t_record = time.perf_counter()

    h, big_h = _trace_fields(grid, w_field)
    residuals = {0: diffs[-1]}
    return SolveReport(
        grid=grid, u=u_field, w=w_field, trace_h=h, trace_primitive=big_h,
        mode_residuals=residuals,
        timings={"setup": t_setup - t0, "march": t_march - t_setup,
                 "record": t_record - t_march},
        method="epsilon",
        params={"eps": params.eps, "dt": dt, "n_steps": m,
                "periods": n_periods, "period_tol": params.period_tol,
                "contraction": contraction, "period_diffs": diffs})
