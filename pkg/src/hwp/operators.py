"""Per-frequency elliptic systems and stationary mean-value solves.

For temporal mode k != 0 the coupled system reduces to one complex linear
solve: five-point Laplacians in each subdomain, a -(w k)^2 mass on wave rows,
an i w k mass on heat rows, and one flux-balance row per interface node built
from second-order one-sided vertical derivatives on both sides. The heat
trace is eliminated through u_k = i w k * w_k on the interface, so interface
nodes carry a single wave unknown.

Unknown layout: wave nodes not on the outer wave wall first (row-major,
interface row included), then heat nodes strictly inside the heat rectangle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConfigurationError, SolverError
from .mesh import Grid
from . import quadrature as quad


def wave_index_map(grid: Grid) -> np.ndarray:
    """Wave unknown ids, shape (ny_w, nx); -1 marks Dirichlet wall nodes."""
    idx = -np.ones((grid.ny_w, grid.nx), dtype=int)
    mask = np.zeros_like(idx, dtype=bool)
    mask[0:grid.ny_w - 1, 1:grid.nx - 1] = True
    idx[mask] = np.arange(mask.sum())
    return idx


def heat_index_map(grid: Grid, offset: int) -> np.ndarray:
    """Heat unknown ids, shape (ny_h, nx); -1 on walls and the interface."""
    idx = -np.ones((grid.ny_h, grid.nx), dtype=int)
    mask = np.zeros_like(idx, dtype=bool)
    mask[1:grid.ny_h - 1, 1:grid.nx - 1] = True
    idx[mask] = offset + np.arange(mask.sum())
    return idx


@dataclass
class ModeOperator:
    """Assembled complex system for one temporal frequency."""

    k: int
    omega: float
    matrix: sp.csr_matrix
    wave_ids: np.ndarray
    heat_ids: np.ndarray
    n_wave: int
    n_heat: int
    grid: Grid

    @property
    def dimension(self) -> int:
        return self.n_wave + self.n_heat

    def dump_coordinate(self, path: str) -> None:
        """Plain-text COO dump (row col re im) for debugging."""
        coo = self.matrix.tocoo()
        with open(path, "w", newline="\n") as f:
            f.write(f"# mode k={self.k} dimension={self.dimension}\n")
            for r, c, v in zip(coo.row, coo.col, coo.data):
                f.write(f"{r} {c} {v.real:.17g} {v.imag:.17g}\n")


def assemble_coupled_mode(grid: Grid, k: int, period: float) -> ModeOperator:
    """Assemble the coupled mode system for frequency index k != 0."""
    if k == 0:
        raise ConfigurationError("mode 0 is stationary; use solve_mean_pair")
    omega = 2.0 * np.pi / period
    iwk = 1j * omega * k
    wave_ids = wave_index_map(grid)
    n_wave = int((wave_ids >= 0).sum())
    heat_ids = heat_index_map(grid, n_wave)
    n_heat = int((heat_ids >= 0).sum())
    n = n_wave + n_heat
    hx, hyw, hyh = grid.hx, grid.hy_w, grid.hy_h

    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []

    def add(r, c, v):
        r = np.atleast_1d(r)
        c = np.atleast_1d(c)
        v = np.broadcast_to(np.atleast_1d(v), r.shape)
        rows.append(r.ravel())
        cols.append(c.ravel())
        vals.append(np.asarray(v, dtype=complex).ravel())

    # wave interior rows: (-(w k)^2 + 2/hx^2 + 2/hy^2) w - neighbors = g
    jj, ii = np.mgrid[1:grid.ny_w - 1, 1:grid.nx - 1]
    r = wave_ids[jj, ii]
    add(r, r, -(omega * k) ** 2 + 2.0 / hx**2 + 2.0 / hyw**2)
    for dj, di, coef in ((0, -1, -1 / hx**2), (0, 1, -1 / hx**2),
                         (-1, 0, -1 / hyw**2), (1, 0, -1 / hyw**2)):
        nb = wave_ids[jj + dj, ii + di]
        ok = nb >= 0
        add(r[ok], nb[ok], coef)

    # heat interior rows: (i w k + 2/hx^2 + 2/hy^2) u - neighbors = f
    jj, ii = np.mgrid[1:grid.ny_h - 1, 1:grid.nx - 1]
    r = heat_ids[jj, ii]
    add(r, r, iwk + 2.0 / hx**2 + 2.0 / hyh**2)
    for dj, di, coef in ((0, -1, -1 / hx**2), (0, 1, -1 / hx**2), (-1, 0, -1 / hyh**2)):
        nb = heat_ids[jj + dj, ii + di]
        ok = nb >= 0
        add(r[ok], nb[ok], coef)
    # north neighbor: either interior heat node or the interface trace
    nb = heat_ids[jj + 1, ii]
    ok = nb >= 0
    add(r[ok], nb[ok], -1 / hyh**2)
    top = jj + 1 == grid.ny_h - 1
    add(r[top], wave_ids[0, ii[top]], -iwk / hyh**2)

    # interface rows: one-sided flux balance, d_y w (wave side, upward)
    # equals d_y u (heat side, downward); u on the interface is i w k * w.
    icols = grid.interface_columns
    r = wave_ids[0, icols]
    add(r, wave_ids[0, icols], -3.0 / (2 * hyw) - 3.0 * iwk / (2 * hyh))
    add(r, wave_ids[1, icols], 4.0 / (2 * hyw))
    for nb, coef in ((wave_ids[2, icols], -1.0 / (2 * hyw)),
                     (heat_ids[grid.ny_h - 2, icols], 4.0 / (2 * hyh)),
                     (heat_ids[grid.ny_h - 3, icols], -1.0 / (2 * hyh))):
        ok = nb >= 0  # minimal grids touch Dirichlet nodes with value zero
        add(r[ok], nb[ok], coef)

    matrix = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n))
    return ModeOperator(k=k, omega=omega, matrix=matrix, wave_ids=wave_ids,
                        heat_ids=heat_ids, n_wave=n_wave, n_heat=n_heat,
                        grid=grid)


def mode_rhs(op: ModeOperator, f_k: np.ndarray | None,
             g_k: np.ndarray | None) -> np.ndarray:
    """Right-hand side vector from nodal mode coefficients of (f, g)."""
    grid = op.grid
    rhs = np.zeros(op.dimension, dtype=complex)
    if g_k is not None:
        jj, ii = np.mgrid[1:grid.ny_w - 1, 1:grid.nx - 1]
        rhs[op.wave_ids[jj, ii]] = g_k[jj, ii]
    if f_k is not None:
        jj, ii = np.mgrid[1:grid.ny_h - 1, 1:grid.nx - 1]
        rhs[op.heat_ids[jj, ii]] = f_k[jj, ii]
    return rhs


def solve_linear(op: ModeOperator, rhs: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Direct sparse solve with a mandatory relative-residual check."""
    if rhs.shape[0] != op.dimension:
        raise ConfigurationError(
            f"rhs length {rhs.shape[0]} does not match dimension {op.dimension}")
    if tol <= 0:
        raise ConfigurationError("tolerance must be positive")
    x = spla.spsolve(op.matrix.tocsc(), rhs)
    bnorm = np.linalg.norm(rhs)
    if bnorm == 0.0:
        return np.zeros_like(rhs)
    res = float(np.linalg.norm(op.matrix @ x - rhs) / bnorm)
    if not np.isfinite(res) or res > tol:
        raise SolverError(
            f"mode k={op.k} solve missed the residual contract: {res:.3e} > {tol:.1e}",
            residual=res)
    return x


def split_mode_solution(op: ModeOperator, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scatter a solution vector into wave and heat nodal arrays.

    The heat array includes the derived interface trace u = i w k * w in its
    last row.
    """
    grid = op.grid
    w = np.zeros((grid.ny_w, grid.nx), dtype=complex)
    mask = op.wave_ids >= 0
    w[mask] = x[op.wave_ids[mask]]
    u = np.zeros((grid.ny_h, grid.nx), dtype=complex)
    hmask = op.heat_ids >= 0
    u[hmask] = x[op.heat_ids[hmask]]
    u[-1, :] = (1j * op.omega * op.k) * w[0, :]
    return w, u


def mode_residual_fields(op: ModeOperator, x: np.ndarray, rhs: np.ndarray) -> float:
    r = op.matrix @ x - rhs
    denom = max(float(np.linalg.norm(rhs)), 1e-300)
    return float(np.linalg.norm(r) / denom)


# ---------------------------------------------------------------------------
# Stationary mean-value pair
# ---------------------------------------------------------------------------

@dataclass
class MeanPair:
    """Time-average components; mean_u vanishes on the whole heat boundary,
    mean_w on the outer wave wall."""

    mean_u: np.ndarray  # (ny_h, nx) real
    mean_w: np.ndarray  # (ny_w, nx) real
    residual_heat: float
    residual_wave: float


def heat_dirichlet_solve(grid: Grid, rhs_interior: np.ndarray) -> np.ndarray:
    """-Lap u = rhs on the heat rectangle, u = 0 on its whole boundary."""
    a = quad.laplacian_5pt(grid.ny_h, grid.nx, grid.hx, grid.hy_h)
    b = rhs_interior[1:-1, 1:-1].ravel()
    x = spla.spsolve(a.tocsc(), b)
    u = np.zeros((grid.ny_h, grid.nx), dtype=x.dtype)
    u[1:-1, 1:-1] = x.reshape(grid.ny_h - 2, grid.nx - 2)
    return u


def interface_flux_from_heat(grid: Grid, u: np.ndarray) -> np.ndarray:
    """d_y u at y=0 from below (3-point one-sided), all columns."""
    return quad.one_sided_deriv_high(u, grid.hy_h, axis=0)


def wave_mixed_solve(grid: Grid, rhs_interior: np.ndarray,
                     flux: np.ndarray, shift: complex = 0.0) -> np.ndarray:
    """(-Lap + shift) w = rhs inside the wave rectangle, w = 0 on the outer
    wall, and d_y w = flux on the interface row (one-sided 3-point rows)."""
    wave_ids = wave_index_map(grid)
    n = int((wave_ids >= 0).sum())
    hx, hy = grid.hx, grid.hy_w
    rows, cols, vals = [], [], []

    def add(r, c, v):
        rows.append(np.atleast_1d(r).ravel())
        cols.append(np.atleast_1d(c).ravel())
        vals.append(np.broadcast_to(np.atleast_1d(v), np.atleast_1d(r).shape).astype(complex).ravel())

    jj, ii = np.mgrid[1:grid.ny_w - 1, 1:grid.nx - 1]
    r = wave_ids[jj, ii]
    add(r, r, shift + 2.0 / hx**2 + 2.0 / hy**2)
    for dj, di, coef in ((0, -1, -1 / hx**2), (0, 1, -1 / hx**2),
                         (-1, 0, -1 / hy**2), (1, 0, -1 / hy**2)):
        nb = wave_ids[jj + dj, ii + di]
        ok = nb >= 0
        add(r[ok], nb[ok], coef)
    icols = grid.interface_columns
    r = wave_ids[0, icols]
    add(r, wave_ids[0, icols], -3.0 / (2 * hy))
    add(r, wave_ids[1, icols], 4.0 / (2 * hy))
    nb = wave_ids[2, icols]
    ok = nb >= 0
    add(r[ok], nb[ok], -1.0 / (2 * hy))
    a = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(n, n))

    rhs = np.zeros(n, dtype=complex)
    jj, ii = np.mgrid[1:grid.ny_w - 1, 1:grid.nx - 1]
    rhs[wave_ids[jj, ii]] = rhs_interior[jj, ii]
    rhs[wave_ids[0, icols]] = flux[icols]

    x = spla.spsolve(a.tocsc(), rhs)
    w = np.zeros((grid.ny_w, grid.nx), dtype=complex)
    mask = wave_ids >= 0
    w[mask] = x[wave_ids[mask]]
    return w


def solve_mean_pair(grid: Grid, mean_f: np.ndarray | None,
                    mean_g: np.ndarray | None, tol: float = 1e-10) -> MeanPair:
    """Solve the decoupled stationary problems for the time averages.

    The heat average solves a pure Dirichlet problem (its interface trace
    vanishes by periodicity of the wave trace); its one-sided interface flux
    then feeds the mixed wave problem as Neumann data.
    """
    zero_h = np.zeros((grid.ny_h, grid.nx))
    zero_w = np.zeros((grid.ny_w, grid.nx))
    f = zero_h if mean_f is None else np.asarray(mean_f, dtype=float)
    g = zero_w if mean_g is None else np.asarray(mean_g, dtype=float)

    u = heat_dirichlet_solve(grid, f)
    lap = quad.laplacian_5pt(grid.ny_h, grid.nx, grid.hx, grid.hy_h)
    rb = f[1:-1, 1:-1].ravel()
    res_h = float(np.linalg.norm(lap @ u[1:-1, 1:-1].ravel() - rb)
                  / max(np.linalg.norm(rb), 1e-300))
    if res_h > tol and np.linalg.norm(rb) > 0:
        raise SolverError(f"mean heat solve residual {res_h:.3e}", residual=res_h)

    flux = interface_flux_from_heat(grid, u)
    w = wave_mixed_solve(grid, g.astype(complex), flux.astype(complex)).real

    # residual of the interior wave rows
    interior = (-(w[1:-1, 2:] - 2 * w[1:-1, 1:-1] + w[1:-1, :-2]) / grid.hx**2
                - (w[2:, 1:-1] - 2 * w[1:-1, 1:-1] + w[:-2, 1:-1]) / grid.hy_w**2)
    res_w = float(np.linalg.norm(interior - g[1:-1, 1:-1])
                  / max(np.linalg.norm(g[1:-1, 1:-1]), 1.0))
    return MeanPair(mean_u=u, mean_w=w, residual_heat=res_h, residual_wave=res_w)


# ---------------------------------------------------------------------------
# Discrete dual norm and the periodic harmonic extension
# ---------------------------------------------------------------------------

@lru_cache(maxsize=16)
def _dirichlet_lu(ny: int, nx: int, hx: float, hy: float):
    # complex factorization so both real and complex data can be solved
    return spla.splu(quad.laplacian_5pt(ny, nx, hx, hy).astype(complex).tocsc())


def heat_dual_norm_sq(grid: Grid, v: np.ndarray) -> float:
    """Dual-space norm squared realized as <v, (-Lap)^(-1) v> on the heat
    rectangle with a homogeneous Dirichlet inverse."""
    b = v[1:-1, 1:-1].ravel()
    if not np.any(b):
        return 0.0
    lu = _dirichlet_lu(grid.ny_h, grid.nx, grid.hx, grid.hy_h)
    z = lu.solve(b.astype(complex))
    return float(np.real(np.vdot(b, z)) * grid.hx * grid.hy_h)


def wave_dual_norm_sq(grid: Grid, v: np.ndarray) -> float:
    b = v[1:-1, 1:-1].ravel()
    if not np.any(b):
        return 0.0
    lu = _dirichlet_lu(grid.ny_w, grid.nx, grid.hx, grid.hy_w)
    z = lu.solve(b.astype(complex))
    return float(np.real(np.vdot(b, z)) * grid.hx * grid.hy_w)


class _WaveWeakSolver:
    """Edge-form stiffness on the wave rectangle, interface dofs free."""

    def __init__(self, grid: Grid):
        self.grid = grid
        ny, nx = grid.ny_w, grid.nx
        full = quad.sbp_stiffness(ny, nx, grid.hx, grid.hy_w,
                                  np.arange(1, ny - 1))
        idx = wave_index_map(grid)
        free = np.where(idx.ravel() >= 0)[0]
        self.free = free
        self.idx = idx
        self.matrix = full.tocsr()[free][:, free].astype(complex).tocsc()
        self.lu = spla.splu(self.matrix)

    def solve(self, rhs_free: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        x = self.lu.solve(rhs_free)
        w = np.zeros((self.grid.ny_w, self.grid.nx), dtype=x.dtype)
        mask = self.idx >= 0
        w[mask] = x[self.idx[mask]]
        return w, x


class _HeatTraceExtension:
    """Discrete harmonic extensions of interface hat data into the heat
    rectangle, plus the edge Dirichlet form used in the weak pairing."""

    def __init__(self, grid: Grid):
        self.grid = grid
        ny, nx = grid.ny_h, grid.nx
        self.form = quad.sbp_stiffness(ny, nx, grid.hx, grid.hy_h,
                                       np.arange(1, ny - 1)).tocsr()
        lap = quad.laplacian_5pt(ny, nx, grid.hx, grid.hy_h)
        self.lu = spla.splu(lap.tocsc())
        self.extensions = self._build_extensions()

    def _build_extensions(self) -> np.ndarray:
        grid = self.grid
        ny, nx = grid.ny_h, grid.nx
        exts = np.zeros((grid.n_interface, ny, nx))
        for col, i in enumerate(grid.interface_columns):
            rhs = np.zeros((ny - 2, nx - 2))
            # hat value 1 at interface column i enters the row below it
            rhs[-1, i - 1] = 1.0 / grid.hy_h**2
            z = self.lu.solve(rhs.ravel())
            ext = np.zeros((ny, nx))
            ext[1:-1, 1:-1] = z.reshape(ny - 2, nx - 2)
            ext[-1, i] = 1.0
            exts[col] = ext
        return exts

    def functional(self, u_k: np.ndarray, f_k: np.ndarray | None,
                   iwk: complex, eps: float = 0.0) -> np.ndarray:
        """<F, hat_i> for every interface hat, where F is the heat-side
        weak residual pairing of the extension lemma."""
        grid = self.grid
        mass = quad.interior_mass(grid.ny_h, grid.nx, grid.hx, grid.hy_h)
        out = np.zeros(grid.n_interface, dtype=complex)
        form_u = self.form @ u_k.ravel()
        for col in range(grid.n_interface):
            psi = self.extensions[col]
            val = 0.0 + 0.0j
            if f_k is not None:
                val += np.sum(mass * f_k * psi)
            val -= iwk * np.sum(mass * u_k * psi)
            if eps:
                val -= eps * np.sum(mass * u_k * psi)
            val -= psi.ravel() @ form_u  # psi is real: plain bilinear pairing
            out[col] = val
        return out


def harmonic_extension_mode(grid: Grid, u_k: np.ndarray, f_k: np.ndarray | None,
                            k: int, period: float, eps: float = 0.0,
                            _cache: dict | None = None) -> np.ndarray:
    """Wave-side lift of the heat interface flux for one temporal mode.

    Solves, in the discrete weak sense, the stationary problem
        a_W(e, phi) = <F, phi|_interface>   for all wave test functions phi
    with e = 0 on the outer wave wall, where F is the heat-side residual
    functional built from (u_k, f_k). Equivalently e is discrete-harmonic
    with Neumann interface data equal to the discrete heat flux of u_k.
    """
    omega = 2.0 * np.pi / period
    iwk = 1j * omega * k
    if _cache is not None and "wave" in _cache:
        wave = _cache["wave"]
        heat = _cache["heat"]
    else:
        wave = _WaveWeakSolver(grid)
        heat = _HeatTraceExtension(grid)
        if _cache is not None:
            _cache["wave"] = wave
            _cache["heat"] = heat
    f_iface = heat.functional(np.asarray(u_k, dtype=complex), f_k, iwk, eps)
    rhs = np.zeros(wave.matrix.shape[0], dtype=complex)
    rhs[wave.idx[0, grid.interface_columns]] = f_iface
    e, x = wave.solve(rhs)
    rhs_norm = float(np.linalg.norm(rhs))
    if rhs_norm > 0:
        rel = float(np.linalg.norm(wave.matrix @ x - rhs)) / rhs_norm
        if rel > 1e-9:
            raise SolverError(f"harmonic extension weak residual {rel:.3e}",
                              residual=rel)
    return e


@lru_cache(maxsize=16)
def _sbp_form(ny: int, nx: int, hx: float, hy: float) -> sp.csr_matrix:
    return quad.sbp_stiffness(ny, nx, hx, hy, np.arange(1, ny - 1))


def wave_edge_form(grid: Grid, a: np.ndarray, b: np.ndarray) -> complex:
    """Edge Dirichlet form a_W(a, conj(b)) on the wave rectangle (exact
    summation-by-parts partner of the five-point Laplacian there)."""
    form = _sbp_form(grid.ny_w, grid.nx, grid.hx, grid.hy_w)
    return complex(np.sum(np.conj(b.ravel()) * (form @ a.ravel())))
