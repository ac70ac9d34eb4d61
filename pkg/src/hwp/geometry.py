"""Geometric condition checks for multiplier fields on sampled domains.

The checks report margins rather than bare pass/fail because the continuum
conditions involve non-explicit constants:

* contractivity_margin: min over interior samples of the smallest eigenvalue
  of the symmetric part of grad b (positive means uniformly contractive);
* gammaW_sign_max: max of b.n over wall samples (<= 0 required);
* interface_sign_min: min of b.n over interface samples (>= 0 wanted for the
  interface-sign variant of the energy estimate);
* bilap_max: max of Lap(div b) over interior samples (<= 0 required);
* graph_quadform_margin: largest C with xi^T grad b xi >= C |xi . b|^2 over
  samples and sampled unit directions;
* a Rayleigh-quotient check of the interface Poincare inequality on the
  rectangular wave subgrid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import GeometryCheckError, SolverError
from .fields import VectorFieldSpec, jet_batch, sym_min_eig
from .mesh import DomainSamples, Grid, sample_domain
from . import quadrature as quad


@dataclass
class GeometryReport:
    field: str
    domain: str
    tol: float
    contractivity_margin: float
    gammaW_sign_max: float
    interface_sign_min: float
    bilap_max: float
    graph_quadform_margin: float
    verdicts: dict[str, bool] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "field": self.field,
            "domain": self.domain,
            "tol": self.tol,
            "contractivity_margin": self.contractivity_margin,
            "gammaW_sign_max": self.gammaW_sign_max,
            "interface_sign_min": self.interface_sign_min,
            "bilap_max": self.bilap_max,
            "graph_quadform_margin": self.graph_quadform_margin,
            "verdicts": dict(self.verdicts),
        }


def _quadform_margin(spec: VectorFieldSpec, points: np.ndarray,
                     n_directions: int, tol: float) -> float:
    """Largest C with xi^T grad(b) xi >= C |xi.b|^2 over points/directions.

    Directions where xi.b vanishes constrain nothing unless the quadratic
    form itself goes negative there, in which case no C exists.
    """
    out = jet_batch(spec, points)
    b = out["b"]
    grad = out["grad"]
    thetas = np.arange(n_directions) * np.pi / n_directions
    xi = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)  # (d, 2)
    # num[p, d] = xi_d^T sym(grad_p) xi_d ; den[p, d] = (xi_d . b_p)^2
    sym = 0.5 * (grad + np.swapaxes(grad, 1, 2))
    num = np.einsum("da,pab,db->pd", xi, sym, xi)
    den = np.einsum("da,pa->pd", xi, b) ** 2
    bscale = np.maximum(np.sum(b * b, axis=1), 1.0)[:, None]
    active = den > 1e-14 * bscale
    if np.any(~active & (num < -tol)):
        return -np.inf
    if not np.any(active):
        return np.inf
    return float(np.min(num[active] / den[active]))


def check_conditions(spec: VectorFieldSpec, samples: DomainSamples,
                     tol: float = 1e-10, n_directions: int = 64) -> GeometryReport:
    """Evaluate all sign and contractivity margins of a field on a domain."""
    if samples.interior_points.size == 0:
        raise GeometryCheckError("empty interior sample set")
    gamma_w = samples.gamma_w_mask()
    gamma = samples.gamma_mask()
    if not np.any(gamma_w) or not np.any(gamma):
        raise GeometryCheckError(
            f"domain {samples.name!r} has empty boundary sample sets; "
            "cannot certify sign conditions")

    interior = jet_batch(spec, samples.interior_points)
    contractivity = float(np.min(sym_min_eig(interior["grad"])))
    bilap_max = float(np.max(interior["lap_div"]))

    bnd = jet_batch(spec, samples.boundary_points)
    b_dot_n = np.sum(bnd["b"] * samples.boundary_normals, axis=1)
    gammaW_sign_max = float(np.max(b_dot_n[gamma_w]))
    interface_sign_min = float(np.min(b_dot_n[gamma]))

    margin = _quadform_margin(spec, samples.interior_points, n_directions, tol)

    verdicts = {
        "contractive": contractivity > tol,
        "generalized_optics": (contractivity > tol
                               and gammaW_sign_max <= tol
                               and bilap_max <= tol),
        "interface_sign": interface_sign_min >= -tol,
        "graph_quadratic_form": (margin > tol
                                 and gammaW_sign_max <= tol
                                 and bilap_max <= tol),
    }
    return GeometryReport(
        field=spec.describe(), domain=samples.name, tol=tol,
        contractivity_margin=contractivity,
        gammaW_sign_max=gammaW_sign_max,
        interface_sign_min=interface_sign_min,
        bilap_max=bilap_max,
        graph_quadform_margin=margin,
        verdicts=verdicts,
    )


def boundary_sign_table(spec: VectorFieldSpec, samples: DomainSamples) -> list[tuple]:
    """Per-sample b.n rows (x, y, nx, ny, tag, b_dot_n) for CSV export."""
    bnd = jet_batch(spec, samples.boundary_points)
    b_dot_n = np.sum(bnd["b"] * samples.boundary_normals, axis=1)
    rows = []
    for p, n, t, v in zip(samples.boundary_points, samples.boundary_normals,
                          samples.boundary_tags, b_dot_n):
        rows.append((float(p[0]), float(p[1]), float(n[0]), float(n[1]), str(t), float(v)))
    return rows


# ---------------------------------------------------------------------------
# Interface Poincare inequality via a generalized Rayleigh quotient
# ---------------------------------------------------------------------------

@dataclass
class PoincareReport:
    rayleigh_min: float
    iterations: int
    converged: bool

    @property
    def poincare_constant(self) -> float:
        """Constant in ||f||^2 <= C * (form), valid when rayleigh_min > 0."""
        return np.inf if self.rayleigh_min <= 0 else 1.0 / self.rayleigh_min


def _wave_rect_free_nodes(grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """Free node mask for the wave rectangle (vanishing on the wall).

    Free nodes: strict interior plus interface-row interior columns.
    Returns (mask (ny,nx) bool, index array with -1 on constrained nodes).
    """
    ny, nx = grid.ny_w, grid.nx
    mask = np.zeros((ny, nx), dtype=bool)
    mask[0:ny - 1, 1:nx - 1] = True
    idx = -np.ones((ny, nx), dtype=int)
    idx[mask] = np.arange(mask.sum())
    return mask, idx


def _poincare_form(spec: VectorFieldSpec, grid: Grid) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Assemble (A, M) of the generalized eigenproblem on the wave rectangle.

    A f . f = int (grad f)^T sym(grad b) grad f + ||f||^2_{L2(interface)}
              - int_wall (b.n) |dn f|^2,
    M = trapezoidal volume mass. The space vanishes on the wall (all of the
    boundary except the bottom interface edge).
    """
    ny, nx = grid.ny_w, grid.nx
    hx, hy = grid.hx, grid.hy_w
    mask, idx = _wave_rect_free_nodes(grid)
    nfree = int(mask.sum())

    xc, yc = quad.cell_centers(grid.x, grid.y_w)
    centers = np.stack([xc.ravel(), yc.ravel()], axis=1)
    jets = jet_batch(spec, centers)
    sym = 0.5 * (jets["grad"] + np.swapaxes(jets["grad"], 1, 2))
    a_full = quad.anisotropic_gradient_form(
        ny, nx, hx, hy,
        sym[:, 0, 0].reshape(xc.shape), sym[:, 0, 1].reshape(xc.shape),
        sym[:, 1, 1].reshape(xc.shape))

    # interface L2 mass on the bottom row
    wx = quad.trap_weights_1d(nx, hx)
    rows = np.arange(1, nx - 1)  # corner nodes are constrained anyway
    a_full = a_full.tolil()
    for i in rows:
        a_full[i, i] += wx[i]

    # -int_wall (b.n) |dn f|^2 with 3-point one-sided normal derivatives;
    # each wall edge is handled with its own stencil and trapezoid weights.
    def rank_one(coef: float, cols: list[int], vals: list[float]):
        if coef == 0.0:
            return
        for c1, v1 in zip(cols, vals):
            for c2, v2 in zip(cols, vals):
                a_full[c1, c2] += coef * v1 * v2

    def node(j, i):
        return j * nx + i

    wy = quad.trap_weights_1d(ny, hy)
    b_top = jet_batch(spec, np.stack([grid.x, np.full(nx, grid.ly_w)], axis=1))["b"]
    for i in range(nx):
        bn = b_top[i, 1]  # n = (0, 1)
        # dn f = (3 f_J - 4 f_{J-1} + f_{J-2}) / (2 hy), f_J = 0 on the wall
        cols = [node(ny - 2, i), node(ny - 3, i)]
        vals = [-4.0 / (2 * hy), 1.0 / (2 * hy)]
        rank_one(-bn * wx[i], cols, vals)
    b_left = jet_batch(spec, np.stack([np.zeros(ny), grid.y_w], axis=1))["b"]
    b_right = jet_batch(spec, np.stack([np.full(ny, grid.lx), grid.y_w], axis=1))["b"]
    for j in range(ny):
        bn = -b_left[j, 0]  # n = (-1, 0)
        cols = [node(j, 1), node(j, 2)]
        vals = [4.0 / (2 * hx), -1.0 / (2 * hx)]  # sign immaterial, squared
        rank_one(-bn * wy[j], cols, vals)
        bn = b_right[j, 0]  # n = (1, 0)
        cols = [node(j, nx - 2), node(j, nx - 3)]
        vals = [-4.0 / (2 * hx), 1.0 / (2 * hx)]
        rank_one(-bn * wy[j], cols, vals)

    free = np.where(mask.ravel())[0]
    a = a_full.tocsr()[free][:, free]
    mass = quad.trap_mass(ny, nx, hx, hy).ravel()[free]
    m = sp.diags(mass).tocsr()
    a = 0.5 * (a + a.T)
    return a.tocsr(), m


def check_poincare(spec: VectorFieldSpec, grid: Grid, rel_tol: float = 1e-8,
                   max_iterations: int = 500) -> PoincareReport:
    """Smallest generalized Rayleigh quotient of the interface Poincare form.

    Inverse-power iteration on (A, M) with a small mass shift; A may be
    singular (e.g. for the zero field), in which case the reported minimum
    is zero to solver accuracy.
    """
    a, m = _poincare_form(spec, grid)
    n = a.shape[0]
    scale = abs(a).sum() / max(abs(m).sum(), 1e-300)
    sigma = 1e-6 * max(scale, 1e-12)
    lu = spla.splu((a + sigma * m).tocsc())
    rng = np.random.default_rng(1234)
    v = rng.standard_normal(n)
    v /= np.sqrt(v @ (m @ v))
    lam = np.inf
    for it in range(1, max_iterations + 1):
        w = lu.solve(m @ v)
        w /= np.sqrt(w @ (m @ w))
        lam_new = (w @ (a @ w)) / (w @ (m @ w))
        if abs(lam_new - lam) <= rel_tol * max(abs(lam_new), sigma):
            return PoincareReport(rayleigh_min=float(lam_new), iterations=it,
                                  converged=True)
        lam, v = lam_new, w
    raise SolverError(
        f"Rayleigh iteration did not converge in {max_iterations} iterations "
        f"(last value {lam:.6e})", residual=float(lam))


# ---------------------------------------------------------------------------
# Trapezoid domain: divergence-count identity and sign bookkeeping
# ---------------------------------------------------------------------------

@dataclass
class TrapezoidObstructionReport:
    field: str
    interior_integral: float
    boundary_integral: float
    mismatch: float
    contractivity_margin: float
    sign_violations: list[tuple[float, float, float]]

    def as_dict(self) -> dict:
        return {
            "field": self.field,
            "interior_integral": self.interior_integral,
            "boundary_integral": self.boundary_integral,
            "mismatch": self.mismatch,
            "contractivity_margin": self.contractivity_margin,
            "n_sign_violations": len(self.sign_violations),
            "sign_violations": [list(v) for v in self.sign_violations[:32]],
        }


def trapezoid_obstruction(spec: VectorFieldSpec, resolution: int = 64,
                          tol: float = 1e-10) -> TrapezoidObstructionReport:
    """Evaluate the trapezoid counting identity for a candidate field.

    On the trapezoid with vertices (0,0), (1,0), (2,1), (0,1) and interface
    on {(x,0): 0 <= x <= 1}, the identity

        int_Omega dx b1 + int_Omega_l dy b2
        = int_0^1 [b1(1+y, y) - b2(1+y, y) - b1(0, y)] dy
          + int_1^2 b2(x, 1) dx

    holds for any smooth field (Omega_l is the triangle x >= 1 of the
    trapezoid). A contractive field makes the left side strictly positive
    while the wall sign conditions force every bracket on the right to be
    non-positive; the report records both sides and all wall samples where
    the sign condition fails.
    """
    samples = sample_domain("trapezoid", resolution)
    jets = jet_batch(spec, samples.interior_points)
    interior = float(np.sum(jets["grad"][:, 0, 0] * samples.interior_weights))
    # Omega_l = right triangle, x in (1, 1+y)
    ys, hy = np.linspace(0, 1, resolution, endpoint=False) + 0.5 / resolution, 1.0 / resolution
    pts_l, wts_l = [], []
    for y in ys:
        nx = max(1, int(np.ceil(y * resolution)))
        hx = y / nx
        for i in range(nx):
            pts_l.append((1.0 + (i + 0.5) * hx, y))
            wts_l.append(hx * hy)
    if pts_l:
        jl = jet_batch(spec, np.array(pts_l))
        interior += float(np.sum(jl["grad"][:, 1, 1] * np.array(wts_l)))

    ny = 4 * resolution  # 1D quadrature is cheap; oversample it
    yq, hyq = np.linspace(0, 1, ny, endpoint=False) + 0.5 / ny, 1.0 / ny
    slant = jet_batch(spec, np.stack([1.0 + yq, yq], axis=1))["b"]
    left = jet_batch(spec, np.stack([np.zeros(ny), yq], axis=1))["b"]
    xq = 1.0 + yq
    top = jet_batch(spec, np.stack([xq, np.ones(ny)], axis=1))["b"]
    boundary = float(np.sum((slant[:, 0] - slant[:, 1] - left[:, 0]) * hyq)
                     + np.sum(top[:, 1] * hyq))

    contractivity = float(np.min(sym_min_eig(jets["grad"])))

    bnd = jet_batch(spec, samples.boundary_points)
    b_dot_n = np.sum(bnd["b"] * samples.boundary_normals, axis=1)
    wall = samples.gamma_w_mask()
    bad = wall & (b_dot_n > tol)
    violations = [(float(p[0]), float(p[1]), float(v))
                  for p, v in zip(samples.boundary_points[bad], b_dot_n[bad])]

    return TrapezoidObstructionReport(
        field=spec.describe(),
        interior_integral=interior,
        boundary_integral=boundary,
        mismatch=abs(interior - boundary),
        contractivity_margin=contractivity,
        sign_violations=violations,
    )
