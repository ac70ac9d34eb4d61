"""Discrete geometry: stacked rectangles with a shared flat interface, and
sampled representations of the non-rectangular demo domains used by the
geometric condition checks.

The solver geometry is two axis-aligned rectangles,

    wave subdomain  (0, Lx) x (0, Ly_w),
    heat subdomain  (0, Lx) x (-Ly_h, 0),

glued along the interface row y = 0. Interface nodes carry a single unknown
slot (the wave value); the heat trace is derived from it by the per-mode
velocity relation in the solver modules. Demo domains are carried as
closed-form region tests plus parameterized boundaries; they are sampled,
never meshed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigurationError, MeshError


class NodeTag(Enum):
    INTERIOR_W = "InteriorW"
    INTERIOR_H = "InteriorH"
    GAMMA_W = "GammaW"
    GAMMA_H = "GammaH"
    INTERFACE = "Interface"


@dataclass(frozen=True)
class Grid:
    """Tagged structured discretization of the stacked-rectangle geometry.

    Wave nodal arrays have shape (ny_w, nx) with row 0 on the interface
    (y = 0) and row ny_w-1 on the top wall. Heat nodal arrays have shape
    (ny_h, nx) with row 0 on the bottom wall (y = -Ly_h) and row ny_h-1 on
    the interface. The interface row is stored once; heat-side arrays carry
    the derived trace in their last row.
    """

    lx: float
    ly_w: float
    ly_h: float
    nx: int
    ny_w: int
    ny_h: int
    hx: float
    hy_w: float
    hy_h: float
    x: np.ndarray = field(repr=False)
    y_w: np.ndarray = field(repr=False)
    y_h: np.ndarray = field(repr=False)

    @property
    def interface_columns(self) -> np.ndarray:
        """Column indices of interface nodes (endpoints are Dirichlet)."""
        return np.arange(1, self.nx - 1)

    @property
    def n_interface(self) -> int:
        return self.nx - 2

    def wave_tags(self) -> np.ndarray:
        """Tag array for the wave subgrid, shape (ny_w, nx)."""
        tags = np.full((self.ny_w, self.nx), NodeTag.INTERIOR_W, dtype=object)
        tags[:, 0] = NodeTag.GAMMA_W
        tags[:, -1] = NodeTag.GAMMA_W
        tags[-1, :] = NodeTag.GAMMA_W
        tags[0, 1:-1] = NodeTag.INTERFACE
        # corner nodes of the interface row are Dirichlet by the corner rule
        tags[0, 0] = NodeTag.GAMMA_W
        tags[0, -1] = NodeTag.GAMMA_W
        return tags

    def heat_tags(self) -> np.ndarray:
        """Tag array for the heat subgrid, shape (ny_h, nx).

        The last row duplicates the shared interface row and mirrors its tags.
        """
        tags = np.full((self.ny_h, self.nx), NodeTag.INTERIOR_H, dtype=object)
        tags[:, 0] = NodeTag.GAMMA_H
        tags[:, -1] = NodeTag.GAMMA_H
        tags[0, :] = NodeTag.GAMMA_H
        tags[-1, 1:-1] = NodeTag.INTERFACE
        tags[-1, 0] = NodeTag.GAMMA_W
        tags[-1, -1] = NodeTag.GAMMA_W
        return tags

    def tag_counts(self) -> dict[str, int]:
        """Counts over the unique node set (interface row counted once)."""
        counts: dict[str, int] = {t.value: 0 for t in NodeTag}
        wt = self.wave_tags()
        ht = self.heat_tags()
        for row in wt:
            for t in row:
                counts[t.value] += 1
        for row in ht[:-1]:  # last heat row is the shared interface row
            for t in row:
                counts[t.value] += 1
        return counts

    def node_table(self) -> list[tuple[float, float, str]]:
        """Unique nodes as (x, y, tag), ordered bottom-up then left-right."""
        rows: list[tuple[float, float, str]] = []
        ht = self.heat_tags()
        for j in range(self.ny_h - 1):
            for i in range(self.nx):
                rows.append((float(self.x[i]), float(self.y_h[j]), ht[j, i].value))
        wt = self.wave_tags()
        for j in range(self.ny_w):
            for i in range(self.nx):
                rows.append((float(self.x[i]), float(self.y_w[j]), wt[j, i].value))
        return rows

    def dump_csv(self, path: str) -> None:
        from .reporting import write_csv

        write_csv(path, ["x", "y", "tag"], self.node_table())


def build_stacked_rectangles(lx: float, ly_w: float, ly_h: float,
                             nx: int, ny_w: int, ny_h: int) -> Grid:
    """Build and tag the two stacked rectangles sharing the flat interface."""
    if min(nx, ny_w, ny_h) < 3:
        raise ConfigurationError(
            f"node counts must be >= 3 per direction, got ({nx}, {ny_w}, {ny_h})")
    if min(lx, ly_w, ly_h) <= 0:
        raise ConfigurationError(
            f"side lengths must be positive, got ({lx}, {ly_w}, {ly_h})")
    hx = lx / (nx - 1)
    hy_w = ly_w / (ny_w - 1)
    hy_h = ly_h / (ny_h - 1)
    return Grid(
        lx=lx, ly_w=ly_w, ly_h=ly_h, nx=nx, ny_w=ny_w, ny_h=ny_h,
        hx=hx, hy_w=hy_w, hy_h=hy_h,
        x=np.linspace(0.0, lx, nx),
        y_w=np.linspace(0.0, ly_w, ny_w),
        y_h=np.linspace(-ly_h, 0.0, ny_h),
    )


# ---------------------------------------------------------------------------
# Demo domains for the geometric checks
# ---------------------------------------------------------------------------

ON_GAMMA = "OnGamma"
ON_GAMMA_W = "OnGammaW"


@dataclass
class DomainSamples:
    """Quadrature and boundary samples of one demo domain.

    interior_points carry positive midpoint-rule weights summing to the
    domain area (to sampling accuracy); boundary samples carry arclength
    weights, unit outward normals, and a tag telling whether the sample lies
    on the interface portion or on the homogeneous wall.
    """

    name: str
    interior_points: np.ndarray   # (n, 2)
    interior_weights: np.ndarray  # (n,)
    boundary_points: np.ndarray   # (m, 2)
    boundary_normals: np.ndarray  # (m, 2)
    boundary_weights: np.ndarray  # (m,)
    boundary_tags: np.ndarray     # (m,) str, ON_GAMMA or ON_GAMMA_W

    @property
    def area(self) -> float:
        return float(np.sum(self.interior_weights))

    def gamma_mask(self) -> np.ndarray:
        return self.boundary_tags == ON_GAMMA

    def gamma_w_mask(self) -> np.ndarray:
        return self.boundary_tags == ON_GAMMA_W


def _midpoints(a: float, b: float, n: int) -> tuple[np.ndarray, float]:
    h = (b - a) / n
    return a + (np.arange(n) + 0.5) * h, h


def _column_samples(x_of_t, y_lo, y_hi, t0: float, t1: float, nt: int,
                    res: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor midpoint quadrature over a vertically-bounded region.

    The region is { (x(t), y) : t in (t0,t1), y_lo(t) < y < y_hi(t) } with
    x(t) = t. Returns points (n,2) and weights (n,).
    """
    ts, ht = _midpoints(t0, t1, nt)
    pts, wts = [], []
    for t in ts:
        lo, hi = y_lo(t), y_hi(t)
        if hi <= lo:
            continue
        ny = max(1, int(np.ceil((hi - lo) * res)))
        ys, hy = _midpoints(lo, hi, ny)
        for y in ys:
            pts.append((t, y))
            wts.append(ht * hy)
    return np.array(pts), np.array(wts)


def _segment_boundary(p0, p1, normal, tag: str, res: int):
    """Midpoint samples along a straight boundary segment."""
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    length = float(np.linalg.norm(p1 - p0))
    n = max(2, int(np.ceil(length * res)))
    ts, ht = _midpoints(0.0, 1.0, n)
    pts = p0[None, :] + ts[:, None] * (p1 - p0)[None, :]
    nrm = np.asarray(normal, dtype=float)
    nrm = nrm / np.linalg.norm(nrm)
    return pts, np.tile(nrm, (n, 1)), np.full(n, ht * length), np.full(n, tag)


def _curve_boundary(param, t0: float, t1: float, outward, tag: str, res: int,
                    length_scale: float):
    """Midpoint samples along a parameterized curve with analytic normals.

    `param(t)` returns the point, `outward(t)` the (not necessarily unit)
    outward normal direction.
    """
    n = max(2, int(np.ceil(length_scale * res)))
    ts, ht = _midpoints(t0, t1, n)
    pts = np.array([param(t) for t in ts])
    # arclength weight via midpoint speed
    dt = 1e-6 * (t1 - t0)
    speeds = np.array([np.linalg.norm((np.asarray(param(t + dt)) - np.asarray(param(t - dt))) / (2 * dt))
                       for t in ts])
    nrms = np.array([outward(t) for t in ts], dtype=float)
    nrms /= np.linalg.norm(nrms, axis=1)[:, None]
    return pts, nrms, ht * speeds, np.full(len(ts), tag)


def _stack(parts):
    pts = np.vstack([p[0] for p in parts])
    nrm = np.vstack([p[1] for p in parts])
    wts = np.concatenate([p[2] for p in parts])
    tags = np.concatenate([p[3] for p in parts])
    return pts, nrm, wts, tags


def _rectangle_samples(lx: float, ly: float, res: int) -> DomainSamples:
    nxc = max(1, int(np.ceil(lx * res)))
    pts, wts = _column_samples(lambda t: t, lambda t: 0.0, lambda t: ly, 0.0, lx, nxc, res)
    parts = [
        _segment_boundary((0, 0), (lx, 0), (0, -1), ON_GAMMA, res),
        _segment_boundary((lx, 0), (lx, ly), (1, 0), ON_GAMMA_W, res),
        _segment_boundary((lx, ly), (0, ly), (0, 1), ON_GAMMA_W, res),
        _segment_boundary((0, ly), (0, 0), (-1, 0), ON_GAMMA_W, res),
    ]
    b = _stack(parts)
    return DomainSamples("rectangle", pts, wts, *b)


def _triangle_samples(res: int) -> DomainSamples:
    # apex at the origin, opening left; vertical far side is the interface
    # vertices (0,0), (-1, 1/2), (-1, -1/2)
    nxc = max(1, int(np.ceil(res)))
    pts, wts = _column_samples(lambda t: t,
                               lambda t: 0.5 * t, lambda t: -0.5 * t,
                               -1.0, 0.0, nxc, res)
    parts = [
        _segment_boundary((-1, -0.5), (-1, 0.5), (-1, 0), ON_GAMMA, res),
        # upper slanted edge y = -x/2, outward normal (1/2, 1)
        _segment_boundary((-1, 0.5), (0, 0), (0.5, 1), ON_GAMMA_W, res),
        # lower slanted edge y = x/2, outward normal (1/2, -1)
        _segment_boundary((0, 0), (-1, -0.5), (0.5, -1), ON_GAMMA_W, res),
    ]
    b = _stack(parts)
    return DomainSamples("triangle", pts, wts, *b)


def _horn_samples(res: int, beta: float = 0.5, c_lo: float = 0.5,
                  c_hi: float = 1.5) -> DomainSamples:
    # cusp at the origin, opening left; walls are integral curves of the
    # anisotropic radial flow (beta*x, y): y = c * (-x)^(1/beta), x in (-1,0)
    p = 1.0 / beta

    def wall(c):
        return lambda t: c * (-t) ** p

    nxc = max(1, int(np.ceil(res)))
    pts, wts = _column_samples(lambda t: t, wall(c_lo), wall(c_hi), -1.0, 0.0, nxc, res)

    def curve(c):
        return lambda t: (t, c * (-t) ** p)

    def outward_hi(t):
        # F = y - c (-x)^p, grad F = (c p (-x)^(p-1), 1) points up/right
        return (c_hi * p * (-t) ** (p - 1.0), 1.0)

    def outward_lo(t):
        return (-c_lo * p * (-t) ** (p - 1.0), -1.0)

    t_in = -1e-3  # keep strictly away from the cusp where normals degenerate
    parts = [
        _segment_boundary((-1, c_lo), (-1, c_hi), (-1, 0), ON_GAMMA, res),
        _curve_boundary(curve(c_hi), -1.0, t_in, outward_hi, ON_GAMMA_W, res, 2.5),
        _curve_boundary(curve(c_lo), -1.0, t_in, outward_lo, ON_GAMMA_W, res, 1.5),
    ]
    b = _stack(parts)
    return DomainSamples("horn", pts, wts, *b)


def _trapezoid_samples(res: int) -> DomainSamples:
    # vertices (0,0), (1,0), (2,1), (0,1); interface is the bottom edge
    nyc = max(1, int(np.ceil(res)))
    ys, hy = _midpoints(0.0, 1.0, nyc)
    pts, wts = [], []
    for y in ys:
        nx = max(1, int(np.ceil((1.0 + y) * res)))
        xs, hx = _midpoints(0.0, 1.0 + y, nx)
        for x in xs:
            pts.append((x, y))
            wts.append(hx * hy)
    parts = [
        _segment_boundary((0, 0), (1, 0), (0, -1), ON_GAMMA, res),
        _segment_boundary((1, 0), (2, 1), (1, -1), ON_GAMMA_W, res),
        _segment_boundary((2, 1), (0, 1), (0, 1), ON_GAMMA_W, res),
        _segment_boundary((0, 1), (0, 0), (-1, 0), ON_GAMMA_W, res),
    ]
    b = _stack(parts)
    return DomainSamples("trapezoid", np.array(pts), np.array(wts), *b)


def _spiral_band(res: int, alpha: float, r0: float, r1_factor: float,
                 theta_max: float, name: str) -> DomainSamples:
    """Region between two logarithmic-spiral arcs, capped by radial segments.

    Arcs r = c * exp(alpha * theta) are integral curves of the rotational
    flow (-y, x) + alpha (x, y), so the flow is exactly tangent to them. The
    cap at theta_max is the interface (the flow exits there); the start cap
    and both arcs form the homogeneous wall.
    """
    r_in = lambda th: r0 * np.exp(alpha * th)
    r_out = lambda th: r1_factor * r0 * np.exp(alpha * th)
    n_th = max(8, int(np.ceil(theta_max * r1_factor * r0 * np.exp(alpha * theta_max) * res)))
    ths, hth = _midpoints(0.0, theta_max, n_th)
    pts, wts = [], []
    for th in ths:
        a, bnd = r_in(th), r_out(th)
        nr = max(1, int(np.ceil((bnd - a) * res)))
        rs, hr = _midpoints(a, bnd, nr)
        for r in rs:
            pts.append((r * np.cos(th), r * np.sin(th)))
            wts.append(r * hr * hth)

    def arc(curve_r):
        return lambda th: (curve_r(th) * np.cos(th), curve_r(th) * np.sin(th))

    def arc_outward(curve_r, sign):
        # curve (r(th) cos, r(th) sin); tangent T = r' e_r + r e_th;
        # normal direction = (r' e_th - r e_r) rotated to point outward.
        def nrm(th):
            r = curve_r(th)
            dr = alpha * r
            er = np.array([np.cos(th), np.sin(th)])
            et = np.array([-np.sin(th), np.cos(th)])
            v = dr * et - r * er
            return sign * v

        return nrm

    def cap_normal(th, sign):
        return sign * np.array([-np.sin(th), np.cos(th)])

    arc_len = theta_max * (1 + r1_factor) * 0.5 * r0 * np.exp(alpha * theta_max)
    parts = [
        # end cap at theta_max: interface, outward normal +e_theta
        _segment_boundary(arc(r_in)(theta_max), arc(r_out)(theta_max),
                          cap_normal(theta_max, +1), ON_GAMMA, res),
        # start cap at 0: wall, outward normal -e_theta
        _segment_boundary(arc(r_in)(0.0), arc(r_out)(0.0),
                          cap_normal(0.0, -1), ON_GAMMA_W, res),
        _curve_boundary(arc(r_out), 0.0, theta_max, arc_outward(r_out, -1),
                        ON_GAMMA_W, res, arc_len),
        _curve_boundary(arc(r_in), 0.0, theta_max, arc_outward(r_in, +1),
                        ON_GAMMA_W, res, arc_len),
    ]
    b = _stack(parts)
    return DomainSamples(name, np.array(pts), np.array(wts), *b)


def _arc_samples(res: int, r_in: float = 1.0, r_out: float = 2.0,
                 th0: float = np.pi / 6, th1: float = 5 * np.pi / 6) -> DomainSamples:
    """Annular sector in the upper half plane; interface is the far radial cap."""
    n_th = max(8, int(np.ceil((th1 - th0) * r_out * res)))
    ths, hth = _midpoints(th0, th1, n_th)
    pts, wts = [], []
    for th in ths:
        nr = max(1, int(np.ceil((r_out - r_in) * res)))
        rs, hr = _midpoints(r_in, r_out, nr)
        for r in rs:
            pts.append((r * np.cos(th), r * np.sin(th)))
            wts.append(r * hr * hth)

    def circle(r, sign):
        def param(th):
            return (r * np.cos(th), r * np.sin(th))

        def outward(th):
            return sign * np.array([np.cos(th), np.sin(th)])

        return param, outward

    po, no = circle(r_out, +1)
    pi_, ni = circle(r_in, -1)
    e_th = lambda th, s: s * np.array([-np.sin(th), np.cos(th)])
    parts = [
        _segment_boundary(pi_(th1), po(th1), e_th(th1, +1), ON_GAMMA, res),
        _segment_boundary(pi_(th0), po(th0), e_th(th0, -1), ON_GAMMA_W, res),
        _curve_boundary(po, th0, th1, no, ON_GAMMA_W, res, (th1 - th0) * r_out),
        _curve_boundary(pi_, th0, th1, ni, ON_GAMMA_W, res, (th1 - th0) * r_in),
    ]
    b = _stack(parts)
    return DomainSamples("arc", np.array(pts), np.array(wts), *b)


_DOMAIN_BUILDERS = {
    "unit-square": lambda res, **kw: _rectangle_samples(1.0, 1.0, res),
    "rectangle": lambda res, **kw: _rectangle_samples(kw.get("lx", np.pi), kw.get("ly", 1.0), res),
    "triangle": lambda res, **kw: _triangle_samples(res),
    "horn": lambda res, **kw: _horn_samples(res, beta=kw.get("beta", 0.5)),
    "trapezoid": lambda res, **kw: _trapezoid_samples(res),
    "spiral": lambda res, **kw: _spiral_band(res, kw.get("alpha", 0.2), 0.5, np.exp(2 * np.pi * kw.get("alpha", 0.2)), 1.5 * np.pi, "spiral"),
    "shell": lambda res, **kw: _spiral_band(res, kw.get("alpha", 0.2), 0.6, 5.0 / 3.0, 1.5 * np.pi, "shell"),
    "arc": lambda res, **kw: _arc_samples(res),
}

DEMO_DOMAINS = tuple(sorted(_DOMAIN_BUILDERS))


def sample_domain(descriptor: str, resolution: int, **params) -> DomainSamples:
    """Sample one of the built-in demo domains.

    resolution is the approximate number of sample points per unit length;
    values below 8 are rejected as too coarse to certify anything.
    """
    if descriptor not in _DOMAIN_BUILDERS:
        raise MeshError(f"unknown domain descriptor {descriptor!r}; "
                        f"available: {', '.join(DEMO_DOMAINS)}")
    if resolution < 8:
        raise ConfigurationError(f"resolution must be >= 8, got {resolution}")
    samples = _DOMAIN_BUILDERS[descriptor](resolution, **params)
    if np.any(samples.interior_weights <= 0):
        raise MeshError(f"non-positive quadrature weight in domain {descriptor!r}")
    return samples
