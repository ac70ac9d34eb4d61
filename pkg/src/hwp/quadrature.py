"""Discrete quadrature and difference forms on uniform rectangular subgrids.

All nodal fields are arrays of shape (ny, nx), row j at height y_j, column i
at abscissa x_i. Three ingredients recur everywhere:

* trapezoidal masses for L2 inner products,
* cell-centered gradients (second order) for energy-type integrals,
* an edge-based Dirichlet form that satisfies an exact summation-by-parts
  identity against the five-point Laplacian, used where discrete identities
  must hold to round-off rather than to truncation order.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def trap_weights_1d(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def trap_mass(ny: int, nx: int, hx: float, hy: float) -> np.ndarray:
    """Trapezoidal quadrature weights over the full rectangle."""
    return np.outer(trap_weights_1d(ny, hy), trap_weights_1d(nx, hx))


def interior_mass(ny: int, nx: int, hx: float, hy: float) -> np.ndarray:
    """Uniform weights hx*hy on strictly interior nodes, zero on the rim.

    This is the mass that pairs exactly with five-point Laplacian rows in the
    summation-by-parts identity (see ``sbp_stiffness``).
    """
    m = np.zeros((ny, nx))
    m[1:-1, 1:-1] = hx * hy
    return m


def inner(mass: np.ndarray, a: np.ndarray, b: np.ndarray) -> complex:
    """Weighted inner product  sum mass * a * conj(b)."""
    return complex(np.sum(mass * a * np.conj(b)))


def norm_sq(mass: np.ndarray, a: np.ndarray) -> float:
    return float(np.sum(mass * np.abs(a) ** 2))


def cell_average(f: np.ndarray) -> np.ndarray:
    """Average of the four corner values per grid cell, shape (ny-1, nx-1)."""
    return 0.25 * (f[:-1, :-1] + f[:-1, 1:] + f[1:, :-1] + f[1:, 1:])


def cell_gradient(f: np.ndarray, hx: float, hy: float) -> tuple[np.ndarray, np.ndarray]:
    """Second-order gradient at cell centers, each of shape (ny-1, nx-1)."""
    fx = ((f[:-1, 1:] - f[:-1, :-1]) + (f[1:, 1:] - f[1:, :-1])) / (2.0 * hx)
    fy = ((f[1:, :-1] - f[:-1, :-1]) + (f[1:, 1:] - f[:-1, 1:])) / (2.0 * hy)
    return fx, fy


def cell_centers(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    xc = 0.5 * (x[:-1] + x[1:])
    yc = 0.5 * (y[:-1] + y[1:])
    return np.meshgrid(xc, yc)


def cell_gradient_operators(ny: int, nx: int, hx: float, hy: float) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Sparse operators mapping flattened nodal values to cell-center gradients."""
    ncell = (ny - 1) * (nx - 1)
    rows, cols_x, vals_x, cols_y, vals_y = [], [], [], [], []
    for j in range(ny - 1):
        for i in range(nx - 1):
            c = j * (nx - 1) + i
            n00 = j * nx + i
            n01 = j * nx + i + 1
            n10 = (j + 1) * nx + i
            n11 = (j + 1) * nx + i + 1
            rows.extend([c] * 4)
            cols_x.extend([n00, n01, n10, n11])
            vals_x.extend([-1 / (2 * hx), 1 / (2 * hx), -1 / (2 * hx), 1 / (2 * hx)])
            cols_y.extend([n00, n01, n10, n11])
            vals_y.extend([-1 / (2 * hy), -1 / (2 * hy), 1 / (2 * hy), 1 / (2 * hy)])
    gx = sp.csr_matrix((vals_x, (rows, cols_x)), shape=(ncell, ny * nx))
    gy = sp.csr_matrix((vals_y, (rows, cols_y)), shape=(ncell, ny * nx))
    return gx, gy


def gradient_energy(f: np.ndarray, hx: float, hy: float) -> float:
    """Cell-quadrature approximation of the Dirichlet energy int |grad f|^2."""
    fx, fy = cell_gradient(f, hx, hy)
    return float(np.sum((np.abs(fx) ** 2 + np.abs(fy) ** 2)) * hx * hy)


def anisotropic_gradient_form(ny: int, nx: int, hx: float, hy: float,
                              s11: np.ndarray, s12: np.ndarray,
                              s22: np.ndarray) -> sp.csr_matrix:
    """Sparse quadratic form  f -> int (grad f)^T S grad f  with per-cell
    symmetric coefficients S = [[s11, s12], [s12, s22]] (arrays over cells,
    shape (ny-1, nx-1)), acting on flattened nodal values (j*nx + i).

    Diagonal terms use the mean of the squared edge differences on opposite
    cell edges (no checkerboard kernel, suitable for eigenproblems); the
    cross term pairs the two averaged differences. The form is positive
    semidefinite whenever every S is.
    """
    area = hx * hy
    rows, cols, vals = [], [], []

    def rank_one(coef: float, idx: list[int], coeffs: list[float]) -> None:
        for a, va in zip(idx, coeffs):
            for b, vb in zip(idx, coeffs):
                rows.append(a)
                cols.append(b)
                vals.append(coef * va * vb)

    for j in range(ny - 1):
        for i in range(nx - 1):
            n00 = j * nx + i
            n01 = j * nx + i + 1
            n10 = (j + 1) * nx + i
            n11 = (j + 1) * nx + i + 1
            a11 = float(s11[j, i])
            a12 = float(s12[j, i])
            a22 = float(s22[j, i])
            if a11:
                rank_one(0.5 * area * a11, [n01, n00], [1 / hx, -1 / hx])
                rank_one(0.5 * area * a11, [n11, n10], [1 / hx, -1 / hx])
            if a22:
                rank_one(0.5 * area * a22, [n10, n00], [1 / hy, -1 / hy])
                rank_one(0.5 * area * a22, [n11, n01], [1 / hy, -1 / hy])
            if a12:
                gx = [n01, n00, n11, n10]
                cx = [0.5 / hx, -0.5 / hx, 0.5 / hx, -0.5 / hx]
                gy = [n10, n00, n11, n01]
                cy = [0.5 / hy, -0.5 / hy, 0.5 / hy, -0.5 / hy]
                # 2 * s12 * mean(dx) * mean(dy), symmetrized
                for a, va in zip(gx, cx):
                    for b, vb in zip(gy, cy):
                        rows.extend([a, b])
                        cols.extend([b, a])
                        vals.extend([area * a12 * va * vb] * 2)
    return sp.csr_matrix((vals, (rows, cols)), shape=(ny * nx, ny * nx))


def sbp_stiffness(ny: int, nx: int, hx: float, hy: float,
                  x_edge_rows: np.ndarray) -> sp.csr_matrix:
    """Edge-difference Dirichlet form over the full node set (flattened j*nx+i).

    The form
        a(u, v) = sum_{x-edges in x_edge_rows} (hy/hx) du dv
                + sum_{y-edges, interior columns} (hx/hy) du dv
    satisfies, for v vanishing on the side columns and on one horizontal rim,
    the exact identity
        sum_interior hx*hy * v * Lap5(u) = -a(u, v) + boundary flux term,
    where the flux term uses two-point one-sided differences on the remaining
    horizontal rim. x_edge_rows must be the rows that carry Laplacian rows
    (strictly interior rows of the subgrid).
    """
    n = ny * nx
    rows, cols, vals = [], [], []

    def add_edge(a: int, b: int, c: float) -> None:
        rows.extend([a, b, a, b])
        cols.extend([a, b, b, a])
        vals.extend([c, c, -c, -c])

    cx = hy / hx
    cy = hx / hy
    for j in np.atleast_1d(x_edge_rows):
        for i in range(nx - 1):
            add_edge(j * nx + i, j * nx + i + 1, cx)
    for i in range(1, nx - 1):
        for j in range(ny - 1):
            add_edge(j * nx + i, (j + 1) * nx + i, cy)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def laplacian_5pt(ny: int, nx: int, hx: float, hy: float) -> sp.csr_matrix:
    """Negative five-point Laplacian (-Lap) with homogeneous Dirichlet rim.

    Returned matrix acts on the free (strictly interior) nodes only, in
    row-major interior ordering.
    """
    nyi, nxi = ny - 2, nx - 2
    ex = np.ones(nxi)
    ey = np.ones(nyi)
    tx = sp.diags([2 * ex / hx**2, -ex[:-1] / hx**2, -ex[:-1] / hx**2], [0, 1, -1])
    ty = sp.diags([2 * ey / hy**2, -ey[:-1] / hy**2, -ey[:-1] / hy**2], [0, 1, -1])
    return (sp.kron(sp.identity(nyi), tx) + sp.kron(ty, sp.identity(nxi))).tocsr()


def one_sided_deriv_low(f: np.ndarray, h: float, axis: int = 0) -> np.ndarray:
    """Second-order one-sided derivative at the low end of `axis` (3-point)."""
    f = np.moveaxis(f, axis, 0)
    return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)


def one_sided_deriv_high(f: np.ndarray, h: float, axis: int = 0) -> np.ndarray:
    """Second-order one-sided derivative at the high end of `axis` (3-point)."""
    f = np.moveaxis(f, axis, 0)
    return (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * h)
