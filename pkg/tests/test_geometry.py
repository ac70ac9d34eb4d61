import numpy as np
import pytest

import hwp
from hwp.errors import GeometryCheckError
from hwp.geometry import boundary_sign_table
from hwp.mesh import DomainSamples


def test_triangle_translate_passes_geometric_optics():
    samples = hwp.sample_domain("triangle", 32)
    rep = hwp.check_conditions(hwp.translate((0.0, 0.0)), samples)
    assert rep.contractivity_margin == pytest.approx(1.0, abs=1e-12)
    assert rep.gammaW_sign_max <= 1e-10
    assert rep.verdicts["generalized_optics"]
    assert rep.verdicts["interface_sign"]


def test_horn_generalized_optics():
    samples = hwp.sample_domain("horn", 32)
    rep = hwp.check_conditions(hwp.horn(0.5), samples)
    # eigenvalues of diag(beta, 1) give the margin beta
    assert rep.contractivity_margin == pytest.approx(0.5, abs=1e-12)
    assert rep.gammaW_sign_max <= 1e-10
    assert rep.verdicts["generalized_optics"]


def test_graph_vertical_on_unit_square():
    samples = hwp.sample_domain("unit-square", 32)
    rep = hwp.check_conditions(hwp.graph_vertical(2.0), samples)
    # xi^T grad(b) xi = xi_2^2 while |xi.b|^2 = (y-2)^2 xi_2^2 <= 4 xi_2^2
    assert rep.contractivity_margin == pytest.approx(0.0, abs=1e-12)
    assert not rep.verdicts["contractive"]
    assert rep.graph_quadform_margin >= 0.25 - 1e-12
    assert rep.graph_quadform_margin <= 0.26
    assert rep.verdicts["graph_quadratic_form"]
    assert rep.interface_sign_min >= 1.0  # b.n = 2 - y on the bottom edge


def test_spiral_field_margin_on_shell():
    samples = hwp.sample_domain("shell", 16)
    rep = hwp.check_conditions(hwp.spiral(0.2), samples, tol=1e-10)
    assert rep.contractivity_margin == pytest.approx(0.2, abs=1e-10)
    assert rep.verdicts["generalized_optics"]
    assert rep.verdicts["interface_sign"]


def test_arc_domain_satisfies_graph_form_only():
    samples = hwp.sample_domain("arc", 16)
    rep = hwp.check_conditions(hwp.arc_renormalized(), samples)
    assert not rep.verdicts["contractive"]
    assert rep.verdicts["graph_quadratic_form"]
    assert rep.graph_quadform_margin > 0.03


def test_empty_boundary_set_rejected():
    samples = hwp.sample_domain("unit-square", 16)
    broken = DomainSamples(
        name="broken",
        interior_points=samples.interior_points,
        interior_weights=samples.interior_weights,
        boundary_points=samples.boundary_points,
        boundary_normals=samples.boundary_normals,
        boundary_weights=samples.boundary_weights,
        boundary_tags=np.full(len(samples.boundary_tags), "OnGammaW"),
    )
    with pytest.raises(GeometryCheckError):
        hwp.check_conditions(hwp.translate((0.0, 0.0)), broken)


def test_boundary_sign_table_shape():
    samples = hwp.sample_domain("triangle", 16)
    rows = boundary_sign_table(hwp.translate((0.0, 0.0)), samples)
    assert len(rows) == len(samples.boundary_points)
    # slant edge rows carry ~zero b.n
    slant = [r for r in rows if r[4] == "OnGammaW"]
    assert max(abs(r[5]) for r in slant) < 1e-12


# ---------------------------------------------------------------------------
# interface Poincare Rayleigh quotient
# ---------------------------------------------------------------------------

def test_poincare_graph_vertical_positive():
    grid = hwp.build_stacked_rectangles(1.0, 1.0, 1.0, 17, 17, 3)
    rep = hwp.check_poincare(hwp.graph_vertical(2.0), grid)
    assert rep.converged
    assert rep.rayleigh_min > 0
    assert np.isfinite(rep.poincare_constant)


def test_poincare_zero_field_reports_zero():
    grid = hwp.build_stacked_rectangles(1.0, 1.0, 1.0, 17, 17, 3)
    rep = hwp.check_poincare(hwp.zero_field(), grid)
    assert abs(rep.rayleigh_min) < 1e-6


def test_poincare_refinement_stability():
    coarse = hwp.build_stacked_rectangles(1.0, 1.0, 1.0, 9, 9, 3)
    fine = hwp.build_stacked_rectangles(1.0, 1.0, 1.0, 17, 17, 3)
    a = hwp.check_poincare(hwp.graph_vertical(2.0), coarse).rayleigh_min
    b = hwp.check_poincare(hwp.graph_vertical(2.0), fine).rayleigh_min
    assert abs(a - b) / b < 0.10


# ---------------------------------------------------------------------------
# trapezoid counting identity
# ---------------------------------------------------------------------------

def test_trapezoid_translate_identity_and_violation():
    rep = hwp.trapezoid_obstruction(hwp.translate((0.0, 0.0)), 64)
    # div contributions integrate to area(Omega) + area(Omega_l) = 2
    assert rep.interior_integral == pytest.approx(2.0, abs=0.02)
    assert rep.boundary_integral == pytest.approx(rep.interior_integral, abs=0.02)
    # slanted edge has b.n = 1/sqrt(2) > 0 everywhere
    slant = [v for v in rep.sign_violations if abs(v[0] - 1 - v[1]) < 1e-9]
    assert slant
    assert all(v[2] == pytest.approx(1 / np.sqrt(2), abs=1e-12) for v in slant)


def test_trapezoid_graph_vertical_fails_contractivity_first():
    rep = hwp.trapezoid_obstruction(hwp.graph_vertical(2.0), 32)
    assert rep.contractivity_margin == pytest.approx(0.0, abs=1e-12)


def test_trapezoid_horn_positive_interior_with_violations():
    rep = hwp.trapezoid_obstruction(hwp.horn(1.0), 64)
    assert rep.interior_integral > 0
    assert len(rep.sign_violations) >= 1
    # quadrature oracle at 10x resolution
    fine = hwp.trapezoid_obstruction(hwp.horn(1.0), 640)
    assert rep.interior_integral == pytest.approx(fine.interior_integral, rel=0.01)
    assert fine.mismatch < 0.01 * abs(fine.interior_integral)


@pytest.mark.parametrize("spec", [
    hwp.translate((0.5, 0.5)),
    hwp.spiral(0.2),
    hwp.horn(0.7),
    hwp.graph_vertical(2.0),
])
def test_trapezoid_counting_identity_for_every_field(spec):
    # discrete divergence-theorem consistency at the sampling level
    rep = hwp.trapezoid_obstruction(spec, 128)
    scale = max(abs(rep.interior_integral), abs(rep.boundary_integral), 0.1)
    assert rep.mismatch <= 0.02 * scale
