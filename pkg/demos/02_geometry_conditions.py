"""Check the geometric admissibility conditions on the demo domains.

Each multiplier field is paired with the domain it was designed for: walls
are integral curves (or sign-compatible pieces) of the flow, so b.n vanishes
or is negative on the wall and positive on the interface. The trapezoid is
the counterexample: its counting identity forces a sign violation for any
uniformly contractive candidate field.
"""

import numpy as np

import hwp

CASES = [
    ("triangle", hwp.translate((0.0, 0.0))),
    ("horn", hwp.horn(0.5)),
    ("unit-square", hwp.graph_vertical(2.0)),
    ("shell", hwp.spiral(0.2)),
    ("spiral", hwp.spiral(0.2)),
    ("arc", hwp.arc_renormalized()),
]

print(f"{'domain':12s} {'field':20s} {'contract':>9s} {'wall max':>10s} "
      f"{'iface min':>10s} {'graph C':>9s}  verdicts")
for domain, spec in CASES:
    samples = hwp.sample_domain(domain, 32)
    rep = hwp.check_conditions(spec, samples)
    active = ",".join(k for k, v in rep.verdicts.items() if v)
    print(f"{domain:12s} {spec.describe():20s} {rep.contractivity_margin:9.3f} "
          f"{rep.gammaW_sign_max:10.2e} {rep.interface_sign_min:10.3f} "
          f"{min(rep.graph_quadform_margin, 999):9.3f}  {active}")

print()
print("Interface Poincare inequality on the unit square (graph field):")
grid = hwp.build_stacked_rectangles(1.0, 1.0, 1.0, 17, 17, 3)
pc = hwp.check_poincare(hwp.graph_vertical(2.0), grid)
print(f"  smallest Rayleigh quotient {pc.rayleigh_min:.4f} "
      f"-> inequality constant {pc.poincare_constant:.4f} "
      f"({pc.iterations} iterations)")

print()
print("Trapezoid counting identity (interior = boundary for any field),")
print("with the wall sign violations that rule each candidate out:")
for spec in (hwp.translate((0.0, 0.0)), hwp.horn(1.0), hwp.spiral(0.2)):
    obs = hwp.trapezoid_obstruction(spec, 64)
    print(f"  {spec.describe():20s} interior {obs.interior_integral:8.4f}  "
          f"boundary {obs.boundary_integral:8.4f}  "
          f"violations {len(obs.sign_violations):4d}  "
          f"contractivity {obs.contractivity_margin:.3f}")
