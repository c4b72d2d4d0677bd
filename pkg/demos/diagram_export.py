"""Write the energy-entropy diagram of a qutrit with a few annotated states.

Usage: python3 demos/diagram_export.py [out.svg]
"""

import sys

from infothermo import diagram as dg
from infothermo import passive as p
from infothermo import qstate as q

H = q.HermitianOperator.diagonal([0.0, 0.6, 1.5])
boundary = dg.thermal_boundary(H)
states = {
    "random": q.random_density_matrix(3, seed=4),
    "gibbs(1)": p.gibbs_state(H, 1.0),
    "excited": q.DensityMatrix.pure([0, 0, 1]),
}
points = [dg.locate(rho, H, name) for name, rho in states.items()]
segments = [s for pt in points for s in dg.class_segments(pt, boundary)]
for pt in points:
    print(f"{pt.label:>9}: E={pt.E:.4f} S={pt.S:.4f} F(diagram)={dg.horizontal_free_energy(pt, boundary):.4f}")
out = sys.argv[1] if len(sys.argv) > 1 else "diagram.svg"
dg.export(boundary, points, segments, fmt="svg", path=out)
print(f"wrote {out}")
