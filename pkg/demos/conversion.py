"""Asymptotic conversion rates between qubit states.

Compares the rate with the entropy-only ratio S(rho)/S(sigma) and shows
which boundary state absorbs the leftover energy and entropy. The last
pair consists of two Gibbs states: the source already sits on the
boundary, so any residue would have to lie outside it and the rate is 0.
"""

import numpy as np

from infothermo import diagram as dg
from infothermo import qstate as q
from infothermo import resource as rs

H = q.HermitianOperator.diagonal([0.0, 1.0])
boundary = dg.thermal_boundary(H)
pairs = [
    (q.DensityMatrix(np.array([[0.6, 0.3], [0.3, 0.4]])), q.DensityMatrix.maximally_mixed(2)),
    (q.DensityMatrix.from_spectrum([0.85, 0.15], basis=np.array([[0.8, -0.6], [0.6, 0.8]])), q.DensityMatrix.from_spectrum([0.7, 0.3])),
    (q.DensityMatrix.from_spectrum([0.9, 0.1]), q.DensityMatrix.from_spectrum([0.7, 0.3])),
]
for rho, sigma in pairs:
    res = rs.max_conversion_rate(rs.ConversionProblem.from_states(rho, sigma, H), boundary)
    ratio = q.entropy(rho) / q.entropy(sigma)
    print(f"rate={res.rate:.6f}  S ratio={ratio:.6f}  residue ({res.residue.E:.4f}, {res.residue.S:.4f}) "
          f"kind={res.residue_kind} flags={list(res.flags)}")
