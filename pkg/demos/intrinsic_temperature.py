"""Every state carries a temperature: that of the Gibbs state with equal entropy.

Prints energy, entropy, beta, bound and free energy for a few qubit states
that share one entropy but differ in energy.
"""

import numpy as np

from infothermo import passive as p
from infothermo import qstate as q

H = q.HermitianOperator.diagonal([0.0, 1.0])
spectrum = [0.8, 0.2]

print(f"{'angle':>6} {'E':>8} {'S':>8} {'beta':>8} {'B':>8} {'F':>8}")
for angle in np.linspace(0, np.pi / 2, 5):
    c, s = np.cos(angle), np.sin(angle)
    rho = q.DensityMatrix.from_spectrum(spectrum, basis=np.array([[c, -s], [s, c]]))
    beta = p.intrinsic_beta(rho, H).beta
    print(f"{angle:6.3f} {q.energy(rho, H):8.4f} {q.entropy(rho):8.4f} {beta:8.4f} "
          f"{p.bound_energy(rho, H):8.4f} {p.free_energy(rho, H):8.4f}")
print("all rows share S, hence beta and B; only the free energy changes")
