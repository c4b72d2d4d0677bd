"""Equilibrating a qubit against baths of growing size.

The common beta reached at fixed total entropy approaches the bath's own
beta as the bath grows, roughly like 1/(n+1). How close it gets by n = 8
depends on how far the system starts from the bath.
"""

from infothermo import equilibrium as eq
from infothermo import qstate as q

H = q.HermitianOperator.diagonal([0.0, 1.0])

for beta_system, beta_bath in [(0.5, 1.0), (3.0, 0.5)]:
    print(f"system beta {beta_system}, bath beta {beta_bath}")
    for n in range(1, 9):
        bath = q.join_hamiltonians(*[H] * n) if n > 1 else H
        comp = eq.CompositeSystem.from_gibbs([("S", H, beta_system), ("bath", bath, beta_bath)])
        res = eq.equilibrate(comp)
        b = res.common_beta.beta
        print(f"  n={n}  beta_AB={b:.5f}  relative deviation={abs(b - beta_bath) / beta_bath:.4f}  "
              f"released={res.energy_released:.5f}")
