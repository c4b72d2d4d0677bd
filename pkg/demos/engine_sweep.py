"""Efficiency of a two-bath engine as the baths grow.

The first line is the single-qubit-bath engine; the table then shows the
gap to the Carnot value shrinking with bath size.
"""

from infothermo import engine as en
from infothermo import qstate as q

H = q.HermitianOperator.diagonal([0.0, 1.0])
base = en.EngineConfig(H, 2.0, H, 0.5)
rep, _ = en.run_cycle(base)
print(f"single qubits: eta={rep.eta:.6f}  general bound={rep.eta_bound_general:.6f}  carnot={rep.eta_carnot:.2f}")
for row in en.sweep_bath_size(base, range(1, 9)):
    print(f"n={row.n}  eta={row.eta:.6f}  carnot gap={row.carnot_gap:.6f}  W={row.W:.3e}")
