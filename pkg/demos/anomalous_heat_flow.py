"""Heat flowing from cold to hot, paid for by initial correlations.

Two qubits start with thermal marginals at beta 2 (cold, A) and 0.5 (hot, B)
but correlated; the process removes the correlations.
"""

from infothermo import constructions as c
from infothermo import lawbook as lb

rec = c.anomalous_heat_flow_record()
L = lb.ledger(rec)
rep = lb.clausius_report(rec)
print(f"T_A={rep.T_A:.4f}  T_B={rep.T_B:.4f}  (intrinsic, initial)")
print(f"dQ_A={L.dQ_A:+.5f}  dQ_B={L.dQ_B:+.5f}  dI={L.dI:+.5f}  W={L.W:+.2e}")
print(f"standard Clausius margin (T_B - T_A) dS_A = {rep.std_margin:+.5f}  holds: {rep.std_holds}")
print(f"generalized margin                         = {rep.margin:+.5f}  holds: {rep.holds}")
