"""
infothermo: thermodynamics of finite quantum systems under entropy-preserving operations.

Temperatures, heat, work and free energy are defined from a state's energy
and entropy alone, with no reference bath. Modules:

- ``qstate``: density matrices, Hamiltonians, entropy, partial traces.
- ``passive``: Gibbs states, intrinsic temperature, bound and free energy.
- ``equilibrium``: mutual equilibrium of non-interacting composites.
- ``lawbook``: heat/work ledgers and the laws for bipartite processes.
- ``engine``: heat engines between finite baths.
- ``diagram``: energy-entropy diagrams and their export.
- ``resource``: asymptotic conversion rates in (E, S) coordinates.
"""

__version__ = "0.1.0"

from .qstate import (  # noqa: E402
    DensityMatrix,
    HermitianOperator,
    ValidationError,
    energy,
    entropy,
    join_hamiltonians,
    mutual_information,
    partial_trace,
    tensor,
)
from .passive import (  # noqa: E402
    bound_energy,
    completely_passive_state,
    equivalence_class,
    free_energy,
    gibbs_state,
    intrinsic_beta,
)

__all__ = [
    "DensityMatrix",
    "HermitianOperator",
    "ValidationError",
    "bound_energy",
    "completely_passive_state",
    "energy",
    "entropy",
    "equivalence_class",
    "free_energy",
    "gibbs_state",
    "intrinsic_beta",
    "join_hamiltonians",
    "mutual_information",
    "partial_trace",
    "tensor",
]
