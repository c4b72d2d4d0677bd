"""
Ready-made processes that exhibit particular thermodynamic behaviour.

These are used by the test-suite and the demos, and are handy starting
points for experiments:

- ``equilibration_record``: two Gibbs states driven to their common beta.
- ``anomalous_heat_flow_record``: a correlated pair whose decorrelation
  moves heat from the cold part to the hot one.
- ``kicked_record``: a small unitary kick of size ``eps`` applied to a
  correlated pair with a thermal environment marginal.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .equilibrium import equilibrium_beta
from .lawbook import ProcessRecord
from .passive import gibbs_state
from .qstate import DensityMatrix, HermitianOperator, apply_unitary, random_hamiltonian, tensor


def exchange_generator() -> np.ndarray:
    """``|01><10| + |10><01|`` on two qubits; it commutes with equal-gap Hamiltonians."""
    X = np.zeros((4, 4), dtype=complex)
    X[1, 2] = X[2, 1] = 1.0
    return X


def exchange_unitary(theta: float) -> np.ndarray:
    return expm(-1j * theta * exchange_generator())


def correlated_thermal_pair(H: HermitianOperator, beta_A: float, beta_B: float, theta: float) -> DensityMatrix:
    """Partial exchange applied to ``gamma(beta_A) (x) gamma(beta_B)`` of two identical qubits.

    The marginals stay diagonal (hence thermal), but the pair is correlated.
    """
    if H.dim != 2:
        raise ValueError("correlated_thermal_pair is defined for qubits")
    rho0 = tensor(gibbs_state(H, beta_A), gibbs_state(H, beta_B))
    return DensityMatrix(apply_unitary(rho0, exchange_unitary(theta)).matrix, (2, 2))


def anomalous_heat_flow_record(
    gap: float = 1.0, beta_cold: float = 2.0, beta_hot: float = 0.5, theta: float = 0.7
) -> ProcessRecord:
    """Undo the correlations of ``correlated_thermal_pair``, with ``A`` the colder part.

    The final state is the uncorrelated product of the original Gibbs
    states, so the cold part loses entropy while the hot one gains it.
    """
    H = HermitianOperator.diagonal([0.0, gap])
    initial = correlated_thermal_pair(H, beta_cold, beta_hot, theta)
    final = tensor(gibbs_state(H, beta_cold), gibbs_state(H, beta_hot))
    return ProcessRecord(H, H, initial, final)


def kicked_record(eps: float, theta: float = 0.7, beta_A: float = 2.0, beta_B: float = 1.0 / 2, mix: float = 0.3, seed: int = 1) -> ProcessRecord:
    """Kick ``exp(-i eps G)`` on a correlated qubit pair whose environment marginal is thermal.

    ``G`` is the exchange generator plus ``mix`` times a fixed random
    Hermitian matrix. The exchange part moves environment populations at
    first order in ``eps``; the random part adds coherences, so the
    environment leaves its thermal curve.
    """
    H = HermitianOperator.diagonal([0.0, 1.0])
    initial = correlated_thermal_pair(H, beta_A, beta_B, theta)
    G = exchange_generator() + mix * random_hamiltonian(4, seed=seed).matrix
    return ProcessRecord.from_unitary(initial, expm(-1j * eps * G), H, H)


def equilibration_record(H_A: HermitianOperator, beta_A: float, H_B: HermitianOperator, beta_B: float) -> ProcessRecord:
    """``gamma_A (x) gamma_B -> gamma_A(beta_AB) (x) gamma_B(beta_AB)`` at fixed total entropy."""
    b = equilibrium_beta([beta_A, beta_B], [H_A, H_B]).beta
    initial = tensor(gibbs_state(H_A, beta_A), gibbs_state(H_B, beta_B))
    final = tensor(gibbs_state(H_A, b), gibbs_state(H_B, b))
    return ProcessRecord(H_A, H_B, initial, final)
