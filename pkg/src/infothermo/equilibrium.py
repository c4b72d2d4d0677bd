"""
Mutual equilibrium of non-interacting composites (zeroth law).

A collection of parts is at equilibrium when the joint state carries no free
energy. Equilibrating means moving, at fixed total entropy, to the joint
completely passive state, which is a product of local Gibbs states at one
common inverse temperature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import passive
from .passive import IntrinsicTemperature, gibbs_entropy, gibbs_state, solve_beta
from .qstate import (
    DensityMatrix,
    HermitianOperator,
    energy,
    entropy,
    join_hamiltonians,
    mutual_information,
    partial_trace,
    tensor,
)


@dataclass(frozen=True)
class CompositeSystem:
    """Labelled non-interacting parts and their joint state."""

    parts: tuple[tuple[str, HermitianOperator], ...]
    state: DensityMatrix

    def __init__(self, parts: Sequence[tuple[str, HermitianOperator]], state: DensityMatrix):
        parts = tuple((str(label), h) for label, h in parts)
        dims = tuple(h.dim for _, h in parts)
        if int(np.prod(dims)) != state.dim:
            raise ValueError(f"part dimensions {dims} do not multiply to state dim {state.dim}")
        if state.subsystem_dims != dims:
            state = DensityMatrix(state.matrix, dims)
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "state", state)

    @classmethod
    def from_gibbs(cls, parts: Sequence[tuple[str, HermitianOperator, float]]) -> "CompositeSystem":
        """Product of local Gibbs states, one ``(label, H, beta)`` per part."""
        states = [gibbs_state(h, b) for _, h, b in parts]
        return cls([(label, h) for label, h, _ in parts], tensor(*states))

    @property
    def hamiltonians(self) -> list[HermitianOperator]:
        return [h for _, h in self.parts]

    @property
    def labels(self) -> list[str]:
        return [label for label, _ in self.parts]

    def joint_hamiltonian(self) -> HermitianOperator:
        return join_hamiltonians(*self.hamiltonians)

    def marginal(self, k: int) -> DensityMatrix:
        if len(self.parts) == 1:
            return self.state
        return partial_trace(self.state, [k])


@dataclass(frozen=True)
class EquilibrationResult:
    common_beta: IntrinsicTemperature
    joint_cp_state: DensityMatrix
    energy_released: float
    per_part_states: list[DensityMatrix] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)
    initial_energy: float = 0.0
    final_energy: float = 0.0
    total_entropy: float = 0.0


def _total_energy(composite: CompositeSystem) -> float:
    # sum of local energies equals tr(H_joint rho) for non-interacting parts
    return sum(energy(composite.marginal(k), h) for k, h in enumerate(composite.hamiltonians))


def equilibrate(composite: CompositeSystem) -> EquilibrationResult:
    """Joint completely passive state reachable at fixed total entropy."""
    s_total = entropy(composite.state)
    hams = composite.hamiltonians
    beta = solve_beta([h.eigenvalues for h in hams], s_total)
    if beta.is_infinite:
        # degenerate joint ground space; the canonical representative is not a product
        h_joint = composite.joint_hamiltonian()
        joint = passive.completely_passive_state(composite.state, h_joint)
        parts = [partial_trace(joint, [k]) if len(hams) > 1 else joint for k in range(len(hams))]
        final_energy = energy(joint, h_joint)
    else:
        parts = [gibbs_state(h, beta.beta) for h in hams]
        joint = tensor(*parts)
        final_energy = sum(passive.gibbs_energy(h.eigenvalues, beta.beta) for h in hams)
    e0 = _total_energy(composite)
    return EquilibrationResult(
        common_beta=beta,
        joint_cp_state=joint,
        energy_released=e0 - final_energy,
        per_part_states=parts,
        labels=composite.labels,
        initial_energy=e0,
        final_energy=final_energy,
        total_entropy=s_total,
    )


@dataclass(frozen=True)
class EquilibriumCheck:
    is_equilibrium: bool
    residual: float
    marginal_betas: list[float]
    marginals_thermal: bool
    shared_beta: bool
    mutual_information: float


def is_equilibrium(composite: CompositeSystem, tol: float = 1e-9) -> EquilibriumCheck:
    """Whether the joint state is free-energy-less, with the local diagnostics.

    ``residual`` is the free energy of the joint state. The marginal checks
    (each part Gibbs, one shared beta, no correlations) are reported
    alongside; at equilibrium they all hold.
    """
    hams = composite.hamiltonians
    s_total = entropy(composite.state)
    beta = solve_beta([h.eigenvalues for h in hams], s_total)
    if beta.is_infinite:
        b = passive.bound_energy(composite.state, composite.joint_hamiltonian())
    else:
        b = sum(passive.gibbs_energy(h.eigenvalues, beta.beta) for h in hams)
    residual = _total_energy(composite) - b
    betas, thermal = [], True
    for k, h in enumerate(hams):
        m = composite.marginal(k)
        betas.append(passive.intrinsic_beta(m, h).beta)
        thermal &= passive.free_energy(m, h) <= tol
    finite = [x for x in betas if math.isfinite(x)]
    shared = len(finite) in (0, len(betas)) and (not finite or max(finite) - min(finite) <= 1e-6 * max(1.0, max(finite)))
    mi = mutual_information(composite.state, [0]) if len(hams) > 1 else 0.0
    return EquilibriumCheck(residual <= tol, residual, betas, thermal, shared, mi)


def equilibrium_beta(betas: Sequence[float], hamiltonians: Sequence[HermitianOperator]) -> IntrinsicTemperature:
    """Common beta reached by iso-entropic equilibration of local Gibbs states."""
    target = sum(gibbs_entropy(h.eigenvalues, b) for h, b in zip(hamiltonians, betas))
    return solve_beta([h.eigenvalues for h in hamiltonians], target)


def beta_ordering_check(
    beta_A: float, beta_B: float, H_A: HermitianOperator, H_B: HermitianOperator, tol: float = 1e-9
) -> tuple[float, bool]:
    """Equilibrium beta of ``gamma(H_A, beta_A) (x) gamma(H_B, beta_B)`` and whether it lies between them."""
    beta_ab = equilibrium_beta([beta_A, beta_B], [H_A, H_B]).beta
    lo, hi = min(beta_A, beta_B), max(beta_A, beta_B)
    return beta_ab, bool(lo - tol <= beta_ab <= hi + tol)


@dataclass(frozen=True)
class Lemma1Report:
    """Margins of the four bound/free-energy inequalities for a bipartite state.

    Each margin is ``larger side - smaller side`` and is non-negative when the
    inequality holds:

    - ``p4``: B(rho_A (x) rho_B) - B(rho_AB)
    - ``p5``: B(rho_A) + B(rho_B) - B(rho_A (x) rho_B)
    - ``p6``: F(rho_AB) - F(rho_A (x) rho_B)
    - ``p7``: F(rho_A (x) rho_B) - F(rho_A) - F(rho_B)
    """

    p4: float
    p5: float
    p6: float
    p7: float
    saturated: dict

    def margins(self) -> dict:
        return {"P4": self.p4, "P5": self.p5, "P6": self.p6, "P7": self.p7}


def verify_lemma1(rho_ab: DensityMatrix, H_A: HermitianOperator, H_B: HermitianOperator, tol: float = 1e-9) -> Lemma1Report:
    rho_ab = DensityMatrix(rho_ab.matrix, (H_A.dim, H_B.dim))
    rho_a, rho_b = partial_trace(rho_ab, [0]), partial_trace(rho_ab, [1])
    h_ab = join_hamiltonians(H_A, H_B)
    prod = tensor(rho_a, rho_b)
    b_ab = passive.bound_energy(rho_ab, h_ab)
    b_prod = passive.bound_energy(prod, h_ab)
    b_a, b_b = passive.bound_energy(rho_a, H_A), passive.bound_energy(rho_b, H_B)
    e_a, e_b = energy(rho_a, H_A), energy(rho_b, H_B)
    e_ab = e_a + e_b  # non-interacting: E(rho_AB) = E(rho_A (x) rho_B)
    f_ab, f_prod = e_ab - b_ab, e_ab - b_prod
    f_a, f_b = e_a - b_a, e_b - b_b
    p4, p5 = b_prod - b_ab, b_a + b_b - b_prod
    p6, p7 = f_ab - f_prod, f_prod - f_a - f_b
    sat = {k: abs(v) <= tol for k, v in (("P4", p4), ("P5", p5), ("P6", p6), ("P7", p7))}
    return Lemma1Report(p4, p5, p6, p7, sat)
