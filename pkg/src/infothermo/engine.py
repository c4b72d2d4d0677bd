"""
Heat engines running between two finite baths.

The working body is not modelled: a cycle is the entropy-preserving map it
induces on the two baths, which start (and, under every policy here, end)
in uncorrelated Gibbs states. Bath ``A`` is the cold one, ``B`` the hot one.
Work is reported as *extracted* work, ``W = -(dE_A + dE_B)``, so a working
engine has ``W > 0``.

Cycle policies
--------------
``"full"``
    The baths are brought all the way to their common equilibrium beta.
``"partial"``
    Each bath moves a fraction ``step`` of the way to the common beta,
    measured in entropy.
``"quantum"``
    A fixed entropy ``step`` (nats) is moved from the hot to the cold bath,
    capped at what is left before equilibrium. With ``step`` set to the
    entropy a single unit cell exchanges, this models a fixed-size working
    body attached to baths of growing size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .equilibrium import equilibrium_beta
from .passive import gibbs_energy, gibbs_entropy, solve_beta
from .qstate import HermitianOperator, join_hamiltonians

POLICIES = ("full", "partial", "quantum")


@dataclass(frozen=True)
class EngineConfig:
    H_A: HermitianOperator
    beta_A: float
    H_B: HermitianOperator
    beta_B: float
    policy: str = "full"
    step: float = 1.0
    n_cycles: int = 1

    def __post_init__(self):
        if not (self.beta_A >= self.beta_B > 0) or not math.isfinite(self.beta_A):
            raise ValueError(f"need finite beta_A >= beta_B > 0 (A cold), got {self.beta_A}, {self.beta_B}")
        if self.policy not in POLICIES:
            raise ValueError(f"unknown cycle policy {self.policy!r}; choose from {POLICIES}")
        if self.n_cycles < 1:
            raise ValueError("n_cycles must be positive")
        if self.policy == "partial" and not 0 < self.step <= 1:
            raise ValueError("partial policy needs 0 < step <= 1")
        if self.policy == "quantum" and not self.step > 0:
            raise ValueError("quantum policy needs a positive entropy step")


@dataclass(frozen=True)
class CycleReport:
    W: float
    dE_A: float
    dE_B: float
    dB_A: float
    dB_B: float
    dS_A: float
    dS_B: float
    eta: float
    eta_bound_general: float
    eta_carnot: float
    beta_A_in: float
    beta_B_in: float
    post_betas: tuple[float, float]


def efficiency_bound_general(dB_A: float, dB_B: float) -> float:
    """``1 - dB_A / (-dB_B)``: the efficiency ceiling for baths that start thermal."""
    if dB_B >= 0:
        raise ValueError(f"hot bath must lose bound energy (dB_B < 0), got {dB_B}")
    return 1.0 - dB_A / (-dB_B)


def carnot_limit(T_A: float, T_B: float) -> float:
    """Ideal efficiency ``1 - T_A/T_B`` between a cold bath at ``T_A`` and a hot one at ``T_B``."""
    if not (T_B > 0 and 0 <= T_A <= T_B):
        raise ValueError(f"need 0 <= T_A <= T_B, T_B > 0; got T_A={T_A}, T_B={T_B}")
    return 1.0 - T_A / T_B


def _target_entropies(config: EngineConfig, beta_a: float, beta_b: float) -> tuple[float, float]:
    la, lb = config.H_A.eigenvalues, config.H_B.eigenvalues
    s_a, s_b = gibbs_entropy(la, beta_a), gibbs_entropy(lb, beta_b)
    beta_ab = equilibrium_beta([beta_a, beta_b], [config.H_A, config.H_B]).beta
    s_a_eq = gibbs_entropy(la, beta_ab)
    room = s_a_eq - s_a  # entropy the cold bath gains on full equilibration
    if config.policy == "full":
        moved = room
    elif config.policy == "partial":
        moved = config.step * room
    else:
        moved = min(config.step, room)
    return s_a + moved, s_b - moved


def run_cycle(config: EngineConfig, state_in: tuple[float, float] | None = None) -> tuple[CycleReport, tuple[float, float]]:
    """One engine cycle starting from baths at ``state_in = (beta_A, beta_B)``.

    Returns the cycle report and the bath betas afterwards.
    """
    beta_a, beta_b = state_in if state_in is not None else (config.beta_A, config.beta_B)
    la, lb = config.H_A.eigenvalues, config.H_B.eigenvalues
    eta_c = carnot_limit(1.0 / beta_a, 1.0 / beta_b)
    if abs(beta_a - beta_b) <= 1e-15 * beta_a:
        zero = CycleReport(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, eta_c, beta_a, beta_b, (beta_a, beta_b))
        return zero, (beta_a, beta_b)
    s_a_new, s_b_new = _target_entropies(config, beta_a, beta_b)
    new_a = solve_beta([la], s_a_new).beta
    new_b = solve_beta([lb], s_b_new).beta
    dE_A = gibbs_energy(la, new_a) - gibbs_energy(la, beta_a)
    dE_B = gibbs_energy(lb, new_b) - gibbs_energy(lb, beta_b)
    # both baths stay thermal, so bound energy changes equal energy changes
    dB_A, dB_B = dE_A, dE_B
    W = -(dE_A + dE_B)
    heat_in = -dE_B
    eta = W / heat_in if heat_in > 0 else 0.0
    bound = efficiency_bound_general(dB_A, dB_B) if dB_B < 0 else 0.0
    report = CycleReport(
        W=W, dE_A=dE_A, dE_B=dE_B, dB_A=dB_A, dB_B=dB_B,
        dS_A=s_a_new - gibbs_entropy(la, beta_a), dS_B=s_b_new - gibbs_entropy(lb, beta_b),
        eta=eta, eta_bound_general=bound, eta_carnot=eta_c,
        beta_A_in=beta_a, beta_B_in=beta_b, post_betas=(new_a, new_b),
    )
    return report, (new_a, new_b)


def run_engine(config: EngineConfig) -> list[CycleReport]:
    state = (config.beta_A, config.beta_B)
    reports = []
    for _ in range(config.n_cycles):
        report, state = run_cycle(config, state)
        reports.append(report)
    return reports


def scaled_config(config: EngineConfig, n: int, **changes) -> EngineConfig:
    """``config`` with each bath replaced by ``n`` non-interacting copies of its unit cell."""
    H_A = join_hamiltonians(*[config.H_A] * n) if n > 1 else config.H_A
    H_B = join_hamiltonians(*[config.H_B] * n) if n > 1 else config.H_B
    return replace(config, H_A=H_A, H_B=H_B, **changes)


@dataclass(frozen=True)
class SweepRow:
    n: int
    eta: float
    carnot_gap: float
    W: float


def sweep_bath_size(base: EngineConfig, n_list) -> list[SweepRow]:
    """First-cycle efficiency as both baths grow to ``n`` unit cells.

    The engine moves, per cycle, the entropy that a single pair of unit
    cells exchanges when fully equilibrated (the ``"quantum"`` policy), so
    growing ``n`` means a fixed working body against ever larger baths.
    """
    unit = replace(base, policy="full", n_cycles=1)
    quantum = run_cycle(unit)[0].dS_A
    rows = []
    for n in n_list:
        cfg = scaled_config(base, n, policy="quantum", step=quantum, n_cycles=1)
        rep, _ = run_cycle(cfg)
        rows.append(SweepRow(n, rep.eta, rep.eta_carnot - rep.eta, rep.W))
    return rows
