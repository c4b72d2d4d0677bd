"""
Heat and work bookkeeping for entropy-preserving processes.

A process is identified by its endpoints only: a joint initial state, a
joint final state of equal entropy, and fixed local Hamiltonians for the
system ``A`` and its environment ``B``. Heat is the change of the
environment's bound energy; external work is the total energy change; the
work done on ``A`` is external work minus the environment's free-energy
change. The first law is then an identity, and the Clausius, Kelvin-Planck
and Carnot statements become inequalities on the ledger.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import passive
from .passive import gibbs_state
from .qstate import (
    DensityMatrix,
    HermitianOperator,
    apply_unitary,
    energy,
    entropy,
    join_hamiltonians,
    partial_trace,
    tensor,
)

EP_TOLERANCE = 1e-9
LEDGER_ATOL = 1e-9


class NotEntropyPreservingError(ValueError):
    pass


@dataclass(frozen=True)
class ProcessRecord:
    """Endpoints of an entropy-preserving transformation on ``A (x) B``."""

    H_A: HermitianOperator
    H_B: HermitianOperator
    initial: DensityMatrix
    final: DensityMatrix
    labels: tuple[str, str] = ("A", "B")
    entropy_tolerance: float = EP_TOLERANCE

    def __post_init__(self):
        dims = (self.H_A.dim, self.H_B.dim)
        for name in ("initial", "final"):
            rho = getattr(self, name)
            if rho.dim != dims[0] * dims[1]:
                raise ValueError(f"{name} state dim {rho.dim} does not match H_A (x) H_B dims {dims}")
            if rho.subsystem_dims != dims:
                object.__setattr__(self, name, DensityMatrix(rho.matrix, dims))

    @classmethod
    def from_unitary(cls, initial: DensityMatrix, U, H_A, H_B, **kw) -> "ProcessRecord":
        initial = DensityMatrix(initial.matrix, (H_A.dim, H_B.dim))
        return cls(H_A, H_B, initial, apply_unitary(initial, U), **kw)

    def marginals(self, which: str = "initial") -> tuple[DensityMatrix, DensityMatrix]:
        rho = getattr(self, which)
        return partial_trace(rho, [0]), partial_trace(rho, [1])


@dataclass(frozen=True)
class Ledger:
    dE_A: float
    dE_B: float
    dB_A: float
    dB_B: float
    dF_A: float
    dF_B: float
    dS_A: float
    dS_B: float
    dI: float
    W: float
    dW_A: float
    dQ: float
    dS_total: float

    @property
    def dQ_A(self) -> float:
        return self.dB_A

    @property
    def dQ_B(self) -> float:
        return self.dB_B

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class _Snapshot:
    E_A: float
    E_B: float
    B_A: float
    B_B: float
    S_A: float
    S_B: float
    S_AB: float
    beta_A: float
    beta_B: float

    @property
    def F_A(self):
        return self.E_A - self.B_A

    @property
    def F_B(self):
        return self.E_B - self.B_B

    @property
    def I(self):
        return self.S_A + self.S_B - self.S_AB


def _snapshot(record: ProcessRecord, which: str) -> _Snapshot:
    rho_a, rho_b = record.marginals(which)
    ca = passive.equivalence_class(rho_a, record.H_A)
    cb = passive.equivalence_class(rho_b, record.H_B)
    return _Snapshot(
        ca.energy, cb.energy, ca.bound_energy, cb.bound_energy,
        ca.entropy, cb.entropy, entropy(getattr(record, which)),
        ca.beta.beta, cb.beta.beta,
    )


def validate_ep(record: ProcessRecord) -> tuple[bool, float]:
    """``(passes, |S(final) - S(initial)|)``."""
    residual = abs(entropy(record.final) - entropy(record.initial))
    return residual <= record.entropy_tolerance, residual


def _require_ep(record: ProcessRecord) -> None:
    ok, residual = validate_ep(record)
    if not ok:
        raise NotEntropyPreservingError(
            f"global entropy changes by {residual:.3e} nats (tolerance {record.entropy_tolerance:.0e})"
        )


def ledger(record: ProcessRecord) -> Ledger:
    _require_ep(record)
    a, b = _snapshot(record, "initial"), _snapshot(record, "final")
    dE_A, dE_B = b.E_A - a.E_A, b.E_B - a.E_B
    dF_B = b.F_B - a.F_B
    W = dE_A + dE_B
    return Ledger(
        dE_A=dE_A,
        dE_B=dE_B,
        dB_A=b.B_A - a.B_A,
        dB_B=b.B_B - a.B_B,
        dF_A=b.F_A - a.F_A,
        dF_B=dF_B,
        dS_A=b.S_A - a.S_A,
        dS_B=b.S_B - a.S_B,
        dI=b.I - a.I,
        W=W,
        dW_A=W - dF_B,
        dQ=b.B_B - a.B_B,
        dS_total=b.S_AB - a.S_AB,
    )


def heat(record: ProcessRecord) -> float:
    """Heat dissipated by ``A``: change in the environment's bound energy."""
    return ledger(record).dQ


def external_work(record: ProcessRecord) -> float:
    return ledger(record).W


def work_on_system(record: ProcessRecord) -> float:
    return ledger(record).dW_A


def first_law_residual(record: ProcessRecord) -> float:
    """``dE_A - dW_A + dQ``; zero up to rounding for every valid record."""
    L = ledger(record)
    return L.dE_A - L.dW_A + L.dQ


@dataclass(frozen=True)
class HeatBounds:
    applicable: bool
    lower: float  # T_B dS_B
    heat: float
    upper: float  # dE_B
    temperature: float

    @property
    def ordered(self) -> bool:
        return self.applicable and self.lower <= self.heat + LEDGER_ATOL and self.heat <= self.upper + LEDGER_ATOL

    @property
    def lower_gap(self) -> float:
        return self.heat - self.lower

    @property
    def upper_gap(self) -> float:
        return self.upper - self.heat


def _t_times(beta: float, ds: float) -> float:
    """``T * dS`` with ``T = 1/beta`` and the limits at beta in {0, inf}."""
    if math.isinf(beta):
        return 0.0
    if beta == 0.0:
        return 0.0 if ds == 0.0 else math.copysign(math.inf, ds)
    return ds / beta


def heat_bounds(record: ProcessRecord, thermal_tol: float = 1e-9) -> HeatBounds:
    """``T dS_B <= dQ <= dE_B`` for an environment that starts thermal.

    ``T`` is the initial intrinsic temperature of the environment. For a
    non-thermal initial environment the bounds are flagged inapplicable
    (values are still filled in for inspection).
    """
    L = ledger(record)
    _, rho_b = record.marginals("initial")
    cb = passive.equivalence_class(rho_b, record.H_B)
    applicable = cb.free_energy <= thermal_tol
    return HeatBounds(applicable, _t_times(cb.beta.beta, L.dS_B), L.dQ, L.dE_B, cb.beta.temperature)


def _ratio_to_min(beta_x: float, beta_min: float) -> float:
    # T_x / max(T_A, T_B) = beta_min / beta_x
    if beta_x == beta_min:
        return 1.0
    if math.isinf(beta_x):
        return 0.0
    return beta_min / beta_x


@dataclass(frozen=True)
class ClausiusReport:
    T_A: float
    T_B: float
    margin: float | None  # (T_B - T_A) dS_A - (dF_A + dF_B + T_B dI - W); None if a T is infinite
    margin_scaled: float  # same inequality divided by max(T_A, T_B)
    std_margin: float | None  # (T_B - T_A) dS_A
    std_applicable: bool
    holds: bool
    std_holds: bool | None


def clausius_report(record: ProcessRecord, tol: float = 1e-9) -> ClausiusReport:
    """Margin of ``(T_B - T_A) dS_A >= dF_A + dF_B + T_B dI - W``.

    Temperatures are the initial intrinsic ones. ``margin_scaled`` divides
    the whole inequality by ``max(T_A, T_B)`` and stays finite when a part
    starts maximally mixed. The standard form ``(T_B - T_A) dS_A >= 0`` is
    evaluated too; it is only guaranteed when the start is uncorrelated,
    both parts thermal, and no work is done (``std_applicable``).
    """
    L = ledger(record)
    a = _snapshot(record, "initial")
    ba, bb = a.beta_A, a.beta_B
    ta = math.inf if ba == 0 else (0.0 if math.isinf(ba) else 1.0 / ba)
    tb = math.inf if bb == 0 else (0.0 if math.isinf(bb) else 1.0 / bb)
    rhs_free = L.dF_A + L.dF_B - L.W
    bmin = min(ba, bb)
    ra, rb = _ratio_to_min(ba, bmin), _ratio_to_min(bb, bmin)
    if math.isinf(bmin):
        # both parts start in their ground spaces: T_A = T_B = 0
        scaled = -rhs_free
    else:
        scaled = (rb - ra) * L.dS_A - bmin * rhs_free - rb * L.dI
    margin = std = None
    if math.isfinite(ta) and math.isfinite(tb):
        std = (tb - ta) * L.dS_A
        margin = std - (rhs_free + tb * L.dI)
    std_applicable = abs(a.I) <= tol and a.F_A <= tol and a.F_B <= tol and abs(L.W) <= tol
    holds = (margin if margin is not None else scaled) >= -tol and scaled >= -tol
    std_holds = None if std is None else std >= -tol
    return ClausiusReport(ta, tb, margin, scaled, std, std_applicable, holds, std_holds)


@dataclass(frozen=True)
class KelvinPlanckReport:
    heat_total: float  # dQ_A + dQ_B
    identity_residual: float
    thermal_start: bool
    uncorrelated_start: bool
    work_extracting: bool
    inequality_holds: bool | None  # dQ_A + dQ_B <= W < 0, when thermal_start and W < 0
    sign_rule_holds: bool | None  # sign(dQ_A) = -sign(dQ_B), when additionally uncorrelated


def kelvin_planck_report(record: ProcessRecord, tol: float = 1e-9) -> KelvinPlanckReport:
    """Energy-balance identity ``dQ_A + dQ_B = -(dF_A + dF_B) + W`` and its corollaries."""
    L = ledger(record)
    a = _snapshot(record, "initial")
    q = L.dQ_A + L.dQ_B
    residual = q - (-(L.dF_A + L.dF_B) + L.W)
    thermal = a.F_A <= tol and a.F_B <= tol
    uncorrelated = abs(a.I) <= tol
    extracting = L.W < -tol
    ineq = sign = None
    if thermal and extracting:
        ineq = q <= L.W + tol
        if uncorrelated:
            sign = bool(np.sign(L.dQ_A) == -np.sign(L.dQ_B))
    return KelvinPlanckReport(q, residual, thermal, uncorrelated, extracting, ineq, sign)


def max_extractable_work(rho: DensityMatrix, H: HermitianOperator) -> float:
    """Upper bound on entropy-preserving work extraction, reached by moving to the CP state."""
    return passive.free_energy(rho, H)


def work_with_thermal_bath(
    rho_A: DensityMatrix,
    H_A: HermitianOperator,
    beta_bath: float,
    H_B: HermitianOperator | None = None,
) -> float:
    """Work extractable from ``rho_A`` with a bath at ``beta_bath``.

    With ``H_B=None`` the bath is treated as infinitely large and the answer
    is ``F_b(rho_A) - F_b(gamma_A(b))``. Otherwise the bath is the finite
    system ``gamma(H_B, beta_bath)`` and the answer is the free energy of
    the joint product state.
    """
    if not (beta_bath > 0 and math.isfinite(beta_bath)):
        raise ValueError(f"bath beta must be finite and positive, got {beta_bath}")
    if H_B is None:
        return passive.helmholtz_free_energy(rho_A, H_A, beta_bath) - passive.helmholtz_free_energy(
            gibbs_state(H_A, beta_bath), H_A, beta_bath
        )
    joint = tensor(rho_A, gibbs_state(H_B, beta_bath))
    return passive.free_energy(joint, join_hamiltonians(H_A, H_B))


@dataclass(frozen=True)
class ErasureResult:
    feasible: bool
    entropy_system: float
    entropy_budget: float  # ln d_B - S(rho_B)
    work_cost: float | None
    bath_final: DensityMatrix | None


def erasure_feasibility(
    rho_S: DensityMatrix, H_S: HermitianOperator, rho_B: DensityMatrix, H_B: HermitianOperator, tol: float = 1e-12
) -> ErasureResult:
    """Can ``rho_S (x) rho_B -> |0><0| (x) rho_B'`` be done at fixed entropy, and at what work cost.

    Feasible iff ``S(rho_S) <= ln d_B - S(rho_B)``. The final bath state is
    the least-energetic state of ``H_B`` carrying the combined entropy, and
    ``|0>`` is the ground state of ``H_S``.
    """
    s_s, s_b = entropy(rho_S), entropy(rho_B)
    budget = math.log(H_B.dim) - s_b
    feasible = s_s <= budget + tol
    if not feasible:
        return ErasureResult(False, s_s, budget, None, None)
    target = min(s_s + s_b, math.log(H_B.dim))
    bath_final = passive.min_energy_state(H_B, target)
    ground = DensityMatrix.pure(H_S.eigenvectors[:, 0])
    h_joint = join_hamiltonians(H_S, H_B)
    cost = passive.free_energy(tensor(ground, bath_final), h_joint) - passive.free_energy(
        tensor(rho_S, rho_B), h_joint
    )
    return ErasureResult(True, s_s, budget, cost, bath_final)


def erasure_record(rho_S: DensityMatrix, H_S: HermitianOperator, rho_B: DensityMatrix, H_B: HermitianOperator) -> ProcessRecord:
    """Endpoint record of a feasible erasure, system as ``A`` and bath as ``B``."""
    res = erasure_feasibility(rho_S, H_S, rho_B, H_B)
    if not res.feasible:
        raise ValueError("erasure is infeasible at fixed entropy for this bath")
    ground = DensityMatrix.pure(H_S.eigenvectors[:, 0])
    return ProcessRecord(H_S, H_B, tensor(rho_S, rho_B), tensor(ground, res.bath_final), labels=("S", "B"))


def rank_preservation_check(record: ProcessRecord, threshold: float = 1e-10) -> bool:
    """True iff initial and final ranks agree, i.e. a unitary could connect them."""
    return record.initial.rank(threshold) == record.final.rank(threshold)
