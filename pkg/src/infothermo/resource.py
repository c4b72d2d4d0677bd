"""
Asymptotic conversion rates between states, computed in (E, S) coordinates.

Many copies of ``rho`` can be turned into ``m = r n`` copies of ``sigma``
plus ``n - m`` copies of a residue ``phi`` whenever energy and entropy per
copy balance, i.e. ``x_rho = r x_sigma + (1 - r) x_phi`` in the diagram.
The rate is largest when ``phi`` sits where the ray from ``x_sigma``
through ``x_rho`` leaves the physical region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .diagram import DiagramPoint, ThermalBoundary, is_physical, locate, thermal_boundary
from .qstate import DensityMatrix, HermitianOperator, entropy

RAY_TOL = 1e-9
PURE_ATOL = 1e-12


@dataclass(frozen=True)
class ConversionProblem:
    source: DiagramPoint
    target: DiagramPoint
    hamiltonian: HermitianOperator

    @classmethod
    def from_states(cls, rho: DensityMatrix, sigma: DensityMatrix, H: HermitianOperator) -> "ConversionProblem":
        return cls(locate(rho, H, "rho"), locate(sigma, H, "sigma"), H)


@dataclass(frozen=True)
class ConversionResult:
    """Maximal rate and its residue.

    ``rate`` is ``None`` only when the target is pure and the source is
    not (no finite number of target copies per source copy is defined by
    the entropy balance); ``explanation`` then says so.
    """

    rate: float | None
    residue: DiagramPoint | None
    residue_kind: str
    residual: tuple[float, float]
    flags: tuple[str, ...] = ()
    explanation: str = ""
    ray_parameter: float = field(default=math.nan, repr=False)


def entropy_only_rate(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """``S(rho) / S(sigma)``: the rate when the residue is pure."""
    return _entropy_ratio(entropy(rho), entropy(sigma))


def _entropy_ratio(s_rho: float, s_sigma: float) -> float:
    if s_sigma <= PURE_ATOL:
        if s_rho <= PURE_ATOL:
            return 1.0
        raise ValueError("target is pure but source is mixed: no finite entropy-only rate")
    return s_rho / s_sigma


def residue_from_rate(x_rho: DiagramPoint, x_sigma: DiagramPoint, r: float, boundary: ThermalBoundary | None = None):
    """Solve ``x_rho = r x_sigma + (1 - r) x_phi`` for ``x_phi``.

    Returns ``(x_phi, physical)``; ``physical`` is ``None`` without a boundary.
    """
    if not 0 <= r < 1:
        raise ValueError(f"rate must satisfy 0 <= r < 1, got {r}")
    e = (x_rho.E - r * x_sigma.E) / (1 - r)
    s = (x_rho.S - r * x_sigma.S) / (1 - r)
    phi = DiagramPoint(e, s, "phi")
    return phi, (None if boundary is None else is_physical(phi, boundary))


def collinearity_residual(x_rho: DiagramPoint, x_sigma: DiagramPoint, x_phi: DiagramPoint, r: float):
    """Componentwise ``x_rho - r x_sigma - (1 - r) x_phi`` and whether ``0 <= r <= 1``."""
    dE = x_rho.E - r * x_sigma.E - (1 - r) * x_phi.E
    dS = x_rho.S - r * x_sigma.S - (1 - r) * x_phi.S
    return dE, dS, bool(0 <= r <= 1)


def _linear_exit(x0: np.ndarray, d: np.ndarray, lo: float, hi: float) -> tuple[float, str]:
    """First ``t >= 0`` at which ``x0 + t d`` crosses ``S = 0`` or an extremal-energy line."""
    t_best, kind = math.inf, ""
    if d[1] < 0:
        t_best, kind = -x0[1] / d[1], "pure"
    if d[0] > 0:
        t = (hi - x0[0]) / d[0]
        if t < t_best:
            t_best, kind = t, "thermal"
    elif d[0] < 0:
        t = (lo - x0[0]) / d[0]
        if t < t_best:
            t_best, kind = t, "thermal"
    return max(t_best, 0.0), kind


def max_conversion_rate(problem: ConversionProblem, boundary: ThermalBoundary | None = None) -> ConversionResult:
    """Largest rate from ``problem.source`` to ``problem.target`` and the residue that achieves it."""
    xr, xs = problem.source, problem.target
    if boundary is None:
        boundary = thermal_boundary(problem.hamiltonian)
    for p in (xr, xs):
        if not is_physical(p, boundary):
            raise ValueError(f"point {p.label or p} lies outside the physical region")
    if xr.E == xs.E and xr.S == xs.S:
        return ConversionResult(1.0, xr, "interior", (0.0, 0.0), ("identical_points",), ray_parameter=0.0)
    if xs.S <= PURE_ATOL and xr.S > PURE_ATOL:
        return ConversionResult(
            None, None, "none", (math.nan, math.nan), ("pure_target",),
            explanation="target is pure and source is mixed; the entropy balance gives no finite rate",
        )

    x0 = np.array([xr.E, xr.S])
    d = x0 - np.array([xs.E, xs.S])
    lo, hi = boundary.levels[0], boundary.levels[-1]
    t_lin, kind = _linear_exit(x0, d, lo, hi)

    def excess(t: float) -> float:
        e, s = x0 + t * d
        e = min(max(e, lo), hi)
        return s - boundary.entropy_at_energy(e)

    # along the ray, excess() is convex and <= 0 at t = 0 (convex region)
    if excess(t_lin) > RAY_TOL * max(1.0, abs(t_lin)):
        a, b = 0.0, t_lin
        while b - a > RAY_TOL * max(1.0, b):
            m = 0.5 * (a + b)
            if excess(m) > 0:
                b = m
            else:
                a = m
        t_star, kind = a, "thermal"
    else:
        t_star = t_lin

    e_phi, s_phi = x0 + t_star * d
    if kind == "pure":
        s_phi = 0.0
    phi = DiagramPoint(float(e_phi), float(s_phi), "phi")
    flags = []
    if abs(xs.S - phi.S) > PURE_ATOL:
        r = (xr.S - phi.S) / (xs.S - phi.S)
    else:
        flags.append("horizontal_ray")
        r = (xr.E - phi.E) / (xs.E - phi.E)
    if not math.isclose(r, t_star / (1 + t_star), rel_tol=1e-9, abs_tol=1e-12):
        flags.append("rate_mismatch")
    dE, dS, _ = collinearity_residual(xr, xs, phi, r)
    return ConversionResult(float(r), phi, kind, (dE, dS), tuple(flags), ray_parameter=float(t_star))


def euclidean_rate(x_rho: DiagramPoint, x_sigma: DiagramPoint, x_phi: DiagramPoint) -> float:
    """``|x_phi - x_rho| / |x_phi - x_sigma|``."""
    a = math.hypot(x_phi.E - x_rho.E, x_phi.S - x_rho.S)
    b = math.hypot(x_phi.E - x_sigma.E, x_phi.S - x_sigma.S)
    return a / b
