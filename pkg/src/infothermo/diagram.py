"""
Energy-entropy diagrams.

A state sits at ``(E, S)``. All states of a Hamiltonian lie between the
``S = 0`` axis and the thermal boundary, the curve traced by Gibbs states
at every inverse temperature (negative ones included). Free energy is the
horizontal distance from a point to the ``beta >= 0`` half of that curve,
and the slope ``dS/dE`` along it is ``beta``.

The boundary is sampled on a tangent-warped beta grid (dense near
``beta = 0``, reaching ``+-beta_max``) and interpolated between samples by
cubic Hermite splines in ``beta`` with the exact derivatives
``dE/dbeta = -Var(H)`` and ``dS/dbeta = -beta Var(H)``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from . import lawbook
from .passive import gibbs_energy, gibbs_entropy, gibbs_variance, ground_degeneracy
from .qstate import DensityMatrix, HermitianOperator, energy, entropy

FORMAT_VERSION = 1
CSV_HEADER = ("beta", "energy", "entropy")
THETA_MAX = 1.5


@dataclass(frozen=True)
class DiagramPoint:
    E: float
    S: float
    label: str = ""

    @property
    def xy(self) -> np.ndarray:
        return np.array([self.E, self.S])


@dataclass(frozen=True)
class Segment:
    """A drawable annotation; ``length`` is its signed horizontal extent."""

    label: str
    start: tuple[float, float]
    end: tuple[float, float]
    length: float


class ThermalBoundary:
    """Sampled Gibbs curve of one Hamiltonian, ordered by decreasing beta.

    The first and last samples are the ``beta = +inf`` / ``-inf`` endpoints
    at ``(l_min, ln g_min)`` and ``(l_max, ln g_max)``, where ``g`` counts
    the degeneracy of the extremal level.
    """

    def __init__(self, levels, beta: np.ndarray):
        lv = np.sort(np.asarray(levels, dtype=float))
        finite = np.sort(np.asarray(beta, dtype=float))  # ascending for the splines
        var = np.array([gibbs_variance(lv, b) for b in finite])
        e = np.array([gibbs_energy(lv, b) for b in finite])
        s = np.array([gibbs_entropy(lv, b) for b in finite])
        self.levels = lv
        self._e_spline = CubicHermiteSpline(finite, e, -var)
        self._s_spline = CubicHermiteSpline(finite, s, -finite * var)
        g_lo, g_hi = ground_degeneracy(lv), ground_degeneracy(-lv)
        # stored by decreasing beta
        self.beta = np.concatenate([[math.inf], finite[::-1], [-math.inf]])
        self.energy = np.concatenate([[lv[0]], e[::-1], [lv[-1]]])
        self.entropy = np.concatenate([[math.log(g_lo)], s[::-1], [math.log(g_hi)]])
        self.variance = np.concatenate([[0.0], var[::-1], [0.0]])
        for a in (self.beta, self.energy, self.entropy, self.variance):
            a.setflags(write=False)

    def __len__(self) -> int:
        return len(self.beta)

    @property
    def max_entropy(self) -> float:
        return math.log(len(self.levels))

    def _solve_on(self, spline, k: int, target: float) -> float:
        """Beta in finite segment ``(beta[k], beta[k+1])`` where ``spline`` hits ``target``."""
        b_hi, b_lo = self.beta[k], self.beta[k + 1]
        f_lo, f_hi = spline(b_lo) - target, spline(b_hi) - target
        if f_lo == 0:
            return b_lo
        if f_hi == 0:
            return b_hi
        return brentq(lambda b: spline(b) - target, b_lo, b_hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)

    def _segment(self, values: np.ndarray, target: float, stop: int) -> int:
        k = int(np.searchsorted(values[:stop], target, side="right")) - 1
        return min(max(k, 0), stop - 2)

    def entropy_at_energy(self, E: float) -> float:
        """Boundary entropy at energy ``E`` (either branch); ``-inf`` outside the spectrum."""
        lo, hi = self.levels[0], self.levels[-1]
        if E < lo or E > hi:
            return -math.inf
        if E == lo:
            return float(self.entropy[0])
        if E == hi:
            return float(self.entropy[-1])
        k = self._segment(self.energy, E, len(self.energy))
        if k == 0 or k == len(self.energy) - 2:
            return float(_lerp(self.energy[k], self.entropy[k], self.energy[k + 1], self.entropy[k + 1], E))
        b = self._solve_on(self._e_spline, k, E)
        return float(self._s_spline(b))

    def energy_at_entropy(self, S: float) -> float:
        """Energy of the ``beta >= 0`` boundary point with entropy ``S``."""
        s_max = self.max_entropy
        if S > s_max + 1e-12:
            raise ValueError(f"entropy {S} exceeds ln d = {s_max}")
        if S <= self.entropy[0]:
            return float(self.levels[0])
        zero = int(np.flatnonzero(self.beta == 0.0)[0])
        if S >= self.entropy[zero]:
            return float(self.energy[zero])
        k = self._segment(self.entropy, S, zero + 1)
        if k == 0:
            return float(_lerp(self.entropy[0], self.energy[0], self.entropy[1], self.energy[1], S))
        b = self._solve_on(self._s_spline, k, S)
        return float(self._e_spline(b))

    def beta_at_energy(self, E: float) -> float:
        """Parameter ``beta`` of the boundary point at energy ``E`` (interpolated)."""
        k = self._segment(self.energy, E, len(self.energy))
        if k == 0 or k == len(self.energy) - 2:
            raise ValueError("energy lies in an endpoint segment; beta is not interpolated there")
        return float(self._solve_on(self._e_spline, k, E))

    def point_at_beta(self, beta: float) -> tuple[float, float]:
        if math.isinf(beta):
            i = 0 if beta > 0 else -1
            return float(self.energy[i]), float(self.entropy[i])
        return float(self._e_spline(beta)), float(self._s_spline(beta))


def _lerp(x0, y0, x1, y1, x):
    if x1 == x0:
        return y0
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def _levels_of(H) -> np.ndarray:
    return np.asarray(H.eigenvalues if isinstance(H, HermitianOperator) else H, dtype=float)


def default_beta_max(levels) -> float:
    """``50 / gap``, with ``gap`` the smaller of the lowest and highest level spacings."""
    lv = np.unique(np.round(np.sort(_levels_of(levels)), 12))
    if len(lv) < 2:
        return 50.0
    gap = min(lv[1] - lv[0], lv[-1] - lv[-2])
    return 50.0 / gap


def thermal_boundary(H, n_samples: int = 512, beta_max: float | None = None) -> ThermalBoundary:
    """Sample the Gibbs curve at ``beta = beta_max tan(theta) / tan(theta_max)``.

    ``theta`` is uniform on ``[-theta_max, theta_max]`` (``theta_max = 1.5``);
    ``beta = 0`` is always included.
    """
    if n_samples < 64:
        raise ValueError("n_samples must be at least 64")
    lv = _levels_of(H)
    beta_max = default_beta_max(lv) if beta_max is None else float(beta_max)
    theta = np.linspace(-THETA_MAX, THETA_MAX, n_samples)
    beta = beta_max * np.tan(theta) / math.tan(THETA_MAX)
    beta = np.unique(np.concatenate([beta, [0.0]]))
    return ThermalBoundary(lv, beta)


def locate(rho: DensityMatrix, H: HermitianOperator, label: str = "") -> DiagramPoint:
    return DiagramPoint(energy(rho, H), entropy(rho), label)


def is_physical(point: DiagramPoint, boundary: ThermalBoundary, slack: float = 1e-9) -> bool:
    lo, hi = boundary.levels[0], boundary.levels[-1]
    if not (lo - slack <= point.E <= hi + slack) or point.S < -slack:
        return False
    e = min(max(point.E, lo), hi)
    return point.S <= boundary.entropy_at_energy(e) + slack


def horizontal_free_energy(point: DiagramPoint, boundary: ThermalBoundary) -> float:
    """Horizontal distance from ``point`` to the ``beta >= 0`` boundary branch."""
    return point.E - boundary.energy_at_entropy(point.S)


def tangent_beta(boundary: ThermalBoundary, E: float) -> float:
    """Slope ``dS/dE`` of the boundary at energy ``E``.

    Along the Gibbs curve ``dS = beta dE``, so the slope is the curve
    parameter at ``E``. It is located on the interpolant and then polished
    by Newton steps on the exact Gibbs energy (a step is kept only while
    it stays inside the bracketing sample interval). A finite difference
    in ``E`` would break down where the energy is pinned within an ulp of
    a spectral edge.
    """
    lo, hi = boundary.levels[0], boundary.levels[-1]
    if not lo < E < hi:
        raise ValueError(f"energy {E} must lie strictly inside ({lo}, {hi})")
    k = boundary._segment(boundary.energy, E, len(boundary.energy))
    if k == 0 or k == len(boundary.energy) - 2:
        return float((boundary.entropy[k + 1] - boundary.entropy[k]) / (boundary.energy[k + 1] - boundary.energy[k]))
    b = boundary._solve_on(boundary._e_spline, k, E)
    b_lo, b_hi = boundary.beta[k + 1], boundary.beta[k]
    for _ in range(8):
        var = gibbs_variance(boundary.levels, b)
        if var <= 0.0:
            break
        step = (gibbs_energy(boundary.levels, b) - E) / var
        if not b_lo <= b + step <= b_hi:
            break
        b += step
        if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(b)):
            break
    return float(b)


def class_segments(point: DiagramPoint, boundary: ThermalBoundary, reference: float = 0.0) -> list[Segment]:
    """Free-energy, bound-energy and tangent annotations for one state."""
    e_b = boundary.energy_at_entropy(point.S)
    segs = [
        Segment(f"F {point.label}".strip(), (e_b, point.S), (point.E, point.S), point.E - e_b),
        Segment(f"B {point.label}".strip(), (reference, point.S), (e_b, point.S), e_b - reference),
    ]
    if boundary.levels[0] < e_b < boundary.levels[-1]:
        slope = tangent_beta(boundary, e_b)
        w = 0.15 * (boundary.levels[-1] - boundary.levels[0])
        if slope > 0:
            w = min(w, point.S / slope) if point.S > 0 else w
        segs.append(Segment(f"tangent {point.label}".strip(), (e_b - w, point.S - slope * w), (e_b + w, point.S + slope * w), 2 * w))
    return segs


@dataclass(frozen=True)
class HeatGeometry:
    segments: list[Segment] = field(default_factory=list)
    bath_initial: DiagramPoint | None = None
    bath_final: DiagramPoint | None = None


def heat_geometry(record: lawbook.ProcessRecord) -> HeatGeometry:
    """The three notions of heat as segments in the environment's diagram.

    ``T dS_B`` runs along the tangent at the initial (thermal) bath point,
    ``dQ`` joins the boundary points of the initial and final bath
    entropies, ``dE_B`` joins the actual initial and final bath points.
    """
    hb = lawbook.heat_bounds(record)
    if not hb.applicable:
        raise ValueError("heat bounds not applicable: the environment does not start thermal")
    rho_b0 = record.marginals("initial")[1]
    rho_b1 = record.marginals("final")[1]
    p0, p1 = locate(rho_b0, record.H_B, "B"), locate(rho_b1, record.H_B, "B'")
    from .passive import bound_energy

    b0, b1 = bound_energy(rho_b0, record.H_B), bound_energy(rho_b1, record.H_B)
    segs = [
        Segment("T dS_B", (p0.E, p0.S), (p0.E + hb.lower, p1.S), hb.lower),
        Segment("dQ", (b0, p0.S), (b1, p1.S), hb.heat),
        Segment("dE_B", (p0.E, p0.S), (p1.E, p1.S), hb.upper),
    ]
    return HeatGeometry(segs, p0, p1)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def _num(x: float) -> str:
    return repr(float(x))


def _jnum(x: float):
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _to_json(boundary: ThermalBoundary, points: Sequence[DiagramPoint], annotations: Sequence[Segment]) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "levels": [_jnum(x) for x in boundary.levels],
        "boundary": {
            "beta": [_jnum(x) for x in boundary.beta],
            "energy": [_jnum(x) for x in boundary.energy],
            "entropy": [_jnum(x) for x in boundary.entropy],
        },
        "points": [{"label": p.label, "E": _jnum(p.E), "S": _jnum(p.S)} for p in points],
        "annotations": [
            {"label": a.label, "start": [_jnum(v) for v in a.start], "end": [_jnum(v) for v in a.end], "length": _jnum(a.length)}
            for a in annotations
        ],
    }
    return json.dumps(doc, indent=1) + "\n"


def _to_csv(boundary: ThermalBoundary) -> str:
    lines = [",".join(CSV_HEADER)]
    for b, e, s in zip(boundary.beta, boundary.energy, boundary.entropy):
        lines.append(f"{_num(b)},{_num(e)},{_num(s)}")
    return "\n".join(lines) + "\n"


def read_boundary_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"{path}: unexpected header {rows[0]}")
    data = np.array([[float(v) for v in r] for r in rows[1:]])
    return data[:, 0], data[:, 1], data[:, 2]


def _to_svg(boundary: ThermalBoundary, points: Sequence[DiagramPoint], annotations: Sequence[Segment]) -> str:
    W, H, m = 640, 480, 60
    e_lo, e_hi = float(boundary.levels[0]), float(boundary.levels[-1])
    pad = 0.05 * max(e_hi - e_lo, 1e-12)
    e_lo, e_hi = e_lo - pad, e_hi + pad
    s_hi = 1.08 * max(boundary.max_entropy, 1e-12)

    def x(e):
        return m + (W - 2 * m) * (e - e_lo) / (e_hi - e_lo)

    def y(s):
        return H - m - (H - 2 * m) * s / s_hi

    def f(v):
        return f"{v:.3f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">',
        f"<!-- energy-entropy diagram, format {FORMAT_VERSION} -->",
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<line x1="{m}" y1="{H - m}" x2="{W - m}" y2="{H - m}" stroke="black"/>',
        f'<line x1="{m}" y1="{H - m}" x2="{m}" y2="{m}" stroke="black"/>',
        f'<text x="{W // 2}" y="{H - 15}" text-anchor="middle">energy E</text>',
        f'<text x="18" y="{H // 2}" text-anchor="middle" transform="rotate(-90 18 {H // 2})">entropy S</text>',
    ]
    for k in range(5):
        e = e_lo + pad + k * (e_hi - e_lo - 2 * pad) / 4
        out.append(f'<line x1="{f(x(e))}" y1="{H - m}" x2="{f(x(e))}" y2="{H - m + 5}" stroke="black"/>')
        out.append(f'<text x="{f(x(e))}" y="{H - m + 18}" text-anchor="middle">{e:.3g}</text>')
        s = k * boundary.max_entropy / 4
        out.append(f'<line x1="{m - 5}" y1="{f(y(s))}" x2="{m}" y2="{f(y(s))}" stroke="black"/>')
        out.append(f'<text x="{m - 8}" y="{f(y(s) + 4)}" text-anchor="end">{s:.3g}</text>')
    pts = " ".join(f"{f(x(e))},{f(y(s))}" for e, s in zip(boundary.energy, boundary.entropy))
    out.append(f'<polyline points="{pts}" fill="none" stroke="#1f4e99" stroke-width="2"/>')
    for a in annotations:
        (x0, y0), (x1, y1) = a.start, a.end
        out.append(
            f'<line x1="{f(x(x0))}" y1="{f(y(y0))}" x2="{f(x(x1))}" y2="{f(y(y1))}" stroke="#b03a2e" stroke-width="1.5" stroke-dasharray="4 3"/>'
        )
        out.append(f'<text x="{f(x(0.5 * (x0 + x1)))}" y="{f(y(0.5 * (y0 + y1)) - 5)}" text-anchor="middle" fill="#b03a2e">{_esc(a.label)}</text>')
    for p in points:
        out.append(f'<circle cx="{f(x(p.E))}" cy="{f(y(p.S))}" r="4" fill="black"/>')
        out.append(f'<text x="{f(x(p.E) + 7)}" y="{f(y(p.S) - 7)}">{_esc(p.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render(boundary: ThermalBoundary, points=(), annotations=(), fmt: str = "svg") -> str:
    if fmt == "csv":
        return _to_csv(boundary)
    if fmt == "json":
        return _to_json(boundary, points, annotations)
    if fmt == "svg":
        return _to_svg(boundary, points, annotations)
    raise ValueError(f"unknown format {fmt!r}; choose csv, json or svg")


def export(boundary: ThermalBoundary, points=(), annotations=(), fmt: str = "svg", path=None) -> str:
    """Render the diagram and write it to ``path`` (if given); returns the text."""
    text = render(boundary, list(points), list(annotations), fmt)
    if path is not None:
        path = Path(path)
        try:
            path.write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write diagram to {path}: {exc}") from exc
    return text
