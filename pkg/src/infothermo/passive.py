"""
Entropic equivalence classes and their minimum-energy representatives.

Every state is labelled by the inverse temperature of the Gibbs state that
shares its entropy. That Gibbs state is the least-energetic member of the
class (completely passive), its energy is the bound energy, and whatever
energy is left over is free energy.

Functions taking ``levels`` work on bare spectra (1-D arrays); the others
take :class:`~infothermo.qstate.DensityMatrix` / ``HermitianOperator``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import entr

from ._numerics import bisect_decreasing
from .qstate import DensityMatrix, HermitianOperator, energy, entropy

ENTROPY_EDGE_ATOL = 1e-12
BETA_CEILING = 1e8
DEGENERACY_RTOL = 1e-9


@dataclass(frozen=True)
class IntrinsicTemperature:
    """Inverse temperature labelling an entropy class.

    ``beta`` is ``math.inf`` for classes below the ground-space entropy.
    """

    beta: float
    entropy_at_beta: float
    achieved_tolerance: float

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.beta)

    @property
    def temperature(self) -> float:
        if self.beta == 0.0:
            return math.inf
        return 0.0 if self.is_infinite else 1.0 / self.beta

    def __float__(self) -> float:
        return float(self.beta)


@dataclass(frozen=True)
class EquivalenceClassReport:
    energy: float
    entropy: float
    beta: IntrinsicTemperature
    cp_state: DensityMatrix
    bound_energy: float
    free_energy: float


# ---------------------------------------------------------------------------
# spectrum-level Gibbs quantities
# ---------------------------------------------------------------------------

def _levels(levels) -> np.ndarray:
    if isinstance(levels, HermitianOperator):
        return np.asarray(levels.eigenvalues, dtype=float)
    return np.asarray(levels, dtype=float).ravel()


def _degenerate_block(levels: np.ndarray, top: bool = False) -> np.ndarray:
    tol = DEGENERACY_RTOL * max(1.0, float(np.max(np.abs(levels))))
    edge = levels.max() if top else levels.min()
    return np.abs(levels - edge) <= tol


def ground_degeneracy(levels) -> int:
    return int(np.count_nonzero(_degenerate_block(_levels(levels))))


def _log_weights(levels: np.ndarray, beta: float) -> np.ndarray:
    # exponent shifted so its largest entry is 0
    shift = levels.min() if beta >= 0 else levels.max()
    return -beta * (levels - shift)


def gibbs_populations(levels, beta: float) -> np.ndarray:
    """Occupations ``exp(-beta*l_i) / Z`` in the order of ``levels``.

    ``beta = +inf`` (``-inf``) spreads the weight uniformly over the lowest
    (highest) degenerate level.
    """
    lv = _levels(levels)
    if math.isinf(beta):
        block = _degenerate_block(lv, top=beta < 0)
        return block / block.sum()
    w = np.exp(_log_weights(lv, beta))
    return w / w.sum()


def gibbs_entropy(levels, beta: float) -> float:
    lv = _levels(levels)
    if math.isinf(beta):
        return math.log(np.count_nonzero(_degenerate_block(lv, top=beta < 0)))
    x = _log_weights(lv, beta)
    w = np.exp(x)
    z = w.sum()
    return float(math.log(z) - np.dot(w, x) / z)


def gibbs_energy(levels, beta: float) -> float:
    lv = _levels(levels)
    return float(np.dot(gibbs_populations(lv, beta), lv))


def gibbs_variance(levels, beta: float) -> float:
    """Energy variance of the Gibbs state, i.e. ``-dE/dbeta``."""
    lv = _levels(levels)
    p = gibbs_populations(lv, beta)
    mean = np.dot(p, lv)
    return float(np.dot(p, (lv - mean) ** 2))


def solve_beta(spectra: Sequence, target_entropy: float, max_iter: int = 200) -> IntrinsicTemperature:
    """Common inverse temperature at which non-interacting parts reach ``target_entropy``.

    Solves ``sum_X S(gamma(H_X, beta)) = target`` by bracketed bisection on
    ``beta >= 0``: bracket ``[0, 1]``, upper end doubled until the sign
    changes or it passes ``1e8`` (then ``beta = inf``).
    """
    spectra = [_levels(s) for s in spectra]
    s_max = sum(math.log(len(s)) for s in spectra)
    s_ground = sum(math.log(ground_degeneracy(s)) for s in spectra)

    def total(beta: float) -> float:
        return sum(gibbs_entropy(s, beta) for s in spectra)

    if target_entropy >= s_max - ENTROPY_EDGE_ATOL:
        return IntrinsicTemperature(0.0, s_max, abs(s_max - target_entropy))
    if target_entropy <= s_ground + ENTROPY_EDGE_ATOL:
        return IntrinsicTemperature(math.inf, s_ground, abs(target_entropy - s_ground))

    def g(beta: float) -> float:
        return total(beta) - target_entropy

    lo, hi = 0.0, 1.0
    while g(hi) > 0:
        lo, hi = hi, 2.0 * hi
        if hi > BETA_CEILING:
            return IntrinsicTemperature(math.inf, s_ground, abs(target_entropy - s_ground))
    beta = bisect_decreasing(g, lo, hi, max_iter=max_iter)
    s_beta = total(beta)
    return IntrinsicTemperature(beta, s_beta, abs(s_beta - target_entropy))


def _ground_split_populations(levels: np.ndarray, target_entropy: float) -> np.ndarray:
    """Diagonal ground-space occupations ``(p, (1-p)/(g-1), ...)`` with entropy ``target``."""
    block = _degenerate_block(levels)
    g = int(block.sum())
    pops = np.zeros(len(levels))
    idx = np.flatnonzero(block)
    if g == 1 or target_entropy <= 0.0:
        pops[idx[0]] = 1.0
        return pops

    def h(p: float) -> float:
        return float(entr(p) + entr(1.0 - p) + (1.0 - p) * math.log(g - 1)) - target_entropy

    p = bisect_decreasing(h, 1.0 / g, 1.0)
    pops[idx] = (1.0 - p) / (g - 1)
    pops[idx[0]] = p
    return pops


def passive_populations(levels, target_entropy: float) -> tuple[IntrinsicTemperature, np.ndarray]:
    """Intrinsic temperature and completely passive occupations for a spectrum."""
    lv = _levels(levels)
    beta = solve_beta([lv], target_entropy)
    if beta.is_infinite:
        return beta, _ground_split_populations(lv, target_entropy)
    return beta, gibbs_populations(lv, beta.beta)


# ---------------------------------------------------------------------------
# state-level operations
# ---------------------------------------------------------------------------

def _state_from_populations(H: HermitianOperator, pops: np.ndarray) -> DensityMatrix:
    v = H.eigenvectors
    m = (v * pops) @ v.conj().T
    return DensityMatrix(0.5 * (m + m.conj().T), H.subsystem_dims)


def gibbs_state(H: HermitianOperator, beta: float) -> DensityMatrix:
    """``exp(-beta H) / tr exp(-beta H)``; negative and infinite ``beta`` allowed."""
    return _state_from_populations(H, gibbs_populations(H.eigenvalues, beta))


def intrinsic_beta(rho: DensityMatrix, H: HermitianOperator) -> IntrinsicTemperature:
    _check_dims(rho, H)
    return solve_beta([H.eigenvalues], entropy(rho))


def completely_passive_state(rho: DensityMatrix, H: HermitianOperator) -> DensityMatrix:
    """Minimum-energy state with the entropy of ``rho``.

    For classes below the ground-space entropy of a degenerate ``H`` the
    minimiser is not unique; the diagonal ground-space state with
    occupations ``(p, (1-p)/(g-1), ...)`` is returned.
    """
    _check_dims(rho, H)
    return min_energy_state(H, entropy(rho))


def min_energy_state(H: HermitianOperator, target_entropy: float) -> DensityMatrix:
    """Least-energetic state of ``H`` with the given entropy."""
    _, pops = passive_populations(H.eigenvalues, target_entropy)
    return _state_from_populations(H, pops)


def bound_energy(rho: DensityMatrix, H: HermitianOperator) -> float:
    _check_dims(rho, H)
    _, pops = passive_populations(H.eigenvalues, entropy(rho))
    return float(np.dot(pops, H.eigenvalues))


def free_energy(rho: DensityMatrix, H: HermitianOperator) -> float:
    """Energy extractable without changing entropy: ``E(rho) - B(rho)``."""
    return energy(rho, H) - bound_energy(rho, H)


def equivalence_class(rho: DensityMatrix, H: HermitianOperator) -> EquivalenceClassReport:
    _check_dims(rho, H)
    s = entropy(rho)
    beta, pops = passive_populations(H.eigenvalues, s)
    b = float(np.dot(pops, H.eigenvalues))
    e = energy(rho, H)
    return EquivalenceClassReport(e, s, beta, _state_from_populations(H, pops), b, e - b)


def helmholtz_free_energy(rho: DensityMatrix, H: HermitianOperator, beta: float) -> float:
    """Out-of-equilibrium free energy relative to a bath: ``E - S/beta``."""
    if not (beta > 0 and math.isfinite(beta)):
        raise ValueError(f"helmholtz_free_energy needs finite beta > 0, got {beta}")
    return energy(rho, H) - entropy(rho) / beta


@dataclass(frozen=True)
class WorstBath:
    value: float
    argmin_beta: float


def worst_bath_free_energy(
    rho: DensityMatrix,
    H: HermitianOperator,
    beta_grid: Sequence[float] | None = None,
    n_grid: int = 201,
) -> WorstBath:
    """Minimise the bath-assisted work ``F_b(rho) - F_b(gamma(b))`` over bath ``b``.

    Grid scan followed by golden-section refinement around the best grid
    point. The default grid is log-spaced over ``[beta(rho)/10, 10 beta(rho)]``.
    States at ``beta(rho)`` of 0 or infinity have their minimum at that end
    of the half-line; the limiting value is returned directly.
    """
    _check_dims(rho, H)
    lv = H.eigenvalues
    e_rho, s_rho = energy(rho, H), entropy(rho)

    def objective(b: float) -> float:
        return e_rho - gibbs_energy(lv, b) - (s_rho - gibbs_entropy(lv, b)) / b

    if beta_grid is None:
        b0 = solve_beta([lv], s_rho).beta
        if b0 == 0.0:
            return WorstBath(e_rho - float(np.mean(lv)), 0.0)
        if math.isinf(b0):
            return WorstBath(e_rho - float(lv[0]), math.inf)
        beta_grid = np.geomspace(b0 / 10.0, 10.0 * b0, n_grid)
    grid = np.sort(np.asarray(beta_grid, dtype=float))
    if grid[0] <= 0:
        raise ValueError("beta_grid must be strictly positive")
    values = np.array([objective(b) for b in grid])
    k = int(np.argmin(values))
    if k == 0 or k == len(grid) - 1:
        return WorstBath(float(values[k]), float(grid[k]))
    res = minimize_scalar(objective, bracket=(grid[k - 1], grid[k], grid[k + 1]), method="golden", tol=1e-10)
    if res.fun <= values[k]:
        return WorstBath(float(res.fun), float(res.x))
    return WorstBath(float(values[k]), float(grid[k]))


# ---------------------------------------------------------------------------
# brute-force verifier
# ---------------------------------------------------------------------------

def _bisect_segments(f, lo, hi, n_iter: int = 64):
    """Vectorised bisection of ``f`` on many segments ``[lo, hi]`` at once."""
    lo, hi = lo.copy(), hi.copy()
    flo = np.sign(f(lo))
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        same = np.sign(f(mid)) == flo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def _shannon(*probs):
    return sum(entr(np.clip(p, 0.0, 1.0)) for p in probs)


def min_energy_oracle(hamiltonian_spectrum, target_entropy: float, grid_resolution: int | None = None) -> float:
    """Smallest ``sum_i p_i l_i`` over distributions ``p`` with Shannon entropy ``target``.

    Independent of the Gibbs machinery: the probability simplex is gridded
    (>= 1e4 points for d = 2, >= 1e6 for d = 3), every grid edge across
    which the entropy crosses the target is bisected to machine precision,
    and the lowest energy among those level-set points is returned. Grid
    points whose entropy already lies within 1e-12 of the target also count.
    For d = 3 the level set is probed along all three families of grid
    lines, leaving an error quadratic in the grid spacing.
    """
    lam = np.asarray(hamiltonian_spectrum, dtype=float).ravel()
    d = len(lam)
    if d not in (2, 3):
        raise ValueError(f"min_energy_oracle supports d in {{2, 3}}, got {d}")
    if target_entropy < -ENTROPY_EDGE_ATOL or target_entropy > math.log(d) + ENTROPY_EDGE_ATOL:
        raise ValueError(f"entropy {target_entropy} unreachable in dimension {d} (max {math.log(d)})")
    slack = ENTROPY_EDGE_ATOL
    if d == 2:
        n = max(int(grid_resolution or 10_001), 10_000)
        p = np.linspace(0.0, 1.0, n)

        def f(x):
            return _shannon(x, 1.0 - x) - target_entropy

        fv = f(p)
        cross = np.flatnonzero(np.sign(fv[:-1]) * np.sign(fv[1:]) < 0)
        roots = _bisect_segments(f, p[cross], p[cross + 1])
        cand = np.concatenate([roots, p[np.abs(fv) <= slack]])
        if cand.size == 0:
            raise ValueError(f"no grid point reaches entropy {target_entropy}")
        return float(np.min(cand * lam[0] + (1.0 - cand) * lam[1]))

    total = max(int(grid_resolution or 1_000_000), 1_000_000)
    n = int(math.ceil((math.sqrt(8 * total + 1) - 3) / 2))  # (n+1)(n+2)/2 >= total
    i = np.arange(n + 1)[:, None]
    j = np.arange(n + 1)[None, :]
    valid = (i + j) <= n

    def f(p0, p1):
        return _shannon(p0, p1, 1.0 - p0 - p1) - target_entropy

    fv = np.where(valid, f(i / n, j / n), np.nan)
    p0s, p1s = [], []
    # edge families: p0 fixed, p1 fixed, p2 fixed
    for di, dj in ((0, 1), (1, 0), (1, -1)):
        ii, jj = np.nonzero(valid)
        ti, tj = ii + di, jj + dj
        ok = (ti <= n) & (tj >= 0) & (tj <= n)
        ii, jj, ti, tj = ii[ok], jj[ok], ti[ok], tj[ok]
        ok = valid[ti, tj] & (np.sign(fv[ii, jj]) * np.sign(fv[ti, tj]) < 0)
        ii, jj = ii[ok], jj[ok]
        s = _bisect_segments(lambda t: f((ii + di * t) / n, (jj + dj * t) / n),
                             np.zeros(ii.size), np.ones(ii.size))
        p0s.append((ii + di * s) / n)
        p1s.append((jj + dj * s) / n)
    near = valid & (np.abs(np.nan_to_num(fv, nan=np.inf)) <= slack)
    p0s.append(np.broadcast_to(i / n, near.shape)[near])
    p1s.append(np.broadcast_to(j / n, near.shape)[near])
    p0, p1 = np.concatenate(p0s), np.concatenate(p1s)
    if p0.size == 0:
        raise ValueError(f"no grid point reaches entropy {target_entropy}")
    return float(np.min(p0 * lam[0] + p1 * lam[1] + (1.0 - p0 - p1) * lam[2]))


def _check_dims(rho: DensityMatrix, H: HermitianOperator) -> None:
    if rho.dim != H.dim:
        raise ValueError(f"dimension mismatch: state dim {rho.dim}, Hamiltonian dim {H.dim}")
