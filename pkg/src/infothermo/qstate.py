"""
Finite-dimensional Hermitian operators and density matrices.

Dense numpy storage throughout; every object is immutable after construction
and carries its eigensystem, computed once in ``__init__``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_RTOL = 1e-12
TRACE_ATOL = 1e-12
NEGATIVITY_ATOL = 1e-12


class ValidationError(ValueError):
    """An operator or state violates one of its defining invariants."""


@dataclass(frozen=True)
class Eigensystem:
    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def _as_square(matrix, name: str) -> np.ndarray:
    m = np.array(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValidationError(f"{name}: expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name}: matrix contains non-finite entries")
    return m


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entry of ``|M - M^dagger|`` relative to the largest ``|M_ij|``."""
    scale = np.max(np.abs(m))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)) / scale)


def _check_hermitian(m: np.ndarray, name: str) -> None:
    defect = hermiticity_defect(m)
    if defect > HERMITIAN_RTOL:
        raise ValidationError(
            f"{name}: hermiticity violated, max|M - M^dagger|/max|M| = {defect:.3e} "
            f"(tolerance {HERMITIAN_RTOL:.0e})"
        )


def _check_dims(dims: Sequence[int] | None, dim: int, name: str) -> tuple[int, ...]:
    if dims is None:
        return (dim,)
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ValidationError(f"{name}: subsystem dimensions must be positive, got {dims}")
    if int(np.prod(dims)) != dim:
        raise ValidationError(
            f"{name}: product of subsystem_dims {dims} is {int(np.prod(dims))}, matrix dim is {dim}"
        )
    return dims


class HermitianOperator:
    """A Hamiltonian or observable with its spectral decomposition.

    Parameters
    ----------
    matrix : array_like
        Square complex matrix, Hermitian to a relative tolerance of 1e-12.
    subsystem_dims : sequence of int, optional
        Tensor-factor dimensions; defaults to a single factor.
    """

    __slots__ = ("matrix", "dim", "subsystem_dims", "eigenvalues", "eigenvectors")

    def __init__(self, matrix, subsystem_dims: Sequence[int] | None = None):
        m = _as_square(matrix, "HermitianOperator")
        _check_hermitian(m, "HermitianOperator")
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        values, vectors = np.linalg.eigh(m)
        values.setflags(write=False)
        vectors.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dim", m.shape[0])
        object.__setattr__(self, "subsystem_dims", _check_dims(subsystem_dims, m.shape[0], "HermitianOperator"))
        object.__setattr__(self, "eigenvalues", values)
        object.__setattr__(self, "eigenvectors", vectors)

    def __setattr__(self, key, value):
        raise AttributeError("HermitianOperator is immutable")

    @classmethod
    def diagonal(cls, levels: Iterable[float]) -> "HermitianOperator":
        return cls(np.diag(np.asarray(list(levels), dtype=float)))

    @property
    def eigensystem(self) -> Eigensystem:
        return Eigensystem(self.eigenvalues, self.eigenvectors)

    @property
    def spread(self) -> float:
        return float(self.eigenvalues[-1] - self.eigenvalues[0])

    def __repr__(self) -> str:
        return f"HermitianOperator(dim={self.dim}, spectrum={np.round(self.eigenvalues, 6).tolist()})"


class DensityMatrix:
    """A unit-trace positive semidefinite operator.

    The spectrum is cached at construction, clamped to ``[0, 1]`` and
    renormalised so that entropies never see ``log`` of a tiny negative.
    """

    __slots__ = ("matrix", "dim", "subsystem_dims", "_spectrum", "_vectors")

    def __init__(self, matrix, subsystem_dims: Sequence[int] | None = None):
        m = _as_square(matrix, "DensityMatrix")
        _check_hermitian(m, "DensityMatrix")
        m = 0.5 * (m + m.conj().T)
        trace = np.trace(m).real
        if abs(trace - 1.0) > TRACE_ATOL:
            raise ValidationError(
                f"DensityMatrix: unit trace violated, |tr - 1| = {abs(trace - 1.0):.3e} "
                f"(tolerance {TRACE_ATOL:.0e})"
            )
        values, vectors = np.linalg.eigh(m)
        if values[0] < -NEGATIVITY_ATOL:
            raise ValidationError(
                f"DensityMatrix: positivity violated, smallest eigenvalue = {values[0]:.3e} "
                f"(tolerance -{NEGATIVITY_ATOL:.0e})"
            )
        values = np.clip(values, 0.0, 1.0)
        values = values / values.sum()
        for a in (m, values, vectors):
            a.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dim", m.shape[0])
        object.__setattr__(self, "subsystem_dims", _check_dims(subsystem_dims, m.shape[0], "DensityMatrix"))
        object.__setattr__(self, "_spectrum", values)
        object.__setattr__(self, "_vectors", vectors)

    def __setattr__(self, key, value):
        raise AttributeError("DensityMatrix is immutable")

    @classmethod
    def from_spectrum(cls, probabilities, basis=None, subsystem_dims=None) -> "DensityMatrix":
        """``sum_i p_i |v_i><v_i|`` for the columns ``v_i`` of ``basis`` (identity by default)."""
        p = np.asarray(probabilities, dtype=float)
        if basis is None:
            return cls(np.diag(p).astype(complex), subsystem_dims)
        v = np.asarray(basis, dtype=complex)
        return cls(_hermitize((v * p) @ v.conj().T), subsystem_dims)

    @classmethod
    def pure(cls, vector, subsystem_dims=None) -> "DensityMatrix":
        psi = np.asarray(vector, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), subsystem_dims)

    @classmethod
    def maximally_mixed(cls, dim: int, subsystem_dims=None) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim, subsystem_dims)

    @property
    def spectrum(self) -> np.ndarray:
        """Clamped eigenvalues in ascending order."""
        return self._spectrum

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._vectors

    def rank(self, threshold: float = 1e-10) -> int:
        return int(np.count_nonzero(self._spectrum > threshold))

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, subsystem_dims={self.subsystem_dims})"


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def spectral_decompose(H: HermitianOperator) -> Eigensystem:
    """Ascending eigenvalues and orthonormal eigenvectors of ``H``."""
    if not isinstance(H, HermitianOperator):
        H = HermitianOperator(H)
    return H.eigensystem


def entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy in nats, with ``0 ln 0 = 0``."""
    p = rho.spectrum
    p = p[p > 0.0]
    return float(max(-np.sum(p * np.log(p)), 0.0))


def energy(rho: DensityMatrix, H: HermitianOperator) -> float:
    if rho.dim != H.dim:
        raise ValueError(f"dimension mismatch: state dim {rho.dim}, Hamiltonian dim {H.dim}")
    # tr(H rho) without forming the product
    return float(np.real(np.sum(H.matrix * rho.matrix.T)))


def tensor(*states: DensityMatrix) -> DensityMatrix:
    """Tensor product; the factors' ``subsystem_dims`` are concatenated."""
    if not states:
        raise ValueError("tensor() needs at least one state")
    matrix = reduce(np.kron, (s.matrix for s in states))
    dims = sum((s.subsystem_dims for s in states), ())
    return DensityMatrix(_hermitize(matrix), dims)


def join_hamiltonians(*hamiltonians: HermitianOperator) -> HermitianOperator:
    """Non-interacting sum ``H_1 (x) 1 (x) ... + ... + 1 (x) ... (x) H_n``."""
    if not hamiltonians:
        raise ValueError("join_hamiltonians() needs at least one operator")
    dims = [h.dim for h in hamiltonians]
    total = np.zeros((int(np.prod(dims)),) * 2, dtype=complex)
    for k, h in enumerate(hamiltonians):
        left = np.eye(int(np.prod(dims[:k])))
        right = np.eye(int(np.prod(dims[k + 1:])))
        total += np.kron(np.kron(left, h.matrix), right)
    sub = sum((h.subsystem_dims for h in hamiltonians), ())
    return HermitianOperator(total, sub)


def partial_trace(rho: DensityMatrix, keep: Sequence[int] | int) -> DensityMatrix:
    """Reduce ``rho`` onto the subsystems listed in ``keep`` (kept in the given order)."""
    dims = rho.subsystem_dims
    n = len(dims)
    keep = [keep] if isinstance(keep, (int, np.integer)) else list(keep)
    if not keep or len(set(keep)) != len(keep) or any(not 0 <= k < n for k in keep):
        raise ValueError(f"bad subsystem index set {keep} for subsystem_dims {dims}")
    traced = [k for k in range(n) if k not in keep]
    t = rho.matrix.reshape(dims + dims)
    # pair row/column axes of traced factors and contract them
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = list(letters[n:2 * n]) if 2 * n <= 26 else None
    if cols is None:
        raise ValueError("partial_trace supports at most 13 subsystems")
    for k in traced:
        cols[k] = rows[k]
    out = "".join(rows[k] for k in keep) + "".join(cols[k] for k in keep)
    reduced = np.einsum("".join(rows) + "".join(cols) + "->" + out, t)
    d = int(np.prod([dims[k] for k in keep]))
    return DensityMatrix(_hermitize(reduced.reshape(d, d)), [dims[k] for k in keep])


def mutual_information(rho: DensityMatrix, part_a: Sequence[int] = (0,)) -> float:
    """``S_A + S_B - S_AB`` for the bipartition ``part_a`` versus the rest."""
    n = len(rho.subsystem_dims)
    part_a = list(part_a)
    part_b = [k for k in range(n) if k not in part_a]
    if not part_b:
        raise ValueError("mutual_information needs a proper bipartition of subsystem_dims")
    return entropy(partial_trace(rho, part_a)) + entropy(partial_trace(rho, part_b)) - entropy(rho)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_density_matrix(dim: int, rank: int | None = None, seed=0, subsystem_dims=None) -> DensityMatrix:
    """Normalised Wishart sample ``G G^dagger / tr``; ``rank`` sets G's column count."""
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must lie in [1, {dim}], got {rank}")
    rng = _rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    m = _hermitize(m / np.trace(m).real)
    return DensityMatrix(m, subsystem_dims)


def random_unitary(dim: int, seed=0) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Ginibre matrix with phases fixed."""
    rng = _rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hamiltonian(dim: int, seed=0, scale: float = 1.0) -> HermitianOperator:
    """GUE-style random Hermitian matrix; ``scale`` multiplies the entries."""
    rng = _rng(seed)
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator(scale * _hermitize(a) / np.sqrt(2))


def apply_unitary(rho: DensityMatrix, U) -> DensityMatrix:
    U = np.asarray(U, dtype=complex)
    if U.shape != (rho.dim, rho.dim):
        raise ValueError(f"unitary shape {U.shape} does not match state dim {rho.dim}")
    defect = np.max(np.abs(U.conj().T @ U - np.eye(rho.dim)))
    if defect > 1e-10:
        raise ValidationError(f"unitarity violated, max|U^dagger U - 1| = {defect:.3e} (tolerance 1e-10)")
    return DensityMatrix(_hermitize(U @ rho.matrix @ U.conj().T), rho.subsystem_dims)
