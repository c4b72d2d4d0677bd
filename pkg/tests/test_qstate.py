import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infothermo import qstate as q


def test_hermitian_rejects_non_hermitian():
    with pytest.raises(q.ValidationError, match="Hermitian"):
        q.HermitianOperator(np.array([[0, 1], [0, 0]]))


def test_hermitian_reconstruction_and_ordering():
    H = q.random_hamiltonian(4, seed=11)
    es = q.spectral_decompose(H)
    assert np.all(np.diff(es.values) >= 0)
    assert np.abs(es.reconstruct() - H.matrix).max() < 1e-10
    V = es.vectors
    assert np.abs(V.conj().T @ V - np.eye(4)).max() < 1e-10


def test_hermitian_is_immutable():
    H = q.HermitianOperator.diagonal([0, 1])
    with pytest.raises(AttributeError):
        H.dim = 3
    with pytest.raises(ValueError):
        H.matrix[0, 0] = 5.0


@pytest.mark.parametrize(
    "matrix, invariant",
    [
        (np.diag([0.6, 0.6]), "trace"),
        (np.diag([1.2, -0.2]), "positivity"),
        (np.array([[0.5, 0.1], [0.3, 0.5]]), "hermiticity"),
    ],
)
def test_density_matrix_names_violated_invariant(matrix, invariant):
    with pytest.raises(q.ValidationError, match=invariant):
        q.DensityMatrix(matrix)


def test_density_matrix_tolerates_tiny_negativity():
    rho = q.DensityMatrix(np.diag([1.0 + 5e-13, -5e-13]))
    assert rho.spectrum.min() == 0.0
    assert q.entropy(rho) == pytest.approx(0.0, abs=1e-11)


def test_entropy_fixtures():
    assert q.entropy(q.DensityMatrix.maximally_mixed(2)) == pytest.approx(math.log(2), abs=1e-12)
    assert q.entropy(q.DensityMatrix.maximally_mixed(3)) == pytest.approx(math.log(3), abs=1e-12)
    assert q.entropy(q.DensityMatrix.pure([1, 1j])) == pytest.approx(0.0, abs=1e-12)
    p = np.array([0.731059, 0.268941])
    assert q.entropy(q.DensityMatrix.from_spectrum(p)) == pytest.approx(-(p * np.log(p)).sum(), abs=1e-12)


def test_energy_dimension_mismatch():
    with pytest.raises(ValueError):
        q.energy(q.DensityMatrix.maximally_mixed(2), q.HermitianOperator.diagonal([0, 1, 2]))


def test_energy_of_excited_state():
    assert q.energy(q.DensityMatrix(np.diag([0.0, 1.0])), q.HermitianOperator.diagonal([0, 1])) == 1.0


def test_partial_trace_of_tensor():
    a = q.random_density_matrix(2, seed=1)
    b = q.random_density_matrix(3, seed=2)
    c = q.random_density_matrix(2, seed=3)
    abc = q.tensor(a, b, c)
    assert abc.subsystem_dims == (2, 3, 2)
    assert np.abs(q.partial_trace(abc, [1]).matrix - b.matrix).max() < 1e-12
    assert np.abs(q.partial_trace(abc, [0, 2]).matrix - q.tensor(a, c).matrix).max() < 1e-12


def test_partial_trace_of_bell_state_is_mixed():
    bell = q.DensityMatrix.pure([1, 0, 0, 1], subsystem_dims=(2, 2))
    red = q.partial_trace(bell, [0])
    assert np.allclose(red.matrix, np.eye(2) / 2)
    assert q.mutual_information(bell) == pytest.approx(2 * math.log(2), abs=1e-12)


def test_mutual_information_of_product_is_zero():
    rho = q.tensor(q.random_density_matrix(2, seed=4), q.random_density_matrix(3, seed=5))
    assert abs(q.mutual_information(rho)) < 1e-10


def test_join_hamiltonians_is_additive():
    ha, hb = q.random_hamiltonian(2, seed=1), q.random_hamiltonian(3, seed=2)
    hab = q.join_hamiltonians(ha, hb)
    a, b = q.random_density_matrix(2, seed=6), q.random_density_matrix(3, seed=7)
    assert q.energy(q.tensor(a, b), hab) == pytest.approx(q.energy(a, ha) + q.energy(b, hb), abs=1e-10)
    expected = np.add.outer(ha.eigenvalues, hb.eigenvalues).ravel()
    assert np.allclose(np.sort(hab.eigenvalues), np.sort(expected))


def test_random_unitary_is_unitary():
    U = q.random_unitary(5, seed=3)
    assert np.abs(U.conj().T @ U - np.eye(5)).max() < 1e-12


def test_random_density_matrix_rank():
    rho = q.random_density_matrix(4, rank=2, seed=9)
    assert rho.rank() == 2


def test_apply_unitary_rejects_non_unitary():
    with pytest.raises(ValueError):
        q.apply_unitary(q.DensityMatrix.maximally_mixed(2), np.array([[1, 1], [0, 1]]))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), dim=st.sampled_from([2, 3, 4]))
def test_entropy_unitarily_invariant(seed, dim):
    rho = q.random_density_matrix(dim, seed=seed)
    U = q.random_unitary(dim, seed=seed + 1)
    assert abs(q.entropy(q.apply_unitary(rho, U)) - q.entropy(rho)) < 1e-10


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_subadditivity(seed):
    rho = q.random_density_matrix(4, seed=seed, subsystem_dims=(2, 2))
    sa = q.entropy(q.partial_trace(rho, [0]))
    sb = q.entropy(q.partial_trace(rho, [1]))
    assert q.entropy(rho) <= sa + sb + 1e-10
