import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infothermo import equilibrium as eq
from infothermo import passive as p
from infothermo import qstate as q

QUBIT = q.HermitianOperator.diagonal([0.0, 1.0])


def _two_qubit_total_entropy(beta):
    return 2 * p.gibbs_entropy([0.0, 1.0], beta)


def test_identical_qubits_common_beta():
    comp = eq.CompositeSystem.from_gibbs([("A", QUBIT, 2.0), ("B", QUBIT, 0.5)])
    res = eq.equilibrate(comp)
    # independent root of 2 S(b) = S(2) + S(0.5) with scipy
    from scipy.optimize import brentq

    target = p.gibbs_entropy([0, 1], 2.0) + p.gibbs_entropy([0, 1], 0.5)
    ref = brentq(lambda b: _two_qubit_total_entropy(b) - target, 0.5, 2.0, xtol=1e-14)
    assert res.common_beta.beta == pytest.approx(1.324, abs=1e-3)
    assert res.common_beta.beta == pytest.approx(ref, abs=1e-9)
    e_release = (p.gibbs_energy([0, 1], 2.0) + p.gibbs_energy([0, 1], 0.5)) - 2 * p.gibbs_energy([0, 1], ref)
    assert res.energy_released == pytest.approx(e_release, abs=1e-9)
    assert res.energy_released == pytest.approx(p.free_energy(comp.state, comp.joint_hamiltonian()), abs=1e-9)


def test_equal_betas_release_nothing():
    comp = eq.CompositeSystem.from_gibbs([("A", QUBIT, 1.0), ("B", q.HermitianOperator.diagonal([0, 2, 3]), 1.0)])
    res = eq.equilibrate(comp)
    assert res.common_beta.beta == pytest.approx(1.0, abs=1e-9)
    assert abs(res.energy_released) < 1e-9


def test_joint_cp_state_is_product_of_parts():
    comp = eq.CompositeSystem.from_gibbs([("A", QUBIT, 3.0), ("B", q.random_hamiltonian(3, seed=1), 0.2)])
    res = eq.equilibrate(comp)
    assert np.abs(res.joint_cp_state.matrix - q.tensor(*res.per_part_states).matrix).max() < 1e-9


def test_three_parts():
    hs = [QUBIT, q.HermitianOperator.diagonal([0, 0.5, 1.5]), QUBIT]
    comp = eq.CompositeSystem.from_gibbs([("A", hs[0], 0.3), ("B", hs[1], 1.0), ("C", hs[2], 4.0)])
    res = eq.equilibrate(comp)
    assert 0.3 < res.common_beta.beta < 4.0
    total = sum(p.gibbs_entropy(h.eigenvalues, res.common_beta.beta) for h in hs)
    assert total == pytest.approx(res.total_entropy, abs=1e-10)


def test_is_equilibrium_diagnostics():
    at_eq = eq.CompositeSystem.from_gibbs([("A", QUBIT, 1.3), ("B", QUBIT, 1.3)])
    chk = eq.is_equilibrium(at_eq)
    assert chk.is_equilibrium and chk.shared_beta and chk.marginals_thermal
    off = eq.CompositeSystem.from_gibbs([("A", QUBIT, 2.0), ("B", QUBIT, 0.5)])
    chk = eq.is_equilibrium(off)
    assert not chk.is_equilibrium and chk.marginals_thermal and not chk.shared_beta
    # thermal marginals at one beta but correlated: not at equilibrium
    bell = q.DensityMatrix.pure([1, 0, 0, 1], (2, 2))
    chk = eq.is_equilibrium(eq.CompositeSystem([("A", QUBIT), ("B", QUBIT)], bell))
    assert not chk.is_equilibrium and chk.mutual_information > 1


def test_zeroth_law_transitivity():
    hs = {"A": QUBIT, "B": q.HermitianOperator.diagonal([0, 0.7, 2.0]), "C": q.random_hamiltonian(2, seed=3)}
    beta = 0.8
    ab = eq.is_equilibrium(eq.CompositeSystem.from_gibbs([("A", hs["A"], beta), ("B", hs["B"], beta)]))
    bc = eq.is_equilibrium(eq.CompositeSystem.from_gibbs([("B", hs["B"], beta), ("C", hs["C"], beta)]))
    ac = eq.is_equilibrium(eq.CompositeSystem.from_gibbs([("A", hs["A"], beta), ("C", hs["C"], beta)]))
    assert ab.is_equilibrium and bc.is_equilibrium and ac.is_equilibrium
    assert ab.marginal_betas[1] == pytest.approx(bc.marginal_betas[0], abs=1e-8)
    assert ac.marginal_betas[0] == pytest.approx(ab.marginal_betas[0], abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 2**31 - 1),
    ba=st.floats(0.01, 20.0),
    bb=st.floats(0.01, 20.0),
    dims=st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)]),
)
def test_beta_ab_between(seed, ba, bb, dims):
    # unit spectral width keeps the entropies above the solver's 1e-12 floor
    ha = q.random_hamiltonian(dims[0], seed=seed)
    hb = q.random_hamiltonian(dims[1], seed=seed + 1)
    ha, hb = (q.HermitianOperator(h.matrix / h.spread) for h in (ha, hb))
    beta_ab, ok = eq.beta_ordering_check(ba, bb, ha, hb)
    assert ok, (ba, bb, beta_ab)


def test_inequalities_saturate_for_equal_beta_products():
    ha, hb = QUBIT, q.random_hamiltonian(2, seed=4)
    rho = q.tensor(p.gibbs_state(ha, 0.9), p.gibbs_state(hb, 0.9))
    rep = eq.verify_lemma1(rho, ha, hb)
    assert all(rep.saturated.values())


def test_inequalities_strict_when_correlated():
    rho = q.random_density_matrix(4, seed=5)
    rep = eq.verify_lemma1(rho, QUBIT, QUBIT)
    m = rep.margins()
    assert min(m.values()) >= -1e-9
    assert m["P4"] > 1e-6 and m["P6"] > 1e-6


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_inequality_margins_nonnegative(seed):
    ha, hb = q.random_hamiltonian(2, seed=seed), q.random_hamiltonian(2, seed=seed + 7)
    rep = eq.verify_lemma1(q.random_density_matrix(4, seed=seed + 3), ha, hb)
    assert min(rep.margins().values()) >= -1e-9


def test_composite_dimension_mismatch():
    with pytest.raises(ValueError):
        eq.CompositeSystem([("A", QUBIT), ("B", QUBIT)], q.DensityMatrix.maximally_mixed(3))


def test_ground_space_limit():
    # two pure ground states: the common beta is infinite and nothing is released
    g = q.DensityMatrix.pure([1, 0])
    comp = eq.CompositeSystem([("A", QUBIT), ("B", QUBIT)], q.tensor(g, g))
    res = eq.equilibrate(comp)
    assert math.isinf(res.common_beta.beta)
    assert res.energy_released == pytest.approx(0.0, abs=1e-12)


def test_entropy_floor_reads_as_ground_space():
    # both parts so cold that their total entropy is below 1e-12 nats
    ha = q.HermitianOperator.diagonal([0.0, 2.5])
    hb = q.HermitianOperator.diagonal([0.0, 2.5, 2.9])
    assert p.gibbs_entropy(ha.eigenvalues, 18) + p.gibbs_entropy(hb.eigenvalues, 14) < 1e-12
    beta_ab, _ = eq.beta_ordering_check(18.0, 14.0, ha, hb)
    assert math.isinf(beta_ab)


def _bath_deviation(beta_s, beta_b, n):
    H = q.HermitianOperator.diagonal([0.0, 1.0])
    bath = q.join_hamiltonians(*[H] * n) if n > 1 else H
    b = eq.equilibrium_beta([beta_s, beta_b], [H, bath]).beta
    return abs(b - beta_b) / beta_b


def test_large_bath_recovery_is_monotone():
    for beta_s, beta_b in [(0.5, 1.0), (2.0, 0.5), (3.0, 2.0), (1.0, 3.0)]:
        devs = [_bath_deviation(beta_s, beta_b, n) for n in range(1, 9)]
        assert all(b < a for a, b in zip(devs, devs[1:]))


def test_large_bath_recovery_threshold():
    # the deviation falls roughly like 1/(n+1); a system starting near the bath's beta is within 5% by n = 8
    assert _bath_deviation(0.5, 1.0, 8) < 0.05
    assert _bath_deviation(2.0, 0.5, 8) > 0.05
