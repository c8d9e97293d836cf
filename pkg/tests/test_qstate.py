import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from bqsm import qstate
from bqsm.errors import InputError
from bqsm.qstate import BellOutcome, DensityOp, PureState
from bqsm.register import QuantumRegister

bitlists = st.integers(1, 5).flatmap(lambda n: st.tuples(st.lists(st.integers(0, 1), min_size=n, max_size=n),
                                                         st.lists(st.integers(0, 1), min_size=n, max_size=n)))


@given(bitlists)
def test_encode_matches_kron(xt):
    x, theta = xt
    assert np.allclose(qstate.encode_bb84(x, theta).amplitudes, oracles.bb84_vector(x, theta), atol=1e-12)


@given(bitlists, st.data())
def test_outcome_distribution_matches_kron(xt, data):
    x, theta = xt
    basis = data.draw(st.lists(st.integers(0, 1), min_size=len(x), max_size=len(x)))
    q = qstate.outcome_distribution(qstate.encode_bb84(x, theta), basis=basis)
    assert np.allclose(q, oracles.distribution(oracles.bb84_vector(x, theta), basis), atol=1e-12)


def test_measure_examples():
    rng = np.random.default_rng(0)
    for _ in range(20):
        out, _ = qstate.measure(qstate.basis_state([0]), [0], [0], rng)
        assert out.tolist() == [0]
    outs = [int(qstate.measure(qstate.encode_bb84([0], [1]), [0], [0], rng)[0][0]) for _ in range(4000)]
    assert abs(np.mean(outs) - 0.5) <= 4 * math.sqrt(0.25 / 4000)
    for _ in range(20):
        a, post = qstate.measure(qstate.make_epr_pairs(1), [0], [0], rng)
        b, _ = qstate.measure(post, [1], [0], rng)
        assert a[0] == b[0]


def test_distribution_examples():
    assert qstate.outcome_distribution(qstate.basis_state([0, 0]), basis=[0, 0]).tolist() == [1, 0, 0, 0]
    assert np.allclose(qstate.outcome_distribution(qstate.basis_state([0] * 3), basis=[1] * 3), 1 / 8)
    q = qstate.outcome_distribution(qstate.make_epr_pairs(1), basis=[0, 0])
    assert np.allclose(q, [0.5, 0, 0, 0.5])


def test_bell_examples():
    rng = np.random.default_rng(0)
    assert qstate.bell_measure(qstate.make_epr_pairs(1), (0, 1), rng)[0] is BellOutcome.PHI_PLUS
    assert BellOutcome.PSI_PLUS.xor_for(0) == 1 and BellOutcome.PSI_PLUS.xor_for(1) == 0
    assert BellOutcome.PHI_MINUS.xor_for(0) == 0 and BellOutcome.PHI_MINUS.xor_for(1) == 1


@pytest.mark.parametrize("theta", [0, 1])
@pytest.mark.parametrize("x", oracles.all_bits(2))
def test_bell_xor_predicts_product_states(x, theta):
    # a Bell outcome with nonzero weight on |x1 x2>_theta must predict x1 xor x2
    psi = oracles.bb84_vector(x, [theta, theta])
    for outcome in BellOutcome:
        vec = oracles.BELL[outcome.name]
        assert np.allclose(outcome.vector, vec)
        if abs(np.vdot(vec, psi)) ** 2 > 1e-12:
            assert outcome.xor_for(theta) == x[0] ^ x[1]


def test_partial_trace_examples():
    assert np.allclose(qstate.partial_trace(qstate.make_epr_pairs(1), [0]).matrix, np.eye(2) / 2)
    assert np.allclose(qstate.partial_trace(qstate.basis_state([0, 1]), [1]).matrix, [[0, 0], [0, 1]])


@settings(max_examples=30)
@given(st.integers(2, 4), st.integers(0, 2 ** 32 - 1))
def test_partial_trace_matches_einsum(m, seed):
    psi = qstate.random_pure_state(m, np.random.default_rng(seed))
    t = psi.amplitudes.reshape(2, -1)
    assert np.allclose(qstate.partial_trace(psi, [0]).matrix, t @ t.conj().T, atol=1e-12)


def test_mub_overlaps():
    for m, expected in ((1, 0.5), (2, 0.25)):
        bases = qstate.mub_bases(m)
        assert len(bases) == 3
        for i in range(3):
            for j in range(i + 1, 3):
                assert np.allclose(np.abs(bases[i].conj().T @ bases[j]) ** 2, expected)


def test_validation():
    with pytest.raises(InputError):
        PureState(np.array([1, 1]))
    with pytest.raises(InputError):
        PureState(np.ones(3) / math.sqrt(3))
    with pytest.raises(InputError):
        DensityOp(np.diag([1.5, -0.5]))
    with pytest.raises(InputError):
        qstate.measure(qstate.basis_state([0]), [1], [0], np.random.default_rng(0))


def test_register_factors_and_measurement():
    reg = QuantumRegister()
    a = reg.add(qstate.make_epr_pairs(1), "alice")
    b = reg.add(qstate.encode_bb84([1], [0]), "bob")
    reg.transfer([a[1]], "bob")
    assert reg.held_by("bob") == [a[1], b[0]]
    rng = np.random.default_rng(3)
    x = reg.measure([a[0], b[0]], [0, 0], rng)
    y = reg.measure([a[1]], [0], rng)
    assert x[0] == y[0] and x[1] == 1
    assert a[0] not in reg


@given(st.integers(0, 2 ** 32 - 1))
def test_register_bell_measure_statistics_consistent(seed):
    reg = QuantumRegister()
    labels = reg.add(qstate.make_epr_pairs(2), "s")
    rng = np.random.default_rng(seed)
    outcome = reg.bell_measure(labels[1], labels[3], rng)
    theta = int(rng.integers(2))
    x = reg.measure([labels[0], labels[2]], [theta, theta], rng)
    assert x[0] ^ x[1] == outcome.xor_for(theta)
