import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from bqsm import qinfo, qstate
from bqsm.errors import InputError
from bqsm.qinfo import CqEnsemble


def test_min_entropy_examples():
    assert qinfo.min_entropy(np.full(16, 1 / 16)) == pytest.approx(4, abs=1e-9)
    assert qinfo.min_entropy([0, 1, 0]) == pytest.approx(0, abs=1e-9)
    assert qinfo.min_entropy([0.75, 0.25]) == pytest.approx(0.415037, abs=1e-6)
    with pytest.raises(InputError):
        qinfo.min_entropy([0, 0])


def test_renyi_examples():
    assert qinfo.renyi_entropies(np.eye(2) / 2) == pytest.approx((1, 1), abs=1e-9)
    assert qinfo.renyi_entropies(qstate.basis_state([1]).density()) == pytest.approx((0, 0), abs=1e-9)
    s0, s2 = qinfo.renyi_entropies(np.diag([0.75, 0.25]))
    assert s0 == pytest.approx(1) and s2 == pytest.approx(-math.log2(10 / 16), abs=1e-9)
    with pytest.raises(InputError):
        qinfo.renyi_entropies(np.diag([1.25, -0.25]))


@settings(max_examples=40)
@given(st.integers(1, 3), st.integers(0, 2 ** 32 - 1))
def test_entropy_ordering(m, seed):
    rng = np.random.default_rng(seed)
    rho = qstate.partial_trace(qstate.random_pure_state(m + 1, rng), range(m))
    s0, s2 = qinfo.renyi_entropies(rho)
    assert 0 <= s2 <= s0 + 1e-9 <= m + 1e-9


@settings(max_examples=40)
@given(st.integers(0, 2 ** 32 - 1))
def test_trace_distance_matches_svd(seed):
    rng = np.random.default_rng(seed)
    a = qstate.partial_trace(qstate.random_pure_state(3, rng), [0, 1])
    b = qstate.partial_trace(qstate.random_pure_state(3, rng), [0, 1])
    d = qinfo.trace_distance(a, b)
    assert d == pytest.approx(oracles.trace_distance(a.matrix, b.matrix), abs=1e-9)
    assert 0 <= d <= 1 + 1e-9
    assert qinfo.trace_distance(a, a) == pytest.approx(0, abs=1e-9)


def test_trace_distance_dimension_mismatch():
    with pytest.raises(InputError):
        qinfo.trace_distance(np.eye(2) / 2, np.eye(4) / 4)


def test_dist_from_uniform_examples():
    mixed = np.eye(2) / 2
    assert qinfo.dist_from_uniform(CqEnsemble([0, 1], [0.5, 0.5], [mixed, mixed])) == pytest.approx(0, abs=1e-9)
    assert qinfo.dist_from_uniform(CqEnsemble([0], [1.0], [np.ones((1, 1))])) == pytest.approx(0.5, abs=1e-9)
    e = CqEnsemble([0, 1], [0.5, 0.5], [np.diag([1, 0]), np.diag([0, 1])])
    assert qinfo.dist_from_uniform(e) == pytest.approx(0.5, abs=1e-9)


@settings(max_examples=40)
@given(st.integers(0, 2 ** 32 - 1), st.floats(0.05, 0.95))
def test_dist_from_uniform_matches_block_oracle(seed, p):
    rng = np.random.default_rng(seed)
    rhos = [qstate.partial_trace(qstate.random_pure_state(2, rng), [0]).matrix for _ in range(2)]
    e = CqEnsemble([0, 1], [p, 1 - p], rhos)
    expected = oracles.dist_from_uniform([p, 1 - p], rhos, [0, 1])
    assert qinfo.dist_from_uniform(e) == pytest.approx(expected, abs=1e-9)
    assert qinfo.binary_distance(p * rhos[0], (1 - p) * rhos[1]) == pytest.approx(expected, abs=1e-9)


def test_binary_entropy():
    assert qinfo.binary_entropy(0.5) == 1
    assert qinfo.binary_entropy(0) == 0
    assert qinfo.binary_entropy(0.11) == pytest.approx(0.49999, abs=1e-4)
    with pytest.raises(InputError):
        qinfo.binary_entropy(1.5)


def test_hamming_ball():
    assert qinfo.hamming_ball(5, 0).size == 1
    assert qinfo.hamming_ball(5, 1).size == 6
    assert qinfo.log2_ball_size(5, 1) == pytest.approx(math.log2(6))
    with pytest.raises(InputError):
        qinfo.hamming_ball(5, 6)


@given(st.integers(1, 10), st.data())
def test_ball_entropy_bound_and_sampling(n, data):
    radius = data.draw(st.integers(0, (n - 1) // 2))
    ball = qinfo.hamming_ball(n, radius)
    assert ball.size == sum(math.comb(n, k) for k in range(radius + 1))
    assert ball.size <= ball.entropy_bound() + 1e-9
    center = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    y = ball.sample(center, np.random.default_rng(data.draw(st.integers(0, 1000))))
    assert ball.contains(center, y)


def test_distribution_mass():
    assert qinfo.distribution_mass(np.array([0.1, 0.2, 0.7]), [0, 2]) == pytest.approx(0.8)
