import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from bqsm import qstate
from bqsm.adversary import StoreSubsetReceiver, make_receiver
from bqsm.analysis import engine, privacy, thresholds, uncertainty
from bqsm.analysis.binding import honest_accept_prob, wilson_interval
from bqsm.analysis.reports import BoundReport, all_passed
from bqsm.errors import ConfigError
from bqsm.protocols import HonestReceiver
from bqsm.qinfo import CqEnsemble

# -- reports -------------------------------------------------------------------


def test_report_statuses():
    assert BoundReport("a", 1.0, 2.0).status == "pass"
    assert BoundReport("a", 3.0, 2.0).status == "fail"
    assert BoundReport("a", 2.1, 2.0, sigma=0.05, method="monte-carlo").status == "pass"
    assert BoundReport("a", 0.5, 1.0, trivial=1.0).status == "vacuous"
    assert BoundReport("a", 3.0, 2.0, hypothesis_ok=False).status == "hypothesis-violated"
    assert not BoundReport("a", 0.0, 1.0, extra_conditions={"c": False}).passed
    assert BoundReport("a", 2.0, 1.0, sense=">=").passed
    assert all_passed([BoundReport("a", 3.0, 2.0, hypothesis_ok=False)])
    assert not all_passed([BoundReport("a", 3.0, 2.0)])
    with pytest.raises(ValueError):
        BoundReport("a", 0, 0, sense="<")


# -- uncertainty ---------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_two_basis_point_mass(n):
    r = uncertainty.check_uncertainty_two(qstate.basis_state([0] * n), [0], [1])
    assert r.lhs == pytest.approx(1 + 2.0 ** -n, abs=1e-9)
    assert r.rhs == pytest.approx((1 + 2.0 ** (-n / 2)) ** 2, abs=1e-9)
    assert r.passed


def test_pair_bound_values():
    assert uncertainty.pair_bound(4, 1, 1) == pytest.approx(1.5625)
    r = uncertainty.check_uncertainty_two(qstate.basis_state([0] * 4), range(4), range(4))
    assert r.rhs == pytest.approx(4) and r.status == "vacuous"


def test_mub_values():
    assert uncertainty.mub_bound(4, [1, 1, 1]) == pytest.approx(2.6875)
    r = uncertainty.check_uncertainty_mub(qstate.basis_state([0] * 4), [[0], [0], [0]])
    assert r.lhs == pytest.approx(1 + 2 * 2.0 ** -4, abs=1e-9) and r.passed
    two = uncertainty.check_uncertainty_two(qstate.basis_state([0] * 3), [0], [5])
    mub = uncertainty.check_uncertainty_mub(qstate.basis_state([0] * 3), [[0], [5]])
    assert two.lhs == pytest.approx(mub.lhs) and two.rhs == pytest.approx(mub.rhs)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2), st.integers(0, 2 ** 32 - 1), st.data())
def test_uncertainty_holds_on_random_states(na, nb, seed, data):
    rng = np.random.default_rng(seed)
    psi = qstate.random_pure_state(na + nb, rng)
    reg = list(range(na))
    size = 2 ** na
    lp = data.draw(st.lists(st.integers(0, size - 1), min_size=1, unique=True))
    lx = data.draw(st.lists(st.integers(0, size - 1), min_size=1, unique=True))
    assert uncertainty.check_uncertainty_two(psi, lp, lx, reg).passed
    ly = data.draw(st.lists(st.integers(0, size - 1), min_size=1, unique=True))
    assert uncertainty.check_uncertainty_mub(psi, [lp, lx, ly], reg).passed
    assert uncertainty.check_pmax_product(psi, reg).passed


def test_minentropy_examples():
    r = uncertainty.check_minentropy_sum(qstate.basis_state([0] * 3), 2)
    assert r.lhs == pytest.approx(6, abs=1e-9) and r.lhs >= 3 * math.log2(3)
    r1 = uncertainty.check_minentropy_sum(qstate.basis_state([0]), 1)
    assert r1.lhs == pytest.approx(1, abs=1e-9) and r1.passed


def test_pmax_examples():
    n = 3
    r = uncertainty.check_pmax_product(qstate.basis_state([0] * n))
    assert r.lhs == pytest.approx(2.0 ** -n)
    c, s = math.cos(math.pi / 8), math.sin(math.pi / 8)
    r = uncertainty.check_pmax_product(qstate.PureState(np.array([c, s])))
    assert r.lhs == pytest.approx(c ** 4, abs=1e-9)
    assert r.rhs == pytest.approx(0.25 * (1 + 2 ** -0.5) ** 4, abs=1e-9)


def test_small_sets_examples():
    r = uncertainty.check_small_sets_mass(qstate.basis_state([0] * 5), 0.2, 0.2)
    assert r.details.get("q_plus", 0.0) == pytest.approx(0) or r.lhs >= 1 - 1e-9
    assert r.lhs >= 1 - 1e-9 and r.passed
    epr = qstate.make_epr_pairs(3)
    r = uncertainty.check_small_sets_mass(epr, 0.1, register=[0, 2, 4])
    assert r.lhs == pytest.approx(2, abs=1e-9)


# -- privacy amplification -----------------------------------------------------


def test_pa_worked_examples():
    e = privacy.bb84_ensemble(4, {})
    r = privacy.check_pa_bound(e, 0)
    assert r.lhs == pytest.approx(1 / 32, abs=1e-9)
    assert r.rhs == pytest.approx(0.5 * 2 ** -1.5, abs=1e-9) and r.passed
    full = CqEnsemble(list(range(8)), np.full(8, 1 / 8), [np.diag(np.eye(8)[x]) for x in range(8)])
    full = full.map(lambda x: np.array([(x >> 2) & 1, (x >> 1) & 1, x & 1], dtype=np.uint8))
    r = privacy.check_pa_bound(full, 3)
    # every nonzero descriptor gives distance 1/2 and the zero one gives 1/2 too
    assert r.lhs == pytest.approx(0.5, abs=1e-9) and r.status == "vacuous"
    one = privacy.check_pa_bound(privacy.bb84_ensemble(4, {0: 1}), 1)
    assert one.lhs <= 0.25 + 1e-9


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2), st.integers(0, 2 ** 32 - 1))
def test_pa_distance_matches_block_oracle(n, q, seed):
    e = privacy.random_ensemble(n, q, np.random.default_rng(seed))
    probs = np.zeros(2 ** n)
    rhos = [np.zeros((2 ** q, 2 ** q), complex) for _ in range(2 ** n)]
    for x, p, r in zip(e.xs, e.probs, e.rhos):
        i = int("".join(map(str, x)), 2)
        probs[i], rhos[i] = p, r
    assert privacy.pa_distance(e) == pytest.approx(oracles.pa_distance(n, probs, rhos), abs=1e-9)
    assert privacy.check_pa_bound(e, q).passed


def test_ball_guess_examples():
    e = privacy.bb84_ensemble(4, {})
    r = privacy.check_ball_guess(e, privacy.Guesser.constant([0] * 4), 0.0, 0)
    assert r.lhs == pytest.approx(1 / 16) and r.rhs == pytest.approx(2 ** -1.5) and r.passed
    assert privacy.ball_guess_bound(8, 2, 8, 1) == pytest.approx(2 ** -2.5 * 9)
    full = privacy.bb84_ensemble(3, {0: 0, 1: 0, 2: 0})
    r = privacy.check_ball_guess(full, privacy.Guesser.measure([0, 0, 0], lambda y: y), 0.0, 3)
    assert r.lhs == pytest.approx(1) and r.status == "vacuous"


# -- exact engine --------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4])
def test_measure_all_advantage_matches_hand_oracle(n):
    # r = + reveals x (advantage 1/2); r = x leaves only the zero descriptor
    expected = 0.25 + 2.0 ** (-n - 2)
    assert engine.total_distance(StoreSubsetReceiver(0, "plus"), n) == pytest.approx(expected, abs=1e-9)
    assert engine.total_distance(HonestReceiver(), n) == pytest.approx(expected, abs=1e-9)


def test_store_all_and_structural_zeros():
    assert engine.total_distance(StoreSubsetReceiver(3), 3) == pytest.approx(0.5, abs=1e-9)
    assert engine.receiver_privacy_distance(4) == pytest.approx(0, abs=1e-9)
    assert engine.hiding_distance(4) == pytest.approx(0, abs=1e-9)


def test_sender_privacy_examples():
    r = engine.check_sender_privacy(HonestReceiver(), 0.0, 4)
    assert r.details["p_event"] == pytest.approx(0.5, abs=1e-9)
    assert r.lhs == pytest.approx(2.0 ** -5, abs=1e-9) and r.passed
    bad = engine.check_sender_privacy(StoreSubsetReceiver(4), 1.0, 4)
    assert bad.status == "hypothesis-violated"
    for n in (4, 6):
        assert engine.check_sender_privacy(make_receiver("store_subset:1:random", n)(), 0.25, n).passed


def test_erasure_equals_bounded_in_the_limits():
    n = 4
    erased = engine.check_sender_privacy(StoreSubsetReceiver(n), 0.25, n, memory="erasure", p=1.0)
    # nothing survives: only the zero descriptor leaks b
    assert erased.details["total_distance"] == pytest.approx(2.0 ** (-n - 1), abs=1e-9)
    intact = engine.check_sender_privacy(StoreSubsetReceiver(n), 0.25, n, memory="erasure", p=0.0)
    assert intact.details["total_distance"] == pytest.approx(0.5, abs=1e-9)
    assert intact.status == "hypothesis-violated"


# -- binding and thresholds ----------------------------------------------------


def test_honest_accept_prob():
    assert honest_accept_prob(20, 0.0) == pytest.approx(1.0)
    n, phi, eps = 6, 0.1, 0.1
    brute = sum(oracles.binom_pmf(m, n, 0.5) * sum(oracles.binom_pmf(k, m, phi) for k in range(math.floor((phi + eps) * m + 1e-9) + 1))
                for m in range(n + 1))
    assert honest_accept_prob(n, phi, eps) == pytest.approx(brute, abs=1e-12)


def test_wilson_interval_contains_estimate():
    lo, hi = wilson_interval(30, 100)
    assert lo < 0.3 < hi and 0 <= lo and hi <= 1


def test_thresholds():
    assert thresholds.threshold_gamma("qot") == 0.5
    assert thresholds.threshold_gamma("comm") == 0.5
    assert thresholds.threshold_gamma("bb84_qot", 0.01, 0.1) == pytest.approx(0.225 - oracles.h(0.01) / 2, abs=1e-12)
    assert thresholds.threshold_gamma("bb84_qot", 0.01, 0.1) == pytest.approx(0.1846, abs=1e-4)
    assert thresholds.threshold_gamma("comm_prime", 0.01, 0.1) == pytest.approx(0.2884, abs=1e-4)
    with pytest.warns(RuntimeWarning):
        assert thresholds.threshold_gamma("bb84_qot", 0.3, 0.5) == 0.0
    with pytest.raises(ConfigError):
        thresholds.threshold_gamma("nope")
    with pytest.raises(ConfigError):
        thresholds.threshold_gamma("qot", 0.6)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        thresholds.threshold_gamma("comm_prime", 0.0, 0.0)
