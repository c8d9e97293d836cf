import math
from types import SimpleNamespace

import numpy as np
import pytest
from scipy.stats import binom

from bqsm.adversary import StoreSubsetReceiver
from bqsm.analysis.binding import honest_accept_prob
from bqsm.coding import LinearCode
from bqsm.hashing import HashFn
from bqsm.memmodel import WeakModelParams
from bqsm.protocols import (
    Announcement,
    HonestReceiver,
    run_bb84_epr_qot,
    run_bb84_qot,
    run_comm,
    run_comm_prime,
    run_epr_comm,
    run_epr_qot,
    run_qot,
)
from bqsm.protocols.commitment import COMMITTER, VERIFIER
from bqsm.protocols.ot import RECEIVER, SENDER
from bqsm.protocols.transcript import QUANTUM

OT = {
    "qot": lambda b, n, rc, rng: run_qot(b, n, rc, rng),
    "epr_qot": lambda b, n, rc, rng: run_epr_qot(b, n, rc, rng),
    "bb84_qot": lambda b, n, rc, rng: run_bb84_qot(b, n, WeakModelParams(), LinearCode(n), rc, rng),
    "bb84_epr_qot": lambda b, n, rc, rng: run_bb84_epr_qot(b, n, WeakModelParams(), LinearCode(n), rc, rng),
}


@pytest.mark.parametrize("name", OT)
def test_ot_non_interactive_and_ordered(name):
    for t in range(20):
        tr = OT[name](t % 2, 6, None, np.random.default_rng([1, t]))
        assert tr.messages_between(RECEIVER, SENDER) == []
        bound = tr.bound_index
        first_classical = next(i for i, m in enumerate(tr.messages) if m.sender == SENDER and m.kind != QUANTUM)
        assert bound < first_classical
        assert tr.outputs["a"] in (0, 1)


@pytest.mark.parametrize("name", ["qot", "epr_qot"])
def test_honest_correctness(name):
    trials = 2000
    a1 = correct = 0
    for t in range(trials):
        b = t % 2
        tr = OT[name](b, 6, None, np.random.default_rng([7, t]))
        a1 += tr.outputs["a"]
        correct += tr.outputs["a"] == 1 and tr.outputs["b_prime"] == b
        if tr.outputs["a"] == 0:
            assert tr.outputs["b_prime"] == 0
    assert correct == a1
    assert abs(a1 / trials - 0.5) <= 4 * math.sqrt(0.25 / trials)


def test_store_all_always_learns_b():
    for t in range(50):
        tr = run_qot(t % 2, 5, StoreSubsetReceiver(5), np.random.default_rng(t))
        assert tr.outputs["b_prime"] == t % 2


def test_malformed_announcement_gives_random_outputs():
    view = SimpleNamespace(n=4, code=None)
    rc = HonestReceiver()
    outs = {(o.a, o.b_prime) for o in (rc.on_announce(Announcement(7, HashFn.from_bits([1, 0, 0, 0]), 0), view,
                                                     np.random.default_rng(s)) for s in range(40))}
    assert len(outs) > 1


def test_bb84_degenerate_matches_qot_rate():
    trials = 1000
    a1 = sum(OT["bb84_qot"](0, 6, None, np.random.default_rng([2, t])).outputs["a"] for t in range(trials))
    assert abs(a1 / trials - 0.5) <= 4 * math.sqrt(0.25 / trials)


def test_bb84_noisy_correctness():
    n, phi, trials = 200, 0.02, 500
    code = LinearCode(n, "rep5")
    a1 = wrong = 0
    for t in range(trials):
        tr = run_bb84_qot(t % 2, n, WeakModelParams(phi, 0), code, None, np.random.default_rng([3, t]))
        if tr.outputs["a"]:
            a1 += 1
            wrong += tr.outputs["b_prime"] != t % 2
    # the index set has about n/2 positions; n bounds the union bound from above
    bound = LinearCode(n, "rep5").failure_bound(phi)
    assert wrong / a1 <= bound + 4 * math.sqrt(bound * (1 - bound) / a1) + 1 / a1


@pytest.mark.parametrize("runner", [run_comm, run_epr_comm])
def test_commit_hiding_structure_and_honest_open(runner):
    for t in range(50):
        s = runner(t % 2, 6, None, np.random.default_rng(t))
        assert s.transcript.messages_between(COMMITTER, VERIFIER) == []
        assert s.open()
        with pytest.raises(Exception):
            s.open()


def test_honest_wrong_open_rate():
    n, trials = 8, 10_000
    acc = sum(run_comm(0, n, None, np.random.default_rng([5, t])).open(1) for t in range(trials))
    p = 0.75 ** n
    assert abs(acc / trials - p) <= 4 * math.sqrt(p * (1 - p) / trials)


def test_comm_prime_reduces_and_tolerates_noise():
    for t in range(30):
        assert run_comm_prime(t % 2, 10, WeakModelParams(), 0.05, None, np.random.default_rng(t)).open()
    assert honest_accept_prob(400, 0.05, 0.05) >= 0.99
    trials = 200
    acc = sum(run_comm_prime(0, 400, WeakModelParams(0.05, 0), 0.05, None, np.random.default_rng([6, t])).open()
              for t in range(trials))
    assert acc / trials >= 0.99 - 4 * math.sqrt(0.01 * 0.99 / trials)


def test_comm_prime_wrong_open_below_tail():
    n, phi, eps, trials = 60, 0.05, 0.05, 400
    acc = sum(run_comm_prime(0, n, WeakModelParams(phi, 0), eps, None, np.random.default_rng([8, t])).open(1)
              for t in range(trials))
    m = n // 2
    tail = binom.sf(math.ceil(m * (1 - phi - eps)) - 1, m, 0.5)
    # exact: average over m ~ Bin(n, 1/2) of Pr[at most floor((phi+eps) m) mismatches]
    exact = sum(binom.pmf(k, n, 0.5) * binom.cdf(math.floor((phi + eps) * k + 1e-9), k, 0.5) for k in range(n + 1))
    assert tail < 0.01
    assert acc / trials <= exact + 4 * math.sqrt(max(exact * (1 - exact), 1 / trials) / trials)


def test_transcript_json_roundtrip_is_deterministic():
    a = run_qot(1, 4, None, np.random.default_rng(9)).to_json(include_private=True)
    b = run_qot(1, 4, None, np.random.default_rng(9)).to_json(include_private=True)
    assert a == b and '"alice"' in a
