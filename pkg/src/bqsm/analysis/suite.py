"""The twelve acceptance checks, each returning a list of BoundReports.

Every check is deterministic given its seed. Checks take keyword overrides
for sample sizes so that the command line can run reduced versions.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..adversary import BellXorAttack, StoreSubsetReceiver, make_committer, make_receiver
from ..coding import LinearCode
from ..hashing import HashFn
from ..memmodel import Compression, WeakModelParams, apply_memory_bound, noisy_memory
from ..protocols import (
    HonestReceiver,
    run_bb84_epr_qot,
    run_bb84_qot,
    run_comm,
    run_comm_prime,
    run_epr_comm,
    run_epr_qot,
    run_qot,
)
from ..protocols.commitment import COMMITTER, VERIFIER
from ..protocols.ot import RECEIVER, SENDER
from ..qinfo import renyi_entropies
from ..qstate import PureState, basis_state, random_pure_state
from . import engine, privacy, thresholds, uncertainty
from .binding import estimate_binding
from .reports import SIGMAS, BoundReport

SEED = 20240917


def expect(name: str, value: float, expected: float, tol: float = 1e-9, **kw) -> BoundReport:
    """Report that ``value`` equals a hand-computed ``expected`` within ``tol``."""
    return BoundReport(
        name=name,
        lhs=value,
        rhs=expected,
        tolerance=tol,
        extra_conditions={"matches expected": abs(value - expected) <= tol},
        **kw,
    )


def within_sigmas(name: str, value: float, target: float, sigma: float, trials: int, seed) -> BoundReport:
    """Two-sided Monte Carlo agreement with an analytic target."""
    return BoundReport(
        name=name,
        lhs=value,
        rhs=target,
        method="monte-carlo",
        trials=trials,
        sigma=sigma,
        seed=seed,
        extra_conditions={f"within {SIGMAS:g} sigma": abs(value - target) <= SIGMAS * sigma + 1e-12},
    )


def _timed(name: str, elapsed: float, limit: float) -> BoundReport:
    return BoundReport(name=name, lhs=elapsed, rhs=limit, method="closed-form", tolerance=0.0)


# -- 1-3: uncertainty relations ---------------------------------------------------


def _state_sample(count: int, seed: int, a_sizes=(1, 2, 3, 4)):
    rng = np.random.default_rng(seed)
    return uncertainty.random_states(count, rng, a_sizes=a_sizes)


def criterion_uncertainty(samples: int = 500, seed: int = SEED) -> list:
    start = time.perf_counter()
    states, regs = _state_sample(samples, seed)
    out = [uncertainty.uncertainty_sweep(states, regs, 2, seed=seed)]
    for n in (1, 2, 4):
        zero = basis_state([0] * n)
        r = uncertainty.check_uncertainty_two(zero, [0], [(1 << n) - 1])
        out.append(r)
        out.append(expect(f"|0^{n}> singleton mass sum", r.lhs, 1 + 2.0**-n))
    out.append(expect("two-basis bound n=4 singletons", uncertainty.pair_bound(4, 1, 1), 1.5625))
    vac = uncertainty.check_uncertainty_two(basis_state([0] * 4), range(4), range(4))
    out.append(BoundReport(name="half-size sets flagged non-informative", lhs=vac.rhs, rhs=4.0, tolerance=1e-12,
                           extra_conditions={"vacuous": vac.vacuous}))
    out.append(_timed("runtime seconds", time.perf_counter() - start, 60.0))
    return out


def criterion_mub(samples: int = 500, seed: int = SEED) -> list:
    states, regs = _state_sample(samples, seed)
    out = [uncertainty.uncertainty_sweep(states, regs, 3, seed=seed)]
    for big_n in (1, 2):
        reports = [uncertainty.check_minentropy_sum(s, big_n, r) for s, r in zip(states, regs)]
        worst = min(reports, key=lambda r: r.margin)
        out.append(BoundReport(
            name=f"min-entropy sum N={big_n} over {samples} states (worst)",
            lhs=worst.lhs, rhs=worst.rhs, sense=">=", seed=seed, trivial=0.0,
            extra_conditions={"no violations": all(r.passed for r in reports)},
            details={"violations": sum(not r.passed for r in reports), "worst_state": worst.name},
        ))
    out.append(expect("MUB bound n=4 N=2 singletons", uncertainty.mub_bound(4, [1, 1, 1]), 2.6875))
    for n in (3, 4, 5, 6):
        zero = basis_state([0] * n)
        r = uncertainty.check_minentropy_sum(zero, 2)
        out.append(expect(f"|0^{n}> entropy sum N=2", r.lhs, 2 * n))
        out.append(BoundReport(name=f"|0^{n}> entropy sum vs 3 log 3", lhs=r.lhs, rhs=3 * math.log2(3), sense=">="))
        out.append(uncertainty.check_uncertainty_mub(zero, [[0], [0], [0]]))
        out.append(expect(f"|0^{n}> MUB singleton mass", out[-1].lhs, 1 + 2 * 2.0**-n))
    one = uncertainty.check_minentropy_sum(basis_state([0]), 1)
    out.append(expect("single-qubit entropy sum N=1", one.lhs, 1.0))
    out.append(one)
    slacks = [uncertainty.minentropy_slack(n, 2) for n in (2, 4, 6, 8)]
    out.append(BoundReport(name="entropy-sum slack decreasing in n", lhs=float(np.max(np.diff(slacks))), rhs=0.0,
                           tolerance=0.0, details={"slacks": slacks}))
    return out


def criterion_pmax(samples: int = 500, seed: int = SEED) -> list:
    states, regs = _state_sample(samples, seed + 1, a_sizes=(1, 2, 3, 4, 5, 6))
    reports = [uncertainty.check_pmax_product(s, r) for s, r in zip(states, regs)]
    worst = min(reports, key=lambda r: r.margin)
    out = [BoundReport(
        name=f"max-probability product over {samples} states (worst)",
        lhs=worst.lhs, rhs=worst.rhs, seed=seed + 1,
        extra_conditions={"no violations": all(r.passed for r in reports)},
        details={"violations": sum(not r.passed for r in reports), "worst_state": worst.name},
    )]
    out.append(expect("product bound n=4", uncertainty.pmax_bound(4), 0.25 * 1.25**4))
    out.append(expect("product bound n=4 (rounded)", round(uncertainty.pmax_bound(4), 4), 0.6104, tol=1e-12))
    for n in (2, 4, 6):
        r = uncertainty.check_pmax_product(basis_state([0] * n))
        out.append(expect(f"|0^{n}> product", r.lhs, 2.0**-n))
    c, s = math.cos(math.pi / 8), math.sin(math.pi / 8)
    r = uncertainty.check_pmax_product(PureState(np.array([c, s])))
    out.append(r)
    out.append(expect("pi/8 state product", r.lhs, c**4))
    out.append(expect("single-qubit bound", r.rhs, 0.25 * (1 + 2**-0.5) ** 4))
    return out


# -- 4: privacy amplification -------------------------------------------------------


def pa_ensembles(count: int, seed: int) -> list:
    """Constructed ensembles with ``n <= 6`` and ``q <= 4``: random and BB84 stored subsets."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n = int(rng.integers(2, 7))
        if k % 3 == 0:
            positions = rng.choice(n, size=int(rng.integers(0, min(n, 4) + 1)), replace=False)
            stored = {int(p): int(rng.integers(2)) for p in positions}
            probs = rng.dirichlet(np.full(1 << n, 2.0))
            out.append(privacy.bb84_ensemble(n, stored, probs))
        else:
            q = int(rng.integers(0, 5))
            support = int(rng.integers(2, (1 << n) + 1))
            out.append(privacy.random_ensemble(n, q, rng, rank=int(rng.integers(1, 3)), support=support))
    return out


def criterion_pa(count: int = 60, seed: int = SEED) -> list:
    start = time.perf_counter()
    reports = [privacy.check_pa_bound(e) for e in pa_ensembles(count, seed)]
    worst = min(reports, key=lambda r: r.margin)
    out = [BoundReport(
        name=f"privacy amplification over {count} ensembles (worst)",
        lhs=worst.lhs, rhs=worst.rhs, seed=seed, trivial=0.5,
        extra_conditions={
            "every lhs <= min-entropy bound": all(r.inequality_holds for r in reports),
            "every lhs <= renyi bound": all(r.extra_conditions["lhs <= renyi bound"] for r in reports),
            "every renyi bound <= min-entropy bound": all(r.extra_conditions["renyi bound <= min-entropy bound"] for r in reports),
        },
        details={"ensembles": count, "informative": sum(not r.vacuous for r in reports)},
    )]
    uniform = privacy.check_pa_bound(privacy.bb84_ensemble(4, {}), name="uniform X, no side information")
    out += [uniform, expect("uniform X distance", uniform.lhs, 1 / 32)]
    full = privacy.check_pa_bound(privacy.bb84_ensemble(4, {i: 0 for i in range(4)}), name="X fully stored")
    out += [full, expect("fully stored distance", full.lhs, 0.5),
            BoundReport(name="fully stored bound non-informative", lhs=full.rhs, rhs=0.5, sense=">=",
                        extra_conditions={"vacuous": full.vacuous})]
    one = privacy.check_pa_bound(privacy.bb84_ensemble(4, {0: 1}), name="first bit stored in x")
    out += [one, expect("one stored qubit distance", one.lhs, 1 / 16), expect("one stored qubit bound", one.rhs, 0.25)]
    ball = privacy.check_ball_guess(privacy.bb84_ensemble(4, {}), privacy.Guesser.constant([0] * 4), 0.0)
    out += [ball, expect("uniform guess success", ball.lhs, 1 / 16), expect("ball bound n=4", ball.rhs, 2**-1.5)]
    g = privacy.Guesser.measure([0, 0], lambda y: list(y) + [0] * 6)
    wide = privacy.check_ball_guess(privacy.bb84_ensemble(8, {0: 0, 1: 0}), g, 1 / 8)
    out += [wide, expect("ball bound n=8 q=2", wide.rhs, 2**-2.5 * 9)]
    out.append(_timed("runtime seconds", time.perf_counter() - start, 300.0))
    return out


# -- 5: honest correctness --------------------------------------------------------


def _ot_trials(runner, n, trials, seed, factory=HonestReceiver, **kw):
    rows = []
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        b = t % 2
        receiver = factory()
        tr = runner(b, n, receiver=receiver, rng=rng, **kw)
        rows.append((tr, receiver, b))
    return rows


def criterion_honest(trials: int = 5000, bb84_trials: int = 500, seed: int = SEED) -> list:
    out = []
    for name, runner in (("qot", run_qot), ("epr_qot", run_epr_qot)):
        rows = _ot_trials(runner, 6, trials, seed)
        a1 = [tr for tr, _, b in rows if tr.outputs["a"] == 1]
        wrong = sum(tr.outputs["b_prime"] != tr.private["b"] for tr in a1)
        out.append(expect(f"{name} n=6 errors given a=1", wrong, 0, tol=0.0, trials=trials, seed=seed))
        p = len(a1) / trials
        out.append(within_sigmas(f"{name} n=6 Pr[a=1]", p, 0.5, math.sqrt(0.25 / trials), trials, seed))
    params = WeakModelParams(phi=0.02, eta=0.0)
    code = LinearCode(100, "rep5")
    rows = _ot_trials(lambda b, n, receiver, rng: run_bb84_qot(b, n, params, code, receiver, rng), 200, bb84_trials, seed)
    matched = [(tr, rc) for tr, rc, _ in rows if rc.chosen.default_basis == tr.private["r"]]
    ok = sum(tr.outputs["a"] == 1 and tr.outputs["b_prime"] == tr.private["b"] for tr, _ in matched)
    bound = float(np.mean([code.for_length(len(tr.private["x"][tr.private["theta"] == tr.private["r"]])).failure_bound(0.02)
                           for tr, _ in matched]))
    m = len(matched)
    rate = ok / m
    sigma = math.sqrt(max(rate * (1 - rate), bound * (1 - bound)) / m)
    out.append(BoundReport(name="bb84_qot n=200 phi=0.02 rep5 success given matching bases", lhs=rate, rhs=1 - bound,
                           sense=">=", method="monte-carlo", trials=m, sigma=sigma, seed=seed,
                           details={"block_failure_bound": bound, "rep5_block_failure": code.block_failure_prob(0.02)}))
    a1 = [tr for tr, _, _ in rows if tr.outputs["a"] == 1]
    wrong = sum(tr.outputs["b_prime"] != tr.private["b"] for tr in a1)
    out.append(BoundReport(name="bb84_qot wrong outputs given a=1", lhs=wrong / max(len(a1), 1), rhs=bound,
                           method="monte-carlo", trials=len(a1), sigma=math.sqrt(bound * (1 - bound) / max(len(a1), 1)), seed=seed))
    return out


# -- 6: receiver privacy and hiding -------------------------------------------------

OT_STRATEGIES = ["honest", "store_subset:2:plus", "measure_all:random", "store_all", "bell_xor"]
COMMIT_STRATEGIES = ["honest", "measure_all:0", "bounded:2:0", "store_all"]


def _ot_runner(name: str, n: int):
    params = WeakModelParams(phi=0.0, eta=0.2)
    code = LinearCode(n, "trivial")
    return {
        "qot": run_qot,
        "epr_qot": run_epr_qot,
        "bb84_qot": lambda b, n, receiver, rng: run_bb84_qot(b, n, params, code, receiver, rng),
        "bb84_epr_qot": lambda b, n, receiver, rng: run_bb84_epr_qot(b, n, params, code, receiver, rng),
    }[name]


def _commit_runner(name: str):
    params = WeakModelParams(phi=0.0, eta=0.2)
    return {
        "comm": run_comm,
        "epr_comm": run_epr_comm,
        "comm_prime": lambda b, n, committer, rng: run_comm_prime(b, n, params, 0.05, committer, rng),
    }[name]


def criterion_receiver_privacy(trials: int = 20, seed: int = SEED, n: int = 4) -> list:
    ot_back, commit_back, total = 0, 0, 0
    for proto in ("qot", "epr_qot", "bb84_qot", "bb84_epr_qot"):
        runner = _ot_runner(proto, n)
        for spec in OT_STRATEGIES:
            factory = make_receiver(spec, n)
            for tr, _, _ in _ot_trials(runner, n, trials, seed, factory):
                total += 1
                ot_back += len(tr.messages_between(RECEIVER, SENDER))
    for proto in ("comm", "epr_comm", "comm_prime"):
        runner = _commit_runner(proto)
        for spec in COMMIT_STRATEGIES:
            factory = make_committer(spec, n)
            for t in range(trials):
                session = runner(t % 2, n, factory(), np.random.default_rng([seed, t]))
                session.open(t % 2)
                tr = session.transcript
                total += 1
                cut = tr.index_of(lambda m: m.payload.get("event") == "open")
                commit_back += sum(m.sender == COMMITTER and m.receiver == VERIFIER for m in tr.messages[:cut])
    out = [
        expect(f"receiver-to-sender messages over {total} transcripts", ot_back, 0, tol=0.0),
        expect("committer-to-verifier messages before opening", commit_back, 0, tol=0.0),
    ]
    for m in range(1, 5):
        out.append(expect(f"sender state independent of receiver basis n={m}", engine.receiver_privacy_distance(m), 0.0))
        out.append(expect(f"verifier state independent of committed bit n={m}", engine.hiding_distance(m), 0.0))
    return out


# -- 7: Bell-measurement attack ------------------------------------------------------


def criterion_bell(trials: int = 1000, random_trials: int = 4000, seed: int = SEED) -> list:
    out = []
    for n in (2, 4, 6):
        xor = HashFn.from_bits([1] * n)
        hits = Counter()
        for t in range(trials):
            b = t % 2
            tr = run_qot(b, n, BellXorAttack(), np.random.default_rng([seed, t]), fixed_hash=xor)
            hits[(tr.private["r"], tr.outputs["b_prime"] == b)] += 1
        rate = (hits[(0, True)] + hits[(1, True)]) / trials
        out.append(expect(f"Bell attack on fixed XOR n={n}", rate, 1.0, tol=0.0, method="monte-carlo", trials=trials, seed=seed,
                          details={"by_basis": {f"r={r} ok={ok}": c for (r, ok), c in sorted(hits.items())}}))
        out.append(expect(f"Bell attack on fixed XOR n={n} (amplitudes)", 0.5 + engine.total_distance(BellXorAttack(), n, xor), 1.0))
    d = engine.total_distance(BellXorAttack(), 4)
    ok = sum(run_qot(t % 2, 4, BellXorAttack(), np.random.default_rng([seed, t])).outputs["b_prime"] == t % 2
             for t in range(random_trials))
    rate = ok / random_trials
    out.append(BoundReport(name="Bell attack vs random f n=4 guess rate", lhs=rate, rhs=0.5 + d, method="monte-carlo",
                           trials=random_trials, sigma=math.sqrt(rate * (1 - rate) / random_trials), seed=seed,
                           trivial=1.0, details={"exact_distance": d}))
    return out


# -- 8: binding ---------------------------------------------------------------------


def criterion_binding(trials: int = 10000, prime_trials: int = 300, seed: int = SEED) -> list:
    out = []
    reports = {}
    for n in (8, 12):
        r = estimate_binding(make_committer("measure_all:0", n), n, trials, seed)
        reports[n] = r
        out.append(r)
    r8 = reports[8]
    out.append(within_sigmas("measure_all n=8 p0+p1 vs 1+(3/4)^8", r8.lhs, 1 + 0.75**8, r8.sigma, trials, seed))
    s8, s12 = r8.lhs - 1, reports[12].lhs - 1
    sig = math.hypot(r8.sigma, reports[12].sigma)
    out.append(BoundReport(name="measured binding excess decreases n=8 to n=12", lhs=s12, rhs=s8, method="monte-carlo",
                           trials=trials, seed=seed, tolerance=0.0, sigma=0.0,
                           extra_conditions={"separated by 4 sigma": s8 - s12 > SIGMAS * sig}))
    params = WeakModelParams(phi=0.05, eta=0.0)
    accepted = sum(run_comm_prime(t % 2, 400, params, 0.05, None, np.random.default_rng([seed, t])).open()
                   for t in range(prime_trials))
    rate = accepted / prime_trials
    out.append(BoundReport(name="comm_prime honest accept n=400 phi=0.05 eps=0.05", lhs=rate, rhs=0.99, sense=">=",
                           method="monte-carlo", trials=prime_trials, sigma=math.sqrt(max(rate * (1 - rate), 0.0099) / prime_trials),
                           seed=seed))
    return out


# -- 9: sender-privacy event --------------------------------------------------------


def criterion_sender_privacy() -> list:
    out = []
    cases = [("q=0 measure all in +", 0.0, lambda n: StoreSubsetReceiver(0, "plus")),
             ("q=gamma n store subset", 1 / 3, lambda n: StoreSubsetReceiver(round(n / 3), "plus")),
             ("q=gamma n store subset, random basis", 1 / 3, lambda n: StoreSubsetReceiver(round(n / 3), "random"))]
    for label, gamma, make in cases:
        per_n = {}
        for n in (4, 6):
            r = engine.check_sender_privacy(make(n), gamma, n, name=f"sender privacy {label} n={n}")
            per_n[n] = r
            out.append(r)
        for key in ("event_slack",):
            a, b = per_n[4].details[key], per_n[6].details[key]
            out.append(BoundReport(name=f"{label}: event slack decreases n=4 to n=6", lhs=b, rhs=a, tolerance=0.0,
                                   extra_conditions={"strict": b < a}))
        out.append(BoundReport(name=f"{label}: distance slack decreases n=4 to n=6", lhs=per_n[6].rhs, rhs=per_n[4].rhs,
                               tolerance=0.0, extra_conditions={"strict": per_n[6].rhs < per_n[4].rhs}))
    honest = engine.check_sender_privacy(HonestReceiver(), 0.0, 4, name="sender privacy honest receiver n=4")
    out.append(honest)
    out.append(expect("honest receiver P[E]", honest.details["p_event"], 0.5))
    out.append(expect("honest receiver conditioned distance (zero descriptor only)", honest.lhs, 2.0**-5))
    return out


# -- 10: thresholds -----------------------------------------------------------------


def criterion_thresholds() -> list:
    return [
        expect("qot threshold", thresholds.threshold_gamma("qot"), 0.5, tol=1e-4),
        expect("comm threshold", thresholds.threshold_gamma("comm"), 0.5, tol=1e-4),
        expect("bb84_qot threshold phi=0.01 eta=0.1", thresholds.threshold_gamma("bb84_qot", 0.01, 0.1), 0.1846, tol=1e-4),
        expect("comm_prime threshold phi=0.01 eta=0.1", thresholds.threshold_gamma("comm_prime", 0.01, 0.1), 0.2884, tol=1e-4),
    ]


# -- 11: purification equivalence ----------------------------------------------------


def _two_sample(name: str, a: Counter, b: Counter, trials: int, seed) -> BoundReport:
    worst, worst_key, worst_sigma = -math.inf, None, 0.0
    for key in sorted(set(a) | set(b), key=str):
        pa, pb = a[key] / trials, b[key] / trials
        sigma = math.sqrt((pa * (1 - pa) + pb * (1 - pb)) / trials)
        # floor at one count so a category absent from both twins never divides by zero
        sigma = max(sigma, 1.0 / trials)
        z = abs(pa - pb) / sigma if sigma > 0 else (0.0 if pa == pb else math.inf)
        if z > worst:
            worst, worst_key, worst_sigma = z, key, sigma
    return BoundReport(name=name, lhs=worst, rhs=SIGMAS, method="monte-carlo", trials=trials, seed=seed, tolerance=0.0,
                       details={"worst_category": str(worst_key), "plain": {str(k): v for k, v in sorted(a.items(), key=str)},
                                "purified": {str(k): v for k, v in sorted(b.items(), key=str)}})


def _ot_stats(runner, n, spec, trials, seed) -> Counter:
    factory = make_receiver(spec, n)
    return Counter((tr.outputs["a"], tr.outputs["b_prime"] == b) for tr, _, b in _ot_trials(runner, n, trials, seed, factory))


def _commit_stats(runner, n, spec, trials, seed) -> Counter:
    factory = make_committer(spec, n)
    c = Counter()
    for b_hat in (0, 1):
        for t in range(trials):
            session = runner(0, n, factory(), np.random.default_rng([seed, t, b_hat]))
            c[(b_hat, session.open(b_hat))] += 1
    return c


def criterion_purification(trials: int = 5000, seed: int = SEED, n: int = 6) -> list:
    out = []
    for plain, purified in (("qot", "epr_qot"), ("bb84_qot", "bb84_epr_qot")):
        for spec in OT_STRATEGIES:
            a = _ot_stats(_ot_runner(plain, n), n, spec, trials, seed)
            b = _ot_stats(_ot_runner(purified, n), n, spec, trials, seed + 1)
            out.append(_two_sample(f"{plain} vs {purified} {spec} n={n}", a, b, trials, seed))
    for spec in COMMIT_STRATEGIES:
        a = _commit_stats(run_comm, n, spec, trials, seed)
        b = _commit_stats(run_epr_comm, n, spec, trials, seed + 1)
        out.append(_two_sample(f"comm vs epr_comm {spec} n={n}", a, b, 2 * trials, seed))
    return out


# -- 12: noisy memory ----------------------------------------------------------------


def criterion_noisy_memory(gamma: float = 0.25, trials: int = 200, seed: int = SEED) -> list:
    out = []
    for n in (4, 6):
        q = int(math.floor(gamma * n + 1e-9))
        bounded = [engine.check_sender_privacy(StoreSubsetReceiver(q, basis), gamma, n,
                                               name=f"bounded q={q} {basis} n={n}") for basis in ("plus", "random")]
        noisy = [engine.check_sender_privacy(StoreSubsetReceiver(n, "plus"), gamma, n, memory="erasure", p=1 - gamma,
                                             name=f"erasure store-all survival={gamma} n={n}"),
                 engine.check_sender_privacy(StoreSubsetReceiver(n, "random"), gamma, n, memory="erasure", p=1 - gamma,
                                             name=f"erasure store-all random basis survival={gamma} n={n}")]
        out += bounded + noisy
        out.append(BoundReport(name=f"erasure passes whenever bounded passes n={n}", lhs=sum(not r.passed for r in noisy),
                               rhs=0, tolerance=0.0, extra_conditions={"bounded checks pass": all(r.passed for r in bounded)}))
    rng = np.random.default_rng(seed)
    worst = -math.inf
    for t in range(trials):
        m = int(rng.integers(1, 7))
        memory = apply_memory_bound(random_pure_state(m + 2, rng), Compression(keep=tuple(range(m))), m, rng).memory
        res = noisy_memory(memory, "erasure", 1 - gamma, rng)
        s0 = renyi_entropies(res.state)[0] if res.surviving else 0.0
        worst = max(worst, s0 - res.surviving)
    out.append(BoundReport(name=f"S0 of erased memory minus survivors over {trials} trials (max)", lhs=worst, rhs=0.0,
                           method="monte-carlo", trials=trials, seed=seed))
    return out


@dataclass
class Criterion:
    number: int
    title: str
    run: Callable
    reports: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.reports) and all(r.passed for r in self.reports)

    def execute(self, **kw) -> "Criterion":
        start = time.perf_counter()
        self.reports = self.run(**kw)
        self.seconds = time.perf_counter() - start
        return self

    def line(self) -> str:
        return f"criterion {self.number:2d} {'PASS' if self.passed else 'FAIL'}: {self.title} ({self.seconds:.1f}s)"


def criteria() -> list:
    return [
        Criterion(1, "two-basis uncertainty relation", criterion_uncertainty),
        Criterion(2, "three-basis relation and min-entropy sum", criterion_mub),
        Criterion(3, "max-probability product", criterion_pmax),
        Criterion(4, "privacy amplification", criterion_pa),
        Criterion(5, "honest correctness", criterion_honest),
        Criterion(6, "receiver privacy and hiding", criterion_receiver_privacy),
        Criterion(7, "Bell-measurement attack", criterion_bell),
        Criterion(8, "binding", criterion_binding),
        Criterion(9, "sender-privacy event", criterion_sender_privacy),
        Criterion(10, "security thresholds", criterion_thresholds),
        Criterion(11, "purified twins agree", criterion_purification),
        Criterion(12, "noisy memory", criterion_noisy_memory),
    ]


def run_suite(only=None) -> list:
    chosen = [c for c in criteria() if only is None or c.number in only]
    return [c.execute() for c in chosen]
