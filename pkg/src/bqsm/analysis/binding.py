"""Monte Carlo estimate of ``p0 + p1`` for a committer strategy."""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from ..errors import InputError
from ..memmodel import WeakModelParams
from ..protocols.commitment import COMMIT_RUNNERS
from .reports import BoundReport


def wilson_interval(successes: int, trials: int, sigmas: float = 4.0) -> tuple[float, float]:
    from statsmodels.stats.proportion import proportion_confint

    alpha = math.erfc(sigmas / math.sqrt(2))
    lo, hi = proportion_confint(successes, trials, alpha=alpha, method="wilson")
    return float(lo), float(hi)


def honest_accept_prob(n: int, phi: float = 0.0, epsilon: float = 0.05) -> float:
    """Exact probability that an honest opening passes the mismatch test.

    About half the ``n`` positions are checked (``m ~ Bin(n, 1/2)``), each
    wrong with probability ``phi``; at most ``floor((phi + epsilon) m)`` may
    disagree.
    """
    from scipy.stats import binom

    m = np.arange(n + 1)
    allowed = np.floor((phi + epsilon) * m + 1e-9)
    return float(np.sum(binom.pmf(m, n, 0.5) * binom.cdf(allowed, m, phi)))


def open_rate(
    factory: Callable,
    b_hat: int,
    n: int,
    trials: int,
    seed: int,
    protocol: str = "comm",
    params: Optional[WeakModelParams] = None,
    epsilon: float = 0.05,
    committed: int = 0,
) -> int:
    """Number of accepted openings of ``b_hat`` over ``trials`` fresh commitments."""
    runner = COMMIT_RUNNERS[protocol]
    accepted = 0
    for t in range(trials):
        rng = np.random.default_rng([seed, t, b_hat])
        if protocol == "comm_prime":
            session = runner(committed, n, params or WeakModelParams(), epsilon, factory(), rng)
        else:
            session = runner(committed, n, factory(), rng)
        accepted += session.open(b_hat)
    return accepted


def estimate_binding(
    factory: Callable,
    n: int,
    trials: int,
    seed: int = 0,
    *,
    protocol: str = "comm",
    params: Optional[WeakModelParams] = None,
    epsilon: float = 0.05,
    gamma: Optional[float] = None,
) -> BoundReport:
    """Estimate ``p0 + p1`` and compare it with ``1 +`` the strategy's analytic excess.

    Parameters
    ----------
    factory : callable
        Returns a fresh committer per trial.
    n, trials, seed : int
        Trial ``t`` opening ``b_hat`` uses ``default_rng([seed, t, b_hat])``.
    gamma : float, optional
        Claimed memory fraction; defaults to ``memory / n`` of the strategy.
    """
    if trials < 1:
        raise InputError("need at least one trial")
    probe = factory()
    memory = getattr(probe, "memory", 0)
    gamma = memory / n if gamma is None else gamma
    counts = [open_rate(factory, b, n, trials, seed, protocol, params, epsilon) for b in (0, 1)]
    p = [c / trials for c in counts]
    sigma = math.sqrt(sum(pi * (1 - pi) for pi in p) / trials)
    excess = probe.binding_excess(n)
    return BoundReport(
        name=f"binding {probe.name} {protocol} n={n}",
        lhs=sum(p),
        rhs=1.0 + excess,
        method="monte-carlo",
        trials=trials,
        sigma=sigma,
        seed=seed,
        trivial=2.0,
        hypothesis_ok=memory < n / 2 and gamma < 0.5,
        details={
            "p0": p[0],
            "p1": p[1],
            "wilson_p0": wilson_interval(counts[0], trials),
            "wilson_p1": wilson_interval(counts[1], trials),
            "excess": excess,
            "measured_excess": sum(p) - 1.0,
            "memory": memory,
        },
    )
