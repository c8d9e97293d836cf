"""Entropic uncertainty checks on a register measured in conjugate or mutually unbiased bases.

Each checker takes a state (pure or mixed, possibly with a side register) and
the qubits forming the measured register ``A``. Distributions come from
:func:`bqsm.qstate.outcome_distribution`; the bases are ``+`` (label 0),
``x`` (label 1) and the Pauli-Y eigenbasis (label 2).
"""

from __future__ import annotations

import itertools
import math
from typing import Optional, Sequence

import numpy as np

from .. import bits as _bits
from ..errors import InputError
from ..qinfo import min_entropy
from ..qstate import outcome_distribution
from .reports import BoundReport

MAX_EXACT_QUBITS = 6


def _register(state, register) -> list:
    reg = list(range(state.n_qubits)) if register is None else [int(i) for i in register]
    if len(reg) > MAX_EXACT_QUBITS + 2:
        raise InputError(f"exact distributions are limited to {MAX_EXACT_QUBITS + 2} measured qubits")
    return reg


def _index_set(members, n: int) -> list:
    out = []
    for m in members:
        if isinstance(m, (int, np.integer)):
            idx = int(m)
        else:
            b = _bits.bits(m)
            if len(b) != n:
                raise InputError(f"set member has {len(b)} bits, register has {n}")
            idx = _bits.to_int(b)
        if not 0 <= idx < 1 << n:
            raise InputError(f"set member {m!r} outside {{0,1}}^{n}")
        out.append(idx)
    if len(set(out)) != len(out):
        raise InputError("set members must be distinct")
    return out


def pair_bound(n: int, size_a: int, size_b: int) -> float:
    """``(1 + sqrt(2^-n |L_a| |L_b|))^2``, the two-basis bound."""
    return (1.0 + math.sqrt(2.0**-n * size_a * size_b)) ** 2


def mub_bound(n: int, sizes: Sequence[int]) -> float:
    """``1 - C(N+1, 2) + sum_{j<k} (1 + sqrt(2^-n |L^j| |L^k|))^2``."""
    pairs = list(itertools.combinations(sizes, 2))
    return 1.0 - len(pairs) + sum(pair_bound(n, a, b) for a, b in pairs)


def distributions(state, register=None, labels=(0, 1)) -> list:
    reg = _register(state, register)
    return [outcome_distribution(state, reg, label) for label in labels]


def check_uncertainty_two(state, l_plus, l_cross, register=None) -> BoundReport:
    """``Q+(L+) + Qx(Lx) <= (1 + sqrt(2^-n |L+| |Lx|))^2`` for the register ``A``.

    Parameters
    ----------
    state : PureState or DensityOp
    l_plus, l_cross : iterable
        Outcome sets, given as integers (big-endian) or bit strings.
    register : sequence of int, optional
        Qubits of ``A``; the whole state by default.
    """
    reg = _register(state, register)
    n = len(reg)
    q_plus, q_cross = distributions(state, reg)
    lp, lx = _index_set(l_plus, n), _index_set(l_cross, n)
    lhs = float(q_plus[lp].sum() + q_cross[lx].sum())
    return BoundReport(
        name=f"two-basis uncertainty n={n} |L+|={len(lp)} |Lx|={len(lx)}",
        lhs=lhs,
        rhs=pair_bound(n, len(lp), len(lx)),
        trivial=2.0,
        details={"q_plus": float(q_plus[lp].sum()), "q_cross": float(q_cross[lx].sum())},
    )


def check_uncertainty_mub(state, sets: Sequence, register=None) -> BoundReport:
    """Sum of ``Q^i(L^i)`` over ``N + 1 <= 3`` mutually unbiased bases against the pairwise bound."""
    if not 2 <= len(sets) <= 3:
        raise InputError("between two and three bases are available")
    reg = _register(state, register)
    n = len(reg)
    qs = distributions(state, reg, range(len(sets)))
    idx = [_index_set(s, n) for s in sets]
    masses = [float(q[i].sum()) for q, i in zip(qs, idx)]
    return BoundReport(
        name=f"MUB uncertainty n={n} N={len(sets) - 1} sizes={[len(i) for i in idx]}",
        lhs=sum(masses),
        rhs=mub_bound(n, [len(i) for i in idx]),
        trivial=float(len(sets)),
        details={"masses": masses},
    )


def minentropy_slack(n: int, big_n: int) -> float:
    """``log(1 + nu)`` with ``nu = C(N+1, 2)((1 + 2^{-n/2})^2 - 1)``; shrinks like ``2^{-n/2}``."""
    nu = math.comb(big_n + 1, 2) * ((1.0 + 2.0 ** (-n / 2)) ** 2 - 1.0)
    return math.log2(1.0 + nu)


def check_minentropy_sum(state, big_n: int, register=None) -> BoundReport:
    """``sum_i H_inf(Q^i) >= (N+1)(log(N+1) - slack)``.

    Singleton sets at each distribution's mode give ``sum_i max Q^i <= 1 + nu``;
    the arithmetic-geometric mean inequality turns this into the entropy sum.
    """
    if big_n not in (1, 2):
        raise InputError("N must be 1 or 2 with three available bases")
    reg = _register(state, register)
    n = len(reg)
    qs = distributions(state, reg, range(big_n + 1))
    ents = [min_entropy(q) for q in qs]
    slack = minentropy_slack(n, big_n)
    k = big_n + 1
    return BoundReport(
        name=f"min-entropy sum n={n} N={big_n}",
        lhs=sum(ents),
        rhs=k * (math.log2(k) - slack),
        sense=">=",
        trivial=0.0,
        details={"entropies": ents, "slack": slack, "target": k * math.log2(k)},
    )


def pmax_bound(n: int) -> float:
    return 0.25 * (1.0 + 2.0 ** (-n / 2)) ** 4


def check_pmax_product(state, register=None) -> BoundReport:
    """``max Q+ * max Qx <= 1/4 (1 + 2^{-n/2})^4``."""
    reg = _register(state, register)
    n = len(reg)
    q_plus, q_cross = distributions(state, reg)
    return BoundReport(
        name=f"max-probability product n={n}",
        lhs=float(q_plus.max() * q_cross.max()),
        rhs=pmax_bound(n),
        trivial=1.0,
        details={"pmax_plus": float(q_plus.max()), "pmax_cross": float(q_cross.max())},
    )


def small_sets(q: np.ndarray, n: int, gamma: float, kappa: float) -> np.ndarray:
    """Mask of outcomes with probability at most ``2^{-(gamma+kappa) n}``."""
    return q <= 2.0 ** (-(gamma + kappa) * n) + 1e-15


def default_kappa(gamma: float) -> float:
    return (0.5 - gamma) / 2


def check_small_sets_mass(state, gamma: float, kappa: Optional[float] = None, register=None) -> BoundReport:
    """``q+ + qx >= 1 - c`` where ``q^r`` is the mass of the small-probability set ``S^r``.

    The complement of ``S^r`` has fewer than ``2^{(gamma+kappa) n}`` members,
    so the two-basis bound applied to the complements gives
    ``c = (1 + sqrt(2^-n |L+| |Lx|))^2 - 1``. The report also checks that
    ``c`` stays below the worst value allowed by that size limit.
    """
    kappa = default_kappa(gamma) if kappa is None else kappa
    reg = _register(state, register)
    n = len(reg)
    q_plus, q_cross = distributions(state, reg)
    s_plus = small_sets(q_plus, n, gamma, kappa)
    s_cross = small_sets(q_cross, n, gamma, kappa)
    masses = float(q_plus[s_plus].sum()), float(q_cross[s_cross].sum())
    size_plus, size_cross = int((~s_plus).sum()), int((~s_cross).sum())
    c = pair_bound(n, size_plus, size_cross) - 1.0
    c_max = (1.0 + 2.0 ** ((gamma + kappa - 0.5) * n)) ** 2 - 1.0
    return BoundReport(
        name=f"small-set mass n={n} gamma={gamma:g} kappa={kappa:g}",
        lhs=sum(masses),
        rhs=1.0 - c,
        sense=">=",
        trivial=0.0,
        hypothesis_ok=gamma + kappa < 0.5,
        extra_conditions={"slack within size-limited bound": c <= c_max + 1e-12},
        details={"q_plus": masses[0], "q_cross": masses[1], "large_plus": size_plus, "large_cross": size_cross,
                 "slack": c, "slack_limit": c_max},
    )


# -- sweeps over sampled states ---------------------------------------------------


def _top_mass(q: np.ndarray) -> np.ndarray:
    """``[0, largest, largest two, ...]``: the worst set mass of every size."""
    return np.concatenate([[0.0], np.cumsum(np.sort(q)[::-1])])


def worst_case_sets(qs: Sequence[np.ndarray], n: int) -> tuple[np.ndarray, np.ndarray]:
    """Worst-case lhs and the bound for every combination of set sizes.

    For fixed sizes the sum of masses is largest when each set holds that
    many most probable outcomes, and the bound depends only on the sizes, so
    checking these combinations covers every choice of sets.
    """
    tops = [_top_mass(q) for q in qs]
    sizes = np.arange((1 << n) + 1, dtype=float)
    grids = np.meshgrid(*[sizes] * len(qs), indexing="ij")
    lhs = sum(np.meshgrid(*tops, indexing="ij"))
    rhs = 1.0 - math.comb(len(qs), 2)
    for a, b in itertools.combinations(range(len(qs)), 2):
        rhs = rhs + (1.0 + np.sqrt(2.0**-n * grids[a] * grids[b])) ** 2
    return lhs, rhs


def uncertainty_sweep(states: Sequence, registers: Sequence, n_bases: int = 2, seed=None) -> BoundReport:
    """Worst margin of the two-basis (or three-MUB) bound over states and all set sizes."""
    worst, checks, violations, informative = math.inf, 0, 0, 0
    worst_info: dict = {}
    for k, (state, reg) in enumerate(zip(states, registers)):
        n = len(reg)
        qs = distributions(state, reg, range(n_bases))
        lhs, rhs = worst_case_sets(qs, n)
        margin = rhs - lhs
        checks += margin.size
        violations += int(np.count_nonzero(margin < -1e-9))
        informative += int(np.count_nonzero(rhs < n_bases))
        pos = np.unravel_index(np.argmin(margin), margin.shape)
        if margin[pos] < worst:
            worst = float(margin[pos])
            worst_info = {"state": k, "n": n, "sizes": [int(p) for p in pos],
                          "lhs": float(lhs[pos]), "rhs": float(rhs[pos])}
    return BoundReport(
        name=f"{'two-basis' if n_bases == 2 else 'MUB'} uncertainty sweep over {len(states)} states",
        lhs=worst_info["lhs"],
        rhs=worst_info["rhs"],
        method="exact",
        seed=seed,
        trivial=float(n_bases),
        extra_conditions={"no violations": violations == 0},
        details={"checks": checks, "violations": violations, "informative_checks": informative,
                 "worst_margin": worst, "worst": worst_info},
    )


def random_states(count: int, rng: np.random.Generator, a_sizes=(1, 2, 3, 4), b_sizes=(0, 1, 2)):
    """Haar-random pure states on ``A (x) B``; returns ``(states, registers)`` with ``A`` first."""
    from ..qstate import random_pure_state

    states, registers = [], []
    for _ in range(count):
        na = int(rng.choice(a_sizes))
        nb = int(rng.choice(b_sizes))
        states.append(random_pure_state(na + nb, rng))
        registers.append(list(range(na)))
    return states, registers
