"""Exact conditioned-state computations for the purified OT protocol.

The sender's side is ``n`` halves of EPR pairs (register ``A``); the receiver
holds the other halves and compresses them. Every compression branch ``y``
leaves a pure state on ``A`` and the kept qubits. Measuring ``A`` in the
announced basis ``r`` gives ``x`` and leaves the receiver with ``rho_x``.

From this the module computes

* the receiver's total advantage on ``b`` (distance of ``f(X)`` from uniform
  given everything it holds), and
* the sender-privacy event ``E``: per branch and basis, ``X`` must land in the
  set of small-probability strings, with the empty event used instead when
  that set carries too little mass.

Erased memory is handled by enumerating the erasure patterns (the receiver
learns which qubits were lost). Depolarized qubits carry the same information
as erased ones, so they give the same distances; only the register size
entering the bound differs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import bits as _bits
from ..errors import InputError
from ..memmodel import Compression, MemoryBound
from ..qstate import HADAMARD, PureState, bell_branches, make_epr_pairs, measure_branches, permute
from .privacy import hash_distances
from .reports import BoundReport
from .uncertainty import default_kappa, pair_bound

MAX_N = 8
MEMORY_KINDS = ("bounded", "erasure", "depolarizing")


@dataclass
class Branch:
    """One compression outcome: probability and amplitudes ``psi[x_A, m]`` in the computational basis."""

    key: tuple
    prob: float
    psi: np.ndarray
    kept: int


def _epr_start(n: int) -> tuple[PureState, list]:
    # qubit 2i is the sender's half of pair i; move all of A to the front
    order = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
    return permute(make_epr_pairs(n), order), list(range(2 * n))


def compression_branches(n: int, comp: Compression, cutoff: float = 1e-13) -> list:
    """All outcomes of ``comp`` applied to the receiver's halves of ``n`` EPR pairs.

    Receiver position ``p`` is label ``n + p``. Bell pairs are measured first,
    then every position neither kept nor paired.
    """
    if not 1 <= n <= MAX_N:
        raise InputError(f"exact branching supports 1 <= n <= {MAX_N}")
    comp.validate(n, len(comp.keep))
    state, labels = _epr_start(n)
    live = [((), 1.0, state, labels)]
    for a, b in comp.bell_pairs:
        nxt = []
        for key, p, st, labs in live:
            pair = (labs.index(n + a), labs.index(n + b))
            rest = [lab for lab in labs if lab not in (n + a, n + b)]
            for outcome, pb, post in bell_branches(st, pair, discard=True, cutoff=cutoff):
                nxt.append((key + (outcome.label,), p * pb, post, rest))
        live = nxt
    paired = {p for pair in comp.bell_pairs for p in pair}
    measured = [p for p in range(n) if p not in paired and p not in comp.keep]
    if measured:
        nxt = []
        for key, p, st, labs in live:
            idx = [labs.index(n + q) for q in measured]
            rest = [lab for lab in labs if lab < n or lab - n not in measured]
            for outcome, pm, post in measure_branches(st, idx, [comp.basis_of(q) for q in measured], discard=True, cutoff=cutoff):
                nxt.append((key + tuple(int(v) for v in outcome), p * pm, post, rest))
        live = nxt
    out = []
    for key, p, st, labs in live:
        order = [labs.index(i) for i in range(n)] + [labs.index(n + q) for q in comp.keep]
        st = permute(st, order) if order != list(range(len(order))) else st
        out.append(Branch(key, p, st.amplitudes.reshape(1 << n, 1 << len(comp.keep)), len(comp.keep)))
    return out


_HN_CACHE: dict = {}


def _hadamard_n(n: int) -> np.ndarray:
    if n not in _HN_CACHE:
        h = np.ones((1, 1))
        for _ in range(n):
            h = np.kron(h, HADAMARD)
        _HN_CACHE[n] = h
    return _HN_CACHE[n]


def in_basis(psi: np.ndarray, r: int, n: int) -> np.ndarray:
    """Amplitudes with ``A`` written in the ``r`` basis (``+`` or ``x``)."""
    return psi if r == 0 else _hadamard_n(n) @ psi


def _erasure_patterns(kept: int, p: float):
    """``(survivor positions, erased positions, weight)`` for every pattern of positive weight."""
    for mask in itertools.product((0, 1), repeat=kept):
        erased = [i for i, m in enumerate(mask) if m]
        w = (p ** len(erased)) * ((1 - p) ** (kept - len(erased)))
        if w > 0:
            yield [i for i, m in enumerate(mask) if not m], erased, w


def _factors(psi_r: np.ndarray, n: int, kept: int, survivors, erased) -> np.ndarray:
    """``G_x`` (survivors x erased) so that the receiver's state given ``x`` is ``G_x G_x^dagger``."""
    t = psi_r.reshape((1 << n,) + (2,) * kept)
    t = np.transpose(t, [0] + [1 + i for i in survivors] + [1 + i for i in erased])
    return t.reshape(1 << n, 1 << len(survivors), 1 << len(erased))


@dataclass
class PrivacyAccount:
    """Accumulated event probability, distance and slack terms."""

    p_event: float = 0.0
    distance: float = 0.0
    pa_slack: float = 0.0
    event_slack: float = 0.0
    total_distance: float = 0.0
    fallbacks: float = 0.0
    branches: int = 0
    max_register: int = 0
    entropy_terms: list = field(default_factory=list)


def analyse(
    n: int,
    choices: list,
    gamma: float,
    kappa: Optional[float] = None,
    memory: str = "bounded",
    p: float = 0.0,
    fixed_hash: Optional[int] = None,
) -> PrivacyAccount:
    """Run the event construction and the exact distances over every branch.

    Parameters
    ----------
    n : int
    choices : list of (weight, Compression)
        The receiver's (possibly randomized) compression.
    gamma, kappa : float
        Memory fraction and the margin used for the small-set threshold.
    memory : {"bounded", "erasure", "depolarizing"}
    p : float
        Per-qubit noise probability for the noisy kinds.
    fixed_hash : int, optional
        Index (big-endian descriptor) of a fixed hash; the total distance is
        then computed for that function alone instead of averaged.
    """
    if memory not in MEMORY_KINDS:
        raise InputError(f"memory must be one of {MEMORY_KINDS}")
    kappa = default_kappa(gamma) if kappa is None else kappa
    thr = 2.0 ** (-(gamma + kappa) * n)
    floor_mass = 2.0 ** (-kappa * n / 2)
    acc = PrivacyAccount()
    for weight, comp in choices:
        for br in compression_branches(n, comp):
            wy = weight * br.prob
            large = []
            fallback = 0
            for r in (0, 1):
                psi_r = in_basis(br.psi, r, n)
                q = np.sum(np.abs(psi_r) ** 2, axis=1)
                small = q <= thr + 1e-15
                large.append(int((~small).sum()))
                mass = float(q[small].sum())
                included = mass >= floor_mass
                fallback += 0 if included else 1
                patterns = _erasure_patterns(br.kept, p) if memory != "bounded" else [(list(range(br.kept)), [], 1.0)]
                for survivors, erased, wp in patterns:
                    g = _factors(psi_r, n, br.kept, survivors, erased)
                    w = wy * wp * 0.5
                    # total advantage, no event
                    dists = hash_distances(q, _normalized(g, q), n)
                    acc.total_distance += w * float(dists.mean() if fixed_hash is None else dists[fixed_hash])
                    if not included:
                        continue
                    cond = np.where(small, q, 0.0) / mass
                    d = float(hash_distances(cond, _normalized(g, q), n).mean())
                    h_min = -math.log2(cond.max())
                    reg = len(survivors) if memory == "erasure" else br.kept
                    acc.max_register = max(acc.max_register, reg)
                    acc.p_event += w * mass
                    acc.distance += w * mass * d
                    acc.pa_slack += w * mass * 0.5 * 2.0 ** (-0.5 * (h_min - reg - 1))
                    acc.entropy_terms.append(h_min)
                acc.branches += 1
            c = pair_bound(n, large[0], large[1]) - 1.0
            acc.event_slack += wy * 0.5 * (c + fallback * floor_mass)
            acc.fallbacks += wy * fallback / 2
    if acc.p_event > 0:
        acc.distance /= acc.p_event
        acc.pa_slack /= acc.p_event
    return acc


def _normalized(g: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Scale each ``G_x`` to unit trace (zero where ``P(x) = 0``)."""
    scale = np.where(q > 1e-300, 1.0 / np.sqrt(np.where(q > 1e-300, q, 1.0)), 0.0)
    return g * scale[:, None, None]


def event_slack_limit(n: int, gamma: float, kappa: float) -> float:
    """Worst event slack allowed by the small-set size limit, for both bases falling back."""
    c_max = (1.0 + 2.0 ** ((gamma + kappa - 0.5) * n)) ** 2 - 1.0
    return 0.5 * (c_max + 2 * 2.0 ** (-kappa * n / 2))


def check_sender_privacy(
    receiver,
    gamma: float,
    n: int,
    *,
    kappa: Optional[float] = None,
    memory: str = "bounded",
    p: float = 0.0,
    name: str = "",
) -> BoundReport:
    """Build the sender-privacy event for ``receiver`` and compare it with the bounds.

    Parameters
    ----------
    receiver : Receiver
        Strategy exposing ``compression_choices(n)`` and ``memory``.
    gamma : float
        Claimed memory fraction; the hypothesis needs ``gamma < 1/2`` and, for
        bounded memory, at most ``floor(gamma n)`` kept qubits.
    n : int
        At most 8.
    memory, p :
        Noisy-memory model applied to the kept qubits.

    Returns
    -------
    BoundReport
        ``lhs`` is the conditioned distance, ``rhs`` the averaged
        privacy-amplification bound; ``P[E] >= 1/2 - event slack`` is a side
        condition.
    """
    kappa = default_kappa(gamma) if kappa is None else kappa
    choices = receiver.compression_choices(n)
    acc = analyse(n, choices, gamma, kappa, memory, p)
    kept = max(len(c.keep) for _, c in choices)
    q_allowed = MemoryBound(gamma).q(n)
    if memory == "bounded":
        memory_ok = kept <= q_allowed
    else:
        # a noisy memory satisfies the hypothesis when the expected survivors fit
        survival = 1.0 - p
        memory_ok = kept * survival <= gamma * n + 1e-9 if memory == "erasure" else kept <= q_allowed
    hypothesis_ok = gamma < 0.5 and memory_ok and gamma + kappa < 0.5
    event_ok = acc.p_event >= 0.5 - acc.event_slack - 1e-9
    return BoundReport(
        name=name or f"sender privacy {receiver.name} n={n} gamma={gamma:.4g} memory={memory}",
        lhs=acc.distance,
        rhs=acc.pa_slack,
        trivial=0.5,
        hypothesis_ok=hypothesis_ok,
        extra_conditions={"P[E] >= 1/2 - slack": event_ok},
        details={
            "p_event": acc.p_event,
            "event_slack": acc.event_slack,
            "event_slack_limit": event_slack_limit(n, gamma, kappa),
            "fallback_mass": acc.fallbacks,
            "total_distance": acc.total_distance,
            "kappa": kappa,
            "kept": kept,
            "q_allowed": q_allowed,
            "memory": memory,
            "noise_p": p,
            "branches": acc.branches,
            "min_entropy_min": min(acc.entropy_terms) if acc.entropy_terms else None,
        },
    )


def total_distance(receiver, n: int, fixed_hash=None) -> float:
    """Receiver's exact advantage ``d(B | view)`` in the purified protocol.

    Its best guess of ``b`` succeeds with probability ``1/2 + d``. The hash is
    random unless ``fixed_hash`` (a HashFn) is given.
    """
    index = None if fixed_hash is None else _bits.to_int(fixed_hash.r)
    acc = analyse(n, receiver.compression_choices(n), gamma=0.0, fixed_hash=index)
    return acc.total_distance


def sender_state_distance(n: int, choices_by_bit: dict) -> float:
    """Trace distance between the ``A`` states left by two behaviours of the other party.

    ``choices_by_bit`` maps a bit to the compression used by the honest
    receiver (basis ``r'``) or committer (basis ``[b]``). Averaging over
    outcomes leaves ``A`` in a state that must not depend on the bit.
    """
    from ..qinfo import trace_distance

    rhos = []
    for bit in sorted(choices_by_bit):
        rho = np.zeros((1 << n, 1 << n), dtype=complex)
        for br in compression_branches(n, choices_by_bit[bit]):
            rho += br.prob * (br.psi @ br.psi.conj().T)
        rhos.append(rho)
    return trace_distance(rhos[0], rhos[1])


def receiver_privacy_distance(n: int) -> float:
    """Distance between the sender's states when the honest receiver measures in ``+`` versus ``x``."""
    return sender_state_distance(n, {0: Compression(default_basis=0), 1: Compression(default_basis=1)})


def hiding_distance(n: int) -> float:
    """Distance between the verifier's states when the honest committer commits to 0 versus 1."""
    return sender_state_distance(n, {b: Compression(default_basis=b) for b in (0, 1)})
