"""Bit commitment from conjugate coding: plain, EPR, and noise-tolerant versions.

A run returns a :class:`CommitSession`. Its transcript holds the commit phase;
:meth:`CommitSession.open` (or :meth:`CommitSession.verify` with an explicit
opening) appends the opening and the verifier's verdict.

The memory bound applies at the start of the opening phase, so the marker is
recorded at the end of the commit phase.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .. import bits as _bits
from .. import qstate
from ..errors import InputError
from ..memmodel import MemoryNoise, WeakModelParams, apply_memory_bound, apply_memory_noise, channel_noise
from ..register import QuantumRegister
from .parties import Committer, HonestCommitter, PartyView, single_slots
from .transcript import CLASSICAL, MARKER, QUANTUM, SIMULATOR, Transcript

VERIFIER = "verifier"
COMMITTER = "committer"


class CommitSession:
    """Commit-phase state held between commit and open."""

    def __init__(self, t: Transcript, committer: Committer, view: PartyView, checker, rng):
        self.transcript = t
        self.committer = committer
        self.view = view
        self._checker = checker
        self._rng = rng
        self._opened = False

    def committer_opening(self, b_hat: int) -> np.ndarray:
        """The string the committer sends when asked to open ``b_hat``."""
        return np.asarray(self.committer.open_request(int(b_hat), self.view, self._rng), dtype=np.uint8)

    def verify(self, b_hat: int, x_hat) -> bool:
        """Record the opening ``(b_hat, x_hat)`` and return the verifier's verdict."""
        if self._opened:
            raise InputError("a commitment can be opened only once")
        self._opened = True
        x_hat = _bits.bits(x_hat)
        if len(x_hat) != self.transcript.n:
            raise InputError(f"opening has {len(x_hat)} bits, expected {self.transcript.n}")
        t = self.transcript
        t.send("open", SIMULATOR, VERIFIER, MARKER, event="open")
        t.send(4, COMMITTER, VERIFIER, CLASSICAL, b=int(b_hat), x=x_hat)
        accept, info = self._checker(int(b_hat), x_hat)
        t.send(5, VERIFIER, COMMITTER, CLASSICAL, accept=bool(accept))
        t.accepted = bool(accept)
        t.outputs = {"b_hat": int(b_hat), **info}
        return bool(accept)

    def open(self, b_hat: Optional[int] = None) -> bool:
        """Let the committer open ``b_hat`` (default: the committed bit)."""
        b_hat = self.transcript.private["b"] if b_hat is None else b_hat
        return self.verify(b_hat, self.committer_opening(b_hat))


def _commit_phase(t, register, held, slots, committer, b, q, rng, noise) -> PartyView:
    n = len(slots)
    t.send("commit", SIMULATOR, COMMITTER, MARKER, event="commit")
    compression = committer.compression(int(b), n, slots, rng)
    outcome = apply_memory_bound(register, compression, q, rng, held=held)
    survivors = outcome.kept
    if noise is not None and outcome.kept:
        survivors = apply_memory_noise(register, outcome.kept, noise, rng)
    t.mark_memory_bound("bound", COMMITTER, q, len(register.held_by(COMMITTER)))
    if noise is not None:
        t.memory.update(noise=noise.kind, noise_p=noise.p, survivors=len(survivors))
    return PartyView.after(n, slots, held, compression, outcome, register)


def _mismatch_check(x, r, allowed_fraction: float):
    def check(b_hat, x_hat):
        checked = np.flatnonzero(r == b_hat)
        mismatches = int(np.count_nonzero(x[checked] != x_hat[checked]))
        allowed = math.floor(allowed_fraction * len(checked) + 1e-9)
        return mismatches <= allowed, {"checked": len(checked), "mismatches": mismatches, "allowed": allowed}

    return check


def run_comm(
    b: int,
    n: int,
    committer: Optional[Committer] = None,
    rng: Optional[np.random.Generator] = None,
    *,
    q: Optional[int] = None,
    noise: Optional[MemoryNoise] = None,
    seed=None,
) -> CommitSession:
    """Commit to ``b`` on ``n`` BB84 qubits; opening checks positions with ``r_i = [b]``."""
    committer = committer or HonestCommitter()
    rng = rng if rng is not None else np.random.default_rng(seed)
    q = committer.memory if q is None else q
    t = Transcript("comm", n, seed)
    x = _bits.random_bits(n, rng)
    r = _bits.random_bits(n, rng)
    register = QuantumRegister()
    held = [register.add(qstate.encode_bb84([xi], [ri]), COMMITTER)[0] for xi, ri in zip(x, r)]
    t.send(2, VERIFIER, COMMITTER, QUANTUM, qubits=n)
    view = _commit_phase(t, register, held, single_slots(n), committer, b, q, rng, noise)
    t.private = {"b": int(b), "x": x, "r": r}
    return CommitSession(t, committer, view, _mismatch_check(x, r, 0.0), rng)


def run_epr_comm(
    b: int,
    n: int,
    committer: Optional[Committer] = None,
    rng: Optional[np.random.Generator] = None,
    *,
    q: Optional[int] = None,
    noise: Optional[MemoryNoise] = None,
    seed=None,
) -> CommitSession:
    """EPR version: the verifier measures its halves in ``[b_hat]`` only when the opening arrives.

    The checked subset ``I`` includes each index independently with probability 1/2.
    """
    committer = committer or HonestCommitter()
    rng = rng if rng is not None else np.random.default_rng(seed)
    q = committer.memory if q is None else q
    t = Transcript("epr_comm", n, seed)
    register = QuantumRegister()
    kept, held = [], []
    for _ in range(n):
        a_half, b_half = register.add(qstate.make_epr_pairs(1), VERIFIER)
        kept.append(a_half)
        held.append(b_half)
    register.transfer(held, COMMITTER)
    t.send(2, VERIFIER, COMMITTER, QUANTUM, qubits=n)
    view = _commit_phase(t, register, held, single_slots(n), committer, b, q, rng, noise)
    t.private = {"b": int(b)}

    def check(b_hat, x_hat):
        x = register.measure(kept, [b_hat] * n, rng)
        subset = rng.random(n) < 0.5
        mismatches = int(np.count_nonzero(x[subset] != x_hat[subset]))
        t.private.update(x=x, I=np.flatnonzero(subset))
        return mismatches == 0, {"checked": int(subset.sum()), "mismatches": mismatches, "allowed": 0}

    return CommitSession(t, committer, view, check, rng)


def run_comm_prime(
    b: int,
    n: int,
    params: WeakModelParams,
    epsilon: float,
    committer: Optional[Committer] = None,
    rng: Optional[np.random.Generator] = None,
    *,
    q: Optional[int] = None,
    noise: Optional[MemoryNoise] = None,
    seed=None,
) -> CommitSession:
    """Noise-tolerant commitment in the (phi, eta)-weak model.

    Accepts when at most ``floor((phi + epsilon) * m)`` of the ``m`` checked
    positions disagree.
    """
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    committer = committer or HonestCommitter()
    rng = rng if rng is not None else np.random.default_rng(seed)
    q = committer.memory if q is None else q
    t = Transcript("comm_prime", n, seed)
    x = _bits.random_bits(n, rng)
    r = _bits.random_bits(n, rng)
    register = QuantumRegister()
    held, slots = [], []
    honest_channel = not committer.controls_channel
    weak = []
    for i, (xi, ri) in enumerate(zip(x, r)):
        copies = params.multiplicity if params.eta > 0 and rng.random() < params.eta else 1
        if copies > 1:
            weak.append(i)
        labels = [register.add(qstate.encode_bb84([xi], [ri]), COMMITTER)[0] for _ in range(copies)]
        if honest_channel:
            channel_noise(register, labels, params.phi, rng)
        slots.append(list(range(len(held), len(held) + copies)))
        held.extend(labels)
    t.send(2, VERIFIER, COMMITTER, QUANTUM, qubits=len(held), positions=n)
    view = _commit_phase(t, register, held, slots, committer, b, q, rng, noise)
    t.private = {"b": int(b), "x": x, "r": r, "weak": weak}
    return CommitSession(t, committer, view, _mismatch_check(x, r, params.phi + epsilon), rng)


COMMIT_RUNNERS = {
    "comm": run_comm,
    "epr_comm": run_epr_comm,
    "comm_prime": run_comm_prime,
}
