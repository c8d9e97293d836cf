"""Rabin oblivious transfer: the plain and EPR versions, noiseless and BB84.

Each runner plays the honest sender against a :class:`Receiver` strategy and
returns a :class:`Transcript`. The receiver never sends anything, and the
memory-bound marker is always recorded before the sender's announcement.

Steps are labelled by their position in the protocol; ``"bound"`` is the
memory-bound event, which sits between the quantum transmission and the
announcement.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .. import bits as _bits
from .. import qstate
from ..coding import LinearCode
from ..hashing import HashFn, sample_hash
from ..memmodel import (
    MemoryNoise,
    WeakModelParams,
    apply_memory_bound,
    apply_memory_noise,
    channel_noise,
    weak_source_transmit,
)
from ..register import QuantumRegister
from .parties import Announcement, HonestReceiver, PartyView, Receiver, single_slots
from .transcript import CLASSICAL, QUANTUM, Transcript

SENDER = "alice"
RECEIVER = "bob"


def _hash_for(length: int, rng: np.random.Generator, fixed: Optional[HashFn]) -> HashFn:
    if fixed is not None:
        if fixed.n != length:
            raise ValueError(f"fixed hash has length {fixed.n}, announcement needs {length}")
        return fixed
    if length == 0:
        # an empty index set leaves nothing to hash; f is the empty function
        return HashFn(0, ())
    return sample_hash(length, rng)


def _bound_and_view(t, register, held, slots, receiver, q, rng, noise, code=None) -> PartyView:
    n = len(slots)
    compression = receiver.compression(n, slots, rng)
    outcome = apply_memory_bound(register, compression, q, rng, held=held)
    survivors = outcome.kept
    if noise is not None and outcome.kept:
        survivors = apply_memory_noise(register, outcome.kept, noise, rng)
    retained = len(register.held_by(RECEIVER))
    t.mark_memory_bound("bound", RECEIVER, q, retained)
    if noise is not None:
        t.memory.update(noise=noise.kind, noise_p=noise.p, survivors=len(survivors))
    return PartyView.after(n, slots, held, compression, outcome, register, code)


def _finish(t: Transcript, receiver: Receiver, ann: Announcement, view: PartyView, rng) -> Transcript:
    out = receiver.on_announce(ann, view, rng)
    t.outputs = {"a": int(out.a), "b_prime": int(out.b_prime)}
    if out.decode_failure:
        t.outputs["decode_failure"] = True
    t.aborted = out.malformed
    # anything still held after the protocol ends is dropped with the simulator
    return t


def run_qot(
    b: int,
    n: int,
    receiver: Optional[Receiver] = None,
    rng: Optional[np.random.Generator] = None,
    *,
    q: Optional[int] = None,
    fixed_hash: Optional[HashFn] = None,
    noise: Optional[MemoryNoise] = None,
    seed=None,
) -> Transcript:
    """Rabin OT of bit ``b`` with ``n`` qubits encoded in one random basis.

    Parameters
    ----------
    b : int
        Sender's bit.
    n : int
        Number of qubits.
    receiver : Receiver, optional
        Receiver strategy; honest by default.
    rng : numpy.random.Generator, optional
    q : int, optional
        Memory bound in qubits; defaults to the strategy's declared memory.
    fixed_hash : HashFn, optional
        Use this function instead of a random one. With the all-ones
        descriptor this is the insecure XOR variant.
    noise : MemoryNoise, optional
        Noise on the receiver's stored qubits after the bound.
    seed : optional
        Recorded in the transcript for replay.
    """
    receiver = receiver or HonestReceiver()
    rng = rng if rng is not None else np.random.default_rng(seed)
    q = receiver.memory if q is None else q
    t = Transcript("qot", n, seed)
    x = _bits.random_bits(n, rng)
    r = int(rng.integers(2))
    register = QuantumRegister()
    held = [register.add(qstate.encode_bb84([xi], [r]), RECEIVER)[0] for xi in x]
    t.send(2, SENDER, RECEIVER, QUANTUM, qubits=n)
    view = _bound_and_view(t, register, held, single_slots(n), receiver, q, rng, noise)
    f = _hash_for(n, rng, fixed_hash)
    e = int(b) ^ f(x)
    t.send(4, SENDER, RECEIVER, CLASSICAL, r=_bits.basis_str([r]), f=f.to_hex(), e=e)
    t.private = {"b": int(b), "x": x, "r": r, "f": f}
    return _finish(t, receiver, Announcement(r, f, e), view, rng)


def run_epr_qot(
    b: int,
    n: int,
    receiver: Optional[Receiver] = None,
    rng: Optional[np.random.Generator] = None,
    *,
    q: Optional[int] = None,
    fixed_hash: Optional[HashFn] = None,
    noise: Optional[MemoryNoise] = None,
    seed=None,
) -> Transcript:
    """EPR version: the sender keeps one half of each pair and measures it after the bound."""
    receiver = receiver or HonestReceiver()
    rng = rng if rng is not None else np.random.default_rng(seed)
    q = receiver.memory if q is None else q
    t = Transcript("epr_qot", n, seed)
    register = QuantumRegister()
    kept, held = [], []
    for _ in range(n):
        a_half, b_half = register.add(qstate.make_epr_pairs(1), SENDER)
        kept.append(a_half)
        held.append(b_half)
    register.transfer(held, RECEIVER)
    t.send(2, SENDER, RECEIVER, QUANTUM, qubits=n)
    view = _bound_and_view(t, register, held, single_slots(n), receiver, q, rng, noise)
    r = int(rng.integers(2))
    x = register.measure(kept, [r] * n, rng)
    f = _hash_for(n, rng, fixed_hash)
    e = int(b) ^ f(x)
    t.send(4, SENDER, RECEIVER, CLASSICAL, r=_bits.basis_str([r]), f=f.to_hex(), e=e)
    t.private = {"b": int(b), "x": x, "r": r, "f": f}
    return _finish(t, receiver, Announcement(r, f, e), view, rng)


def _transmit_weak(register, x, theta, params, rng, honest_channel):
    held, slots, weak = [], [], []
    for i, (xi, ti) in enumerate(zip(x, theta)):
        emission = weak_source_transmit(int(xi), int(ti), params, rng)
        labels = [register.add(s, RECEIVER)[0] for s in emission.states]
        if honest_channel:
            channel_noise(register, labels, params.phi, rng)
        slots.append(list(range(len(held), len(held) + len(labels))))
        held.extend(labels)
        if emission.weak:
            weak.append(i)
    return held, slots, weak


def run_bb84_qot(
    b: int,
    n: int,
    params: WeakModelParams,
    code: LinearCode,
    receiver: Optional[Receiver] = None,
    rng: Optional[np.random.Generator] = None,
    *,
    q: Optional[int] = None,
    noise: Optional[MemoryNoise] = None,
    seed=None,
) -> Transcript:
    """BB84 version in the (phi, eta)-weak model with syndrome reconciliation.

    ``code`` fixes the block family; the code actually used has length
    ``|I|`` and is obtained with ``code.for_length``.
    """
    receiver = receiver or HonestReceiver()
    rng = rng if rng is not None else np.random.default_rng(seed)
    q = receiver.memory if q is None else q
    t = Transcript("bb84_qot", n, seed)
    x = _bits.random_bits(n, rng)
    theta = _bits.random_bits(n, rng)
    register = QuantumRegister()
    held, slots, weak = _transmit_weak(register, x, theta, params, rng, not receiver.controls_channel)
    t.send(2, SENDER, RECEIVER, QUANTUM, qubits=len(held), positions=n)
    view = _bound_and_view(t, register, held, slots, receiver, q, rng, noise, code)
    r = int(rng.integers(2))
    index_set = tuple(int(i) for i in np.flatnonzero(theta == r))
    x_i = _bits.restrict(x, index_set)
    syn = code.for_length(len(index_set)).syndrome(x_i)
    f = _hash_for(len(index_set), rng, None)
    e = int(b) ^ f(x_i)
    t.send(4, SENDER, RECEIVER, CLASSICAL, r=_bits.basis_str([r]), I=list(index_set), syn=syn, f=f.to_hex(), e=e)
    t.private = {"b": int(b), "x": x, "theta": theta, "r": r, "f": f, "weak": weak}
    return _finish(t, receiver, Announcement(r, f, e, index_set, syn), view, rng)


def run_bb84_epr_qot(
    b: int,
    n: int,
    params: WeakModelParams,
    code: LinearCode,
    receiver: Optional[Receiver] = None,
    rng: Optional[np.random.Generator] = None,
    *,
    q: Optional[int] = None,
    noise: Optional[MemoryNoise] = None,
    seed=None,
) -> Transcript:
    """Purified BB84 version; the sender imitates the weak source itself.

    Non-weak positions carry one half of an EPR pair. After the bound the
    sender draws ``J`` (each non-weak index with probability 1/2), measures
    the pairs in ``J`` in basis ``r``, and announces ``I = J + I'_r``.
    """
    receiver = receiver or HonestReceiver()
    rng = rng if rng is not None else np.random.default_rng(seed)
    q = receiver.memory if q is None else q
    t = Transcript("bb84_epr_qot", n, seed)
    register = QuantumRegister()
    honest_channel = not receiver.controls_channel
    kept: dict = {}
    weak_x: dict = {}
    weak_basis: dict = {0: [], 1: []}
    held, slots = [], []
    for i in range(n):
        if params.eta > 0 and rng.random() < params.eta:
            theta_i = int(rng.integers(2))
            weak_x[i] = int(rng.integers(2))
            weak_basis[theta_i].append(i)
            state = qstate.encode_bb84([weak_x[i]], [theta_i])
            labels = [register.add(state, RECEIVER)[0] for _ in range(params.multiplicity)]
        else:
            a_half, b_half = register.add(qstate.make_epr_pairs(1), SENDER)
            register.transfer([b_half], RECEIVER)
            kept[i] = a_half
            labels = [b_half]
        if honest_channel:
            channel_noise(register, labels, params.phi, rng)
        slots.append(list(range(len(held), len(held) + len(labels))))
        held.extend(labels)
    t.send(2, SENDER, RECEIVER, QUANTUM, qubits=len(held), positions=n)
    view = _bound_and_view(t, register, held, slots, receiver, q, rng, noise, code)
    j_set = [i for i in sorted(kept) if rng.random() < 0.5]
    r = int(rng.integers(2))
    x = np.zeros(n, dtype=np.uint8)
    if j_set:
        x[j_set] = register.measure([kept[i] for i in j_set], [r] * len(j_set), rng)
    for i, v in weak_x.items():
        x[i] = v
    index_set = tuple(sorted(j_set + weak_basis[r]))
    x_i = _bits.restrict(x, index_set)
    syn = code.for_length(len(index_set)).syndrome(x_i)
    f = _hash_for(len(index_set), rng, None)
    e = int(b) ^ f(x_i)
    t.send(4, SENDER, RECEIVER, CLASSICAL, r=_bits.basis_str([r]), I=list(index_set), syn=syn, f=f.to_hex(), e=e)
    t.private = {"b": int(b), "x": x, "r": r, "f": f, "J": j_set, "weak": sorted(weak_x)}
    return _finish(t, receiver, Announcement(r, f, e, index_set, syn), view, rng)


OT_RUNNERS = {
    "qot": run_qot,
    "epr_qot": run_epr_qot,
    "bb84_qot": run_bb84_qot,
    "bb84_epr_qot": run_bb84_epr_qot,
}
