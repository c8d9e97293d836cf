"""Dishonest receivers and committers with bounded quantum memory.

Receivers keep a subset of their qubits past the memory bound and measure
the rest, or measure pairs in the Bell basis. Committers measure in a fixed
basis and keep a few qubits to open either way. All of them are concrete
members of the bounded-memory adversary classes, not optimal ones: the
analysis checks bounds that hold for every adversary against these.

Strategies are built from short specs such as ``"store_subset:2:cross"`` by
:func:`make_receiver` and :func:`make_committer`.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .bits import CROSS, PLUS
from .errors import ConfigError, InputError
from .hashing import HashFn
from .memmodel import Compression, MemoryBound
from .protocols.parties import (
    Announcement,
    Committer,
    HonestCommitter,
    HonestReceiver,
    OtOutputs,
    PartyView,
    Receiver,
)

_BASIS_NAMES = {"plus": PLUS, "+": PLUS, "0": PLUS, "cross": CROSS, "x": CROSS, "1": CROSS}


def _basis_rule(rule: str):
    if rule == "random":
        return None
    try:
        return _BASIS_NAMES[rule]
    except KeyError as exc:
        raise ConfigError(f"unknown basis rule {rule!r}; use plus, cross or random") from exc


def solve_parity(rows: list, values: list, target: np.ndarray) -> Optional[int]:
    """``target . x`` from known parities ``rows[k] . x = values[k]``, or None.

    Gaussian elimination over GF(2) on the augmented rows.
    """
    width = len(target)
    pivots: list = []
    for row, val in zip(rows, values):
        v = np.append(np.asarray(row, dtype=np.uint8) & 1, np.uint8(val & 1))
        for pv, p in pivots:
            if v[p]:
                v ^= pv
        nz = np.flatnonzero(v[:width])
        if nz.size:
            pivots.append((v, int(nz[0])))
    t = np.append(np.asarray(target, dtype=np.uint8) & 1, np.uint8(0))
    for pv, p in pivots:
        if t[p]:
            t ^= pv
    if np.any(t[:width]):
        return None
    return int(t[width])


def _guess_from_parities(ann: Announcement, rows, values, rng) -> OtOutputs:
    guess = solve_parity(rows, values, ann.f.descriptor)
    if guess is None:
        guess = int(rng.integers(2))
    return OtOutputs(1, ann.e ^ guess)


def _known_parities(view: PartyView, ann: Announcement) -> tuple[list, list]:
    """Single-bit parities for every announced position measured in basis ``r``."""
    known = view.known_bits()
    rows, values = [], []
    for j, i in enumerate(ann.positions):
        if (i, ann.r) in known:
            row = np.zeros(ann.f.n, dtype=np.uint8)
            row[j] = 1
            rows.append(row)
            values.append(known[(i, ann.r)])
    return rows, values


class StoreSubsetReceiver(Receiver):
    """Keeps the first ``q`` qubits, measures the rest in one basis.

    After the announcement it measures the kept qubits in ``r`` and computes
    ``f(x)`` whenever every position in the support of ``f`` is known;
    otherwise it guesses. Extra copies from a weak source are measured in the
    other basis, so a multi-copy position is learned whatever ``r`` is.

    Parameters
    ----------
    q : int
        Qubits kept past the bound.
    basis : {"plus", "cross", "random"}
        Basis for the measured qubits; ``random`` picks one basis per run.
    """

    name = "store_subset"

    def __init__(self, q: int, basis: str = "plus"):
        if q < 0:
            raise InputError("q must be nonnegative")
        self.memory = q
        self.basis_rule = basis
        self._basis = _basis_rule(basis)

    def compression_choices(self, n: int) -> list:
        keep = tuple(range(min(self.memory, n)))
        bases = [PLUS, CROSS] if self._basis is None else [self._basis]
        return [(1.0 / len(bases), Compression(keep=keep, default_basis=beta)) for beta in bases]

    def compression(self, n, slots, rng):
        base = super().compression(n, slots, rng)
        if all(len(s) == 1 for s in slots):
            return base
        keep = tuple(s[0] for s in slots[: self.memory])
        extra = {p: 1 - base.default_basis for s in slots for p in s[1:]}
        self.chosen = Compression(keep=keep, measure=extra, default_basis=base.default_basis)
        return self.chosen

    def on_announce(self, ann: Announcement, view: PartyView, rng) -> OtOutputs:
        view.measure_kept(self.chosen.keep, ann.r, rng)
        rows, values = _known_parities(view, ann)
        return _guess_from_parities(ann, rows, values, rng)

    def describe(self) -> dict:
        return {"name": self.name, "memory": self.memory, "basis": self.basis_rule}


class BellXorAttack(Receiver):
    """Measures pairs of received qubits in the Bell basis.

    A Bell outcome fixes the XOR of the sender's two bits in either basis,
    so against ``e = b xor f(x)`` with a *fixed* linear ``f`` the receiver
    learns ``b`` with certainty. Against a random ``f`` it only learns
    ``f(x)`` when ``f`` is a sum of its pairs.

    Parameters
    ----------
    descriptor : HashFn or bit sequence, optional
        The fixed function to attack; all-ones (plain XOR) by default. Its
        support is split into consecutive pairs.
    q : int
        Memory. With odd support the leftover qubit is stored if ``q >= 1``,
        else measured in a random basis.
    """

    name = "bell_xor"

    def __init__(self, descriptor=None, q: int = 0):
        self.descriptor = descriptor
        self.memory = q

    def _support(self, n: int) -> list:
        if self.descriptor is None:
            return list(range(n))
        f = self.descriptor if isinstance(self.descriptor, HashFn) else HashFn.from_bits(self.descriptor)
        if f.n != n:
            raise InputError(f"attack descriptor has length {f.n}, protocol uses {n}")
        return f.support

    def compression_choices(self, n: int) -> list:
        support = self._support(n)
        pairs = tuple((support[k], support[k + 1]) for k in range(0, len(support) - 1, 2))
        if len(support) % 2 == 0:
            return [(1.0, Compression(bell_pairs=pairs))]
        last = support[-1]
        if self.memory >= 1:
            return [(1.0, Compression(keep=(last,), bell_pairs=pairs))]
        return [(0.5, Compression(bell_pairs=pairs, measure={last: beta})) for beta in (PLUS, CROSS)]

    def on_announce(self, ann: Announcement, view: PartyView, rng) -> OtOutputs:
        view.measure_kept(self.chosen.keep, ann.r, rng)
        rows, values = _known_parities(view, ann)
        index = {i: j for j, i in enumerate(ann.positions)}
        for (a, b), outcome in view.outcome.bell.items():
            if a in index and b in index:
                row = np.zeros(ann.f.n, dtype=np.uint8)
                row[[index[a], index[b]]] = 1
                rows.append(row)
                values.append(outcome.xor_for(ann.r))
        return _guess_from_parities(ann, rows, values, rng)

    def describe(self) -> dict:
        d = None if self.descriptor is None else str(self.descriptor)
        return {"name": self.name, "memory": self.memory, "descriptor": d}


class MeasureAllCommitter(Committer):
    """Measures everything in ``{+, x}_[c]`` whatever it commits to, and echoes the result."""

    name = "measure_all"

    def __init__(self, c: int):
        if c not in (0, 1):
            raise InputError("basis bit must be 0 or 1")
        self.c = c

    def compression(self, b, n, slots, rng):
        return Compression(default_basis=self.c)

    def open_request(self, b_hat, view, rng):
        return view.first_copy_bits()

    def binding_excess(self, n: int) -> float:
        return 0.75**n

    def describe(self) -> dict:
        return {"name": self.name, "memory": 0, "basis": self.c}


class BoundedCommitter(Committer):
    """Keeps ``q`` qubits, measures the rest in ``basis``; measures the kept ones in ``[b_hat]`` when opening."""

    name = "bounded"

    def __init__(self, q: int, basis: int = PLUS):
        if q < 0:
            raise InputError("q must be nonnegative")
        self.memory = q
        self.basis = int(basis)

    def compression(self, b, n, slots, rng):
        keep = tuple(s[0] for s in slots[: self.memory])
        self.keep = keep
        return Compression(keep=keep, default_basis=self.basis)

    def open_request(self, b_hat, view, rng):
        view.measure_kept(self.keep, b_hat, rng)
        return view.first_copy_bits()

    def binding_excess(self, n: int) -> float:
        # opens [basis] with certainty; the other bit fails on each measured,
        # checked position with probability 1/2
        return 0.75 ** (n - min(self.memory, n))

    def describe(self) -> dict:
        return {"name": self.name, "memory": self.memory, "basis": self.basis}


# -- registry -----------------------------------------------------------------


def _parse(spec: str) -> tuple[str, list]:
    name, *params = spec.split(":")
    return name.strip(), [p.strip() for p in params]


def _memory(params: list, idx: int, n: int, gamma: Optional[float]) -> int:
    if len(params) > idx and params[idx] != "":
        try:
            return int(params[idx])
        except ValueError as exc:
            raise ConfigError(f"memory must be an integer, got {params[idx]!r}") from exc
    if gamma is None:
        raise ConfigError("strategy needs a memory size or a gamma")
    return MemoryBound(gamma).q(n)


def make_receiver(spec: str, n: int, gamma: Optional[float] = None):
    """Factory returning a fresh receiver per call.

    Specs: ``honest``, ``store_subset[:q[:plus|cross|random]]``,
    ``measure_all[:plus|cross|random]``, ``store_all``,
    ``bell_xor[:hex descriptor[:q]]``.
    """
    name, params = _parse(spec)
    if name == "honest":
        return HonestReceiver
    if name == "store_subset":
        q = _memory(params, 0, n, gamma)
        basis = params[1] if len(params) > 1 else "plus"
        _basis_rule(basis)
        return lambda: StoreSubsetReceiver(q, basis)
    if name == "measure_all":
        basis = params[0] if params else "plus"
        _basis_rule(basis)
        return lambda: StoreSubsetReceiver(0, basis)
    if name == "store_all":
        return lambda: _named(StoreSubsetReceiver(n, "plus"), "store_all")
    if name == "bell_xor":
        descriptor = HashFn.from_hex(params[0], n) if params and params[0] else None
        q = int(params[1]) if len(params) > 1 else 0
        return lambda: BellXorAttack(descriptor, q)
    raise ConfigError(f"unknown receiver strategy {name!r}")


def make_committer(spec: str, n: int, gamma: Optional[float] = None):
    """Factory returning a fresh committer per call.

    Specs: ``honest``, ``measure_all:c``, ``bounded[:q[:c]]``, ``store_all``.
    """
    name, params = _parse(spec)
    if name == "honest":
        return HonestCommitter
    if name == "measure_all":
        c = _BASIS_NAMES.get(params[0], None) if params else PLUS
        if c is None:
            raise ConfigError(f"measure_all needs a basis bit, got {params[0]!r}")
        return lambda: MeasureAllCommitter(c)
    if name == "bounded":
        q = _memory(params, 0, n, gamma)
        c = _BASIS_NAMES.get(params[1], None) if len(params) > 1 else PLUS
        if c is None:
            raise ConfigError(f"bounded needs a basis bit, got {params[1]!r}")
        return lambda: BoundedCommitter(q, c)
    if name == "store_all":
        return lambda: _named(BoundedCommitter(n, PLUS), "store_all")
    raise ConfigError(f"unknown committer strategy {name!r}")


def _named(party, name: str):
    party.name = name
    return party


RECEIVER_SPECS = ["honest", "store_subset", "measure_all", "store_all", "bell_xor"]
COMMITTER_SPECS = ["honest", "measure_all", "bounded", "store_all"]
