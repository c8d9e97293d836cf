"""Party interfaces shared by the OT and commitment runners, plus the honest parties.

Protocol code never asks whether a party is honest. Every receiver or
committer says how it compresses the qubits it holds at the memory bound and
how it reacts to the announcement (or to a request to open). An honest party
is a strategy that measures everything on arrival and keeps nothing.

Measuring on arrival and measuring at the bound give the same statistics,
because nothing reaches the party in between. The runners therefore apply the
compression once, at the bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import bits as _bits
from ..bits import CROSS, PLUS
from ..coding import LinearCode
from ..errors import DecodeFailure
from ..hashing import HashFn
from ..memmodel import Compression, CompressionOutcome
from ..register import QuantumRegister


@dataclass
class Announcement:
    """What the OT sender says after the memory bound."""

    r: int
    f: HashFn
    e: int
    index_set: Optional[tuple] = None
    syn: Optional[np.ndarray] = None

    def well_formed(self, n: int, code: Optional[LinearCode] = None) -> bool:
        if self.r not in (PLUS, CROSS) or self.e not in (0, 1):
            return False
        length = n if self.index_set is None else len(self.index_set)
        if self.index_set is not None and any(not 0 <= i < n for i in self.index_set):
            return False
        if self.f.n != length:
            return False
        if code is not None and self.syn is not None:
            return len(self.syn) == code.for_length(length).syndrome_length
        return True

    @property
    def positions(self) -> tuple:
        """Indices of ``x`` the hash is applied to."""
        return tuple(range(self.f.n)) if self.index_set is None else tuple(self.index_set)


@dataclass
class OtOutputs:
    """Receiver output: flag ``a`` and bit ``b_prime``."""

    a: int
    b_prime: int
    decode_failure: bool = False
    malformed: bool = False


@dataclass
class PartyView:
    """What a receiver or committer holds after the memory bound.

    ``slots[i]`` lists positions (into ``held``) of the copies received for
    index ``i``; there is more than one only after a weak emission.
    ``bases`` maps each measured position to the basis it was measured in.
    """

    n: int
    slots: list
    held: list
    outcome: CompressionOutcome
    register: QuantumRegister
    bases: dict
    code: Optional[LinearCode] = None

    @classmethod
    def after(cls, n, slots, held, compression: Compression, outcome, register, code=None) -> "PartyView":
        bases = {p: compression.basis_of(p) for p in outcome.measured}
        return cls(n, slots, held, outcome, register, bases, code)

    def known_bits(self) -> dict:
        """``{(index, basis): bit}`` for every copy measured so far."""
        known = {}
        for i, copies in enumerate(self.slots):
            for pos in copies:
                if pos in self.outcome.measured:
                    known[(i, self.bases[pos])] = self.outcome.measured[pos]
        return known

    def measure_kept(self, positions, basis: int, rng: np.random.Generator) -> None:
        """Measure still-held positions now and add the results to the record."""
        positions = [p for p in positions if self.held[p] in self.register]
        if not positions:
            return
        out = self.register.measure([self.held[p] for p in positions], [basis] * len(positions), rng)
        for p, v in zip(positions, out):
            self.outcome.measured[p] = int(v)
            self.bases[p] = int(basis)

    def first_copy_bits(self) -> np.ndarray:
        return np.array([self.outcome.measured[c[0]] for c in self.slots], dtype=np.uint8)


def single_slots(n: int) -> list:
    return [[i] for i in range(n)]


class Receiver:
    """OT receiver strategy.

    Subclasses provide :meth:`compression_choices` (a finite mixture, also
    used by the exact analysis) or override :meth:`compression`, and
    :meth:`on_announce`.
    """

    name = "receiver"
    memory = 0
    # a dishonest party may replace the noisy channel by a perfect one
    controls_channel = True

    def compression_choices(self, n: int) -> list:
        raise NotImplementedError

    def compression(self, n: int, slots: list, rng: np.random.Generator) -> Compression:
        choices = self.compression_choices(n)
        weights = np.array([w for w, _ in choices], dtype=float)
        k = int(rng.choice(len(choices), p=weights / weights.sum()))
        self.chosen = choices[k][1]
        return self.chosen

    def on_announce(self, ann: Announcement, view: PartyView, rng: np.random.Generator) -> OtOutputs:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"name": self.name, "memory": self.memory}


class HonestReceiver(Receiver):
    """Measures every received qubit in a random basis ``r'`` and keeps nothing."""

    name = "honest"
    controls_channel = False

    def compression_choices(self, n: int) -> list:
        return [(0.5, Compression(default_basis=PLUS)), (0.5, Compression(default_basis=CROSS))]

    @property
    def r_prime(self) -> int:
        return self.chosen.default_basis

    def on_announce(self, ann: Announcement, view: PartyView, rng: np.random.Generator) -> OtOutputs:
        if not ann.well_formed(view.n, view.code):
            return OtOutputs(int(rng.integers(2)), int(rng.integers(2)), malformed=True)
        if ann.r != self.r_prime:
            return OtOutputs(0, 0)
        x_prime = _bits.restrict(view.first_copy_bits(), ann.positions)
        if ann.syn is not None and view.code is not None:
            try:
                x_prime = view.code.for_length(len(x_prime)).reconcile(x_prime, ann.syn)
            except DecodeFailure:
                return OtOutputs(0, 0, decode_failure=True)
        return OtOutputs(1, ann.e ^ ann.f(x_prime))


class Committer:
    """Committer strategy: a compression for the commit phase and an opening rule."""

    name = "committer"
    memory = 0
    controls_channel = True

    def compression(self, b: int, n: int, slots: list, rng: np.random.Generator) -> Compression:
        raise NotImplementedError

    def open_request(self, b_hat: int, view: PartyView, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def binding_excess(self, n: int) -> float:
        """Closed-form ``p0 + p1 - 1`` of this strategy against the plain protocol."""
        raise NotImplementedError

    def describe(self) -> dict:
        return {"name": self.name, "memory": self.memory}


class HonestCommitter(Committer):
    """Measures everything in ``{+, x}_[b]`` and opens with that string."""

    name = "honest"
    controls_channel = False

    def compression(self, b, n, slots, rng):
        return Compression(default_basis=int(b))

    def open_request(self, b_hat, view, rng):
        return view.first_copy_bits()

    def binding_excess(self, n: int) -> float:
        # opens the committed bit with certainty, the other with (3/4)^n
        return 0.75**n
