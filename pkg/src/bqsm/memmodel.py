"""Physical assumptions: the weak source, the memory bound, and noisy memories.

The memory bound is the single point in a protocol run where a receiver (or
committer) must reduce its quantum state to at most ``q`` qubits. The
compressions implemented here keep a subset of qubits and measure the rest,
each in ``+``, ``x``, or jointly with a partner in the Bell basis. General
unitary compressions are not enumerated; the analysis checks bounds that hold
for every compression against this family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from . import qstate
from .bits import PLUS
from .errors import InputError, MemoryBoundViolation
from .qstate import DensityOp, PureState
from .register import QuantumRegister


@dataclass(frozen=True)
class WeakModelParams:
    """Channel flip rate ``phi`` and multi-photon rate ``eta`` of the source."""

    phi: float = 0.0
    eta: float = 0.0
    multiplicity: int = 2

    def __post_init__(self):
        if not 0 <= self.phi < 0.5:
            raise InputError(f"phi must lie in [0, 1/2), got {self.phi}")
        if not 0 <= self.eta < 1 - self.phi:
            raise InputError(f"eta must lie in [0, 1 - phi), got {self.eta}")
        if self.multiplicity < 2:
            raise InputError("a weak emission carries at least two copies")


@dataclass(frozen=True)
class MemoryBound:
    """Quantum memory of at most ``floor(gamma * n)`` qubits."""

    gamma: float

    def __post_init__(self):
        if self.gamma < 0:
            raise InputError("gamma must be nonnegative")

    def q(self, n: int) -> int:
        # guard against 0.1 * 30 = 3.0000000000000004 style rounding
        return int(math.floor(self.gamma * n + 1e-9))


@dataclass(frozen=True)
class Compression:
    """Keep ``keep``; Bell-measure ``bell_pairs``; measure every other position.

    Positions index the list of qubits the adversary holds. Positions not
    listed in ``measure`` are measured in ``default_basis``.
    """

    keep: tuple = ()
    measure: dict = field(default_factory=dict)
    bell_pairs: tuple = ()
    default_basis: int = PLUS

    def basis_of(self, pos: int) -> int:
        return int(self.measure.get(pos, self.default_basis))

    def validate(self, held: int, q: int) -> None:
        if len(self.keep) > q:
            raise MemoryBoundViolation(f"strategy keeps {len(self.keep)} qubits but the bound is {q}")
        used = list(self.keep) + [p for pair in self.bell_pairs for p in pair]
        if len(set(used)) != len(used):
            raise InputError("a position is both kept and Bell-measured, or paired twice")
        if any(p < 0 or p >= held for p in used):
            raise InputError("compression refers to a position the adversary does not hold")


@dataclass
class CompressionOutcome:
    """Classical record ``y`` and the retained memory ``M``.

    ``measured`` maps position to outcome bit, ``bell`` maps position pairs to
    Bell outcomes. ``kept`` lists the register labels still held.
    """

    measured: dict
    bell: dict
    kept: list
    memory: Union[PureState, DensityOp, None] = None

    @property
    def y(self) -> np.ndarray:
        return np.array([self.measured[p] for p in sorted(self.measured)], dtype=np.uint8)

    @property
    def n_qubits(self) -> int:
        return len(self.kept)


def apply_memory_bound(
    target: Union[QuantumRegister, PureState],
    compression: Compression,
    q: int,
    rng: np.random.Generator,
    held: Sequence[int] | None = None,
) -> CompressionOutcome:
    """Force the adversary down to at most ``q`` qubits.

    Parameters
    ----------
    target : QuantumRegister or PureState
        Shared register (``held`` lists the adversary's labels) or a state
        held entirely by the adversary.
    compression : Compression
    q : int
        Qubit budget.
    rng : numpy.random.Generator
    held : sequence of int, optional
        Labels held by the adversary, in position order. Required for a
        register.

    Returns
    -------
    CompressionOutcome
        With ``memory`` set to the kept qubits' pure state when ``target`` is
        a PureState.
    """
    own_state = isinstance(target, PureState)
    if own_state:
        register = QuantumRegister()
        held = register.add(target, "adversary")
    else:
        register = target
        if held is None:
            raise InputError("held labels are required when compressing a shared register")
        held = list(held)
    compression.validate(len(held), q)
    measured: dict = {}
    bell: dict = {}
    for a, b in compression.bell_pairs:
        bell[(a, b)] = register.bell_measure(held[a], held[b], rng)
    paired = {p for pair in compression.bell_pairs for p in pair}
    rest = [p for p in range(len(held)) if p not in paired and p not in compression.keep]
    if rest:
        outcome = register.measure([held[p] for p in rest], [compression.basis_of(p) for p in rest], rng)
        measured = {p: int(v) for p, v in zip(rest, outcome)}
    kept = [held[p] for p in compression.keep]
    memory = register.state_of(kept) if own_state and kept else None
    return CompressionOutcome(measured, bell, kept, memory)


# -- weak source and channel noise --------------------------------------------


@dataclass
class Emission:
    """Qubits emitted for one position: one copy, or ``multiplicity`` on a weak event."""

    states: list
    weak: bool


def weak_source_transmit(x_i: int, theta_i: int, params: WeakModelParams, rng: np.random.Generator) -> Emission:
    state = qstate.encode_bb84([x_i], [theta_i])
    if params.eta > 0 and rng.random() < params.eta:
        return Emission([state] * params.multiplicity, True)
    return Emission([state], False)


def channel_noise(register: QuantumRegister, labels: Sequence[int], phi: float, rng: np.random.Generator) -> list[int]:
    """Apply Pauli-Y to each qubit with probability ``phi``; returns the hit labels.

    Y flips the outcome of both the ``+`` and ``x`` measurements, so each
    honest outcome is flipped with probability ``phi`` whatever the basis.
    """
    if phi == 0:
        return []
    hits = [lab for lab in labels if rng.random() < phi]
    for lab in hits:
        register.apply(lab, qstate.PAULI_Y)
    return hits


# -- noisy memory -----------------------------------------------------------


@dataclass
class NoisyMemoryResult:
    state: DensityOp
    survivors: tuple

    @property
    def surviving(self) -> int:
        return len(self.survivors)


def _depolarize_qubit(mat: np.ndarray, m: int, k: int) -> np.ndarray:
    out = np.zeros_like(mat)
    for p in (qstate.IDENTITY, qstate.PAULI_X, qstate.PAULI_Y, qstate.PAULI_Z):
        u = np.kron(np.kron(np.eye(1 << k), p), np.eye(1 << (m - k - 1)))
        out += u @ mat @ u.conj().T
    return out / 4


def depolarize(rho: DensityOp, qubits: Sequence[int]) -> DensityOp:
    """Replace each listed qubit by ``I/2`` (the other qubits' state is kept)."""
    mat = rho.matrix
    for k in qubits:
        mat = _depolarize_qubit(mat, rho.n_qubits, int(k))
    return DensityOp(mat)


def noisy_memory(rho: Union[DensityOp, PureState], kind: str, p: float, rng: np.random.Generator) -> NoisyMemoryResult:
    """Pass each stored qubit through an erasure or depolarizing channel.

    Erasure removes the qubit (traced out, with the position known to the
    holder). Depolarizing replaces it by ``I/2`` and keeps the register size.
    ``survivors`` lists the untouched qubits in both cases.
    """
    if not 0 <= p <= 1:
        raise InputError(f"noise probability must lie in [0, 1], got {p}")
    if isinstance(rho, PureState):
        rho = rho.density()
    m = rho.n_qubits
    hit = rng.random(m) < p
    survivors = tuple(int(i) for i in np.flatnonzero(~hit))
    if kind == "erasure":
        if not survivors:
            return NoisyMemoryResult(DensityOp(np.ones((1, 1))), ())
        if len(survivors) == m:
            return NoisyMemoryResult(rho, survivors)
        return NoisyMemoryResult(qstate.partial_trace(rho, survivors), survivors)
    if kind == "depolarizing":
        return NoisyMemoryResult(depolarize(rho, np.flatnonzero(hit)), survivors)
    raise InputError(f"unknown memory kind {kind!r}; expected 'erasure' or 'depolarizing'")


@dataclass(frozen=True)
class MemoryNoise:
    """Noise acting on stored qubits between the bound and their use.

    ``kind`` is ``"erasure"`` or ``"depolarizing"``; ``p`` is the per-qubit
    probability. The holder learns which qubits were hit.
    """

    kind: str
    p: float

    def __post_init__(self):
        if self.kind not in ("erasure", "depolarizing"):
            raise InputError(f"unknown memory kind {self.kind!r}")
        if not 0 <= self.p <= 1:
            raise InputError("memory noise probability must lie in [0, 1]")

    @classmethod
    def survival(cls, kind: str, s: float) -> "MemoryNoise":
        return cls(kind, 1.0 - s)


_PAULIS = (qstate.IDENTITY, qstate.PAULI_X, qstate.PAULI_Y, qstate.PAULI_Z)


def apply_memory_noise(register: QuantumRegister, labels: Sequence[int], noise: MemoryNoise, rng) -> list:
    """Apply ``noise`` to stored qubits in a shared register; returns the untouched labels.

    An erased qubit is measured and the outcome thrown away, which leaves every
    other party with the partial trace. A depolarized qubit gets a uniformly
    random Pauli, whose average is the replacement by ``I/2``.
    """
    survivors = []
    for lab in labels:
        if rng.random() < noise.p:
            if noise.kind == "erasure":
                register.measure([lab], [PLUS], rng)
            else:
                register.apply(lab, _PAULIS[int(rng.integers(4))])
        else:
            survivors.append(lab)
    return survivors
