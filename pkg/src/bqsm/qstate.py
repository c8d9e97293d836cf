"""Exact state-vector simulation of small qubit registers.

Qubit ordering is big-endian throughout the package: in a register of ``m``
qubits, basis-vector index ``i`` spells the bits of qubits ``0..m-1`` with
qubit 0 as the most significant bit. Measurement outcomes and outcome
distributions use the same ordering over the measured indices, in the order
the indices are given.

Single-qubit bases are described by unitaries whose columns are the basis
vectors. Measuring in basis ``U`` means projecting onto ``U[:, k]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

from . import bits as _bits
from .bits import CROSS, PLUS
from .errors import InputError

ATOL = 1e-9

_S = 1.0 / np.sqrt(2.0)
IDENTITY = np.eye(2, dtype=complex)
HADAMARD = np.array([[_S, _S], [_S, -_S]], dtype=complex)
# Eigenbasis of Pauli Y: columns (|0> + i|1>)/sqrt2 and (|0> - i|1>)/sqrt2.
Y_BASIS = np.array([[_S, _S], [1j * _S, -1j * _S]], dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_BB84_BASES = {PLUS: IDENTITY, CROSS: HADAMARD}
_MUB_SINGLE = (IDENTITY, HADAMARD, Y_BASIS)


def basis_unitary(basis: int) -> np.ndarray:
    """Unitary whose columns are the ``+`` (0) or ``x`` (1) basis vectors."""
    try:
        return _BB84_BASES[int(basis)]
    except KeyError as exc:
        raise InputError(f"unknown BB84 basis {basis!r}") from exc


@dataclass
class PureState:
    """Normalized state vector of an ``m``-qubit register."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        m = amp.size.bit_length() - 1
        if amp.size == 0 or amp.size != 1 << m:
            raise InputError(f"state length {amp.size} is not a power of two")
        norm = np.vdot(amp, amp).real
        if abs(norm - 1.0) > ATOL:
            raise InputError(f"state is not normalized (|psi|^2 = {norm:.3g})")
        self.amplitudes = amp

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_qubits)

    def density(self) -> "DensityOp":
        return DensityOp(np.outer(self.amplitudes, self.amplitudes.conj()))

    def kron(self, other: "PureState") -> "PureState":
        return PureState(np.kron(self.amplitudes, other.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass
class DensityOp:
    """Density operator of an ``m``-qubit register (``m`` may be 0)."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InputError("density operator must be a square matrix")
        d = mat.shape[0]
        if d == 0 or d & (d - 1):
            raise InputError(f"dimension {d} is not a power of two")
        if not np.allclose(mat, mat.conj().T, atol=ATOL):
            raise InputError("density operator is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > ATOL:
            raise InputError("density operator does not have unit trace")
        if np.linalg.eigvalsh(mat).min() < -ATOL:
            raise InputError("density operator is not positive semidefinite")
        self.matrix = mat

    @property
    def n_qubits(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def maximally_mixed(cls, m: int) -> "DensityOp":
        d = 1 << m
        return cls(np.eye(d, dtype=complex) / d)


State = Union[PureState, DensityOp]


class BellOutcome(enum.Enum):
    """Bell-basis labels with the XOR they predict for sender bases + and x.

    If a pair collapses to a Bell state and both qubits are later measured in
    basis ``r``, the outcomes' XOR is ``xor_for(r)`` with certainty.
    """

    PHI_PLUS = ("Phi+", 0, 0)
    PSI_PLUS = ("Psi+", 1, 0)
    PHI_MINUS = ("Phi-", 0, 1)
    PSI_MINUS = ("Psi-", 1, 1)

    def __init__(self, label, xor_plus, xor_cross):
        self.label = label
        self.xor_plus = xor_plus
        self.xor_cross = xor_cross

    def xor_for(self, basis: int) -> int:
        return self.xor_plus if int(basis) == PLUS else self.xor_cross

    @property
    def vector(self) -> np.ndarray:
        return BELL_VECTORS[_BELL_ORDER.index(self)]


_BELL_ORDER = [BellOutcome.PHI_PLUS, BellOutcome.PSI_PLUS, BellOutcome.PHI_MINUS, BellOutcome.PSI_MINUS]
BELL_VECTORS = np.array(
    [
        [_S, 0, 0, _S],
        [0, _S, _S, 0],
        [_S, 0, 0, -_S],
        [0, _S, -_S, 0],
    ],
    dtype=complex,
)


# -- internal tensor helpers --------------------------------------------------


def _check_indices(indices: Sequence[int], m: int) -> list[int]:
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx):
        raise InputError("measured indices must be distinct")
    if any(i < 0 or i >= m for i in idx):
        raise InputError(f"qubit index out of range for a {m}-qubit register")
    return idx


def _apply_1q(psi: np.ndarray, u: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(u, psi, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def _basis_list(basis, k: int) -> list[np.ndarray]:
    """Per-qubit unitaries from a BasisString, a MUB label, or unitaries."""
    if isinstance(basis, (int, np.integer)) or isinstance(basis, str) and basis in ("Z", "X", "Y"):
        label = {"Z": 0, "X": 1, "Y": 2}.get(basis, basis)
        if label not in (0, 1, 2):
            raise InputError(f"unknown MUB label {basis!r}")
        return [_MUB_SINGLE[label]] * k
    if isinstance(basis, np.ndarray) and basis.ndim == 3:
        return list(basis)
    theta = _bits.bases(basis)
    if len(theta) != k:
        raise InputError(f"basis string has length {len(theta)}, expected {k}")
    return [basis_unitary(t) for t in theta]


def _rotated(psi: np.ndarray, idx: list[int], unitaries: list[np.ndarray]) -> np.ndarray:
    for axis, u in zip(idx, unitaries):
        psi = _apply_1q(psi, u.conj().T, axis)
    return psi


def _sample_index(probs: np.ndarray, rng: np.random.Generator) -> int:
    cdf = np.cumsum(probs)
    k = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    return min(k, probs.size - 1)


# -- state preparation ----------------------------------------------------------


def encode_bb84(x, theta) -> PureState:
    """Product state ``|x_1>_{theta_1} ... |x_n>_{theta_n}``."""
    x = _bits.bits(x)
    theta = _bits.bases(theta)
    if len(x) != len(theta):
        raise InputError(f"|x| = {len(x)} but |theta| = {len(theta)}")
    if len(x) == 0:
        raise InputError("cannot encode an empty string")
    vecs = [basis_unitary(t)[:, int(b)] for b, t in zip(x, theta)]
    return PureState(reduce(np.kron, vecs))


def make_epr_pairs(n: int) -> PureState:
    """``n`` copies of ``(|00> + |11>)/sqrt2``; pair ``i`` on qubits ``2i, 2i+1``."""
    if n < 1:
        raise InputError("need at least one EPR pair")
    return PureState(reduce(np.kron, [BELL_VECTORS[0]] * n))


def basis_state(x) -> PureState:
    """Computational basis vector ``|x>``."""
    x = _bits.bits(x)
    amp = np.zeros(1 << len(x), dtype=complex)
    amp[_bits.to_int(x)] = 1.0
    return PureState(amp)


def random_pure_state(m: int, rng: np.random.Generator) -> PureState:
    """Haar-random pure state on ``m`` qubits."""
    z = rng.normal(size=1 << m) + 1j * rng.normal(size=1 << m)
    return PureState(z / np.linalg.norm(z))


# -- gates and measurement -------------------------------------------------------


def apply_unitary(state: PureState, u: np.ndarray, qubit: int) -> PureState:
    (q,) = _check_indices([qubit], state.n_qubits)
    out = _apply_1q(state.tensor(), np.asarray(u, dtype=complex), q)
    return PureState(out.reshape(-1))


def permute(state: PureState, order: Sequence[int]) -> PureState:
    """Reorder qubits so that new qubit ``j`` is old qubit ``order[j]``."""
    order = _check_indices(order, state.n_qubits)
    if len(order) != state.n_qubits:
        raise InputError("permutation must list every qubit once")
    return PureState(np.transpose(state.tensor(), order).reshape(-1))


def measure(
    state: PureState,
    indices: Sequence[int],
    basis,
    rng: np.random.Generator,
    *,
    discard: bool = False,
) -> tuple[np.ndarray, PureState]:
    """Projectively measure ``indices`` and sample an outcome by the Born rule.

    Parameters
    ----------
    state : PureState
        Register to measure.
    indices : sequence of int
        Qubits to measure, in outcome order.
    basis : BasisString, MUB label, or stack of unitaries
        Basis per measured qubit.
    rng : numpy.random.Generator
        Source of the single uniform draw used for sampling.
    discard : bool, optional
        If true the measured qubits are removed from the returned state.

    Returns
    -------
    outcome : ndarray of uint8
    post_state : PureState
        Renormalized post-measurement state.
    """
    m = state.n_qubits
    idx = _check_indices(indices, m)
    unitaries = _basis_list(basis, len(idx))
    rot = _rotated(state.tensor(), idx, unitaries)
    rest = [a for a in range(m) if a not in idx]
    moved = np.transpose(rot, idx + rest).reshape(1 << len(idx), -1)
    probs = np.sum(np.abs(moved) ** 2, axis=1)
    k = _sample_index(probs, rng)
    outcome = _bits.from_int(k, len(idx))
    branch = moved[k] / np.sqrt(probs[k])
    if discard:
        return outcome, PureState(branch)
    return outcome, _collapse(branch, k, idx, rest, unitaries, m)


def _collapse(branch, k, idx, rest, unitaries, m) -> PureState:
    full = np.zeros((1 << len(idx), branch.size), dtype=complex)
    full[k] = branch
    t = full.reshape((2,) * m)
    t = np.transpose(t, np.argsort(idx + rest))
    for axis, u in zip(idx, unitaries):
        t = _apply_1q(t, u, axis)
    return PureState(t.reshape(-1))


def measure_branches(state: PureState, indices: Sequence[int], basis, *, discard: bool = False, cutoff: float = 1e-14):
    """Every outcome of ``measure`` with its probability and post-state.

    Returns a list of ``(outcome, probability, post_state)``; branches with
    probability below ``cutoff`` are dropped.
    """
    m = state.n_qubits
    idx = _check_indices(indices, m)
    unitaries = _basis_list(basis, len(idx))
    rot = _rotated(state.tensor(), idx, unitaries)
    rest = [a for a in range(m) if a not in idx]
    moved = np.transpose(rot, idx + rest).reshape(1 << len(idx), -1)
    probs = np.sum(np.abs(moved) ** 2, axis=1)
    out = []
    for k in np.flatnonzero(probs > cutoff):
        branch = moved[k] / np.sqrt(probs[k])
        post = PureState(branch) if discard else _collapse(branch, k, idx, rest, unitaries, m)
        out.append((_bits.from_int(int(k), len(idx)), float(probs[k]), post))
    return out


def _bell_frame(state: PureState, pair):
    m = state.n_qubits
    a, b = _check_indices(pair, m)
    rest = [q for q in range(m) if q not in (a, b)]
    moved = np.transpose(state.tensor(), [a, b] + rest).reshape(4, -1)
    amps = BELL_VECTORS.conj() @ moved
    return amps, [a, b], rest


def _bell_collapse(k, branch, ab, rest, m) -> PureState:
    full = np.outer(BELL_VECTORS[k], branch).reshape((2,) * m)
    return PureState(np.transpose(full, np.argsort(ab + rest)).reshape(-1))


def bell_measure(
    state: PureState, pair: tuple[int, int], rng: np.random.Generator, *, discard: bool = False
) -> tuple[BellOutcome, PureState]:
    """Measure two qubits in the Bell basis ``{Phi+, Psi+, Phi-, Psi-}``."""
    amps, ab, rest = _bell_frame(state, pair)
    probs = np.sum(np.abs(amps) ** 2, axis=1)
    k = _sample_index(probs, rng)
    branch = amps[k] / np.sqrt(probs[k])
    if discard:
        return _BELL_ORDER[k], PureState(branch)
    return _BELL_ORDER[k], _bell_collapse(k, branch, ab, rest, state.n_qubits)


def bell_branches(state: PureState, pair: tuple[int, int], *, discard: bool = False, cutoff: float = 1e-14):
    amps, ab, rest = _bell_frame(state, pair)
    probs = np.sum(np.abs(amps) ** 2, axis=1)
    out = []
    for k in np.flatnonzero(probs > cutoff):
        branch = amps[k] / np.sqrt(probs[k])
        post = PureState(branch) if discard else _bell_collapse(k, branch, ab, rest, state.n_qubits)
        out.append((_BELL_ORDER[k], float(probs[k]), post))
    return out


# -- reduced states and distributions -----------------------------------------


def partial_trace(state: State, keep: Iterable[int]) -> DensityOp:
    """Reduced state on ``keep`` (qubits kept in the order given)."""
    m = state.n_qubits
    keep = _check_indices(list(keep), m)
    if not keep:
        raise InputError("partial_trace needs at least one qubit to keep")
    rest = [q for q in range(m) if q not in keep]
    dk = 1 << len(keep)
    if isinstance(state, PureState):
        mat = np.transpose(state.tensor(), keep + rest).reshape(dk, -1)
        return DensityOp(mat @ mat.conj().T)
    t = state.matrix.reshape((2,) * (2 * m))
    perm = keep + rest + [m + q for q in keep] + [m + q for q in rest]
    t = np.transpose(t, perm).reshape(dk, 1 << len(rest), dk, 1 << len(rest))
    return DensityOp(np.trace(t, axis1=1, axis2=3))


def outcome_distribution(state: State, register: Sequence[int] | None = None, basis=0) -> np.ndarray:
    """Distribution ``Q`` of outcomes when ``register`` is measured in ``basis``.

    ``basis`` is a BasisString over the register, a MUB label (0/``"Z"``,
    1/``"X"``, 2/``"Y"``), or a stack of per-qubit unitaries.
    """
    m = state.n_qubits
    reg = list(range(m)) if register is None else _check_indices(register, m)
    unitaries = _basis_list(basis, len(reg))
    if isinstance(state, PureState):
        rot = _rotated(state.tensor(), reg, unitaries)
        rest = [a for a in range(m) if a not in reg]
        moved = np.transpose(rot, reg + rest).reshape(1 << len(reg), -1)
        probs = np.sum(np.abs(moved) ** 2, axis=1)
    else:
        rho = state if len(reg) == m and reg == list(range(m)) else partial_trace(state, reg)
        u = reduce(np.kron, unitaries)
        probs = np.real(np.einsum("ij,jk,ki->i", u.conj().T, rho.matrix, u))
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def mub_bases(m: int) -> list[np.ndarray]:
    """The ``+^m``, ``x^m`` and Pauli-Y eigenbasis tensor powers.

    Each entry is a ``2**m x 2**m`` unitary whose columns are basis vectors.
    Any two of the three bases are mutually unbiased.
    """
    if m < 1:
        raise InputError("need at least one qubit")
    return [reduce(np.kron, [u] * m) for u in _MUB_SINGLE]


def mub_single(label: int) -> np.ndarray:
    return _MUB_SINGLE[label]
