"""A shared quantum register stored as a product of independent factors.

Protocol runs hand qubits between parties by label. Qubits that were never
entangled live in separate factors, so BB84 transmissions of a few hundred
qubits stay cheap; factors are merged only when a joint operation (a Bell
measurement, say) needs it. Measured qubits are removed from the register and
their outcome is returned to the caller.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np

from . import qstate
from .errors import InputError
from .qstate import BellOutcome, PureState


class QuantumRegister:
    def __init__(self):
        self._factors: dict[int, tuple[list[int], PureState]] = {}
        self._where: dict[int, int] = {}
        self._owner: dict[int, str] = {}
        self._labels = itertools.count()
        self._fids = itertools.count()

    def __len__(self):
        return len(self._where)

    def __contains__(self, label):
        return label in self._where

    def add(self, state: PureState, owner: str) -> list[int]:
        """Append ``state`` as a new factor; returns its qubit labels."""
        labels = [next(self._labels) for _ in range(state.n_qubits)]
        fid = next(self._fids)
        self._factors[fid] = (labels, state)
        for lab in labels:
            self._where[lab] = fid
            self._owner[lab] = owner
        return labels

    def owner(self, label: int) -> str:
        return self._owner[label]

    def transfer(self, labels: Iterable[int], owner: str) -> None:
        for lab in labels:
            self._require(lab)
            self._owner[lab] = owner

    def held_by(self, owner: str) -> list[int]:
        return sorted(lab for lab in self._where if self._owner[lab] == owner)

    def _require(self, label: int) -> None:
        if label not in self._where:
            raise InputError(f"qubit {label} is not live in the register")

    def _merge(self, labels: Sequence[int]) -> int:
        for lab in labels:
            self._require(lab)
        fids = sorted({self._where[lab] for lab in labels})
        if len(fids) == 1:
            return fids[0]
        keep = fids[0]
        all_labels, state = self._factors[keep]
        all_labels = list(all_labels)
        for fid in fids[1:]:
            other_labels, other = self._factors.pop(fid)
            state = state.kron(other)
            all_labels.extend(other_labels)
            for lab in other_labels:
                self._where[lab] = keep
        self._factors[keep] = (all_labels, state)
        return keep

    def _drop(self, fid: int, labels: list[int], state: PureState, removed: Sequence[int]) -> None:
        for lab in removed:
            del self._where[lab]
            del self._owner[lab]
        remaining = [lab for lab in labels if lab not in set(removed)]
        if remaining:
            self._factors[fid] = (remaining, state)
        else:
            del self._factors[fid]

    def apply(self, label: int, u: np.ndarray) -> None:
        self._require(label)
        fid = self._where[label]
        labels, state = self._factors[fid]
        self._factors[fid] = (labels, qstate.apply_unitary(state, u, labels.index(label)))

    def measure(self, labels: Sequence[int], basis, rng: np.random.Generator) -> np.ndarray:
        """Measure (and consume) ``labels``; outcome bits in the given order."""
        basis = np.broadcast_to(np.asarray(basis, dtype=np.uint8), (len(labels),))
        outcome = np.zeros(len(labels), dtype=np.uint8)
        groups: dict[int, list[int]] = {}
        for pos, lab in enumerate(labels):
            self._require(lab)
            groups.setdefault(self._where[lab], []).append(pos)
        for fid, positions in groups.items():
            flabels, state = self._factors[fid]
            local = [flabels.index(labels[p]) for p in positions]
            bits, post = qstate.measure(state, local, basis[positions], rng, discard=True)
            outcome[positions] = bits
            self._drop(fid, flabels, post, [labels[p] for p in positions])
        return outcome

    def bell_measure(self, a: int, b: int, rng: np.random.Generator) -> BellOutcome:
        fid = self._merge([a, b])
        flabels, state = self._factors[fid]
        outcome, post = qstate.bell_measure(state, (flabels.index(a), flabels.index(b)), rng, discard=True)
        self._drop(fid, flabels, post, [a, b])
        return outcome

    def _joint(self, labels: Sequence[int]) -> tuple[list[int], PureState]:
        for lab in labels:
            self._require(lab)
        joint_labels: list[int] = []
        state = None
        for fid in sorted({self._where[lab] for lab in labels}):
            flabels, fstate = self._factors[fid]
            joint_labels.extend(flabels)
            state = fstate if state is None else state.kron(fstate)
        return joint_labels, state

    def state_of(self, labels: Sequence[int]) -> PureState:
        """Joint pure state of ``labels`` if they form a union of whole factors."""
        joint_labels, state = self._joint(labels)
        if set(joint_labels) != set(labels):
            raise InputError("labels are entangled with qubits outside the requested set")
        return qstate.permute(state, [joint_labels.index(lab) for lab in labels])

    def reduced(self, labels: Sequence[int]) -> qstate.DensityOp:
        """Reduced density operator of ``labels``."""
        joint_labels, state = self._joint(labels)
        return qstate.partial_trace(state, [joint_labels.index(lab) for lab in labels])
