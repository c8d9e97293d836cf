"""Ordered record of one protocol execution."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

QUANTUM = "quantum"
CLASSICAL = "classical"
MARKER = "marker"

SIMULATOR = "sim"


@dataclass
class Message:
    step: str
    sender: str
    receiver: str
    kind: str
    payload: dict

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "from": self.sender,
            "to": self.receiver,
            "kind": self.kind,
            "payload": _jsonable(self.payload),
        }


@dataclass
class Transcript:
    """Messages in order, honest outputs, and the memory-bound record.

    ``private`` holds values never sent on the wire (the sender's ``x``,
    the committed bit, ...) so that analysis code can score a run.
    """

    protocol: str
    n: int
    seed: Any = None
    messages: list = field(default_factory=list)
    outputs: dict = field(default_factory=dict)
    accepted: Optional[bool] = None
    memory: dict = field(default_factory=dict)
    private: dict = field(default_factory=dict)
    aborted: bool = False

    def send(self, step, sender, receiver, kind, **payload) -> Message:
        msg = Message(str(step), sender, receiver, kind, payload)
        self.messages.append(msg)
        return msg

    def mark_memory_bound(self, step, party: str, q: int, retained: int) -> None:
        self.memory = {"party": party, "q": q, "retained": retained}
        self.send(step, SIMULATOR, party, MARKER, event="memory-bound", q=q, retained=retained)

    def messages_between(self, sender: str, receiver: str) -> list:
        return [m for m in self.messages if m.sender == sender and m.receiver == receiver]

    def index_of(self, predicate) -> int:
        for i, m in enumerate(self.messages):
            if predicate(m):
                return i
        return -1

    @property
    def bound_index(self) -> int:
        return self.index_of(lambda m: m.kind == MARKER and m.payload.get("event") == "memory-bound")

    def to_dict(self, include_private: bool = False) -> dict:
        out = {
            "protocol": self.protocol,
            "n": self.n,
            "seed": _jsonable(self.seed),
            "messages": [m.to_dict() for m in self.messages],
            "outputs": _jsonable(self.outputs),
            "accepted": self.accepted,
            "memory": _jsonable(self.memory),
            "aborted": self.aborted,
        }
        if include_private:
            out["private"] = _jsonable(self.private)
        return out

    def to_json(self, include_private: bool = False) -> str:
        return json.dumps(self.to_dict(include_private), sort_keys=True)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        if v.dtype == np.uint8:
            return "".join(str(int(b)) for b in v)
        return v.tolist()
    if isinstance(v, np.generic):
        return v.item()
    if hasattr(v, "label"):
        return v.label
    if hasattr(v, "to_hex"):
        return v.to_hex()
    return v
