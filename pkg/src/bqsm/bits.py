"""Classical bit strings and BB84 basis strings.

Bit strings are ``numpy.uint8`` arrays of 0/1. Basis strings use the same
representation with ``PLUS = 0`` (rectilinear) and ``CROSS = 1`` (diagonal),
so selecting a basis by a bit ``b`` is the identity map ``b -> b``.

Integer <-> bit-string conversion is big-endian: bit 0 of the array is the
most significant bit. This matches the qubit ordering of state vectors.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InputError

PLUS = 0
CROSS = 1

BitLike = Union[str, Sequence[int], np.ndarray]

_BASIS_SYMBOLS = {"+": PLUS, "x": CROSS, "×": CROSS, "X": CROSS}


def bits(x: BitLike) -> np.ndarray:
    """Coerce ``"0110"``, a list of ints, or an array into a bit array."""
    if isinstance(x, str):
        if not set(x) <= {"0", "1"}:
            raise InputError(f"not a bit string: {x!r}")
        arr = np.fromiter((c == "1" for c in x), dtype=np.uint8, count=len(x))
    else:
        arr = np.asarray(x)
        if arr.ndim != 1:
            raise InputError("bit strings must be one-dimensional")
        if arr.size and not np.all((arr == 0) | (arr == 1)):
            raise InputError("bit strings may only contain 0 and 1")
        arr = arr.astype(np.uint8)
    return arr


def bases(theta: BitLike) -> np.ndarray:
    """Coerce ``"+x+"`` / ``"+×+"`` or a 0/1 sequence into a basis array."""
    if isinstance(theta, str) and not set(theta) <= {"0", "1"}:
        try:
            return np.array([_BASIS_SYMBOLS[c] for c in theta], dtype=np.uint8)
        except KeyError as exc:
            raise InputError(f"unknown basis symbol in {theta!r}") from exc
    return bits(theta)


def basis_for_bit(b: int) -> int:
    """``{+, x}_[b]``: 0 selects the rectilinear basis, 1 the diagonal one."""
    if b not in (0, 1):
        raise InputError(f"basis selector must be a bit, got {b!r}")
    return int(b)


def to_str(x: np.ndarray) -> str:
    return "".join(str(int(v)) for v in x)


def basis_str(theta: np.ndarray) -> str:
    return "".join("+" if int(v) == PLUS else "x" for v in theta)


def to_int(x: np.ndarray) -> int:
    value = 0
    for v in x:
        value = (value << 1) | int(v)
    return value


def from_int(value: int, n: int) -> np.ndarray:
    if value < 0 or value >= 1 << n:
        raise InputError(f"{value} does not fit in {n} bits")
    return np.array([(value >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)


def all_strings(n: int) -> np.ndarray:
    """All ``2**n`` strings as rows of a ``(2**n, n)`` array, in index order."""
    idx = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


def restrict(x: np.ndarray, index_set: Iterable[int]) -> np.ndarray:
    """``x|_I`` for a zero-based index set, keeping the given order."""
    idx = np.fromiter(index_set, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= len(x)):
        raise InputError("restriction index out of range")
    return np.asarray(x)[idx]


def hamming_distance(x: np.ndarray, y: np.ndarray) -> int:
    if len(x) != len(y):
        raise InputError("hamming distance needs equal lengths")
    return int(np.count_nonzero(np.asarray(x) != np.asarray(y)))


def random_bits(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 2, size=n, dtype=np.uint8)
