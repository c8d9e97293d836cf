"""Inner-product hashing ``f_r(x) = r . x`` over GF(2).

The family of all ``2**n`` descriptors is two-universal: for ``x != y`` exactly
half the descriptors satisfy ``r . (x xor y) = 0``. The zero descriptor stays
in the family; it is the reason a perfectly hidden ``x`` still leaves a
``2**-(n+1)`` distance from uniform.

A *fixed* linear function is insecure against a receiver who measures pairs in
the Bell basis (see :mod:`bqsm.adversary`). Security needs ``r`` drawn at
random and announced only after the memory bound has been applied.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import bits as _bits
from .analysis.reports import BoundReport
from .errors import InputError

EXHAUSTIVE_MAX_N = 8
MAX_N = 12


@dataclass(frozen=True)
class HashFn:
    """Member ``f_r`` of the inner-product family on ``n`` bits."""

    n: int
    r: tuple

    def __post_init__(self):
        r = tuple(int(v) for v in _bits.bits(np.asarray(self.r)))
        # n = 0 is the empty function, used when an announced index set is empty
        if len(r) != self.n or self.n < 0:
            raise InputError(f"descriptor length {len(r)} does not match n={self.n}")
        object.__setattr__(self, "r", r)

    @classmethod
    def from_bits(cls, r) -> "HashFn":
        r = _bits.bits(r)
        return cls(len(r), tuple(int(v) for v in r))

    def __call__(self, x) -> int:
        return eval_hash(self, x)

    @property
    def descriptor(self) -> np.ndarray:
        return np.array(self.r, dtype=np.uint8)

    @property
    def support(self) -> list[int]:
        return [i for i, v in enumerate(self.r) if v]

    def to_hex(self) -> str:
        """Big-endian hex of the descriptor, zero-padded to ``ceil(n/4)`` digits."""
        width = (self.n + 3) // 4
        return format(_bits.to_int(self.r), f"0{width}x")

    @classmethod
    def from_hex(cls, text: str, n: int) -> "HashFn":
        value = int(text, 16)
        return cls.from_bits(_bits.from_int(value, n))


def eval_hash(f: HashFn, x) -> int:
    x = _bits.bits(x)
    if len(x) != f.n:
        raise InputError(f"hash expects {f.n} bits, got {len(x)}")
    return int(np.dot(f.descriptor.astype(np.int64), x.astype(np.int64)) & 1)


def sample_hash(n: int, rng: np.random.Generator) -> HashFn:
    """Uniform member of the family (the zero descriptor included)."""
    if n < 1:
        raise InputError("hash input length must be at least 1")
    return HashFn.from_bits(_bits.random_bits(n, rng))


def all_hashes(n: int) -> list[HashFn]:
    return [HashFn.from_bits(r) for r in _bits.all_strings(n)]


def hash_table(n: int) -> np.ndarray:
    """``table[r, x] = f_r(x)`` for all descriptors and inputs, as uint8."""
    s = _bits.all_strings(n).astype(np.int64)
    return ((s @ s.T) & 1).astype(np.uint8)


def collision_counts(n: int, pairs) -> np.ndarray:
    """Number of descriptors with ``f(x) = f(y)`` for each ``(x, y)`` index pair."""
    descriptors = _bits.all_strings(n).astype(np.int64)
    out = []
    for x, y in pairs:
        diff = (_bits.from_int(x, n) ^ _bits.from_int(y, n)).astype(np.int64)
        out.append(int(np.count_nonzero((descriptors @ diff) % 2 == 0)))
    return np.array(out, dtype=np.int64)


def verify_two_universal(n: int, *, samples: int = 4096, seed: int = 0) -> BoundReport:
    """Check that no pair ``x != y`` collides under more than half the family.

    Exhaustive over all pairs for ``n <= 8``; above that a seeded sample of
    ``samples`` distinct pairs is checked (every descriptor is still counted).
    """
    if not 1 <= n <= MAX_N:
        raise InputError(f"verify_two_universal supports 1 <= n <= {MAX_N}")
    size = 1 << n
    if n <= EXHAUSTIVE_MAX_N:
        pairs = list(itertools.combinations(range(size), 2))
        method = "exact"
    else:
        rng = np.random.default_rng(seed)
        xs = rng.integers(0, size, samples)
        ys = (xs + rng.integers(1, size, samples)) % size
        pairs = list(zip(xs.tolist(), ys.tolist()))
        method = "sampled"
    counts = collision_counts(n, pairs)
    worst = int(counts.max())
    return BoundReport(
        name=f"two-universal n={n}",
        lhs=worst,
        rhs=size / 2,
        method=method,
        tolerance=0.0,
        seed=None if method == "exact" else seed,
        details={
            "pairs": len(pairs),
            "min_count": int(counts.min()),
            "max_count": worst,
            "all_exactly_half": bool(np.all(counts == size // 2)),
        },
    )
