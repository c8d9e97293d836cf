"""Linear codes for syndrome-based reconciliation, and the binary symmetric channel.

A :class:`LinearCode` of length ``l`` is a concatenation of small base blocks
(Hamming(7,4) or repetition codes). Each block is decoded by a coset-leader
table built by brute force, so every claim about correction radius can be
checked exhaustively. When ``l`` is not a multiple of the block length the last
block is shorter: a Hamming block is shortened (missing positions fixed to 0),
a repetition block becomes a shorter repetition code. Either way it gets its
own decoding table and its own, possibly smaller, correction radius.

These codes are far from capacity. :meth:`LinearCode.report` surfaces the
achieved syndrome rate next to the ideal ``h(phi)`` so the gap stays visible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.stats import binom

from . import bits as _bits
from .errors import ConfigError, DecodeFailure, InputError
from .qinfo import binary_entropy

DEFAULT_EPSILON = 0.05


def _hamming7_h() -> np.ndarray:
    # column i (1-based) is the binary expansion of i
    return np.array([[(i >> (2 - row)) & 1 for i in range(1, 8)] for row in range(3)], dtype=np.uint8)


def _repetition_h(r: int) -> np.ndarray:
    h = np.zeros((r - 1, r), dtype=np.uint8)
    h[:, 0] = 1
    h[np.arange(r - 1), np.arange(1, r)] = 1
    return h


BASE_CODES = {
    "hamming7": _hamming7_h,
    "rep3": lambda: _repetition_h(3),
    "rep5": lambda: _repetition_h(5),
    "rep7": lambda: _repetition_h(7),
}
# ordered by syndrome rate, lowest first
SELECTION_ORDER = ["hamming7", "rep3", "rep5", "rep7"]


def gf2_rank(m: np.ndarray) -> int:
    return len(independent_rows(m))


def independent_rows(m: np.ndarray) -> list[int]:
    """Indices of a maximal GF(2)-independent subset of rows, greedy in row order."""
    m = np.asarray(m, dtype=np.uint8) & 1
    basis: list[np.ndarray] = []
    pivots: list[int] = []
    keep = []
    for i, row in enumerate(m):
        v = row.copy()
        for b, p in zip(basis, pivots):
            if v[p]:
                v ^= b
        nz = np.flatnonzero(v)
        if nz.size:
            basis.append(v)
            pivots.append(int(nz[0]))
            keep.append(i)
    return keep


@dataclass(frozen=True)
class BlockDecoder:
    """Syndrome decoding for one block via a minimum-weight coset-leader table.

    ``t`` is the largest weight for which every error pattern is the unique
    minimum-weight leader of its coset. Decoding refuses (DecodeFailure) when
    the coset leader is heavier than ``t``.
    """

    h: np.ndarray
    length: int
    t: int
    leaders: dict = field(repr=False)

    @classmethod
    def build(cls, h: np.ndarray, length: int) -> "BlockDecoder":
        h = np.asarray(h, dtype=np.uint8)[:, :length]
        # shortening can leave zero or dependent rows; drop them
        h = h[independent_rows(h)].reshape(-1, length)
        leaders: dict = {}
        weight_of: dict = {}
        ambiguous: set = set()
        for w in range(length + 1):
            for pos in itertools.combinations(range(length), w):
                e = np.zeros(length, dtype=np.uint8)
                e[list(pos)] = 1
                s = tuple(int(v) for v in (h.astype(np.int64) @ e) % 2)
                if s not in leaders:
                    leaders[s] = e
                    weight_of[s] = w
                elif weight_of[s] == w:
                    ambiguous.add(s)
        # t = largest w such that every pattern of weight <= w is its own unique leader
        t = 0
        for w in range(1, length + 1):
            ok = True
            for pos in itertools.combinations(range(length), w):
                e = np.zeros(length, dtype=np.uint8)
                e[list(pos)] = 1
                s = tuple(int(v) for v in (h.astype(np.int64) @ e) % 2)
                if s in ambiguous or not np.array_equal(leaders[s], e):
                    ok = False
                    break
            if not ok:
                break
            t = w
        return cls(h, length, t, leaders)

    def syndrome(self, x: np.ndarray) -> np.ndarray:
        return ((self.h.astype(np.int64) @ x.astype(np.int64)) % 2).astype(np.uint8)

    def decode(self, noisy: np.ndarray, syn: np.ndarray) -> np.ndarray:
        diff = tuple(int(v) for v in self.syndrome(noisy) ^ syn)
        e = self.leaders.get(diff)
        if e is None or int(e.sum()) > self.t:
            raise DecodeFailure(f"syndrome {diff} has no error pattern within radius {self.t}")
        return noisy ^ e


@lru_cache(maxsize=None)
def _block_decoder(base: str, length: int) -> BlockDecoder:
    if base.startswith("rep"):
        # a short final repetition block is just a shorter repetition code
        return BlockDecoder.build(_repetition_h(length), length)
    return BlockDecoder.build(BASE_CODES[base](), length)


class LinearCode:
    """Block code on ``length`` bits with parity-check matrix ``H`` and syndrome decoder.

    Parameters
    ----------
    length : int
        Code length ``l``.
    base : str
        ``"trivial"`` (no syndrome, no correction) or a key of ``BASE_CODES``.
    """

    def __init__(self, length: int, base: str = "trivial"):
        if length < 0:
            raise InputError("code length must be nonnegative")
        if base != "trivial" and base not in BASE_CODES:
            raise ConfigError(f"unknown code {base!r}; choose from trivial, {', '.join(BASE_CODES)}")
        self.length = length
        self.base = base
        self.blocks: list[tuple[int, BlockDecoder]] = []
        if base != "trivial" and length:
            block = BASE_CODES[base]().shape[1]
            for start in range(0, length, block):
                size = min(block, length - start)
                self.blocks.append((start, _block_decoder(base, size)))

    @property
    def block_length(self) -> int:
        return 0 if self.base == "trivial" else BASE_CODES[self.base]().shape[1]

    @property
    def H(self) -> np.ndarray:
        rows = sum(d.h.shape[0] for _, d in self.blocks)
        h = np.zeros((rows, self.length), dtype=np.uint8)
        r = 0
        for start, d in self.blocks:
            h[r : r + d.h.shape[0], start : start + d.length] = d.h
            r += d.h.shape[0]
        return h

    @property
    def syndrome_length(self) -> int:
        return sum(d.h.shape[0] for _, d in self.blocks)

    @property
    def k(self) -> int:
        return self.length - gf2_rank(self.H) if self.blocks else self.length

    @property
    def t(self) -> int:
        """Correction radius of a full base block (a short final block may correct less)."""
        if not self.blocks:
            return 0
        return _block_decoder(self.base, self.block_length).t

    def _check(self, x) -> np.ndarray:
        x = _bits.bits(x)
        if len(x) != self.length:
            raise InputError(f"code has length {self.length}, got {len(x)} bits")
        return x

    def syndrome(self, x) -> np.ndarray:
        x = self._check(x)
        parts = [d.syndrome(x[s : s + d.length]) for s, d in self.blocks]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint8)

    def reconcile(self, noisy, syn) -> np.ndarray:
        """Word with syndrome ``syn`` nearest to ``noisy`` blockwise, or DecodeFailure."""
        noisy = self._check(noisy)
        syn = _bits.bits(syn)
        if len(syn) != self.syndrome_length:
            raise InputError(f"syndrome has length {len(syn)}, expected {self.syndrome_length}")
        out = noisy.copy()
        r = 0
        for s, d in self.blocks:
            rows = d.h.shape[0]
            out[s : s + d.length] = d.decode(noisy[s : s + d.length], syn[r : r + rows])
            r += rows
        return out

    def for_length(self, length: int) -> "LinearCode":
        return LinearCode(length, self.base)

    def block_failure_prob(self, phi: float) -> float:
        """Upper bound on the decode-failure probability of one full block under BSC(phi)."""
        if not self.blocks:
            return 0.0
        full = _block_decoder(self.base, self.block_length)
        return float(binom.sf(full.t, full.length, phi))

    def failure_bound(self, phi: float) -> float:
        """Union bound over all blocks on the probability that reconciliation fails."""
        return min(1.0, sum(float(binom.sf(d.t, d.length, phi)) for _, d in self.blocks))

    def report(self, phi: float | None = None) -> dict:
        out = {
            "code": self.base,
            "length": self.length,
            "syndrome_length": self.syndrome_length,
            "syndrome_rate": self.syndrome_length / self.length if self.length else 0.0,
            "t_over_block": (self.t / self.block_length) if self.blocks else 0.0,
        }
        if phi is not None:
            out["ideal_syndrome_rate"] = binary_entropy(phi)
            out["ideal_code_rate"] = 1 - binary_entropy(phi)
        return out

    def __repr__(self):
        return f"LinearCode(length={self.length}, base={self.base!r})"


def select_code(length: int, phi: float, epsilon: float = DEFAULT_EPSILON, base: str | None = None) -> LinearCode:
    """Concatenated code with the shortest syndrome whose blocks correct a ``phi + epsilon`` fraction.

    ``phi = 0`` gives the trivial code. With ``base`` given, that block is used
    if it meets the requirement; otherwise a ConfigError is raised.
    """
    if not 0 <= phi < 0.5:
        raise ConfigError(f"phi must lie in [0, 1/2), got {phi}")
    if epsilon <= 0:
        raise ConfigError("epsilon must be positive")
    if phi == 0 and base is None:
        return LinearCode(length, "trivial")
    candidates = [base] if base is not None else SELECTION_ORDER
    for name in candidates:
        if name == "trivial":
            if phi == 0:
                return LinearCode(length, "trivial")
            continue
        if name not in BASE_CODES:
            raise ConfigError(f"unknown code {name!r}")
        full = _block_decoder(name, BASE_CODES[name]().shape[1])
        if full.t / full.length >= phi + epsilon:
            return LinearCode(length, name)
    raise ConfigError(f"no available code corrects a {phi + epsilon:.3f} fraction of errors per block")


def bsc(x, phi: float, rng: np.random.Generator) -> np.ndarray:
    """Flip each bit independently with probability ``phi``."""
    if not 0 <= phi < 0.5:
        raise InputError(f"bsc needs 0 <= phi < 1/2, got {phi}")
    x = _bits.bits(x)
    return x ^ (rng.random(len(x)) < phi).astype(np.uint8)
