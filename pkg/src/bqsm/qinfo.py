"""Information measures for classical distributions and density operators.

All logarithms are base two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import bits as _bits
from .errors import InputError
from .qstate import DensityOp

RANK_CUTOFF = 1e-9


def _prob_vector(q) -> np.ndarray:
    q = np.asarray(q, dtype=float).reshape(-1)
    if q.size == 0 or np.any(q < -1e-12):
        raise InputError("probabilities must be nonnegative")
    if q.sum() <= 0:
        raise InputError("probability vector is all zero")
    if abs(q.sum() - 1.0) > 1e-9:
        raise InputError(f"probabilities sum to {q.sum():.12g}, not 1")
    return np.clip(q, 0.0, None)


def min_entropy(q) -> float:
    """``-log max_x Q(x)``."""
    q = _prob_vector(q)
    return float(-np.log2(q.max()))


def collision_entropy(q) -> float:
    """Classical Renyi entropy of order two, ``-log sum_x Q(x)^2``."""
    q = _prob_vector(q)
    return float(-np.log2(np.sum(q**2)))


def _as_density(rho) -> DensityOp:
    return rho if isinstance(rho, DensityOp) else DensityOp(np.asarray(rho))


def renyi_entropies(rho) -> tuple[float, float]:
    """``(S0, S2)``: log of the rank and collision entropy of ``rho``."""
    rho = _as_density(rho)
    lam = np.clip(np.linalg.eigvalsh(rho.matrix), 0.0, None)
    rank = int(np.count_nonzero(lam > RANK_CUTOFF))
    s0 = math.log2(rank) if rank else 0.0
    s2 = float(-np.log2(np.sum(lam**2)))
    return s0, s2


def trace_norm(a: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    a = np.asarray(a)
    if a.size == 1:
        return float(abs(a.reshape(-1)[0]))
    return float(np.sum(np.abs(np.linalg.eigvalsh(a))))


def trace_distance(rho, sigma) -> float:
    """``1/2 tr|rho - sigma|``."""
    rho = _as_density(rho)
    sigma = _as_density(sigma)
    if rho.dim != sigma.dim:
        raise InputError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    return 0.5 * trace_norm(rho.matrix - sigma.matrix)


@dataclass
class CqEnsemble:
    """Classical-quantum ensemble ``sum_x P(x) |x><x| (x) rho_x``.

    ``xs`` holds the classical values (ints for a single bit, bit arrays for
    strings), ``probs`` their probabilities, ``rhos`` the conditional states
    as matrices of a common dimension.
    """

    xs: list
    probs: np.ndarray
    rhos: list

    def __post_init__(self):
        self.probs = _prob_vector(self.probs)
        if not (len(self.xs) == len(self.probs) == len(self.rhos)):
            raise InputError("xs, probs and rhos must have equal length")
        self.rhos = [np.asarray(r.matrix if isinstance(r, DensityOp) else r, dtype=complex) for r in self.rhos]
        dims = {r.shape for r in self.rhos}
        if len(dims) != 1:
            raise InputError("all conditional states must share one dimension")

    @property
    def dim(self) -> int:
        return self.rhos[0].shape[0]

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def average(self) -> np.ndarray:
        return sum(p * r for p, r in zip(self.probs, self.rhos))

    def map(self, fn) -> "CqEnsemble":
        """Ensemble of ``fn(x)`` with the same side information."""
        return CqEnsemble([fn(x) for x in self.xs], self.probs, self.rhos)


def dist_from_uniform(e: CqEnsemble) -> float:
    """``d(X|rho)`` for a binary ``X``, built from its defining block matrices.

    Compares ``[{X} (x) rho]`` with ``[{UNIF}] (x) [rho]`` in trace distance.
    """
    d = e.dim
    real = np.zeros((2 * d, 2 * d), dtype=complex)
    for x, p, rho in zip(e.xs, e.probs, e.rhos):
        x = int(x)
        if x not in (0, 1):
            raise InputError("dist_from_uniform is defined here for binary X only")
        real[x * d : (x + 1) * d, x * d : (x + 1) * d] += p * rho
    ideal = np.kron(np.eye(2) / 2, e.average())
    return 0.5 * trace_norm(real - ideal)


def binary_distance(tau0: np.ndarray, tau1: np.ndarray) -> float:
    """``d(X|rho)`` from the unnormalized branches ``tau_b = P(b) rho_b``.

    Equal to :func:`dist_from_uniform` but avoids building the block matrix;
    the analysis code uses it in inner loops.
    """
    return 0.5 * trace_norm(np.asarray(tau0) - np.asarray(tau1))


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise InputError(f"binary entropy needs 0 <= p <= 1, got {p}")
    if p in (0.0, 1.0):
        return 0.0
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


class HammingBall:
    """The set of ``n``-bit strings within ``radius`` of a centre."""

    def __init__(self, n: int, radius: int):
        if not 0 <= radius <= n:
            raise InputError(f"radius must lie in [0, {n}]")
        self.n = n
        self.radius = radius
        self._weights = np.array([math.comb(n, k) for k in range(radius + 1)], dtype=float)
        self.size = sum(math.comb(n, k) for k in range(radius + 1))

    def entropy_bound(self) -> float:
        """``2^{n h(radius/n)}``, an upper bound on the size when radius/n < 1/2."""
        return 2.0 ** (self.n * binary_entropy(self.radius / self.n))

    def contains(self, center, y) -> bool:
        return _bits.hamming_distance(_bits.bits(center), _bits.bits(y)) <= self.radius

    def sample(self, center, rng: np.random.Generator) -> np.ndarray:
        """Uniform sample from the ball around ``center``."""
        center = _bits.bits(center)
        k = int(rng.choice(self.radius + 1, p=self._weights / self._weights.sum()))
        flips = rng.choice(self.n, size=k, replace=False)
        out = center.copy()
        out[flips] ^= 1
        return out


def hamming_ball(n: int, radius: int) -> HammingBall:
    return HammingBall(n, radius)


def log2_ball_size(n: int, radius: int) -> float:
    return math.log2(HammingBall(n, radius).size)


def distribution_mass(q: np.ndarray, members: Sequence[int]) -> float:
    """``Q(L)`` for a set ``L`` of outcome indices."""
    return float(np.sum(np.asarray(q)[list(members)]))
