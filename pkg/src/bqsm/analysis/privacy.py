"""Privacy amplification and Hamming-ball guessing against quantum side information.

Ensembles are :class:`bqsm.qinfo.CqEnsemble` objects whose classical values
are ``n``-bit strings. The hash family is the inner-product family of
:mod:`bqsm.hashing`, averaged over all ``2**n`` descriptors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Optional, Sequence

import numpy as np

from .. import bits as _bits
from ..errors import InputError
from ..qinfo import CqEnsemble, HammingBall, min_entropy, renyi_entropies
from ..qstate import basis_unitary
from .reports import BoundReport

MAX_N = 8


def sign_matrix(n: int) -> np.ndarray:
    """``S[f, x] = (-1)^{f . x}`` over all descriptors and inputs."""
    s = _bits.all_strings(n).astype(np.int64)
    return 1.0 - 2.0 * ((s @ s.T) & 1)


def hash_distances(weights: np.ndarray, factors: np.ndarray, n: int) -> np.ndarray:
    """``d(f(X) | rho)`` for every descriptor ``f`` at once.

    Parameters
    ----------
    weights : ndarray, shape (2**n,)
        ``P(x)``; entries may sum to less than one (sub-normalized branch).
    factors : ndarray, shape (2**n, d, k)
        ``G_x`` with ``rho_x = G_x G_x^dagger`` (trace one, or zero when
        ``P(x) = 0``).
    n : int

    Returns
    -------
    ndarray, shape (2**n,)
        ``1/2 || sum_x (-1)^{f.x} P(x) rho_x ||_1`` per descriptor.
    """
    s = sign_matrix(n) * weights[None, :]
    diff = np.einsum("fx,xik,xjk->fij", s, factors, factors.conj())
    if diff.shape[1] == 1:
        return 0.5 * np.abs(diff[:, 0, 0].real)
    lam = np.linalg.eigvalsh(diff)
    return 0.5 * np.abs(lam).sum(axis=1)


def _factors(e: CqEnsemble) -> np.ndarray:
    """Square-root factors of the conditional states, via eigendecomposition."""
    lam, vec = np.linalg.eigh(np.stack(e.rhos))
    return vec * np.sqrt(np.clip(lam, 0.0, None))[:, None, :]


def _full_table(e: CqEnsemble) -> tuple[int, np.ndarray, np.ndarray]:
    """Ensemble laid out over all of ``{0,1}^n`` (absent strings get weight 0)."""
    lengths = {len(_bits.bits(x)) for x in e.xs}
    if len(lengths) != 1:
        raise InputError("all classical values must have the same length")
    (n,) = lengths
    if not 1 <= n <= MAX_N:
        raise InputError(f"exact hashing needs 1 <= n <= {MAX_N}")
    weights = np.zeros(1 << n)
    factors = np.zeros((1 << n, e.dim, e.dim), dtype=complex)
    fac = _factors(e)
    for x, p, g in zip(e.xs, e.probs, fac):
        i = _bits.to_int(_bits.bits(x))
        if weights[i] > 0:
            raise InputError("classical values must be distinct")
        weights[i] = p
        factors[i] = g
    return n, weights, factors


def pa_distance(e: CqEnsemble) -> float:
    """``d(F(X) | F, rho)`` averaged over the whole inner-product family."""
    n, weights, factors = _full_table(e)
    return float(hash_distances(weights, factors, n).mean())


def cq_collision_entropy(e: CqEnsemble) -> float:
    """``S2`` of the block-diagonal state ``sum_x P(x)|x><x| (x) rho_x``."""
    purity = sum(p**2 * float(np.real(np.trace(r @ r))) for p, r in zip(e.probs, e.rhos))
    return -math.log2(purity)


def pa_bounds(e: CqEnsemble, q: Optional[float] = None) -> tuple[float, float]:
    """The Renyi-entropy bound and the min-entropy/qubit-count bound."""
    s0 = renyi_entropies(e.average())[0]
    q = e.n_qubits if q is None else q
    rhs1 = 0.5 * 2.0 ** (-0.5 * (cq_collision_entropy(e) - s0 - 1))
    rhs2 = 0.5 * 2.0 ** (-0.5 * (min_entropy(e.probs) - q - 1))
    return rhs1, rhs2


def check_pa_bound(e: CqEnsemble, q: Optional[float] = None, name: str = "") -> BoundReport:
    """Exact average hash distance against both privacy-amplification bounds.

    ``lhs <= rhs2`` is the headline comparison; ``lhs <= rhs1`` and
    ``rhs1 <= rhs2`` are side conditions.
    """
    lhs = pa_distance(e)
    rhs1, rhs2 = pa_bounds(e, q)
    tol = 1e-9
    return BoundReport(
        name=name or f"privacy amplification n={len(_bits.bits(e.xs[0]))} q={e.n_qubits if q is None else q}",
        lhs=lhs,
        rhs=rhs2,
        trivial=0.5,
        extra_conditions={"lhs <= renyi bound": lhs <= rhs1 + tol, "renyi bound <= min-entropy bound": rhs1 <= rhs2 + tol},
        details={"renyi_bound": rhs1, "min_entropy": min_entropy(e.probs)},
    )


# -- ensemble builders ------------------------------------------------------------


def bb84_ensemble(n: int, stored: dict, probs: Optional[np.ndarray] = None) -> CqEnsemble:
    """``X`` on ``n`` bits with the positions in ``stored`` held as BB84 qubits.

    ``stored`` maps position to encoding basis; an empty dict gives a
    trivial one-dimensional side register.
    """
    xs = _bits.all_strings(n)
    probs = np.full(1 << n, 1.0 / (1 << n)) if probs is None else np.asarray(probs, dtype=float)
    rhos = []
    for x in xs:
        if not stored:
            rhos.append(np.ones((1, 1)))
            continue
        vecs = [basis_unitary(t)[:, int(x[p])] for p, t in sorted(stored.items())]
        v = reduce(np.kron, vecs)
        rhos.append(np.outer(v, v.conj()))
    keep = probs > 0
    return CqEnsemble([x for x, k in zip(xs, keep) if k], probs[keep], [r for r, k in zip(rhos, keep) if k])


def random_ensemble(n: int, q: int, rng: np.random.Generator, rank: int = 1, support: Optional[int] = None) -> CqEnsemble:
    """Random ``X`` distribution (Dirichlet weights) with random rank-``rank`` states on ``q`` qubits.

    ``support`` limits ``X`` to that many strings, which lowers its min-entropy.
    """
    size = 1 << n
    members = np.sort(rng.choice(size, size=support or size, replace=False))
    w = rng.dirichlet(np.full(len(members), 0.5))
    d = 1 << q
    rhos = []
    for _ in members:
        g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
        rho = g @ g.conj().T
        rhos.append(rho / np.trace(rho).real)
    xs = [_bits.from_int(int(i), n) for i in members]
    return CqEnsemble(xs, w, rhos)


# -- Hamming-ball guessing ----------------------------------------------------------


@dataclass
class Guesser:
    """A measurement on the side register with a guess ``x_hat`` per outcome."""

    povm: list
    guesses: list

    def __post_init__(self):
        if len(self.povm) != len(self.guesses):
            raise InputError("one guess per POVM element is required")
        total = sum(self.povm)
        if not np.allclose(total, np.eye(total.shape[0]), atol=1e-9):
            raise InputError("POVM elements must sum to the identity")

    @classmethod
    def measure(cls, bases: Sequence[int], decode) -> "Guesser":
        """Measure each side qubit in the given basis; ``decode(outcome bits)`` is the guess."""
        u = reduce(np.kron, [basis_unitary(t) for t in bases]) if len(bases) else np.ones((1, 1))
        povm, guesses = [], []
        for k in range(u.shape[1]):
            v = u[:, k]
            povm.append(np.outer(v, v.conj()))
            guesses.append(_bits.bits(decode(_bits.from_int(k, len(bases)))))
        return cls(povm, guesses)

    @classmethod
    def constant(cls, guess, dim: int = 1) -> "Guesser":
        return cls([np.eye(dim)], [_bits.bits(guess)])


def ball_guess_bound(h_min: float, q: float, n: int, radius: int) -> float:
    """``2^{-(H_inf - q - 1)/2 + log |B|}``."""
    return 2.0 ** (-0.5 * (h_min - q - 1) + math.log2(HammingBall(n, radius).size))


def check_ball_guess(e: CqEnsemble, guesser: Guesser, delta: float, q: Optional[float] = None, name: str = "") -> BoundReport:
    """Exact probability that the guess lands within ``delta n`` of ``X``."""
    if not 0 <= delta < 0.5:
        raise InputError("delta must lie in [0, 1/2)")
    n = len(_bits.bits(e.xs[0]))
    radius = int(math.floor(delta * n + 1e-9))
    ball = HammingBall(n, radius)
    success = 0.0
    for x, p, rho in zip(e.xs, e.probs, e.rhos):
        for el, g in zip(guesser.povm, guesser.guesses):
            if ball.contains(x, g):
                success += p * float(np.real(np.trace(el @ rho)))
    q = e.n_qubits if q is None else q
    return BoundReport(
        name=name or f"ball guess n={n} q={q} radius={radius}",
        lhs=success,
        rhs=ball_guess_bound(min_entropy(e.probs), q, n, radius),
        trivial=1.0,
        details={"radius": radius, "ball_size": ball.size},
    )
