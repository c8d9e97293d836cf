"""Independent reference computations used by the tests.

Everything here is written from first principles with explicit Kronecker
products, loops and SVDs, never by calling into the package.
"""

import itertools
import math
from functools import reduce

import numpy as np

S = 1 / math.sqrt(2)
KET = {(0, 0): np.array([1, 0], complex), (1, 0): np.array([0, 1], complex),
       (0, 1): np.array([S, S], complex), (1, 1): np.array([S, -S], complex)}
BELL = {"PHI_PLUS": np.array([S, 0, 0, S]), "PHI_MINUS": np.array([S, 0, 0, -S]),
        "PSI_PLUS": np.array([0, S, S, 0]), "PSI_MINUS": np.array([0, S, -S, 0])}
BASIS = {0: np.eye(2, dtype=complex), 1: np.array([[S, S], [S, -S]], complex)}


def bb84_vector(x, theta):
    return reduce(np.kron, [KET[(int(a), int(t))] for a, t in zip(x, theta)])


def distribution(psi, bases):
    u = reduce(np.kron, [BASIS[int(t)] for t in bases])
    return np.abs(u.conj().T @ psi) ** 2


def trace_distance(a, b):
    return 0.5 * float(np.sum(np.linalg.svd(np.asarray(a) - np.asarray(b), compute_uv=False)))


def dist_from_uniform(probs, rhos, xs):
    """Block-matrix distance of a binary X from uniform given side states."""
    d = rhos[0].shape[0]
    real = np.zeros((2 * d, 2 * d), complex)
    for p, r, x in zip(probs, rhos, xs):
        real[x * d:(x + 1) * d, x * d:(x + 1) * d] += p * r
    avg = sum(p * r for p, r in zip(probs, rhos))
    ideal = np.block([[avg / 2, np.zeros((d, d))], [np.zeros((d, d)), avg / 2]])
    return trace_distance(real, ideal)


def parity(r, x):
    return bin(r & x).count("1") % 2


def pa_distance(n, probs, rhos):
    """Average over all descriptors of the distance of f(X) from uniform."""
    total = 0.0
    for r in range(2 ** n):
        total += dist_from_uniform(probs, rhos, [parity(r, x) for x in range(2 ** n)])
    return total / 2 ** n


def binom_pmf(k, n, p):
    return math.comb(n, k) * p ** k * (1 - p) ** (n - k)


def h(p):
    return 0.0 if p in (0, 1) else -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def all_bits(n):
    return [list(t) for t in itertools.product((0, 1), repeat=n)]
