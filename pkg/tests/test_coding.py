import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from bqsm import coding
from bqsm.coding import LinearCode, select_code
from bqsm.errors import ConfigError, DecodeFailure, InputError


def hamming_codewords(h):
    return [np.array(c, dtype=np.uint8) for c in itertools.product((0, 1), repeat=7) if not (h @ c % 2).any()]


def test_hamming_syndromes():
    code = LinearCode(7, "hamming7")
    h = code.H
    assert code.syndrome([0] * 7).tolist() == [0, 0, 0]
    for i in range(7):
        e = np.zeros(7, dtype=np.uint8)
        e[i] = 1
        assert code.syndrome(e).tolist() == h[:, i].tolist()
    with pytest.raises(InputError):
        code.syndrome([0] * 6)


def test_hamming_single_flips_recover():
    code = LinearCode(7, "hamming7")
    words = hamming_codewords(code.H)
    assert len(words) == 16
    for x in words:
        syn = code.syndrome(x)
        assert code.reconcile(x, syn).tolist() == x.tolist()
        for i in range(7):
            y = x.copy()
            y[i] ^= 1
            assert code.reconcile(y, syn).tolist() == x.tolist()


def test_hamming_two_flips_miscorrect():
    code = LinearCode(7, "hamming7")
    x = np.zeros(7, dtype=np.uint8)
    syn = code.syndrome(x)
    wrong = 0
    for i, j in itertools.combinations(range(7), 2):
        y = x.copy()
        y[[i, j]] ^= 1
        try:
            wrong += code.reconcile(y, syn).tolist() != x.tolist()
        except DecodeFailure:
            wrong += 1
    assert wrong >= 1


@settings(max_examples=50)
@given(st.sampled_from(["rep3", "rep5", "rep7", "hamming7"]), st.integers(1, 40), st.integers(0, 2 ** 32 - 1))
def test_reconcile_within_radius(base, length, seed):
    code = LinearCode(length, base)
    rng = np.random.default_rng(seed)
    x = rng.integers(0, 2, length, dtype=np.uint8)
    y = x.copy()
    for start, block in code.blocks:
        t = min(code.t, (block.length - 1) // 2) if base.startswith("rep") else (code.t if block.length == 7 else 0)
        flips = rng.choice(block.length, size=min(t, block.length), replace=False)
        y[start + flips] ^= 1
    assert code.reconcile(y, code.syndrome(x)).tolist() == x.tolist()


def test_trivial_code():
    code = LinearCode(10)
    assert code.syndrome_length == 0 and code.k == 10
    x = np.arange(10) % 2
    assert code.reconcile(x, []).tolist() == x.tolist()


def test_bsc():
    rng = np.random.default_rng(0)
    x = rng.integers(0, 2, 100, dtype=np.uint8)
    assert coding.bsc(x, 0.0, rng).tolist() == x.tolist()
    n, phi = 10_000, 0.45
    flips = np.count_nonzero(coding.bsc(np.zeros(n, dtype=np.uint8), phi, rng))
    assert abs(flips / n - phi) <= 4 * math.sqrt(phi * (1 - phi) / n)


def test_select_code():
    assert select_code(50, 0.0).base == "trivial"
    rep5 = select_code(50, 0.05, base="rep5")
    assert rep5.t / rep5.block_length == pytest.approx(0.4)
    assert select_code(70, 0.01, 0.05).base == "hamming7"
    with pytest.raises(ConfigError):
        select_code(50, 0.45)
    with pytest.raises(ConfigError):
        select_code(50, 0.3, base="hamming7")


def test_block_failure_arithmetic():
    code = LinearCode(70, "hamming7")
    expected = 1 - sum(oracles.binom_pmf(k, 7, 0.01) for k in range(2))
    assert code.block_failure_prob(0.01) == pytest.approx(expected, abs=1e-12)
    assert code.block_failure_prob(0.01) == pytest.approx(math.comb(7, 2) * 0.01 ** 2, rel=0.1)
    assert code.failure_bound(0.01) == pytest.approx(min(1, 10 * expected), abs=1e-12)
