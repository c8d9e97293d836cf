import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from bqsm import hashing
from bqsm.bits import from_int
from bqsm.errors import InputError
from bqsm.hashing import HashFn


@given(st.integers(1, 10).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2 ** n - 1), st.integers(0, 2 ** n - 1))))
def test_eval_matches_parity(nrx):
    n, r, x = nrx
    f = HashFn.from_bits(from_int(r, n))
    assert f(from_int(x, n)) == oracles.parity(r, x)
    assert hashing.hash_table(n)[r, x] == oracles.parity(r, x) if n <= 6 else True


def test_zero_input_and_length_check():
    rng = np.random.default_rng(0)
    for _ in range(10):
        assert hashing.sample_hash(6, rng)([0] * 6) == 0
    with pytest.raises(InputError):
        HashFn.from_bits([1, 0])([1, 0, 1])


@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2 ** n - 1))))
def test_hex_roundtrip(nr):
    n, r = nr
    f = HashFn.from_bits(from_int(r, n))
    assert len(f.to_hex()) == (n + 3) // 4
    assert HashFn.from_hex(f.to_hex(), n) == f


def test_collision_counts():
    n = 3
    pairs = [(x, y) for x in range(8) for y in range(x + 1, 8)]
    assert len(pairs) == 28
    assert hashing.collision_counts(n, pairs).tolist() == [4] * 28
    assert hashing.collision_counts(1, [(0, 1)]).tolist() == [1]
    brute = [sum(oracles.parity(r, x) == oracles.parity(r, y) for r in range(8)) for x, y in pairs]
    assert brute == [4] * 28


@pytest.mark.parametrize("n", [1, 4, 8, 10])
def test_two_universality(n):
    assert hashing.verify_two_universal(n, samples=500).passed


def test_uniform_sampling():
    rng = np.random.default_rng(5)
    counts = np.zeros(8)
    trials = 8000
    for _ in range(trials):
        counts[int(hashing.sample_hash(3, rng).to_hex(), 16)] += 1
    p = 1 / 8
    assert np.all(np.abs(counts / trials - p) <= 4 * np.sqrt(p * (1 - p) / trials))
