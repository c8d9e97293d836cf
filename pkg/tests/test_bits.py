import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bqsm import bits
from bqsm.errors import InputError


def test_coercion():
    assert bits.bits("0110").tolist() == [0, 1, 1, 0]
    assert bits.bases("+x+").tolist() == [0, 1, 0]
    assert bits.bases("+×").tolist() == [0, 1]
    with pytest.raises(InputError):
        bits.bits("012")
    with pytest.raises(InputError):
        bits.bits([0, 2])
    with pytest.raises(InputError):
        bits.bases("+y")


def test_basis_selector():
    assert bits.basis_for_bit(0) == bits.PLUS
    assert bits.basis_for_bit(1) == bits.CROSS
    with pytest.raises(InputError):
        bits.basis_for_bit(2)


def test_big_endian():
    assert bits.to_int(bits.bits("100")) == 4
    assert bits.from_int(1, 3).tolist() == [0, 0, 1]
    assert bits.all_strings(2).tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
    with pytest.raises(InputError):
        bits.from_int(8, 3)


@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2 ** n - 1))))
def test_int_roundtrip(nv):
    n, v = nv
    assert bits.to_int(bits.from_int(v, n)) == v
    assert bits.all_strings(n)[v].tolist() == bits.from_int(v, n).tolist()


@given(st.lists(st.integers(0, 1), min_size=1, max_size=16), st.data())
def test_restrict_and_distance(x, data):
    x = bits.bits(x)
    idx = data.draw(st.lists(st.integers(0, len(x) - 1), unique=True))
    assert bits.restrict(x, idx).tolist() == [int(x[i]) for i in idx]
    y = x.copy()
    flips = data.draw(st.lists(st.integers(0, len(x) - 1), unique=True))
    y[flips] ^= 1
    assert bits.hamming_distance(x, y) == len(flips)


def test_restrict_out_of_range():
    with pytest.raises(InputError):
        bits.restrict(bits.bits("01"), [2])
    with pytest.raises(InputError):
        bits.hamming_distance(bits.bits("0"), bits.bits("01"))


def test_random_bits_reproducible():
    a = bits.random_bits(20, np.random.default_rng(1))
    b = bits.random_bits(20, np.random.default_rng(1))
    assert a.tolist() == b.tolist()
    assert set(a.tolist()) <= {0, 1}
