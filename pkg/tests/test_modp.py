import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grassecant import modp

from .oracles import leibniz_det, rank_mod_p_python

P = 2**31 - 1


def test_modinv():
    a = np.array([1, 2, 3, 12345, P - 1, 0])
    inv = modp.modinv(a, P)
    assert np.all((a * inv) % P == (a != 0))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 140), st.integers(1, 140), st.integers(1, 200), st.integers(0, 2**32))
def test_matmul_exact(m, k, n, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, P, (m, k))
    b = rng.integers(0, P, (k, n))
    want = (a.astype(object) @ b.astype(object)) % P
    assert np.array_equal(modp.matmul(a, b, P), want.astype(np.int64))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32), st.sampled_from([2, 3, 101, P]))
def test_det_batch_matches_leibniz(r, seed, p):
    rng = np.random.default_rng(seed)
    stack = rng.integers(0, min(p, 7), (6, r, r))
    got = modp.det_batch(stack, p)
    want = [leibniz_det(m.tolist()) % p for m in stack]
    assert got.tolist() == want


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 90), st.integers(1, 90), st.integers(0, 90), st.integers(0, 2**32))
def test_rank_of_product_is_inner_dimension(m, n, r, seed):
    rng = np.random.default_rng(seed)
    a = modp.matmul(rng.integers(0, P, (m, r)), rng.integers(0, P, (r, n)), P)
    assert modp.rank(a, P) == rank_mod_p_python(a.tolist(), P) == min(m, n, r)


def test_rank_profile_greedy():
    rng = np.random.default_rng(3)
    base = rng.integers(0, P, (70, 40))
    cols = [base[:, 0], base[:, 0] * 2 % P, base[:, 1], (base[:, 0] + base[:, 1]) % P]
    cols += [base[:, i] for i in range(2, 40)]
    cols += [(base[:, 5] * 7 + base[:, 9]) % P]
    m = np.stack(cols, axis=1)
    pivots = modp.column_rank_profile(m, P)
    assert pivots.tolist() == [0, 2] + list(range(4, 42))


def test_rank_profile_across_panels():
    rng = np.random.default_rng(4)
    m = rng.integers(0, P, (50, 300))
    m[:, 100] = 0
    pivots = modp.column_rank_profile(m, P)
    assert pivots.tolist() == list(range(50))
    tall = rng.integers(0, P, (300, 150))
    tall[:, 70] = (tall[:, 3] + tall[:, 69]) % P
    assert modp.column_rank_profile(tall, P).tolist() == [c for c in range(150) if c != 70]


def test_zero_and_identity():
    assert modp.rank(np.zeros((4, 7), dtype=np.int64), P) == 0
    assert modp.rank(np.eye(5, dtype=np.int64), P) == 5


def test_inverse():
    rng = np.random.default_rng(5)
    x = rng.integers(0, P, (20, 20))
    assert np.array_equal(modp.matmul(x, modp.inverse(x, P), P), np.eye(20, dtype=np.int64))
    with pytest.raises(ZeroDivisionError):
        modp.inverse(np.zeros((3, 3), dtype=np.int64), P)


def test_rejects_large_modulus():
    with pytest.raises(ValueError):
        modp.matmul(np.eye(2, dtype=np.int64), np.eye(2, dtype=np.int64), 2**31 + 11)
