"""Dense linear algebra over the prime field F_p, vectorised with numpy.

All arrays are int64 holding canonical representatives in [0, p).  Products
of two representatives stay below 2**62, so p must be below 2**31.
"""

from __future__ import annotations

import numpy as np

MAX_PRIME = 2**31
# Float64 matmul stays exact while every partial sum is below 2**53:
# (2**31) * (2**16) * 64 == 2**53.
_LIMB_BITS = 16
_LIMB_MASK = (1 << _LIMB_BITS) - 1
_EXACT_K = 64
PANEL = 64


def _check_prime_size(p: int) -> None:
    if not 2 <= p < MAX_PRIME:
        raise ValueError(f"modulus {p} outside [2, 2**31)")


def modinv(a: np.ndarray, p: int) -> np.ndarray:
    """Elementwise inverse by Fermat; zero maps to zero."""
    a = np.asarray(a, dtype=np.int64) % p
    result = np.ones_like(a)
    base = a.copy()
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result * (a != 0)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact ``a @ b mod p`` using BLAS on 16-bit limbs of ``b``."""
    _check_prime_size(p)
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    m, kk = a.shape
    kk2, n = b.shape
    if kk != kk2:
        raise ValueError(f"inner dimensions differ: {a.shape} @ {b.shape}")
    out = np.zeros((m, n), dtype=np.int64)
    if kk == 0 or m == 0 or n == 0:
        return out
    for c0 in range(0, kk, _EXACT_K):
        af = a[:, c0 : c0 + _EXACT_K].astype(np.float64)
        bc = b[c0 : c0 + _EXACT_K]
        lo = (af @ (bc & _LIMB_MASK).astype(np.float64)).astype(np.int64)
        hi = (af @ (bc >> _LIMB_BITS).astype(np.float64)).astype(np.int64)
        hi %= p
        hi <<= _LIMB_BITS
        hi += lo
        hi %= p
        out += hi
        out %= p
    return out


def det_batch(stack: np.ndarray, p: int) -> np.ndarray:
    """Determinants of a stack of square matrices, shape (..., r, r)."""
    a = np.asarray(stack, dtype=np.int64) % p
    *batch, r, r2 = a.shape
    if r != r2:
        raise ValueError(f"det_batch needs square matrices, got {r}x{r2}")
    if r == 0:
        return np.ones(batch, dtype=np.int64)
    a = a.reshape(-1, r, r).copy()
    nb = a.shape[0]
    det = np.ones(nb, dtype=np.int64)
    idx = np.arange(nb)
    for c in range(r):
        nz = a[:, c:, c] != 0
        has = nz.any(axis=1)
        piv = c + np.argmax(nz, axis=1)
        swap = has & (piv != c)
        if swap.any():
            rows_c = a[idx, c].copy()
            a[idx, c] = a[idx, piv]
            a[idx, piv] = rows_c
            det[swap] = (p - det[swap]) % p
        pv = a[:, c, c]
        det = det * pv % p
        if c + 1 < r:
            f = a[:, c + 1 :, c] * modinv(pv, p)[:, None] % p
            a[:, c + 1 :, c:] = (a[:, c + 1 :, c:] - f[:, :, None] * a[:, None, c, c:]) % p
    return det.reshape(batch)


def inverse(x: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a square matrix over F_p by Gauss-Jordan."""
    x = np.asarray(x, dtype=np.int64) % p
    r = x.shape[0]
    aug = np.concatenate([x, np.eye(r, dtype=np.int64)], axis=1)
    for c in range(r):
        nz = np.flatnonzero(aug[c:, c])
        if nz.size == 0:
            raise ZeroDivisionError("matrix is singular mod p")
        q = c + nz[0]
        if q != c:
            aug[[c, q]] = aug[[q, c]]
        aug[c] = aug[c] * pow(int(aug[c, c]), p - 2, p) % p
        f = aug[:, c].copy()
        f[c] = 0
        aug = (aug - f[:, None] * aug[c]) % p
    return aug[:, r:]


def _factor_panel(work: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Row-reduce a tall panel in place.

    Returns the row permutation (pivot rows first) and the pivot columns,
    chosen greedily left to right.
    """
    m, b = work.shape
    perm = np.arange(m)
    cols: list[int] = []
    r = 0
    for j in range(b):
        if r == m:
            break
        nz = np.flatnonzero(work[r:, j])
        if nz.size == 0:
            continue
        q = r + nz[0]
        if q != r:
            work[[r, q]] = work[[q, r]]
            perm[[r, q]] = perm[[q, r]]
        if r + 1 < m:
            f = work[r + 1 :, j] * pow(int(work[r, j]), p - 2, p) % p
            live = np.flatnonzero(f)
            if live.size:
                rows = r + 1 + live
                work[rows, j:] = (work[rows, j:] - f[live, None] * work[r, j:]) % p
        cols.append(j)
        r += 1
    return perm, cols


def column_rank_profile(matrix: np.ndarray, p: int, limit: int | None = None) -> np.ndarray:
    """Indices of the greedy leftmost maximal set of independent columns.

    Works panel by panel: each panel of ``PANEL`` columns is factored
    directly, then the remaining columns receive one Schur-complement
    update through :func:`matmul`.  Stops once ``limit`` pivots are found or
    the rows are exhausted.
    """
    _check_prime_size(p)
    t = np.array(matrix, dtype=np.int64) % p
    m, n = t.shape
    if limit is None:
        limit = min(m, n)
    pivots: list[int] = []
    col0 = 0
    while col0 < n and t.shape[0] > 0 and len(pivots) < limit:
        b = min(PANEL, n - col0)
        work = t[:, :b].copy()
        perm, cols = _factor_panel(work, p)
        r = len(cols)
        pivots.extend(col0 + c for c in cols)
        col0 += b
        if col0 >= n or len(pivots) >= limit:
            break
        prow, others = perm[:r], perm[r:]
        rest = t[others, b:]
        if r:
            w = matmul(inverse(t[np.ix_(prow, cols)], p), t[prow, b:], p)
            rest -= matmul(t[np.ix_(others, cols)], w, p)
            rest %= p
        t = rest
    return np.asarray(pivots[:limit], dtype=np.intp)


def rank(matrix: np.ndarray, p: int, limit: int | None = None) -> int:
    m = np.asarray(matrix)
    if m.ndim != 2:
        raise ValueError(f"rank needs a 2-d matrix, got shape {m.shape}")
    if m.shape[0] < m.shape[1]:
        m = m.T
    return int(column_rank_profile(m, p, limit=limit).size)
