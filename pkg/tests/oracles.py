"""Slow reference computations that share no code with the package."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def pascal_binomial(a: int, b: int) -> int:
    row = [1]
    for _ in range(a):
        row = [1] + [x + y for x, y in zip(row, row[1:])] + [1]
    return row[b] if 0 <= b <= a else 0


def leibniz_det(m) -> int | Fraction:
    """Sum over permutations; fine for size <= 5."""
    size = len(m)
    total = 0
    for perm in itertools.permutations(range(size)):
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        term = -1 if inversions % 2 else 1
        for r, c in enumerate(perm):
            term *= m[r][c]
        total += term
    return total


def minors_by_leibniz(a, subsets) -> list[int]:
    a = [[int(v) for v in row] for row in a]
    return [leibniz_det([[row[c] for c in s] for row in a]) for s in subsets]


def rank_mod_p_python(rows, p: int) -> int:
    a = [[int(v) % p for v in r] for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        for i in range(rank + 1, len(a)):
            f = a[i][c] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def skew_secant_dim(n: int, s: int, rng: np.random.Generator, h: float = 1e-3) -> int:
    """Projective dim of sums of s rank-2 skew matrices, by finite differences.

    The map (u_1, v_1, ..., u_s, v_s) -> sum u_i v_i^T - v_i u_i^T is
    differentiated numerically in every coordinate; the Jacobian rank is the
    affine dimension of the image.
    """
    size = n + 1
    iu = np.triu_indices(size, 1)

    def image(x):
        x = x.reshape(s, 2, size)
        m = sum(np.outer(u, v) - np.outer(v, u) for u, v in x)
        return m[iu]

    x0 = rng.standard_normal(2 * s * size)
    cols = []
    for c in range(x0.size):
        e = np.zeros_like(x0)
        e[c] = h
        cols.append((image(x0 + e) - image(x0 - e)) / (2 * h))
    jac = np.array(cols)
    sv = np.linalg.svd(jac, compute_uv=False)
    return int(np.count_nonzero(sv > 1e-8 * sv[0])) - 1
