"""Binomials and the lexicographic table of (k+1)-subsets indexing Plücker space."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


def binomial(a: int, b: int) -> int:
    """Exact C(a, b), zero when b > a."""
    if a < 0 or b < 0:
        raise ValueError(f"binomial needs non-negative arguments, got ({a}, {b})")
    return math.comb(a, b)


@dataclass(frozen=True)
class SubsetTable:
    """Ordinal <-> subset bijection for the (k+1)-subsets of {0, ..., n}.

    Subsets are strictly increasing tuples listed in lexicographic order, so
    ordinal 0 is (0, 1, ..., k).
    """

    n_plus_1: int
    k_plus_1: int
    subsets: tuple[tuple[int, ...], ...]
    index_of: dict[tuple[int, ...], int] = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.n_plus_1 - 1

    @property
    def k(self) -> int:
        return self.k_plus_1 - 1

    def __len__(self) -> int:
        return len(self.subsets)

    def as_array(self) -> np.ndarray:
        """Subsets as an int array of shape (len, k+1)."""
        return np.array(self.subsets, dtype=np.intp).reshape(len(self.subsets), self.k_plus_1)


@lru_cache(maxsize=None)
def build_subset_table(n: int, k: int) -> SubsetTable:
    if n < 0 or k < 0:
        raise ValueError(f"need n >= 0 and k >= 0, got n={n}, k={k}")
    if k > n:
        raise ValueError(f"subset size k+1={k + 1} exceeds ground set size n+1={n + 1}")
    subsets = tuple(itertools.combinations(range(n + 1), k + 1))
    return SubsetTable(
        n_plus_1=n + 1,
        k_plus_1=k + 1,
        subsets=subsets,
        index_of={s: i for i, s in enumerate(subsets)},
    )
