"""Maximal minors of (k+1) x (n+1) matrices and of their row substitutions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from grassecant.combin import SubsetTable
from grassecant.fields import Field


def _check_shape(a: np.ndarray, table: SubsetTable) -> None:
    if a.shape != (table.k_plus_1, table.n_plus_1):
        raise ValueError(
            f"point matrix has shape {a.shape}, table expects "
            f"({table.k_plus_1}, {table.n_plus_1})"
        )


def maximal_minors(a: np.ndarray, subsets: np.ndarray, field: Field) -> np.ndarray:
    """det of ``a[:, S]`` for every row S of ``subsets``."""
    stack = a[:, subsets]  # (rows, count, size)
    return field.det(np.moveaxis(stack, 1, 0))


def plucker_embed(a: np.ndarray, table: SubsetTable, field: Field) -> np.ndarray:
    """Plücker coordinates of the row space of ``a``, in table order."""
    a = np.asarray(a)
    _check_shape(a, table)
    return maximal_minors(a, table.as_array(), field)


@dataclass(frozen=True)
class CofactorIndex:
    """Where each k x k minor lands in a substituted-row Plücker vector.

    For identity row j and (k+1)-subset S containing j, the entry of the
    substituted vector at S is ``(-1)**(i + pos) * minor[S - {j}]``.  Flat
    arrays ``j``, ``column``, ``minor`` and ``odd`` list one such entry each;
    ``odd`` holds the parity of ``pos``.
    """

    n: int
    k: int
    small_subsets: np.ndarray
    j: np.ndarray
    column: np.ndarray
    minor: np.ndarray
    odd: np.ndarray


@lru_cache(maxsize=None)
def cofactor_index(n: int, k: int) -> CofactorIndex:
    small = list(itertools.combinations(range(n + 1), k))
    small_pos = {s: i for i, s in enumerate(small)}
    js, cols, minors, odd = [], [], [], []
    for c, subset in enumerate(itertools.combinations(range(n + 1), k + 1)):
        for pos, j in enumerate(subset):
            js.append(j)
            cols.append(c)
            minors.append(small_pos[subset[:pos] + subset[pos + 1 :]])
            odd.append(pos & 1)
    order = np.lexsort((np.array(cols), np.array(js)))
    return CofactorIndex(
        n=n,
        k=k,
        small_subsets=np.array(small, dtype=np.intp).reshape(len(small), k),
        j=np.array(js, dtype=np.intp)[order],
        column=np.array(cols, dtype=np.intp)[order],
        minor=np.array(minors, dtype=np.intp)[order],
        odd=np.array(odd, dtype=bool)[order],
    )


def deleted_row_minors(a: np.ndarray, i: int, field: Field) -> np.ndarray:
    """All k x k minors of ``a`` with row i removed, in lex subset order."""
    k_plus_1, n_plus_1 = a.shape
    idx = cofactor_index(n_plus_1 - 1, k_plus_1 - 1)
    return maximal_minors(np.delete(a, i, axis=0), idx.small_subsets, field)


def _check_indices(a: np.ndarray, i: int, j: int) -> None:
    if not 0 <= i < a.shape[0]:
        raise IndexError(f"row index {i} out of range for {a.shape[0]} rows")
    if not 0 <= j < a.shape[1]:
        raise IndexError(f"identity row {j} out of range for {a.shape[1]} columns")


def substituted_matrix(a: np.ndarray, i: int, j: int, field: Field) -> np.ndarray:
    """A with row i replaced by the j-th standard basis vector."""
    _check_indices(a, i, j)
    out = np.array(a, dtype=field.dtype, copy=True)
    out[i] = 0
    out[i, j] = 1
    return out


def substituted_minor_row(
    a: np.ndarray, i: int, j: int, table: SubsetTable, field: Field, *, naive: bool = False
) -> np.ndarray:
    """Maximal minors of A with row i replaced by e_j.

    The default path expands along the substituted row and reuses the k x k
    minors of A minus row i; ``naive=True`` evaluates every (k+1) x (k+1)
    determinant of the substituted matrix directly.
    """
    a = np.asarray(a)
    _check_shape(a, table)
    _check_indices(a, i, j)
    if naive:
        return plucker_embed(substituted_matrix(a, i, j, field), table, field)
    idx = cofactor_index(table.n, table.k)
    minors = deleted_row_minors(a, i, field)
    sel = idx.j == j
    row = field.zeros(len(table))
    row[idx.column[sel]] = field.negate_where(minors[idx.minor[sel]], idx.odd[sel] ^ bool(i & 1))
    return row
