"""The two scalar fields the pipeline runs over.

Everything downstream (minors, tangent blocks, rank) is written against the
small surface shared by :class:`PrimeField` and :class:`FloatField`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from grassecant import modp


@dataclass(frozen=True)
class PrimeField:
    """Integers modulo a prime ``p < 2**31``, stored as int64 in [0, p)."""

    p: int

    kind = "exact"
    dtype = np.int64

    def __post_init__(self) -> None:
        if not 2 <= self.p < modp.MAX_PRIME:
            raise ValueError(f"prime {self.p} outside [2, 2**31)")

    @property
    def label(self) -> str:
        return f"exact_prime(p={self.p})"

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.p, size=shape, dtype=np.int64)

    def asarray(self, values) -> np.ndarray:
        arr = np.asarray(values)
        if arr.dtype == object:
            return np.vectorize(lambda v: int(v) % self.p, otypes=[np.int64])(arr)
        return arr.astype(np.int64) % self.p

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def negate_where(self, values: np.ndarray, mask: np.ndarray) -> np.ndarray:
        return np.where(mask, (self.p - values) % self.p, values)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64) % self.p

    def det(self, stack: np.ndarray) -> np.ndarray:
        return modp.det_batch(stack, self.p)

    def is_zero(self, values: np.ndarray) -> bool:
        return not np.any(values)

    def rank(self, matrix: np.ndarray) -> int:
        return modp.rank(matrix, self.p)

    def format_scalar(self, value) -> str:
        return str(int(value) % self.p)


@dataclass(frozen=True)
class FloatField:
    """Double precision reals; random entries uniform in [-bound, bound]."""

    bound: float = 100.0
    tolerance: float = 1e-8

    kind = "float"
    dtype = np.float64

    def __post_init__(self) -> None:
        if not self.bound > 0:
            raise ValueError(f"sampling bound must be positive, got {self.bound}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")

    @property
    def label(self) -> str:
        return f"float_svd(L={self.bound:g}, tol={self.tolerance:g})"

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return (rng.random(shape) - 0.5) * 2 * self.bound

    def asarray(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.float64)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.float64)

    def negate_where(self, values: np.ndarray, mask: np.ndarray) -> np.ndarray:
        return np.where(mask, -values, values)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.asarray(a, dtype=np.float64) * b

    def det(self, stack: np.ndarray) -> np.ndarray:
        stack = np.asarray(stack, dtype=np.float64)
        if stack.shape[-1] == 0:
            return np.ones(stack.shape[:-2])
        return np.linalg.det(stack)

    def is_zero(self, values: np.ndarray) -> bool:
        return not np.any(values)

    def rank(self, matrix: np.ndarray) -> int:
        from grassecant.rank import rank_float

        return rank_float(matrix, self.tolerance)

    def format_scalar(self, value) -> str:
        return repr(float(value))


Field = PrimeField | FloatField
