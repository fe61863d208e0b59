"""Rank backends and the trial policy turning per-run ranks into a claim.

Exact mode computes rank over F_p for a random integer specialisation.  That
rank can only undercount the rank with generic entries, so reaching the
expected value proves it; falling short is evidence only.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Literal

import numpy as np
from sympy import isprime, prevprime

from grassecant import modp
from grassecant.fields import Field, FloatField, PrimeField

log = logging.getLogger(__name__)

DEFAULT_PRIME = 2**31 - 1
PRIME_RANGE = (2**30, 2**31)
DEFAULT_TRIALS = {"exact": 2, "float": 3}


def rank_exact(matrix: np.ndarray, p: int = DEFAULT_PRIME) -> int:
    """Rank over F_p; entries are reduced mod p first."""
    return modp.rank(np.asarray(matrix, dtype=np.int64) % p, p)


def rank_float(matrix: np.ndarray, tolerance: float = 1e-8) -> int:
    """Number of singular values above ``tolerance * sigma_max``."""
    m = np.asarray(matrix, dtype=np.float64)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if m.size == 0:
        return 0
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.count_nonzero(sv > tolerance * sv[0]))


def row_rank_profile(matrix: np.ndarray, fld: Field, cuts: list[int]) -> list[int]:
    """Rank of ``matrix[:c]`` for each row count c in ``cuts``.

    Over F_p a single elimination of the transpose yields every prefix rank.
    """
    m = np.asarray(matrix)
    if isinstance(fld, PrimeField):
        pivots = modp.column_rank_profile(m.T, fld.p)
        return [int(np.searchsorted(pivots, c)) for c in cuts]
    return [rank_float(m[:c], fld.tolerance) if c else 0 for c in cuts]


@lru_cache(maxsize=None)
def _primes_below(start: int, count: int) -> tuple[int, ...]:
    primes = [start] if isprime(start) else []
    q = start
    while len(primes) < count:
        q = prevprime(q)
        primes.append(q)
    return tuple(primes)


@dataclass(frozen=True)
class RankBackendConfig:
    """Backend choice plus the trial policy.

    ``trials`` defaults to 2 in exact mode and 3 in float mode.  With
    ``vary_prime`` trial t runs modulo the t-th prime at or below ``prime``.
    """

    mode: Literal["exact", "float"] = "exact"
    prime: int = DEFAULT_PRIME
    tolerance: float = 1e-8
    trials: int | None = None
    seed: int = 0
    vary_prime: bool = False
    bound: float = 100.0

    def __post_init__(self) -> None:
        if self.mode not in DEFAULT_TRIALS:
            raise ValueError(f"unknown backend mode {self.mode!r}")
        if self.trials is None:
            object.__setattr__(self, "trials", DEFAULT_TRIALS[self.mode])
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.mode == "exact":
            lo, hi = PRIME_RANGE
            if not lo <= self.prime < hi:
                raise ValueError(f"prime {self.prime} outside [2**30, 2**31)")
            if not isprime(self.prime):
                raise ValueError(f"{self.prime} is not prime")

    def field(self, trial: int = 0) -> Field:
        if self.mode == "float":
            return FloatField(bound=self.bound, tolerance=self.tolerance)
        if self.vary_prime:
            return PrimeField(_primes_below(self.prime, trial + 1)[trial])
        return PrimeField(self.prime)

    @property
    def certifies(self) -> bool:
        return self.mode == "exact"

    def snapshot(self) -> dict:
        out = {"mode": self.mode, "seed": self.seed, "trials": self.trials}
        if self.mode == "exact":
            out.update(prime=self.prime, vary_prime=self.vary_prime)
        else:
            out.update(tolerance=self.tolerance, bound=self.bound)
        return out


@dataclass(frozen=True)
class RankResult:
    rank: int
    per_trial_ranks: tuple[int, ...]
    backend: RankBackendConfig
    certified_lower_bound: bool


def certified_rank(
    build: Callable[[int, Field], np.ndarray],
    cfg: RankBackendConfig,
    *,
    ceiling: int | None = None,
) -> RankResult:
    """Max rank over ``cfg.trials`` independent builds.

    ``build(trial, field)`` must return the matrix for that trial.  Once a
    trial reaches ``ceiling`` (the largest rank the template can have) the
    remaining trials cannot change the maximum and are skipped.
    """
    ranks: list[int] = []
    for trial in range(cfg.trials):
        fld = cfg.field(trial)
        r = fld.rank(build(trial, fld))
        ranks.append(r)
        log.debug("trial %d over %s: rank %d", trial, fld.label, r)
        if ceiling is not None and r >= ceiling:
            break
    return RankResult(
        rank=max(ranks),
        per_trial_ranks=tuple(ranks),
        backend=cfg,
        certified_lower_bound=cfg.certifies,
    )
