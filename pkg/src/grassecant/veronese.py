"""Secant varieties of Veronese varieties, as a check on the rank machinery.

Alexander-Hirschowitz classifies every defective case, so a sweep over small
(k, n) must find exactly those.  The tangent space to V_{k,n+1} at [L^k] is
spanned by L^(k-1) * x_i for i = 0..n.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from grassecant.combin import binomial
from grassecant.fields import Field
from grassecant.rank import RankBackendConfig, certified_rank, row_rank_profile
from grassecant.scan import CANDIDATE, CERTIFIED, CONFIRMED, PROBABLE, ScanRecord, sweep_ranks
from grassecant.terracini import RandomPointSource, derive_seed

# (degree k, n, s) with P^n -> P^N of degree k; all have defect 1.
AH_EXCEPTIONS = frozenset({(4, 2, 5), (4, 3, 9), (4, 4, 14), (3, 4, 7)})
_STREAM_TAG = 0x5645  # keeps Veronese streams apart from Grassmannian ones


@dataclass(frozen=True)
class MonomialTable:
    """Degree-k monomials in n+1 variables.

    Ordered like sorted multisets of variable indices, so x0^k comes first
    and x_n^k last.
    """

    n_vars: int
    degree: int
    monomials: tuple[tuple[int, ...], ...]
    index_of: dict[tuple[int, ...], int] = dc_field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.monomials)


@lru_cache(maxsize=None)
def build_monomial_table(n: int, k: int) -> MonomialTable:
    if n < 0 or k < 0:
        raise ValueError(f"need n >= 0 and k >= 0, got n={n}, k={k}")
    monos = []
    for combo in itertools.combinations_with_replacement(range(n + 1), k):
        e = [0] * (n + 1)
        for v in combo:
            e[v] += 1
        monos.append(tuple(e))
    return MonomialTable(n + 1, k, tuple(monos), {m: i for i, m in enumerate(monos)})


@lru_cache(maxsize=None)
def _shift_index(n: int, k: int) -> np.ndarray:
    """shift[i, c]: position of (degree k-1 monomial c) * x_i in the degree-k table."""
    lower = build_monomial_table(n, k - 1)
    upper = build_monomial_table(n, k)
    shift = np.empty((n + 1, len(lower)), dtype=np.intp)
    for c, e in enumerate(lower.monomials):
        for i in range(n + 1):
            up = list(e)
            up[i] += 1
            shift[i, c] = upper.index_of[tuple(up)]
    return shift


def power_coefficients(form: np.ndarray, degree: int, fld: Field) -> np.ndarray:
    """Coefficients of form**degree on the degree-``degree`` monomials."""
    form = fld.asarray(form)
    n = form.shape[0] - 1
    table = build_monomial_table(n, degree)
    expo = np.array(table.monomials, dtype=np.intp).reshape(len(table), n + 1)
    multinom = [
        math.factorial(degree) // math.prod(math.factorial(a) for a in e) for e in table.monomials
    ]
    coeffs = fld.asarray(np.array(multinom, dtype=object))
    for j in range(n + 1):
        powers = [fld.asarray(np.array(1, dtype=object))]
        for _ in range(degree):
            powers.append(fld.mul(powers[-1], form[j]))
        coeffs = fld.mul(coeffs, np.stack(powers)[expo[:, j]])
    return coeffs


def veronese_tangent_block(form: np.ndarray, table: MonomialTable, fld: Field) -> np.ndarray:
    """Row i = coefficients of L^(k-1) * x_i; shape (n+1, C(k+n, n))."""
    form = fld.asarray(form)
    n, k = table.n_vars - 1, table.degree
    if form.shape != (n + 1,):
        raise ValueError(f"linear form needs {n + 1} coefficients, got shape {form.shape}")
    if k < 1:
        raise ValueError("degree must be at least 1")
    if fld.is_zero(form):
        raise ValueError("zero linear form has no tangent space")
    shift = _shift_index(n, k)
    lower = power_coefficients(form, k - 1, fld)
    block = fld.zeros((n + 1, len(table)))
    for i in range(n + 1):
        block[i, shift[i]] = lower
    return block


def veronese_ambient(k: int, n: int) -> int:
    return binomial(k + n, n) - 1


def veronese_expected_dim(k: int, n: int, s: int) -> int:
    return min(veronese_ambient(k, n), s * n + s - 1)


def veronese_saturation(k: int, n: int) -> int:
    return math.ceil(binomial(k + n, n) / (n + 1))


def veronese_known_dim(k: int, n: int, s: int) -> int:
    """True dimension per Alexander-Hirschowitz (quadrics: rank <= s matrices)."""
    if k == 2:
        r = min(s, n + 1)
        return r * (n + 1) - r * (r - 1) // 2 - 1
    exp = veronese_expected_dim(k, n, s)
    return exp - 1 if (k, n, s) in AH_EXCEPTIONS else exp


def is_ah_defective(k: int, n: int, s: int) -> bool:
    return veronese_known_dim(k, n, s) < veronese_expected_dim(k, n, s)


def veronese_matrix(k: int, n: int, s: int, fld: Field, seed: int) -> np.ndarray:
    table = build_monomial_table(n, k)
    src = RandomPointSource(seed, fld)
    blocks = []
    for _ in range(s):
        form = src.draw((n + 1,))
        while fld.is_zero(form):
            form = src.draw((n + 1,))
        blocks.append(veronese_tangent_block(form, table, fld))
    return np.vstack(blocks)


def _seed(cfg: RankBackendConfig, k: int, n: int, trial: int) -> int:
    return derive_seed(cfg.seed, _STREAM_TAG, k, n, trial)


def _record(k: int, n: int, s: int, rank: int, trials: int, cfg: RankBackendConfig) -> ScanRecord:
    exp = veronese_expected_dim(k, n, s)
    dim = rank - 1
    if dim > exp:
        raise RuntimeError(f"V({k},{n})^{s}: computed dim {dim} exceeds the upper bound {exp}")
    if dim == exp:
        status = CERTIFIED if cfg.certifies else PROBABLE
    else:
        status = CONFIRMED if dim == veronese_known_dim(k, n, s) else CANDIDATE
    return ScanRecord(
        n=n,
        k=k,
        s=s,
        N=veronese_ambient(k, n),
        S=veronese_saturation(k, n),
        expected_dim=exp,
        computed_dim=dim,
        defect=exp - dim,
        status=status,
        backend=cfg.mode,
        prime=cfg.prime if cfg.mode == "exact" else None,
        seed=cfg.seed,
        trials=trials,
    )


def veronese_classify(k: int, n: int, s: int, cfg: RankBackendConfig) -> ScanRecord:
    """Dimension of the s-th secant variety of the degree-k Veronese of P^n."""
    if k < 1 or n < 1 or s < 1:
        raise ValueError(f"invalid Veronese cell k={k}, n={n}, s={s}")
    res = certified_rank(
        lambda trial, fld: veronese_matrix(k, n, s, fld, _seed(cfg, k, n, trial)),
        cfg,
        ceiling=veronese_expected_dim(k, n, s) + 1,
    )
    return _record(k, n, s, res.rank, len(res.per_trial_ranks), cfg)


def veronese_scan_pair(k: int, n: int, cfg: RankBackendConfig, *, s_max: int | None = None,
                       continue_past_S: bool = True) -> list[ScanRecord]:
    def prefix(upto, trial):
        fld = cfg.field(trial)
        m = veronese_matrix(k, n, upto, fld, _seed(cfg, k, n, trial))
        return row_rank_profile(m, fld, [s * (n + 1) for s in range(upto + 1)])

    best, used, last = sweep_ranks(
        prefix,
        lambda s: veronese_expected_dim(k, n, s),
        cfg,
        S=veronese_saturation(k, n),
        full=veronese_ambient(k, n) + 1,
        s_max=s_max,
        continue_past_S=continue_past_S,
    )
    return [_record(k, n, s, best[s], used[s], cfg) for s in range(2, last + 1)]


def veronese_scan(cfg: RankBackendConfig, *, k_max: int = 5, n_max: int = 4, k_min: int = 1,
                  n_min: int = 1, s_max: int | None = None,
                  continue_past_S: bool = True) -> list[ScanRecord]:
    out = []
    for n in range(n_min, n_max + 1):
        for k in range(k_min, k_max + 1):
            out.extend(veronese_scan_pair(k, n, cfg, s_max=s_max, continue_past_S=continue_past_S))
    return out
