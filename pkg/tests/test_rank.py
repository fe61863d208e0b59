import numpy as np
import pytest
from sympy import isprime

from grassecant.rank import (
    PRIME_RANGE,
    RankBackendConfig,
    certified_rank,
    rank_exact,
    rank_float,
    row_rank_profile,
)
from grassecant.scan import prefix_ranks, stream_seed
from grassecant.terracini import terracini_matrix


def test_exact_trivial():
    assert rank_exact(np.eye(5, dtype=np.int64)) == 5
    assert rank_exact(np.zeros((4, 7), dtype=np.int64)) == 0


def test_float_threshold():
    assert rank_float(np.diag([1.0, 1e-3, 1e-12]), 1e-8) == 2
    assert rank_float(np.eye(10)) == 10
    assert rank_float(np.zeros((3, 3))) == 0


def test_float_rejects_nonfinite():
    with pytest.raises(ValueError):
        rank_float(np.array([[1.0, np.nan]]))


def test_backends_agree_on_defective_cell():
    exact = RankBackendConfig(seed=3)
    flt = RankBackendConfig(mode="float", seed=3)
    m_exact = terracini_matrix(2, 6, 3, exact.field(), seed=1).data
    m_float = terracini_matrix(2, 6, 3, flt.field(), seed=1).data
    assert m_exact.shape == (63, 35)
    assert rank_exact(m_exact) == rank_float(m_float) == 34


def _cell_builder(k, n, s, cfg):
    return lambda trial, fld: terracini_matrix(k, n, s, fld, stream_seed(cfg, k, n, trial)).data


def test_certified_rank_defective_cell():
    cfg = RankBackendConfig(seed=0)
    res = certified_rank(_cell_builder(3, 7, 4, cfg), cfg, ceiling=68)
    assert res.per_trial_ranks == (64, 64)
    assert res.rank == 64 and res.certified_lower_bound


def test_certified_rank_filling_cell_stops_early():
    cfg = RankBackendConfig(seed=0)
    res = certified_rank(_cell_builder(2, 7, 4, cfg), cfg, ceiling=56)
    assert res.rank == 56
    assert res.per_trial_ranks == (56,)


def test_single_trial():
    cfg = RankBackendConfig(seed=0, trials=1)
    res = certified_rank(_cell_builder(3, 7, 4, cfg), cfg)
    assert len(res.per_trial_ranks) == 1 and res.rank == res.per_trial_ranks[0]


def test_float_result_is_not_certified():
    cfg = RankBackendConfig(mode="float", trials=1)
    res = certified_rank(_cell_builder(1, 4, 2, cfg), cfg)
    assert not res.certified_lower_bound and res.rank == 10


def test_config_validation():
    with pytest.raises(ValueError):
        RankBackendConfig(prime=2**31 - 2)
    with pytest.raises(ValueError):
        RankBackendConfig(prime=101)
    with pytest.raises(ValueError):
        RankBackendConfig(trials=0)
    with pytest.raises(ValueError):
        RankBackendConfig(mode="float", tolerance=0)
    with pytest.raises(ValueError):
        RankBackendConfig(mode="symbolic")
    assert RankBackendConfig().trials == 2
    assert RankBackendConfig(mode="float").trials == 3


def test_vary_prime_uses_distinct_primes():
    cfg = RankBackendConfig(vary_prime=True, trials=4)
    primes = [cfg.field(t).p for t in range(4)]
    assert len(set(primes)) == 4
    assert all(isprime(p) and PRIME_RANGE[0] <= p < PRIME_RANGE[1] for p in primes)
    assert primes[0] == cfg.prime


def test_exact_reproducible():
    cfg = RankBackendConfig(seed=5)
    m1 = terracini_matrix(3, 8, 3, cfg.field(), seed=17).data
    m2 = terracini_matrix(3, 8, 3, cfg.field(), seed=17).data
    assert rank_exact(m1) == rank_exact(m2)


def test_profile_matches_prefix_ranks(gf):
    m = terracini_matrix(1, 7, 5, gf, seed=2).data
    cuts = list(range(0, m.shape[0] + 1, 8))
    assert row_rank_profile(m, gf, cuts) == [rank_exact(m[:c]) if c else 0 for c in cuts]


def test_profile_float_matches_exact(gf, rf):
    m_e = terracini_matrix(2, 6, 4, gf, seed=2).data
    m_f = terracini_matrix(2, 6, 4, rf, seed=2).data
    cuts = [0, 21, 42, 63, 84]
    assert row_rank_profile(m_e, gf, cuts) == row_rank_profile(m_f, rf, cuts) == [0, 13, 26, 34, 35]


@pytest.mark.parametrize("k,n", [(1, 8), (2, 7), (2, 9), (3, 7), (3, 9)])
def test_rank_monotone_in_s(k, n):
    cfg = RankBackendConfig(seed=1)
    full = len(terracini_matrix(k, n, 1, cfg.field(), 0).data[0])
    ranks = prefix_ranks(k, n, 12, cfg, 0)
    for a, b in zip(ranks, ranks[1:]):
        assert b >= a
        assert b > a or a == full
