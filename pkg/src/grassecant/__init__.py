"""Secant varieties of Grassmannians via random tangent spaces.

The dimension of the s-th secant variety of G(k, n) is read off the rank of
the span of tangent spaces at s random points, computed either exactly over
a prime field or with a floating SVD.
"""

from grassecant.combin import SubsetTable, binomial, build_subset_table
from grassecant.fields import FloatField, PrimeField
from grassecant.rank import RankBackendConfig, RankResult, certified_rank, rank_exact, rank_float
from grassecant.scan import (
    DefectRegistry,
    ScanRecord,
    classify_cell,
    expected_dim,
    lines_oracle,
    saturation_s,
    scan_range,
)

__all__ = [
    "DefectRegistry",
    "FloatField",
    "PrimeField",
    "RankBackendConfig",
    "RankResult",
    "ScanRecord",
    "SubsetTable",
    "binomial",
    "build_subset_table",
    "certified_rank",
    "classify_cell",
    "expected_dim",
    "lines_oracle",
    "rank_exact",
    "rank_float",
    "saturation_s",
    "scan_range",
]

__version__ = "0.1.0"
