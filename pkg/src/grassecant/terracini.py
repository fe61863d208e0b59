"""Random points of G(k, n) and the stacked matrix of their tangent spaces.

Row span of the tangent block at a point A is the affine cone over the
tangent space T_A G: block i collects, for every j, the maximal minors of A
with row i replaced by e_j.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Sequence

import numpy as np

from grassecant.combin import SubsetTable, build_subset_table
from grassecant.fields import Field, PrimeField
from grassecant.plucker import cofactor_index, deleted_row_minors, plucker_embed

MAX_RESAMPLES = 8


class DegeneratePointError(RuntimeError):
    """Sampling kept producing rank-deficient points."""


def derive_seed(seed: int, *keys: int) -> int:
    """A 64-bit seed determined by a base seed and integer keys."""
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, *keys])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class RandomPointSource:
    """Deterministic stream of random field entries.

    Points are drawn one at a time, so the first s points of a stream do not
    depend on how many points are requested in total.
    """

    seed: int
    field: Field
    counter: int = 0
    _rng: np.random.Generator = dc_field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._rng = np.random.default_rng(self.seed)

    def draw(self, shape) -> np.ndarray:
        self.counter += 1
        return self.field.random(self._rng, shape)


def sample_points(src: RandomPointSource, k: int, n: int, s: int) -> list[np.ndarray]:
    if s < 1:
        raise ValueError(f"need at least one point, got s={s}")
    table = build_subset_table(n, k)
    points = []
    for _ in range(s):
        for _attempt in range(MAX_RESAMPLES):
            a = src.draw((k + 1, n + 1))
            if not src.field.is_zero(plucker_embed(a, table, src.field)):
                points.append(a)
                break
        else:
            raise DegeneratePointError(
                f"{MAX_RESAMPLES} consecutive rank-deficient draws for G({k},{n}) "
                f"over {src.field.label}"
            )
    return points


def tangent_block(a: np.ndarray, table: SubsetTable, field: Field) -> np.ndarray:
    """Stack of M_0, ..., M_k for the point A; shape ((k+1)(n+1), C(n+1, k+1))."""
    a = np.asarray(a)
    k1, n1 = table.k_plus_1, table.n_plus_1
    if a.shape != (k1, n1):
        raise ValueError(f"point matrix has shape {a.shape}, expected {(k1, n1)}")
    idx = cofactor_index(table.n, table.k)
    block = field.zeros((k1 * n1, len(table)))
    for i in range(k1):
        minors = deleted_row_minors(a, i, field)
        block[i * n1 + idx.j, idx.column] = field.negate_where(
            minors[idx.minor], idx.odd ^ bool(i & 1)
        )
    return block


@dataclass
class TerraciniMatrix:
    data: np.ndarray
    k: int
    n: int
    s: int
    seed: int | None
    backend: str

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def dump(self, path: str | Path, field: Field) -> None:
        """Write one row per line, space separated."""
        with open(path, "w", encoding="utf-8") as fh:
            for row in self.data:
                fh.write(" ".join(field.format_scalar(v) for v in row))
                fh.write("\n")


def load_dump(path: str | Path, field: Field) -> np.ndarray:
    rows = [line.split() for line in Path(path).read_text(encoding="utf-8").splitlines() if line]
    if isinstance(field, PrimeField):
        return field.asarray(np.array([[int(v) for v in r] for r in rows], dtype=object))
    return np.array([[float(v) for v in r] for r in rows])


def assemble(
    points: Sequence[np.ndarray],
    table: SubsetTable,
    field: Field,
    *,
    seed: int | None = None,
) -> TerraciniMatrix:
    if not points:
        raise ValueError("assemble needs at least one point")
    shapes = {np.shape(p) for p in points}
    if len(shapes) != 1:
        raise ValueError(f"points have mixed shapes: {sorted(shapes)}")
    data = np.vstack([tangent_block(p, table, field) for p in points])
    return TerraciniMatrix(
        data=data, k=table.k, n=table.n, s=len(points), seed=seed, backend=field.label
    )


def terracini_matrix(k: int, n: int, s: int, field: Field, seed: int) -> TerraciniMatrix:
    """Tangent spaces at the first s points of the stream keyed by ``seed``."""
    src = RandomPointSource(seed, field)
    return assemble(sample_points(src, k, n, s), build_subset_table(n, k), field, seed=seed)
