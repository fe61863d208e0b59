"""Published dimension tables shipped as a text asset, and the verifier."""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

from grassecant.rank import RankBackendConfig
from grassecant.scan import ScanCache, ScanRecord, scan_pair

log = logging.getLogger(__name__)

_CHECKSUM_TAG = "# sha256 of the data lines:"


@dataclass(frozen=True)
class GoldenRow:
    N: int
    S: int
    k: int
    n: int
    dims: tuple[int, ...]  # s = 2, 3, ...
    starred: tuple[bool, ...]

    @property
    def s_values(self) -> range:
        return range(2, 2 + len(self.dims))

    def dim(self, s: int) -> int:
        return self.dims[s - 2]


@dataclass(frozen=True)
class GoldenData:
    rows: tuple[GoldenRow, ...]
    declared_checksum: str | None
    actual_checksum: str

    @property
    def checksum_ok(self) -> bool:
        return self.declared_checksum == self.actual_checksum

    def row(self, k: int, n: int) -> GoldenRow | None:
        return next((r for r in self.rows if (r.k, r.n) == (k, n)), None)

    def cells(self):
        for r in self.rows:
            for s in r.s_values:
                yield r.k, r.n, s, r.dim(s), r.starred[s - 2]


def default_golden_path() -> Path:
    return Path(str(resources.files("grassecant") / "data" / "golden_tables.txt"))


def parse_golden(text: str) -> GoldenData:
    declared = None
    data_lines = []
    rows = []
    for line in text.splitlines():
        if line.startswith(_CHECKSUM_TAG):
            declared = line[len(_CHECKSUM_TAG):].strip()
            continue
        if not line.strip() or line.startswith("#"):
            continue
        data_lines.append(line)
        head, _, tail = line.partition(":")
        N, S, k, n = (int(v) for v in head.split())
        entries = tail.split()
        rows.append(
            GoldenRow(
                N=N,
                S=S,
                k=k,
                n=n,
                dims=tuple(int(e.rstrip("*")) for e in entries),
                starred=tuple(e.endswith("*") for e in entries),
            )
        )
    actual = hashlib.sha256(("\n".join(data_lines) + "\n").encode()).hexdigest()
    return GoldenData(tuple(rows), declared, actual)


def load_golden(path: str | Path | None = None) -> GoldenData:
    path = Path(path) if path is not None else default_golden_path()
    golden = parse_golden(path.read_text(encoding="utf-8"))
    if not golden.checksum_ok:
        log.warning("golden asset %s fails its checksum (declared %s, actual %s)",
                    path, golden.declared_checksum, golden.actual_checksum)
    return golden


@dataclass(frozen=True)
class Mismatch:
    k: int
    n: int
    s: int
    expected: int
    got: int | None
    kind: str  # "dimension", "marker" or "missing"

    def describe(self) -> str:
        if self.kind == "marker":
            return (f"G({self.k},{self.n})^{self.s}: defect marker disagrees "
                    f"(table {self.expected}, computed {self.got})")
        return f"G({self.k},{self.n})^{self.s}: expected {self.expected}, got {self.got}"


@dataclass(frozen=True)
class VerifyReport:
    checked: int
    mismatches: tuple[Mismatch, ...]
    records: tuple[ScanRecord, ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify(
    golden: GoldenData,
    cfg: RankBackendConfig,
    *,
    n_min: int = 3,
    n_max: int = 14,
    k_max: int | None = None,
    cache: ScanCache | None = None,
    force: bool = False,
    progress: Callable[[GoldenRow], None] | None = None,
) -> VerifyReport:
    """Recompute every golden cell in range and list disagreements.

    A starred entry must come out defective and an unstarred one must not.
    """
    checked = 0
    bad: list[Mismatch] = []
    records: list[ScanRecord] = []
    for row in golden.rows:
        if not n_min <= row.n <= n_max or (k_max is not None and row.k > k_max):
            continue
        if progress:
            progress(row)
        s_hi = row.s_values[-1]
        recs = None
        if cache is not None and not force:
            recs = cache.cached_run(row.k, row.n, cfg, s_max=s_hi, continue_past_S=False)
        if recs is None:
            recs = scan_pair(row.k, row.n, cfg, s_max=s_hi, check=False)
            if cache is not None:
                cache.append(recs)
        by_s = {r.s: r for r in recs}
        records.extend(recs)
        for s in row.s_values:
            checked += 1
            rec = by_s.get(s)
            want = row.dim(s)
            if rec is None:
                bad.append(Mismatch(row.k, row.n, s, want, None, "missing"))
            elif rec.computed_dim != want:
                bad.append(Mismatch(row.k, row.n, s, want, rec.computed_dim, "dimension"))
            elif row.starred[s - 2] != (rec.defect > 0):
                bad.append(Mismatch(row.k, row.n, s, int(row.starred[s - 2]),
                                    int(rec.defect > 0), "marker"))
    return VerifyReport(checked, tuple(bad), tuple(records))
