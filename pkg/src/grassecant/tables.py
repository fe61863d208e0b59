"""CSV / JSON / Markdown emission of scan records."""

from __future__ import annotations

import csv
import io
import json
from itertools import groupby
from typing import Iterable, Sequence

from grassecant.scan import ScanRecord

CSV_COLUMNS = ScanRecord.field_names()


def to_csv(records: Iterable[ScanRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        row = rec.as_dict()
        row["prime"] = "" if row["prime"] is None else row["prime"]
        writer.writerow(row)
    return buf.getvalue()


def from_csv(text: str) -> list[ScanRecord]:
    return [ScanRecord.from_strings(row) for row in csv.DictReader(io.StringIO(text))]


def to_json(records: Iterable[ScanRecord]) -> str:
    return json.dumps([rec.as_dict() for rec in records], indent=2) + "\n"


def from_json(text: str) -> list[ScanRecord]:
    return [ScanRecord(**obj) for obj in json.loads(text)]


def _cell(rec: ScanRecord, paper_style: bool) -> str:
    if not rec.defect:
        return str(rec.computed_dim)
    if paper_style:
        return f"{rec.computed_dim}*"
    return f"{rec.computed_dim} (δ={rec.defect})"


def to_markdown(records: Sequence[ScanRecord], *, paper_style: bool = False,
                variety: str = "G") -> str:
    """One row per (k, n), ascending n then k, with a column per s."""
    recs = sorted(records, key=lambda r: (r.n, r.k, r.s))
    s_max = max((r.s for r in recs), default=2)
    s_cols = list(range(2, s_max + 1))
    header = ["N", "S", "k", "n"] + [f"{variety}^{s}" for s in s_cols]
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for (n, k), group in groupby(recs, key=lambda r: (r.n, r.k)):
        group = list(group)
        by_s = {r.s: r for r in group}
        cells = [str(group[0].N), str(group[0].S), str(k), str(n)]
        cells += [_cell(by_s[s], paper_style) if s in by_s else "" for s in s_cols]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def render(records: Sequence[ScanRecord], fmt: str, *, paper_style: bool = False,
           variety: str = "G") -> str:
    if fmt == "csv":
        return to_csv(records)
    if fmt == "json":
        return to_json(records)
    if fmt == "markdown":
        return to_markdown(records, paper_style=paper_style, variety=variety)
    raise ValueError(f"unknown format {fmt!r}")
