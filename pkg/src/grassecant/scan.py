"""Sweep (n, k, s), classify each secant variety and cross-check known results."""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Iterator

from grassecant.combin import binomial
from grassecant.rank import RankBackendConfig, RankResult, certified_rank, row_rank_profile
from grassecant.terracini import derive_seed, terracini_matrix

log = logging.getLogger(__name__)

CERTIFIED = "certified_nondefective"
PROBABLE = "probable_nondefective"
CANDIDATE = "candidate_defective"
CONFIRMED = "oracle_confirmed_defective"
STATUSES = (CERTIFIED, PROBABLE, CANDIDATE, CONFIRMED)

CACHE_ENV = "GRASSECANT_CACHE_DIR"


class RegistryContradiction(RuntimeError):
    """A computed dimension disagrees with a theorem."""


def ambient_dim(k: int, n: int) -> int:
    return binomial(n + 1, k + 1) - 1


def grassmannian_dim(k: int, n: int) -> int:
    return (k + 1) * (n - k)


def expected_dim(k: int, n: int, s: int) -> int:
    return min(ambient_dim(k, n), s * grassmannian_dim(k, n) + s - 1)


def saturation_s(k: int, n: int) -> int:
    """Smallest s whose expected dimension fills the ambient space."""
    return math.ceil((ambient_dim(k, n) + 1) / (grassmannian_dim(k, n) + 1))


def lines_oracle(n: int, s: int) -> int:
    """dim G(1, n)^s, i.e. of skew (n+1)x(n+1) matrices of rank <= 2s, projectivised."""
    ambient = binomial(n + 1, 2) - 1
    m = n + 1 - 2 * s
    return min(ambient, ambient - (binomial(m, 2) if m >= 2 else 0))


@dataclass(frozen=True)
class DefectRegistry:
    """Known dimensions: the sporadic defective cells, lines, and the CGG range.

    G(k, n) and G(n-k-1, n) are identified before lookup.
    """

    sporadic: dict[tuple[int, int, int], int] = field(
        default_factory=lambda: {(2, 6, 3): 1, (3, 7, 3): 1, (3, 7, 4): 4, (2, 8, 4): 2}
    )

    @staticmethod
    def normalize(k: int, n: int) -> int:
        return min(k, n - k - 1)

    def is_lines(self, k: int, n: int) -> bool:
        return self.normalize(k, n) == 1

    def is_cgg(self, k: int, n: int, s: int) -> bool:
        k0 = self.normalize(k, n)
        return k0 >= 2 and s * (k0 + 1) <= n + 1

    def known_dim(self, k: int, n: int, s: int) -> int | None:
        k0 = self.normalize(k, n)
        if k0 == 0:
            return expected_dim(k, n, s)
        if k0 == 1:
            return lines_oracle(n, s)
        if (k0, n, s) in self.sporadic:
            return expected_dim(k, n, s) - self.sporadic[(k0, n, s)]
        if self.is_cgg(k, n, s):
            return expected_dim(k, n, s)
        return None


REGISTRY = DefectRegistry()


@dataclass(frozen=True)
class ScanRecord:
    n: int
    k: int
    s: int
    N: int
    S: int
    expected_dim: int
    computed_dim: int
    defect: int
    status: str
    backend: str
    prime: int | None
    seed: int
    trials: int

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_strings(cls, raw: dict[str, str]) -> "ScanRecord":
        vals: dict = {}
        for name in cls.field_names():
            v = raw[name]
            if name in ("status", "backend"):
                vals[name] = v
            elif name == "prime":
                vals[name] = int(v) if v not in ("", "None") else None
            else:
                vals[name] = int(v)
        return cls(**vals)


def make_record(
    k: int,
    n: int,
    s: int,
    rank: int,
    trials: int,
    cfg: RankBackendConfig,
    registry: DefectRegistry = REGISTRY,
    *,
    check: bool = True,
) -> ScanRecord:
    """Turn a cone rank into a classified record, enforcing known results."""
    exp = expected_dim(k, n, s)
    dim = rank - 1
    if dim > exp:
        raise RuntimeError(
            f"G({k},{n})^{s}: computed dim {dim} exceeds the upper bound {exp}"
        )
    defect = exp - dim
    known = registry.known_dim(k, n, s)
    if known is not None and known != dim:
        msg = f"G({k},{n})^{s}: computed dim {dim}, known value {known}"
        if check and cfg.certifies:
            raise RegistryContradiction(msg)
        log.warning(msg)
    if defect == 0:
        status = CERTIFIED if cfg.certifies else PROBABLE
    else:
        status = CONFIRMED if known == dim else CANDIDATE
    return ScanRecord(
        n=n,
        k=k,
        s=s,
        N=ambient_dim(k, n),
        S=saturation_s(k, n),
        expected_dim=exp,
        computed_dim=dim,
        defect=defect,
        status=status,
        backend=cfg.mode,
        prime=cfg.prime if cfg.mode == "exact" else None,
        seed=cfg.seed,
        trials=trials,
    )


def stream_seed(cfg: RankBackendConfig, k: int, n: int, trial: int) -> int:
    return derive_seed(cfg.seed, k, n, trial)


def classify_cell_evidence(
    k: int,
    n: int,
    s: int,
    cfg: RankBackendConfig,
    registry: DefectRegistry = REGISTRY,
    *,
    check: bool = True,
) -> tuple[ScanRecord, RankResult]:
    """Like :func:`classify_cell`, also returning the per-trial ranks."""
    if not 0 <= k < n or s < 1:
        raise ValueError(f"invalid cell k={k}, n={n}, s={s}")

    def build(trial, fld):
        return terracini_matrix(k, n, s, fld, stream_seed(cfg, k, n, trial)).data

    res = certified_rank(build, cfg, ceiling=expected_dim(k, n, s) + 1)
    rec = make_record(k, n, s, res.rank, len(res.per_trial_ranks), cfg, registry, check=check)
    return rec, res


def classify_cell(
    k: int,
    n: int,
    s: int,
    cfg: RankBackendConfig,
    registry: DefectRegistry = REGISTRY,
    *,
    check: bool = True,
) -> ScanRecord:
    """Dimension of G(k, n)^s from the tangent spaces at s random points.

    Trial t uses the first s points of the stream keyed by (seed, k, n, t),
    the same points a scan of (k, n) uses for its s-th cell.
    """
    return classify_cell_evidence(k, n, s, cfg, registry, check=check)[0]


def prefix_ranks(k: int, n: int, s_max: int, cfg: RankBackendConfig, trial: int) -> list[int]:
    """Cone ranks for the first s = 0..s_max points of one trial's stream."""
    fld = cfg.field(trial)
    tm = terracini_matrix(k, n, s_max, fld, stream_seed(cfg, k, n, trial))
    block = (k + 1) * (n + 1)
    return row_rank_profile(tm.data, fld, [s * block for s in range(s_max + 1)])


def sweep_ranks(
    prefix,
    expected,
    cfg: RankBackendConfig,
    *,
    S: int,
    full: int,
    s_max: int | None = None,
    continue_past_S: bool = True,
) -> tuple[list[int], list[int], int]:
    """Best cone rank and trials used for every s up to the last one needed.

    ``prefix(upto, trial)`` returns ranks for s = 0..upto on nested point
    sets; ``expected(s)`` is the expected projective dimension.  Further
    trials only rerun the prefix up to the largest s still short of
    expected.  Without ``s_max`` the sweep ends at S, or past S at the first
    s reaching ``full`` (at most 3S).  Returns (best, used, last s).
    """

    def best_upto(upto):
        best = list(prefix(upto, 0))
        used = [1] * (upto + 1)
        short = [s for s in range(1, upto + 1) if best[s] < expected(s) + 1]
        for trial in range(1, cfg.trials):
            if not short:
                break
            again = prefix(max(short), trial)
            for s in short:
                best[s] = max(best[s], again[s])
                used[s] = trial + 1
            short = [s for s in short if best[s] < expected(s) + 1]
        return best, used

    hi = s_max if s_max is not None else S
    if hi < 1:
        return [0], [0], hi
    best, used = best_upto(hi)
    if s_max is not None or not continue_past_S:
        return best, used, hi
    cap = 3 * S
    while best[hi] < full and hi < cap:
        hi = min(cap, hi + S)
        best, used = best_upto(hi)
    last = next((s for s in range(S, hi + 1) if best[s] >= full), hi)
    return best, used, max(last, S)


def scan_pair(
    k: int,
    n: int,
    cfg: RankBackendConfig,
    *,
    s_max: int | None = None,
    continue_past_S: bool = True,
    registry: DefectRegistry = REGISTRY,
    check: bool = True,
) -> list[ScanRecord]:
    """Records for s = 2, 3, ... of one Grassmannian."""
    best, used, last = sweep_ranks(
        lambda upto, trial: prefix_ranks(k, n, upto, cfg, trial),
        lambda s: expected_dim(k, n, s),
        cfg,
        S=saturation_s(k, n),
        full=ambient_dim(k, n) + 1,
        s_max=s_max,
        continue_past_S=continue_past_S,
    )
    return [
        make_record(k, n, s, best[s], used[s], cfg, registry, check=check)
        for s in range(2, last + 1)
    ]


def k_range(n: int, *, k_max: int | None = None, k_only: int | None = None,
            lift_cap: bool = False) -> list[int]:
    """Default k range 1..floor((n-1)/2), capped at 5 when n = 14."""
    if k_only is not None:
        return [k_only] if 1 <= k_only < n else []
    top = n - 1 if lift_cap else (n - 1) // 2
    if n == 14 and not lift_cap:
        top = min(top, 5)
    if k_max is not None:
        top = min(top, k_max)
    return list(range(1, top + 1))


class ScanCache:
    """Append-only text cache, one ``key=value`` record per line."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._records: dict[tuple, ScanRecord] = {}
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                raw = dict(item.split("=", 1) for item in line.split())
                rec = ScanRecord.from_strings(raw)
                self._records[self.key(rec.k, rec.n, rec.s, rec.backend, rec.prime, rec.seed)] = rec

    @staticmethod
    def key(k, n, s, backend, prime, seed) -> tuple:
        return (k, n, s, backend, prime, seed)

    @staticmethod
    def cfg_key(cfg: RankBackendConfig) -> tuple:
        return (cfg.mode, cfg.prime if cfg.mode == "exact" else None, cfg.seed)

    def get(self, k: int, n: int, s: int, cfg: RankBackendConfig) -> ScanRecord | None:
        return self._records.get((k, n, s, *self.cfg_key(cfg)))

    def cached_run(self, k: int, n: int, cfg: RankBackendConfig, *, s_max: int | None,
                   continue_past_S: bool) -> list[ScanRecord] | None:
        """The complete run for (k, n) if every needed cell is cached."""
        S = saturation_s(k, n)
        hi = s_max if s_max is not None else S
        out = []
        for s in range(2, hi + 1):
            rec = self.get(k, n, s, cfg)
            if rec is None:
                return None
            out.append(rec)
        if s_max is None and continue_past_S and out and out[-1].computed_dim < out[-1].N:
            s = hi
            while out[-1].computed_dim < out[-1].N and s < 3 * S:
                s += 1
                rec = self.get(k, n, s, cfg)
                if rec is None:
                    return None
                out.append(rec)
        return out

    def append(self, records: Iterable[ScanRecord]) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            for rec in records:
                fh.write(" ".join(f"{k}={v}" for k, v in rec.as_dict().items()) + "\n")
                self._records[self.key(rec.k, rec.n, rec.s, rec.backend, rec.prime, rec.seed)] = rec


def default_cache_path() -> Path | None:
    d = os.environ.get(CACHE_ENV)
    return Path(d) / "scan-cache.txt" if d else None


def _pair_job(args) -> list[ScanRecord]:
    k, n, cfg, s_max, cont, check = args
    return scan_pair(k, n, cfg, s_max=s_max, continue_past_S=cont, check=check)


def iter_scan(
    n_min: int,
    n_max: int,
    cfg: RankBackendConfig,
    *,
    k_max: int | None = None,
    k_only: int | None = None,
    lift_k_cap: bool = False,
    s_max: int | None = None,
    continue_past_S: bool = True,
    cache: ScanCache | None = None,
    force: bool = False,
    jobs: int = 1,
    check: bool = True,
) -> Iterator[list[ScanRecord]]:
    """Yield the records of each (k, n) in canonical (n, k) order."""
    if n_min < 3:
        raise ValueError(f"n_min must be >= 3, got {n_min}")
    pairs = [
        (k, n)
        for n in range(n_min, n_max + 1)
        for k in k_range(n, k_max=k_max, k_only=k_only, lift_cap=lift_k_cap)
    ]
    todo = []
    done: dict[tuple[int, int], list[ScanRecord]] = {}
    for k, n in pairs:
        hit = None
        if cache is not None and not force:
            hit = cache.cached_run(k, n, cfg, s_max=s_max, continue_past_S=continue_past_S)
        if hit is not None:
            done[(k, n)] = hit
        else:
            todo.append((k, n))

    def finish(pair, recs):
        if cache is not None:
            cache.append(recs)
        done[pair] = recs

    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = {
                pair: pool.submit(_pair_job, (*pair, cfg, s_max, continue_past_S, check))
                for pair in todo
            }
            for pair in pairs:
                if pair in futs:
                    finish(pair, futs[pair].result())
                yield done[pair]
        return
    for pair in pairs:
        if pair not in done:
            log.info("scanning G(%d,%d)", *pair)
            finish(pair, scan_pair(*pair, cfg, s_max=s_max,
                                   continue_past_S=continue_past_S, check=check))
        yield done[pair]


def scan_range(n_min: int, n_max: int, cfg: RankBackendConfig, **kwargs) -> list[ScanRecord]:
    """All records over the range, sorted by (n, k, s)."""
    out: list[ScanRecord] = []
    for recs in iter_scan(n_min, n_max, cfg, **kwargs):
        out.extend(recs)
    return sorted(out, key=lambda r: (r.n, r.k, r.s))
