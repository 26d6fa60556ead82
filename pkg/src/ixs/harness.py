"""Batch runs, CSV records and shifted performance profiles."""

from __future__ import annotations

import csv
import io
import logging
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional

from ixs.adapters import family_of, load_adapter
from ixs.core import IxsConfig, run_ixs
from ixs.oracle import brute_force_bilevel

log = logging.getLogger(__name__)

CSV_COLUMNS = ("id", "family", "method", "status", "z_num", "z_den", "time_ms", "iters", "greedy_frac")
MANIFEST_COLUMNS = ("id", "path", "family", "method", "seed", "time_limit")
METHODS = ("ixs", "oracle")
STATUSES = ("optimal", "timeout", "error")


@dataclass(frozen=True)
class RunRecord:
    id: str
    family: str
    method: str
    status: str
    z: Optional[Fraction]
    time_ms: int
    iters: Optional[int] = None
    greedy_frac: Optional[float] = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "optimal" and self.z is None:
            raise ValueError("an optimal run needs an objective value")
        if self.time_ms < 0:
            raise ValueError("negative run time")

    def row(self) -> list[str]:
        z = Fraction(self.z) if self.z is not None else None
        return [
            self.id,
            self.family,
            self.method,
            self.status,
            "" if z is None else str(z.numerator),
            "" if z is None else str(z.denominator),
            str(self.time_ms),
            "" if self.iters is None else str(self.iters),
            "" if self.greedy_frac is None else f"{self.greedy_frac:.6f}",
        ]

    @classmethod
    def from_row(cls, row: dict) -> "RunRecord":
        z = Fraction(int(row["z_num"]), int(row["z_den"])) if row["z_num"] else None
        return cls(
            id=row["id"],
            family=row["family"],
            method=row["method"],
            status=row["status"],
            z=z,
            time_ms=int(row["time_ms"]),
            iters=int(row["iters"]) if row["iters"] else None,
            greedy_frac=float(row["greedy_frac"]) if row["greedy_frac"] else None,
        )


@dataclass(frozen=True)
class RunSpec:
    id: str
    path: str
    family: str
    method: str
    seed: int = 0
    time_limit: float = 3600.0


@dataclass(frozen=True)
class ProfilePoint:
    method: str
    ratio: float
    fraction: float


def read_manifest(path) -> list[RunSpec]:
    """Manifest CSV with header ``id,path,family,method,seed,time_limit``.

    Paths are relative to the manifest; an empty family is taken from the
    instance file suffix.
    """
    base = Path(path).parent
    specs = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            method = row["method"].strip()
            if method not in METHODS:
                raise ValueError(f"unknown method {method!r} in manifest")
            inst_path = base / row["path"].strip()
            family = (row.get("family") or "").strip() or None
            specs.append(RunSpec(
                id=row["id"].strip(),
                path=str(inst_path),
                family=family or Path(inst_path).suffix.lstrip("."),
                method=method,
                seed=int(row.get("seed") or 0),
                time_limit=float(row.get("time_limit") or 3600.0),
            ))
    return specs


def run_one(spec: RunSpec, timing: bool = True) -> RunRecord:
    start = time.perf_counter()
    try:
        adapter = load_adapter(spec.path, family_of(spec.path, spec.family))
        if spec.method == "ixs":
            res = run_ixs(adapter, IxsConfig(time_limit=spec.time_limit, rng_seed=spec.seed))
            status, z, iters, frac = res.status, res.z_star, res.iterations, res.greedy_fraction
        else:
            _, z = brute_force_bilevel(adapter)
            status, iters, frac = "optimal", None, None
    except Exception as exc:  # a bad run becomes an error row; the batch goes on
        log.error("run %s/%s failed: %s", spec.id, spec.method, exc)
        status, z, iters, frac = "error", None, None, None
    elapsed = round((time.perf_counter() - start) * 1000) if timing else 0
    return RunRecord(spec.id, spec.family, spec.method, status, z, elapsed, iters, frac)


def _run_one_untimed(spec: RunSpec) -> RunRecord:
    return run_one(spec, timing=False)


def run_specs(specs: Iterable[RunSpec], jobs: int = 1, timing: bool = True) -> list[RunRecord]:
    specs = list(specs)
    if jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run_one if timing else _run_one_untimed, specs))
    else:
        records = [run_one(s, timing) for s in specs]
    return sorted(records, key=lambda r: (r.id, r.method))


def format_records(records: Iterable[RunRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(rec.row())
    return buf.getvalue()


def read_records(path) -> list[RunRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected columns {reader.fieldnames}")
        return [RunRecord.from_row(row) for row in reader]


def run_batch(manifest, out=None, jobs: int = 1, timing: bool = True) -> list[RunRecord]:
    """Run every manifest entry and write one CSV row per run to ``out``."""
    records = run_specs(read_manifest(manifest), jobs=jobs, timing=timing)
    if out is not None:
        Path(out).write_text(format_records(records), encoding="utf-8")
    return records


def compute_profile(records: Iterable[RunRecord], time_limit: float = 3600.0) -> list[ProfilePoint]:
    """Shifted performance profile, ratio (t + 1) / (t_best + 1) in seconds.

    Runs that did not finish optimally count as taking ``time_limit``.  Every
    method gets a point at each ratio that occurs for any method.
    """
    times: dict[str, dict[str, float]] = defaultdict(dict)
    for r in records:
        t = r.time_ms / 1000 if r.status == "optimal" else time_limit
        times[r.method][r.id] = min(t, time_limit)
    if not times:
        return []
    instance_sets = {m: frozenset(v) for m, v in times.items()}
    reference = next(iter(instance_sets.values()))
    if any(s != reference for s in instance_sets.values()):
        raise ValueError("methods were run on different instance sets")
    ratios: dict[str, list[float]] = {m: [] for m in times}
    for inst in sorted(reference):
        best = min(times[m][inst] for m in times)
        for m in times:
            ratios[m].append((times[m][inst] + 1) / (best + 1))
    grid = sorted({1.0} | {x for rs in ratios.values() for x in rs})
    points = []
    for m in sorted(ratios):
        rs = sorted(ratios[m])
        for x in grid:
            points.append(ProfilePoint(m, x, sum(v <= x for v in rs) / len(rs)))
    return points


def format_profile(points: Iterable[ProfilePoint]) -> str:
    lines = ["method,ratio,fraction"]
    lines += [f"{p.method},{p.ratio:.6f},{p.fraction:.6f}" for p in points]
    return "\n".join(lines) + "\n"
