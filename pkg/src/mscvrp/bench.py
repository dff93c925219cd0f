"""Multi-run benchmark harness: per-instance gap tables and aggregate rows."""

from __future__ import annotations

import csv
import json
import logging
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .instance import Instance, read_instance
from .solution import gap
from .solver import GUIDED, PLAIN, SolverConfig, seed_protocol, solve
from .stats import DEFAULT_ALPHA, WilcoxonResult, wilcoxon_one_tailed

log = logging.getLogger(__name__)

REPORT_HEADER = ("instance", "mode", "avg_cost", "best_cost", "avg_gap", "best_gap")

MODES: Dict[str, Tuple[str, bool]] = {
    "plain": (PLAIN, True),
    "guided": (GUIDED, True),
    "plain-nopr": (PLAIN, False),
    "guided-nopr": (GUIDED, False),
}


def mode_config(name: str, t_max: float, **kw) -> SolverConfig:
    if name not in MODES:
        raise ValueError(f"unknown mode {name!r}; choose from {', '.join(MODES)}")
    mode, pr = MODES[name]
    return SolverConfig(mode=mode, enable_pr=pr, t_max=t_max, **kw)


@dataclass(frozen=True)
class RunRecord:
    instance: str
    mode: str
    run: int
    seed: int
    cost: int
    gap: float
    iterations: int


@dataclass(frozen=True)
class InstanceSummary:
    instance: str
    mode: str
    avg_cost: float
    best_cost: int
    avg_gap: float
    best_gap: float


@dataclass
class BenchReport:
    mode: str
    rows: List[InstanceSummary]
    runs: List[RunRecord]

    def aggregate(self) -> Dict[str, Dict[str, float]]:
        """Min/avg/median/max over instances of the avg- and best-gap columns."""
        out = {}
        for col in ("avg_gap", "best_gap"):
            vals = [getattr(r, col) for r in self.rows]
            if not vals:
                continue
            out[col] = {"min": min(vals), "avg": statistics.fmean(vals),
                        "median": statistics.median(vals), "max": max(vals)}
        return out


def summarize(records: Sequence[RunRecord], mode: str) -> BenchReport:
    by_inst: Dict[str, List[RunRecord]] = {}
    for r in records:
        by_inst.setdefault(r.instance, []).append(r)
    rows = []
    for name in sorted(by_inst):
        rs = by_inst[name]
        rows.append(InstanceSummary(
            instance=name, mode=mode,
            avg_cost=statistics.fmean(r.cost for r in rs),
            best_cost=min(r.cost for r in rs),
            avg_gap=statistics.fmean(r.gap for r in rs),
            best_gap=min(r.gap for r in rs),
        ))
    return BenchReport(mode=mode, rows=rows, runs=list(records))


def _run_cell(cell) -> RunRecord:
    name, instance, mode, run, config, bks = cell
    res = solve(instance, config)
    return RunRecord(instance=name, mode=mode, run=run, seed=config.seed, cost=res.cost,
                     gap=gap(res.cost, bks), iterations=res.iterations)


def run_suite(instances: Mapping[str, Instance], configs: Mapping[str, SolverConfig], runs: int,
              bks: Mapping[str, float], jobs: int = 1) -> Dict[str, BenchReport]:
    """Solve every (instance, config) pair ``runs`` times with seeds 0..runs-1."""
    cells = []
    for name in sorted(instances):
        if name not in bks:
            log.warning("no BKS for %s; skipped", name)
            continue
        for mode in configs:
            for run in range(1, runs + 1):
                cfg = replace(configs[mode], seed=seed_protocol(run))
                cells.append((name, instances[name], mode, run, cfg, bks[name]))
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            records = list(ex.map(_run_cell, cells))
    else:
        records = [_run_cell(c) for c in cells]
    records.sort(key=lambda r: (r.instance, r.mode, r.seed))
    return {mode: summarize([r for r in records if r.mode == mode], mode) for mode in configs}


def load_instances(directory: str | Path, names: Optional[Iterable[str]] = None) -> Dict[str, Instance]:
    directory = Path(directory)
    wanted = set(names) if names is not None else None
    out = {}
    for path in sorted(directory.glob("*.vrp")):
        if wanted is None or path.stem in wanted:
            out[path.stem] = read_instance(path)
    return out


def write_report_csv(reports: Iterable[BenchReport], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(REPORT_HEADER)
        for rep in reports:
            for r in rep.rows:
                w.writerow([r.instance, r.mode, f"{r.avg_cost:.2f}", r.best_cost,
                            f"{r.avg_gap:.2f}", f"{r.best_gap:.2f}"])


def write_report_json(reports: Iterable[BenchReport], path: str | Path) -> None:
    doc = {rep.mode: {"instances": [asdict(r) for r in rep.rows],
                      "runs": [asdict(r) for r in rep.runs],
                      "aggregate": rep.aggregate()} for rep in reports}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def read_report_csv(path: str | Path) -> Dict[Tuple[str, str], Dict[str, str]]:
    with open(path, newline="") as fh:
        return {(row["instance"], row["mode"]): row for row in csv.DictReader(fh)}


def compare_reports(path_a: str | Path, path_b: str | Path, mode_a: Optional[str] = None,
                    mode_b: Optional[str] = None) -> Tuple[WilcoxonResult, List[str]]:
    """Pair per-instance average gaps of two reports (H1: a has smaller gaps).

    A report holding several modes needs ``mode_a``/``mode_b`` to pick one.
    """
    a, b = read_report_csv(path_a), read_report_csv(path_b)

    def by_instance(rows, mode):
        modes = {m for _, m in rows}
        if mode is None:
            if len(modes) > 1:
                raise ValueError(f"report holds modes {sorted(modes)}; pick one")
        elif mode not in modes:
            raise ValueError(f"mode {mode!r} not in report")
        return {inst: float(row["avg_gap"]) for (inst, m), row in rows.items() if mode in (None, m)}

    ga, gb = by_instance(a, mode_a), by_instance(b, mode_b)
    common = sorted(set(ga) & set(gb))
    return wilcoxon_one_tailed([ga[k] for k in common], [gb[k] for k in common]), common


def format_verdict(res: WilcoxonResult, alpha: float = DEFAULT_ALPHA) -> str:
    verdict = "reject H0" if res.rejects(alpha) else "fail to reject H0"
    return (f"W+={res.statistic:g} n={res.n_effective} p={res.p_value:.6g} ({res.method}): "
            f"{verdict} at α={alpha:g}")
