import csv
import json
import random
import statistics

import pytest

from mscvrp.bench import (
    REPORT_HEADER,
    RunRecord,
    compare_reports,
    format_verdict,
    mode_config,
    read_report_csv,
    run_suite,
    summarize,
    write_report_csv,
    write_report_json,
)
from mscvrp.solver import GUIDED, PLAIN
from oracles import random_instance


def records(mode="plain"):
    out = []
    for k, name in enumerate(["b", "a", "c"]):
        for run in range(1, 4):
            cost = 100 + 10 * k + run
            out.append(RunRecord(name, mode, run, run - 1, cost, 100 * (cost - 100) / 100, 5))
    return out


def test_mode_config():
    cfg = mode_config("guided-nopr", 3.0)
    assert cfg.mode == GUIDED and not cfg.enable_pr and cfg.t_max == 3.0
    assert mode_config("plain", 1.0).mode == PLAIN
    with pytest.raises(ValueError):
        mode_config("fast", 1.0)


def test_summary_and_aggregates_match_recomputation():
    rep = summarize(records(), "plain")
    assert [r.instance for r in rep.rows] == ["a", "b", "c"]
    b = rep.rows[1]
    assert b.best_cost == 101 and b.avg_cost == 102 and b.best_gap == pytest.approx(1.0)
    agg = rep.aggregate()
    gaps = [r.avg_gap for r in rep.rows]
    assert agg["avg_gap"] == pytest.approx({"min": min(gaps), "avg": statistics.fmean(gaps),
                                            "median": statistics.median(gaps), "max": max(gaps)})


def test_report_files(tmp_path):
    rep = summarize(records(), "plain")
    p = tmp_path / "r.csv"
    write_report_csv([rep], p)
    lines = p.read_text().splitlines()
    assert lines[0] == ",".join(REPORT_HEADER)
    row = next(csv.DictReader(p.open()))
    assert row["avg_gap"] == f"{rep.rows[0].avg_gap:.2f}"
    j = tmp_path / "r.json"
    write_report_json([rep], j)
    doc = json.loads(j.read_text())
    assert len(doc["plain"]["runs"]) == 9
    assert doc["plain"]["aggregate"]["best_gap"]["max"] == pytest.approx(21.0)


def write_gaps(path, mode, gaps):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(REPORT_HEADER)
        for k, g in enumerate(gaps):
            w.writerow([f"i{k:02d}", mode, "0", "0", f"{g:.2f}", f"{g:.2f}"])


def test_compare_dominating_report_rejects(tmp_path):
    rng = random.Random(0)
    b = [rng.uniform(0.5, 1.5) for _ in range(20)]
    a = [x - rng.uniform(0.05, 0.3) for x in b]
    pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
    write_gaps(pa, "guided", a)
    write_gaps(pb, "plain", b)
    res, common = compare_reports(pa, pb)
    assert len(common) == 20
    assert format_verdict(res).endswith("reject H0 at α=0.0125")
    assert "fail to reject" in format_verdict(compare_reports(pb, pa)[0])


def test_compare_mixed_report_needs_mode(tmp_path):
    p = tmp_path / "m.csv"
    write_report_csv([summarize(records("plain"), "plain"), summarize(records("guided"), "guided")], p)
    with pytest.raises(ValueError):
        compare_reports(p, p)
    assert set(read_report_csv(p)) == {(i, m) for i in "abc" for m in ("plain", "guided")}


def test_run_suite_is_reproducible(tmp_path):
    rng = random.Random(3)
    insts = {f"r{k}": random_instance(rng, 10, capacity=20) for k in range(2)}
    bks = {"r0": 1000, "r1": 1000}
    configs = {"plain": mode_config("plain", 600, max_iterations=2)}
    a = run_suite(insts, configs, 2, bks)
    b = run_suite(insts, configs, 2, bks, jobs=2)
    pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
    write_report_csv(a.values(), pa)
    write_report_csv(b.values(), pb)
    assert pa.read_bytes() == pb.read_bytes()
    assert [r.seed for r in a["plain"].runs] == [0, 1, 0, 1]


def test_run_suite_skips_missing_bks(caplog):
    insts = {"r0": random_instance(random.Random(1), 6)}
    reps = run_suite(insts, {"plain": mode_config("plain", 600, max_iterations=1)}, 1, {})
    assert reps["plain"].rows == [] and "no BKS" in caplog.text
