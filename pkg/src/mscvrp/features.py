"""Instance and solution features for learning-from-solutions datasets.

Geometric quantities use exact Euclidean distances; population standard
deviations are used throughout.
"""

from __future__ import annotations

import csv
import math
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from .instance import Instance
from .solution import DEPOT, Solution

INSTANCE_FEATURES = tuple(f"i{k:02d}" for k in range(1, 10))
SOLUTION_FEATURES = tuple(f"s{k:02d}" for k in range(1, 23))
CSV_HEADER = INSTANCE_FEATURES + SOLUTION_FEATURES + ("label",)


@dataclass
class FeatureVector:
    i01: float; i02: float; i03: float; i04: float; i05: float
    i06: float; i07: float; i08: float; i09: float
    s01: float; s02: float; s03: float; s04: float; s05: float; s06: float
    s07: float; s08: float; s09: float; s10: float; s11: float; s12: float
    s13: float; s14: float; s15: float; s16: float; s17: float; s18: float
    s19: float; s20: float; s21: float; s22: float
    label: Optional[int] = None

    def values(self) -> Tuple[float, ...]:
        return astuple(self)[:-1]

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _mean(xs: Sequence[float]) -> float:
    return sum(xs) / len(xs) if xs else 0.0


def _pstd(xs: Sequence[float], mean: Optional[float] = None) -> float:
    if not xs:
        return 0.0
    m = _mean(xs) if mean is None else mean
    return math.sqrt(sum((x - m) ** 2 for x in xs) / len(xs))


def polar_angle(instance: Instance, c: int) -> float:
    """Angle of ``c`` around the depot, in [0, 2*pi)."""
    (x0, y0), (x, y) = instance.coords[DEPOT], instance.coords[c]
    a = math.atan2(y - y0, x - x0)
    return a + 2 * math.pi if a < 0 else a


def angle_between(instance: Instance, a: int, b: int) -> float:
    """Absolute angular difference of two nodes seen from the depot, in [0, pi]."""
    d = abs(polar_angle(instance, a) - polar_angle(instance, b))
    return 2 * math.pi - d if d > math.pi else d


def instance_features(instance: Instance, n_routes: int) -> Tuple[float, ...]:
    if n_routes < 1:
        raise ValueError("route count must be at least 1")
    ex = instance.exact
    n = instance.n_customers
    custs = list(instance.customers)

    pair_sum = float(ex[1:, 1:].sum())  # diagonal is zero, so this is the i != j sum
    i04 = pair_sum / n
    sq = 0.0
    for i in custs:
        row = ex[i]
        for j in custs:
            if i != j:
                sq += (row[j] - i04) ** 2
    i05 = math.sqrt(sq / n)

    depot_d = [float(ex[c, DEPOT]) for c in custs]
    angles = [polar_angle(instance, c) for c in custs]
    i06 = _mean(depot_d)
    i08 = _mean(angles)
    return (
        float(n),
        float(n_routes),
        instance.total_demand / (instance.capacity * n_routes),
        i04,
        i05,
        i06,
        _pstd(depot_d, i06),
        i08,
        _pstd(angles, i08),
    )


def _route_geometry(instance: Instance, route: Sequence[int]):
    ex = instance.exact
    coords = instance.coords
    m = len(route)
    path = [DEPOT, *route, DEPOT]
    edges = [float(ex[a, b]) for a, b in zip(path, path[1:])]
    length = sum(edges)

    x0, y0 = coords[DEPOT]
    gx = (sum(coords[c][0] for c in route) + x0) / (m + 1)
    gy = (sum(coords[c][1] for c in route) + y0) / (m + 1)
    lx, ly = gx - x0, gy - y0
    norm = math.hypot(lx, ly)
    if norm > 0:
        # positive on the right of the directed line depot -> centroid
        side = [-(lx * (coords[c][1] - y0) - ly * (coords[c][0] - x0)) / norm for c in route]
        width = max(side) - min(side)
    else:
        width = 0.0

    span = 0.0
    for a in range(m):
        for b in range(a + 1, m):
            span = max(span, angle_between(instance, route[a], route[b]))

    nodes = [DEPOT, *route]
    diameter = 0.0
    for a in range(len(nodes)):
        row = ex[nodes[a]]
        for b in range(a + 1, len(nodes)):
            diameter = max(diameter, float(row[nodes[b]]))

    rank = instance.rank
    rank_sum = 0
    for a in route:
        ra = rank[a]
        for b in route:
            if a != b:
                rank_sum += ra[b]

    return {
        "length": length,
        "longest_edge": max(edges),
        "interior_edge": max(edges[1:-1]) if m > 1 else 0.0,
        "end_edges": edges[0] + edges[-1],
        "centroid": (gx, gy),
        "width": width,
        "span": span,
        "depth": max(float(ex[c, DEPOT]) for c in route),
        "diameter": diameter,
        "avg_rank": rank_sum / m,
    }


def solution_features(instance: Instance, solution: Solution) -> Tuple[float, ...]:
    routes = [r for r in solution.routes if r]
    R = len(routes)
    if R == 0:
        raise ValueError("solution has no routes")
    dem = instance.demands
    Q = instance.capacity
    geo = [_route_geometry(instance, r) for r in routes]

    widths = [g["width"] for g in geo]
    spans = [g["span"] for g in geo]
    depths = [g["depth"] for g in geo]
    lengths = [g["length"] for g in geo]
    mean_len = _mean(lengths)
    end_ratio = [g["end_edges"] / g["length"] if g["length"] > 0 else 0.0 for g in geo]
    max_q = [max(dem[c] for c in r) for r in routes]
    util = [sum(dem[c] for c in r) / Q for r in routes]
    inv_diam = [1.0 / g["diameter"] if g["diameter"] > 0 else 0.0 for g in geo]

    if R > 1:
        cents = [g["centroid"] for g in geo]
        tot = 0.0
        for a in range(R):
            for b in range(R):
                if a != b:
                    tot += math.dist(cents[a], cents[b])
        s16 = tot / (R * (R - 1))
    else:
        s16 = 0.0

    V = instance.dimension
    s17 = math.sqrt(sum((len(r) - V / R) ** 2 for r in routes) / R)
    longest = max(g["longest_edge"] for g in geo)
    interior = max(g["interior_edge"] for g in geo)

    s01, s03, s05 = _mean(widths), _mean(spans), _mean(depths)
    s13, s19, s21 = _mean(max_q), _mean(util), _mean(inv_diam)
    return (
        s01,
        _pstd(widths, s01),
        s03,
        _pstd(spans, s03),
        s05,
        _pstd(depths, s05),
        sum(end_ratio) / (2 * R),
        _mean([g["longest_edge"] for g in geo]),
        longest / mean_len if mean_len > 0 else 0.0,
        interior / mean_len if mean_len > 0 else 0.0,
        sum(g["end_edges"] for g in geo) / (2 * R),
        sum(dem[r[0]] + dem[r[-1]] for r in routes) / (2 * R),
        s13,
        _pstd(max_q, s13),
        _pstd(lengths, mean_len),
        s16,
        s17,
        _mean([g["avg_rank"] for g in geo]),
        s19,
        _pstd(util, s19),
        s21,
        _pstd(inv_diam, s21),
    )


def feature_vector(instance: Instance, solution: Solution, label: Optional[int] = None) -> FeatureVector:
    values = instance_features(instance, solution.n_routes) + solution_features(instance, solution)
    return FeatureVector(*values, label=label)


def capacity_utilization(solution: Solution) -> Tuple[float, float]:
    """Mean and population std of per-route load / Q (S19, S20)."""
    Q = solution.instance.capacity
    util = [load / Q for load in solution.loads]
    m = _mean(util)
    return m, _pstd(util, m)


def pool_guidance_stats(pool: Iterable[Solution]) -> Tuple[float, float]:
    members = list(pool)
    if not members:
        raise ValueError("pool is empty")
    stats = [capacity_utilization(s) for s in members]
    return _mean([a for a, _ in stats]), _mean([b for _, b in stats])


def _csv_row(fv: FeatureVector) -> List[str]:
    return [repr(float(v)) for v in fv.values()] + ["" if fv.label is None else str(int(fv.label))]


def export_dataset(rows: Iterable[Tuple[str, FeatureVector]], path: str | Path, append: bool = False) -> int:
    """Write feature rows as CSV; returns the number of data rows written."""
    path = Path(path)
    write_header = not (append and path.exists() and path.stat().st_size > 0)
    count = 0
    with open(path, "a" if append else "w", newline="") as fh:
        writer = csv.writer(fh)
        if write_header:
            writer.writerow(CSV_HEADER)
        for _instance_id, fv in rows:
            writer.writerow(_csv_row(fv))
            count += 1
    return count
