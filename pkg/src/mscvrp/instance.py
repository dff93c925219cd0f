"""CVRP instance parsing, the rounded distance oracle and neighbor rankings.

Node 0 is always the depot; customers are 1..N in file order.  File node
ids are kept in ``Instance.node_ids`` for reporting.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np


class InstanceError(ValueError):
    """Base class for instance-level failures."""


class InstanceParseError(InstanceError):
    def __init__(self, section: str, message: str = ""):
        self.section = section
        super().__init__(f"{section}: {message}" if message else f"{section}: missing or malformed")


class UnsupportedFormatError(InstanceError):
    pass


class InfeasibleInstanceError(InstanceError):
    pass


class DegenerateInstanceError(InstanceError):
    pass


LONG = "long"
SHORT = "short"

# k_estimated strictly above this marks an instance as long-route
LONG_ROUTE_THRESHOLD = 20


def nint(x: float) -> int:
    """Round half away from zero."""
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def _build_distances(coords: Sequence[Tuple[float, float]]) -> Tuple[np.ndarray, List[List[int]]]:
    xy = np.asarray(coords, dtype=np.float64)
    diff = xy[:, None, :] - xy[None, :, :]
    exact = np.sqrt((diff ** 2).sum(axis=2))
    rounded = np.floor(exact + 0.5).astype(np.int64)
    np.fill_diagonal(rounded, 0)
    return exact, rounded.tolist()


def _build_neighbors(exact: np.ndarray) -> Tuple[List[List[int]], List[List[int]]]:
    """Customers sorted by distance from every node, plus the 1-based rank table."""
    n_nodes = exact.shape[0]
    customers = np.arange(1, n_nodes)
    neighbors: List[List[int]] = []
    rank = [[0] * n_nodes for _ in range(n_nodes)]
    for i in range(n_nodes):
        cand = customers[customers != i]
        # lexsort: last key is primary; ties on distance fall back to node id
        order = cand[np.lexsort((cand, exact[i, cand]))]
        lst = order.tolist()
        neighbors.append(lst)
        row = rank[i]
        for pos, j in enumerate(lst, start=1):
            row[j] = pos
    return neighbors, rank


@dataclass(frozen=True)
class Instance:
    name: str
    coords: Tuple[Tuple[float, float], ...]
    demands: Tuple[int, ...]
    capacity: int
    node_ids: Tuple[int, ...] = ()
    exact: np.ndarray = field(init=False, repr=False, compare=False)
    dist: List[List[int]] = field(init=False, repr=False, compare=False)
    neighbors: List[List[int]] = field(init=False, repr=False, compare=False)
    rank: List[List[int]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.coords) != len(self.demands):
            raise InstanceError(
                f"coordinate records ({len(self.coords)}) and demand records ({len(self.demands)}) differ"
            )
        if len(self.coords) < 2:
            raise InstanceError("instance needs a depot and at least one customer")
        if self.capacity <= 0:
            raise InstanceError("capacity must be positive")
        if self.demands[0] != 0:
            raise InstanceError("depot demand must be 0")
        for c, q in enumerate(self.demands[1:], start=1):
            if q < 0:
                raise InstanceError(f"customer {c} has negative demand")
            if q > self.capacity:
                raise InfeasibleInstanceError(f"customer {c} demand {q} exceeds capacity {self.capacity}")
        if not self.node_ids:
            object.__setattr__(self, "node_ids", tuple(range(1, len(self.coords) + 1)))
        exact, dist = _build_distances(self.coords)
        neighbors, rank = _build_neighbors(exact)
        object.__setattr__(self, "exact", exact)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "neighbors", neighbors)
        object.__setattr__(self, "rank", rank)

    @property
    def dimension(self) -> int:
        return len(self.coords)

    @property
    def n_customers(self) -> int:
        return len(self.coords) - 1

    @property
    def customers(self) -> range:
        return range(1, len(self.coords))

    @property
    def total_demand(self) -> int:
        return sum(self.demands)

    def distance(self, i: int, j: int) -> int:
        return self.dist[i][j]

    def __hash__(self):
        return hash((self.name, self.coords, self.demands, self.capacity))


def r_estimated(instance: Instance) -> float:
    """Fractional lower bound on the number of routes."""
    return instance.total_demand / instance.capacity


def k_estimated(instance: Instance) -> float:
    total = instance.total_demand
    if total <= 0:
        raise DegenerateInstanceError("all customer demands are zero")
    return instance.capacity / (total / instance.dimension)


def route_size_class(instance: Instance) -> str:
    return LONG if k_estimated(instance) > LONG_ROUTE_THRESHOLD else SHORT


# ---------------------------------------------------------------------------
# keyword-section files

_SECTIONS = ("NODE_COORD_SECTION", "DEMAND_SECTION", "DEPOT_SECTION")


def parse_instance(text: str, name: str | None = None) -> Instance:
    header: Dict[str, str] = {}
    sections: Dict[str, List[List[str]]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line == "EOF":
            break
        token = line.split()[0].rstrip(":")
        if token in _SECTIONS:
            current = token
            sections[current] = []
            continue
        if ":" in line and not line[0].isdigit() and not line[0] == "-":
            key, value = line.split(":", 1)
            header[key.strip().upper()] = value.strip()
            current = None
            continue
        if current is None:
            raise InstanceParseError("HEADER", f"unexpected line {line!r}")
        sections[current].append(line.split())

    for key in ("DIMENSION", "CAPACITY"):
        if key not in header:
            raise InstanceParseError(key)
    ewt = header.get("EDGE_WEIGHT_TYPE")
    if ewt is None:
        raise InstanceParseError("EDGE_WEIGHT_TYPE")
    if ewt.upper() != "EUC_2D":
        raise UnsupportedFormatError(f"EDGE_WEIGHT_TYPE {ewt} is not supported (EUC_2D only)")
    try:
        dim = int(header["DIMENSION"])
    except ValueError:
        raise InstanceParseError("DIMENSION", "not an integer") from None
    try:
        capacity = int(float(header["CAPACITY"]))
    except ValueError:
        raise InstanceParseError("CAPACITY", "not a number") from None

    for sec in _SECTIONS:
        if sec not in sections:
            raise InstanceParseError(sec)

    coords: Dict[int, Tuple[float, float]] = {}
    for rec in sections["NODE_COORD_SECTION"]:
        if len(rec) != 3:
            raise InstanceParseError("NODE_COORD_SECTION", f"bad record {' '.join(rec)!r}")
        try:
            coords[int(rec[0])] = (float(rec[1]), float(rec[2]))
        except ValueError:
            raise InstanceParseError("NODE_COORD_SECTION", f"bad record {' '.join(rec)!r}") from None
    demands: Dict[int, int] = {}
    for rec in sections["DEMAND_SECTION"]:
        if len(rec) != 2:
            raise InstanceParseError("DEMAND_SECTION", f"bad record {' '.join(rec)!r}")
        try:
            demands[int(rec[0])] = int(float(rec[1]))
        except ValueError:
            raise InstanceParseError("DEMAND_SECTION", f"bad record {' '.join(rec)!r}") from None
    depots = []
    for rec in sections["DEPOT_SECTION"]:
        for tok in rec:
            v = int(tok)
            if v == -1:
                break
            depots.append(v)
    if len(depots) != 1:
        raise InstanceParseError("DEPOT_SECTION", "exactly one depot required")

    if len(coords) != dim:
        raise InstanceParseError("NODE_COORD_SECTION", f"{len(coords)} records for DIMENSION {dim}")
    if len(demands) != dim:
        raise InstanceParseError("DEMAND_SECTION", f"{len(demands)} records for DIMENSION {dim}")
    if set(coords) != set(demands):
        raise InstanceParseError("DEMAND_SECTION", "node ids differ from NODE_COORD_SECTION")
    depot = depots[0]
    if depot not in coords:
        raise InstanceParseError("DEPOT_SECTION", f"unknown depot id {depot}")
    if demands[depot] != 0:
        raise InstanceParseError("DEMAND_SECTION", "depot demand must be 0")

    order = [depot] + [i for i in coords if i != depot]
    for i in order[1:]:
        if demands[i] > capacity:
            raise InfeasibleInstanceError(f"customer {i} demand {demands[i]} exceeds capacity {capacity}")
    return Instance(
        name=name or header.get("NAME", "unnamed"),
        coords=tuple(coords[i] for i in order),
        demands=tuple(demands[i] for i in order),
        capacity=capacity,
        node_ids=tuple(order),
    )


def read_instance(path: str | Path) -> Instance:
    path = Path(path)
    inst = parse_instance(path.read_text())
    if inst.name == "unnamed":
        object.__setattr__(inst, "name", path.stem)
    return inst


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def serialize_instance(instance: Instance) -> str:
    lines = [
        f"NAME : {instance.name}",
        "TYPE : CVRP",
        f"DIMENSION : {instance.dimension}",
        "EDGE_WEIGHT_TYPE : EUC_2D",
        f"CAPACITY : {instance.capacity}",
        "NODE_COORD_SECTION",
    ]
    ids = instance.node_ids
    for nid, (x, y) in zip(ids, instance.coords):
        lines.append(f"{nid}\t{_fmt(x)}\t{_fmt(y)}")
    lines.append("DEMAND_SECTION")
    for nid, q in zip(ids, instance.demands):
        lines.append(f"{nid}\t{q}")
    lines += ["DEPOT_SECTION", f"\t{ids[0]}", "\t-1", "EOF", ""]
    return "\n".join(lines)


def read_bks(path: str | Path) -> Dict[str, float]:
    """Read an ``instance,bks`` CSV."""
    out: Dict[str, float] = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            value = float(row["bks"])
            out[row["instance"].strip()] = int(value) if value.is_integer() else value
    return out
