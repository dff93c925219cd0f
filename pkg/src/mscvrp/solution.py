"""Solutions as route lists with cached loads, costs and a position index."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from .instance import Instance

DEPOT = 0


def route_cost(dist: List[List[int]], route: Sequence[int]) -> int:
    if not route:
        return 0
    total = dist[DEPOT][route[0]] + dist[route[-1]][DEPOT]
    for a, b in zip(route, route[1:]):
        total += dist[a][b]
    return total


def _prefix_loads(demands: Sequence[int], route: Sequence[int]) -> List[int]:
    """pre[k] = load of the first k customers."""
    pre = [0]
    acc = 0
    for c in route:
        acc += demands[c]
        pre.append(acc)
    return pre


class Solution:
    """A set of depot-anchored routes.

    ``route_of[c]`` and ``pos_of[c]`` locate customer ``c``; both are kept in
    sync by :meth:`refresh_route` and :meth:`drop_empty`.
    """

    __slots__ = ("instance", "routes", "loads", "route_costs", "cost", "route_of", "pos_of", "prefix")

    def __init__(self, instance: Instance, routes: Iterable[Sequence[int]]):
        self.instance = instance
        self.routes: List[List[int]] = [list(r) for r in routes if len(r) > 0]
        n = instance.dimension
        self.route_of = [-1] * n
        self.pos_of = [-1] * n
        self.loads: List[int] = []
        self.route_costs: List[int] = []
        self.prefix: List[List[int]] = []
        dist = instance.dist
        for ri, r in enumerate(self.routes):
            for p, c in enumerate(r):
                self.route_of[c] = ri
                self.pos_of[c] = p
            pre = _prefix_loads(instance.demands, r)
            self.prefix.append(pre)
            self.loads.append(pre[-1])
            self.route_costs.append(route_cost(dist, r))
        self.cost = sum(self.route_costs)

    def copy(self) -> "Solution":
        new = Solution.__new__(Solution)
        new.instance = self.instance
        new.routes = [r[:] for r in self.routes]
        new.loads = self.loads[:]
        new.route_costs = self.route_costs[:]
        new.cost = self.cost
        new.route_of = self.route_of[:]
        new.pos_of = self.pos_of[:]
        new.prefix = [p[:] for p in self.prefix]
        return new

    @property
    def n_routes(self) -> int:
        return len(self.routes)

    def prev(self, c: int) -> int:
        p = self.pos_of[c]
        return self.routes[self.route_of[c]][p - 1] if p > 0 else DEPOT

    def next(self, c: int) -> int:
        r = self.routes[self.route_of[c]]
        p = self.pos_of[c]
        return r[p + 1] if p + 1 < len(r) else DEPOT

    def refresh_route(self, ri: int) -> None:
        """Recompute caches of route ``ri`` after an in-place edit."""
        r = self.routes[ri]
        route_of, pos_of = self.route_of, self.pos_of
        for p, c in enumerate(r):
            route_of[c] = ri
            pos_of[c] = p
        pre = _prefix_loads(self.instance.demands, r)
        self.prefix[ri] = pre
        self.loads[ri] = pre[-1]
        new_cost = route_cost(self.instance.dist, r)
        self.cost += new_cost - self.route_costs[ri]
        self.route_costs[ri] = new_cost

    def add_route(self, route: Sequence[int]) -> int:
        self.routes.append(list(route))
        self.prefix.append([0])
        self.loads.append(0)
        self.route_costs.append(0)
        ri = len(self.routes) - 1
        self.refresh_route(ri)
        return ri

    def remove_routes(self, indices: Iterable[int]) -> List[int]:
        """Delete whole routes; returns the freed customers in route order."""
        doomed = sorted(set(indices), reverse=True)
        freed: List[int] = []
        for ri in sorted(doomed):
            freed.extend(self.routes[ri])
        for ri in doomed:
            for c in self.routes[ri]:
                self.route_of[c] = -1
                self.pos_of[c] = -1
            self.cost -= self.route_costs[ri]
            del self.routes[ri]
            del self.loads[ri]
            del self.route_costs[ri]
            del self.prefix[ri]
        self._reindex_from(doomed[-1] if doomed else len(self.routes))
        return freed

    def drop_empty(self) -> None:
        empty = [ri for ri, r in enumerate(self.routes) if not r]
        if not empty:
            return
        for ri in reversed(empty):
            self.cost -= self.route_costs[ri]
            del self.routes[ri]
            del self.loads[ri]
            del self.route_costs[ri]
            del self.prefix[ri]
        self._reindex_from(empty[0])

    def _reindex_from(self, start: int) -> None:
        route_of = self.route_of
        for ri in range(start, len(self.routes)):
            for c in self.routes[ri]:
                route_of[c] = ri

    def canonical(self) -> Tuple[Tuple[int, ...], ...]:
        """Orientation- and order-free form used for duplicate detection."""
        forms = []
        for r in self.routes:
            t = tuple(r)
            rev = t[::-1]
            forms.append(min(t, rev))
        forms.sort()
        return tuple(forms)

    def successor_arrays(self) -> Tuple[List[int], List[int]]:
        n = self.instance.dimension
        nxt = [DEPOT] * n
        prv = [DEPOT] * n
        for r in self.routes:
            for a, b in zip(r, r[1:]):
                nxt[a] = b
                prv[b] = a
        return nxt, prv

    def __repr__(self) -> str:
        return f"Solution(cost={self.cost}, routes={self.routes})"


def total_cost(solution: Solution) -> int:
    """Cost recomputed from scratch (ignores the cache)."""
    dist = solution.instance.dist
    return sum(route_cost(dist, r) for r in solution.routes)


def is_feasible(solution: Solution, instance: Optional[Instance] = None) -> Tuple[bool, str]:
    """Check partition, capacity and cache consistency; report the first violation."""
    inst = instance or solution.instance
    n = inst.dimension
    seen = [False] * n
    for ri, r in enumerate(solution.routes):
        if not r:
            return False, f"empty route {ri}"
        for c in r:
            if not 0 < c < n:
                return False, f"unknown node {c} in route {ri}"
            if seen[c]:
                return False, f"customer {c} visited twice"
            seen[c] = True
        load = sum(inst.demands[c] for c in r)
        if load > inst.capacity:
            return False, f"capacity exceeded on route {ri} ({load} > {inst.capacity})"
    missing = [c for c in range(1, n) if not seen[c]]
    if missing:
        return False, f"customer missing: {missing[0]}"
    if solution.instance is inst:
        for ri, r in enumerate(solution.routes):
            if solution.loads[ri] != sum(inst.demands[c] for c in r):
                return False, f"stale load cache on route {ri}"
            for p, c in enumerate(r):
                if solution.route_of[c] != ri or solution.pos_of[c] != p:
                    return False, f"stale position index for customer {c}"
        if solution.cost != total_cost(solution):
            return False, f"stale cost cache ({solution.cost} != {total_cost(solution)})"
    return True, "ok"


def proximity(s_i: Solution, s_j: Solution) -> int:
    """Count of customers whose route adjacencies differ between two solutions.

    Asymmetric by construction: ``s_i``'s successors are checked against
    ``s_j``'s neighbors, plus a penalty for customers that start a route in
    ``s_i`` but sit away from the depot in ``s_j``.
    """
    if s_i.instance is not s_j.instance and s_i.instance != s_j.instance:
        raise ValueError("solutions belong to different instances")
    nxt_i, prv_i = s_i.successor_arrays()
    nxt_j, prv_j = s_j.successor_arrays()
    delta = 0
    for c in range(1, s_i.instance.dimension):
        n_i = nxt_i[c]
        if n_i != nxt_j[c] and n_i != prv_j[c]:
            delta += 1
        if prv_i[c] == DEPOT and prv_j[c] != DEPOT and nxt_j[c] != DEPOT:
            delta += 1
    return delta


def gap(obtained: float, reference: float) -> float:
    """Percentage excess of ``obtained`` over ``reference``."""
    if reference <= 0:
        raise ValueError("reference cost must be positive")
    return 100.0 * (obtained - reference) / reference


# ---------------------------------------------------------------------------
# CVRPLIB .sol files: "Route #k: c c c" lines then "Cost <int>"


def format_solution(solution: Solution) -> str:
    lines = [f"Route #{k}: " + " ".join(map(str, r)) for k, r in enumerate(solution.routes, start=1)]
    lines.append(f"Cost {solution.cost}")
    return "\n".join(lines) + "\n"


def parse_solution_text(text: str) -> Tuple[List[List[int]], Optional[float]]:
    routes: List[List[int]] = []
    cost = None
    for raw in text.splitlines():
        line = raw.strip()
        if line.lower().startswith("route"):
            _, _, body = line.partition(":")
            routes.append([int(t) for t in body.split()])
        elif line.lower().startswith("cost"):
            value = float(line.split()[1])
            cost = int(value) if value.is_integer() else value
    return routes, cost


def read_solution(path: str | Path, instance: Instance) -> Solution:
    routes, _ = parse_solution_text(Path(path).read_text())
    for r in routes:
        for c in r:
            if not 0 < c < instance.dimension:
                raise ValueError(f"customer {c} out of range 1..{instance.dimension - 1}")
    return Solution(instance, routes)


def write_solution(path: str | Path, solution: Solution) -> None:
    Path(path).write_text(format_solution(solution))
