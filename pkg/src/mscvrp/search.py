"""Neighborhood search: route destruction/reinsertion and cached granular local search."""

from __future__ import annotations

import enum
import random
from collections import OrderedDict, deque
from typing import Iterable, List, Optional

from .construction import best_insertion, insert_customer
from .instance import LONG, Instance
from .moves import EVALUATORS, LEVELS, MoveKind, apply_move
from .params import Params
from .solution import DEPOT, Solution


class Strategy(enum.Enum):
    FULL = "full"
    FULL_GRANULAR = "full-granular"
    GRANULAR = "granular"


def select_strategy(route_class: str, regen_count: int, new_best_found: bool = False) -> Strategy:
    """Reinsertion strategy given how many pool regenerations passed without a new best."""
    if new_best_found:
        return Strategy.FULL
    if route_class == LONG:
        return Strategy.GRANULAR if regen_count >= 2 else Strategy.FULL
    if regen_count >= 4:
        return Strategy.GRANULAR
    if regen_count >= 3:
        return Strategy.FULL_GRANULAR
    return Strategy.FULL


class TabuList:
    """FIFO set of banned unordered customer pairs."""

    def __init__(self, capacity: int = 50):
        self.capacity = capacity
        self._order: deque = deque()
        self._set: set = set()

    @staticmethod
    def _key(a: int, b: int):
        return (a, b) if a < b else (b, a)

    def add(self, a: int, b: int) -> None:
        key = self._key(a, b)
        if key in self._set:
            return
        self._order.append(key)
        self._set.add(key)
        while len(self._order) > self.capacity:
            self._set.discard(self._order.popleft())

    def __contains__(self, pair) -> bool:
        return self._key(*pair) in self._set

    def __len__(self) -> int:
        return len(self._order)

    def clear(self) -> None:
        self._order.clear()
        self._set.clear()


class VertexCache:
    """Recently moved customers; re-adding refreshes an entry, overflow drops the oldest."""

    def __init__(self, capacity: int = 50):
        self.capacity = capacity
        self._items: OrderedDict = OrderedDict()

    def add(self, customers: Iterable[int]) -> None:
        for c in customers:
            if c == DEPOT:
                continue
            if c in self._items:
                self._items.move_to_end(c)
            else:
                self._items[c] = None
            if len(self._items) > self.capacity:
                self._items.popitem(last=False)

    def reset(self, customers: Iterable[int] = ()) -> None:
        self._items.clear()
        self.add(customers)

    def snapshot(self) -> List[int]:
        return list(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, c) -> bool:
        return c in self._items


class GranularState:
    def __init__(self, gamma0: int, step: int, gamma_max: int):
        if not 0 < gamma0 <= gamma_max:
            raise ValueError("need 0 < gamma0 <= gamma_max")
        self.gamma0, self.step, self.gamma_max = gamma0, step, gamma_max
        self.value = gamma0

    def grow(self) -> None:
        self.value = min(self.gamma_max, self.value + self.step)

    def reset(self) -> None:
        self.value = self.gamma0


class SearchContext:
    """Mutable state shared by the search phase of one run."""

    def __init__(self, instance: Instance, params: Params, route_class: str, rng: random.Random,
                 best: Solution):
        self.instance = instance
        self.params = params
        self.route_class = route_class
        self.rng = rng
        self.best = best.copy()
        self.granular = GranularState(params.gamma0, params.gamma_step, params.gamma_max)
        self.cache = VertexCache(params.cache_size)
        self.tabu = TabuList(params.tabu_size)
        self.strategy = Strategy.FULL
        self.moves_applied = 0

    def offer(self, s: Solution) -> bool:
        """Record ``s`` as the global best if strictly cheaper."""
        if s.cost < self.best.cost:
            self.best = s.copy()
            return True
        return False


def _granular_insertion(sol: Solution, c: int, gamma: int):
    """Cheapest feasible slot next to one of c's ``gamma`` nearest routed customers."""
    inst = sol.instance
    dist = inst.dist
    dc = dist[c]
    q = inst.demands[c]
    Q = inst.capacity
    best = None
    for z in inst.neighbors[c][:gamma]:
        rz = sol.route_of[z]
        if rz < 0 or sol.loads[rz] + q > Q:
            continue
        r = sol.routes[rz]
        pz = sol.pos_of[z]
        for pos in (pz, pz + 1):
            a = r[pos - 1] if pos > 0 else DEPOT
            b = r[pos] if pos < len(r) else DEPOT
            delta = dc[a] + dc[b] - dist[a][b]
            if best is None or delta < best[0]:
                best = (delta, rz, pos)
    return best


def destroy_repair(sol: Solution, ctx: SearchContext) -> Solution:
    """Remove one (long class) or two random routes and reinsert their customers."""
    rng = ctx.rng
    out = sol.copy()
    k = 1 if ctx.route_class == LONG else 2
    k = min(k, out.n_routes)
    doomed = rng.sample(range(out.n_routes), k)
    freed = out.remove_routes(doomed)
    rng.shuffle(freed)
    if ctx.strategy is Strategy.FULL:
        gamma = None
    elif ctx.strategy is Strategy.FULL_GRANULAR:
        gamma = ctx.params.gamma_max
    else:
        gamma = ctx.granular.value
    for c in freed:
        slot = best_insertion(out, c) if gamma is None else _granular_insertion(out, c, gamma)
        if slot is None:
            out.add_route([c])
        else:
            insert_customer(out, c, slot[1], slot[2])
    ctx.cache.reset(freed)
    ctx.offer(out)
    return out


def execute_operator(kind: MoveKind, sol: Solution, ctx: SearchContext) -> bool:
    """One pass of ``kind`` over the vertex cache; edits ``sol`` in place.

    For each cached customer the first strictly improving move toward one of
    its current-Γ neighbors is applied.  Returns True if anything improved.
    """
    tabu = ctx.tabu
    tabu.clear()
    gamma = ctx.granular.value
    neighbors = ctx.instance.neighbors
    fn = EVALUATORS[kind]
    extra = (gamma,) if kind.level == 1 else ()
    improved = False
    for ci in ctx.cache.snapshot():
        for cj in neighbors[ci][:gamma]:
            cand = fn(sol, ci, cj, *extra)
            if cand is None or cand[0] >= 0:
                continue
            if (ci, cj) in tabu and not sol.cost + cand[0] < ctx.best.cost:
                continue
            touched = apply_move(sol, cand[1])
            tabu.add(ci, cj)
            ctx.cache.add(touched)
            ctx.moves_applied += 1
            ctx.offer(sol)
            improved = True
            break
    return improved


def random_neighborhood_search(level: int, sol: Solution, ctx: SearchContext) -> Solution:
    """Run the operators of ``level`` in shuffled round-robin order until a full cycle fails."""
    ops = list(LEVELS[level])
    ctx.rng.shuffle(ops)
    cur = sol.copy()
    r = last = 0
    size = len(ops)
    while True:
        if execute_operator(ops[last], cur, ctx):
            r = last
        last = (last + 1) % size
        if r == last:
            return cur


def local_search_improvement(sol: Solution, ctx: SearchContext) -> Solution:
    """Alternate levels: restart at level 0 after any gain, stop once both levels fail."""
    cur = sol
    p = 0
    while p < 2:
        cand = random_neighborhood_search(p, cur, ctx)
        if cand.cost < cur.cost:
            cur = cand
            p = 0
            ctx.offer(cur)
        else:
            p += 1
    return cur
