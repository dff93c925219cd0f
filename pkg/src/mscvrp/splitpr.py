"""Giant-tour split and truncated path relinking between elite solutions."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .elite import ElitePool, update_elite
from .instance import LONG, Instance
from .search import random_neighborhood_search
from .solution import DEPOT, Solution

GiantTour = List[int]


def tour_cost(instance: Instance, tour: Sequence[int]) -> int:
    """Length of the cycle depot -> tour[0] -> ... -> tour[-1] -> depot."""
    if not tour:
        return 0
    dist = instance.dist
    total = dist[DEPOT][tour[0]] + dist[tour[-1]][DEPOT]
    for a, b in zip(tour, tour[1:]):
        total += dist[a][b]
    return total


def concatenate(solution: Solution, rng: random.Random) -> GiantTour:
    """Append the routes whole, in a shuffled route order."""
    heads = [r[0] for r in solution.routes if r]
    rng.shuffle(heads)
    tour: GiantTour = []
    for h in heads:
        tour.extend(solution.routes[solution.route_of[h]])
    return tour


def split_labels(tour: Sequence[int], instance: Instance) -> Tuple[List[float], List[int]]:
    """Shortest-path labels and predecessors over the auxiliary split graph."""
    dist = instance.dist
    dem = instance.demands
    Q = instance.capacity
    n = len(tour)
    labels: List[float] = [0] + [math.inf] * n
    preds = [0] * (n + 1)
    for i in range(1, n + 1):
        base = labels[i - 1]
        load = 0
        cost = 0
        for j in range(i, n + 1):
            c = tour[j - 1]
            load += dem[c]
            if load > Q:
                break
            if j == i:
                cost = dist[DEPOT][c] + dist[c][DEPOT]
            else:
                p = tour[j - 2]
                cost += dist[p][c] + dist[c][DEPOT] - dist[p][DEPOT]
            if base + cost < labels[j]:
                labels[j] = base + cost
                preds[j] = i - 1
    return labels, preds


def split(tour: Sequence[int], instance: Instance) -> Solution:
    """Optimal cut of ``tour`` into contiguous capacity-feasible routes, in tour order."""
    labels, preds = split_labels(tour, instance)
    routes = []
    j = len(tour)
    while j > 0:
        i = preds[j]
        routes.append(list(tour[i:j]))
        j = i
    routes.reverse()
    return Solution(instance, routes)


def swap_delta(instance: Instance, tour: Sequence[int], p: int, q: int) -> int:
    """Cyclic-cost change from exchanging tour[p] and tour[q]."""
    if p == q:
        return 0
    dist = instance.dist
    n = len(tour)

    def node(k, t=None):
        # k indexes the depot-padded tour: 0 and n+1 are the depot
        if k == 0 or k == n + 1:
            return DEPOT
        if t is not None:
            if k == p + 1:
                return tour[q]
            if k == q + 1:
                return tour[p]
        return tour[k - 1]

    edges = {p, p + 1, q, q + 1}  # edge k joins padded positions k and k+1
    before = sum(dist[node(k)][node(k + 1)] for k in edges)
    after = sum(dist[node(k, 1)][node(k + 1, 1)] for k in edges)
    return after - before


def restricted_neighborhood(t_i: Sequence[int], t_g: Sequence[int], eta: float) -> Tuple[int, List[int], int]:
    """(Δ, L_pr, N_pr): customers placed differently and the swap budget."""
    pos_g = {c: k for k, c in enumerate(t_g)}
    l_pr = [c for k, c in enumerate(t_i) if pos_g[c] != k]
    delta = len(l_pr)
    return delta, l_pr, math.ceil(round(delta / 2 * eta, 9))


def get_position_swap(instance: Instance, tour: Sequence[int], t_g: Sequence[int],
                      l_pr: Sequence[int], tabu) -> Optional[Tuple[int, int, int]]:
    """Cheapest non-tabu swap that puts a node of ``l_pr`` at its guiding position."""
    pos = {c: k for k, c in enumerate(tour)}
    pos_g = {c: k for k, c in enumerate(t_g)}
    base = tour_cost(instance, tour)
    best = None
    f_best = math.inf
    for node in l_pr:
        if node in tabu:
            continue
        pi, pg = pos[node], pos_g[node]
        if pi == pg:
            continue
        f = base + swap_delta(instance, tour, pi, pg)
        if f < f_best:
            f_best = f
            best = (node, pi, pg)
    return best


@dataclass
class RelinkStats:
    moves: int = 0
    splits: int = 0
    admitted: int = 0
    new_best: int = 0


def evaluate_neighborhood(t_i: Sequence[int], t_g: Sequence[int], n_pr: int, l_pr: Sequence[int],
                          pool: ElitePool, ctx) -> RelinkStats:
    """Walk from ``t_i`` toward ``t_g`` for at most ``n_pr`` swaps, harvesting improving tours.

    ``ctx`` supplies the instance, parameters, route class and the global best
    (a :class:`~mscvrp.search.SearchContext`).
    """
    inst = ctx.instance
    stats = RelinkStats()
    tour = list(t_i)
    cost = tour_cost(inst, tour)
    cost_g = tour_cost(inst, t_g)
    tabu: set = set()
    for _ in range(n_pr):
        found = get_position_swap(inst, tour, t_g, l_pr, tabu)
        if found is None:
            break
        node, pi, pg = found
        t_eval = tour[:]
        t_eval[pi], t_eval[pg] = t_eval[pg], t_eval[pi]
        cost_eval = cost + swap_delta(inst, tour, pi, pg)
        stats.moves += 1
        if cost_eval < cost:
            s_eval = split(t_eval, inst)
            stats.splits += 1
            if ctx.route_class == LONG:
                # the swapped pair and the route ends are where split changed things
                ctx.cache.reset([tour[pi], tour[pg]] + [c for r in s_eval.routes for c in (r[0], r[-1])])
                s_eval = random_neighborhood_search(0, s_eval, ctx)
            if update_elite(s_eval, pool, ctx.params.proximity_allowance):
                stats.admitted += 1
            if ctx.offer(s_eval):
                stats.new_best += 1
        tabu.add(node)
        tour, cost = t_eval, cost_eval
        if cost <= cost_g:
            break
    return stats


def path_relinking(pool: ElitePool, ctx) -> RelinkStats:
    """Relink a random pool member toward the global best solution."""
    if len(pool) < 2:
        return RelinkStats()
    rng = ctx.rng
    guiding = ctx.best
    key = guiding.canonical()
    others = [s for s in pool.members if s.canonical() != key]
    if not others:
        return RelinkStats()
    initial = rng.choice(others)
    t_i = concatenate(initial, rng)
    t_g = concatenate(guiding, rng)
    _, l_pr, n_pr = restricted_neighborhood(t_i, t_g, ctx.params.eta_pr)
    rng.shuffle(l_pr)
    return evaluate_neighborhood(t_i, t_g, n_pr, l_pr, pool, ctx)
