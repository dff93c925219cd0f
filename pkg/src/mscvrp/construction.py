"""Initial solutions: pruned savings construction and route-destroying perturbations."""

from __future__ import annotations

import logging
import math
import random
from typing import List, Optional, Tuple

from .elite import ElitePool, update_elite
from .features import pool_guidance_stats
from .instance import Instance, r_estimated
from .params import Params
from .solution import DEPOT, Solution

log = logging.getLogger(__name__)


def savings_list(instance: Instance, n_cw: int) -> List[Tuple[int, int, int]]:
    """(saving, i, j) for j among the ``n_cw`` nearest customers of i.

    Sorted by descending saving, ties by (i, j).
    """
    dist = instance.dist
    d0 = dist[DEPOT]
    entries = []
    for i in instance.customers:
        di = dist[i]
        for j in instance.neighbors[i][:n_cw]:
            entries.append((d0[i] + d0[j] - di[j], i, j))
    entries.sort(key=lambda e: (-e[0], e[1], e[2]))
    return entries


def clarke_wright(instance: Instance, n_cw: int = 100) -> Solution:
    dem = instance.demands
    Q = instance.capacity
    routes = {c: [c] for c in instance.customers}
    owner = {c: c for c in instance.customers}  # customer -> route key
    load = {c: dem[c] for c in instance.customers}

    for s, i, j in savings_list(instance, n_cw):
        if s <= 0:
            break
        ki, kj = owner[i], owner[j]
        if ki == kj or load[ki] + load[kj] > Q:
            continue
        ri, rj = routes[ki], routes[kj]
        if ri[-1] == i and rj[0] == j:
            merged = ri + rj
        elif ri[0] == i and rj[-1] == j:
            merged = rj + ri
        elif ri[-1] == i and rj[-1] == j:
            merged = ri + rj[::-1]
        elif ri[0] == i and rj[0] == j:
            merged = ri[::-1] + rj
        else:
            continue
        routes[ki] = merged
        load[ki] += load[kj]
        del routes[kj], load[kj]
        for c in rj:
            owner[c] = ki
    ordered = sorted(routes.values(), key=lambda r: min(r))
    return Solution(instance, ordered)


def best_insertion(sol: Solution, c: int, route_ids=None) -> Optional[Tuple[int, int, int]]:
    """Cheapest capacity-feasible slot for ``c``: (delta, route, position)."""
    dist = sol.instance.dist
    dc = dist[c]
    q = sol.instance.demands[c]
    Q = sol.instance.capacity
    best = None
    for ri in (range(sol.n_routes) if route_ids is None else route_ids):
        if sol.loads[ri] + q > Q:
            continue
        r = sol.routes[ri]
        prev = DEPOT
        for p in range(len(r) + 1):
            nxt = r[p] if p < len(r) else DEPOT
            delta = dc[prev] + dc[nxt] - dist[prev][nxt]
            if best is None or delta < best[0]:
                best = (delta, ri, p)
            prev = nxt
    return best


def insert_customer(sol: Solution, c: int, ri: int, pos: int) -> None:
    sol.routes[ri].insert(pos, c)
    sol.refresh_route(ri)


def perturbed_initial(base: Solution, instance: Instance, rng: random.Random,
                      always_open: bool = False, accept_any: bool = False) -> Optional[Solution]:
    """Destroy two random routes and greedily reinsert their customers.

    Returns None when the candidate is rejected.  When a customer fits
    nowhere a singleton route opens with probability 1/2 (always, with
    ``always_open``); otherwise the candidate is abandoned.
    """
    if base.n_routes < 2:
        return None
    sol = base.copy()
    doomed = rng.sample(range(sol.n_routes), 2)
    freed = sol.remove_routes(doomed)
    rng.shuffle(freed)
    for c in freed:
        slot = best_insertion(sol, c)
        if slot is not None:
            insert_customer(sol, c, slot[1], slot[2])
        elif always_open or rng.random() < 0.5:
            sol.add_route([c])
        else:
            return None
    if accept_any:
        return sol
    if sol.cost < base.cost or sol.n_routes <= math.ceil(r_estimated(instance)):
        return sol
    return None


def generate_initial_pool(instance: Instance, params: Params,
                          rng: random.Random) -> Tuple[ElitePool, float, float]:
    """Savings solution plus accepted perturbations until ``e_min`` members exist.

    Returns the pool with its (mean S19, mean S20) guidance statistics.
    """
    pool = ElitePool(params.e_min, params.e_max)
    base = clarke_wright(instance, params.n_cw)
    update_elite(base, pool, params.proximity_allowance)

    attempts = 0
    budget = params.initial_retries * max(0, params.e_min - 1)
    while len(pool) < params.e_min and attempts < budget:
        attempts += 1
        cand = perturbed_initial(base, instance, rng)
        if cand is not None:
            update_elite(cand, pool, params.proximity_allowance)

    if len(pool) < params.e_min:
        log.debug("initial pool fallback: %d/%d members after %d attempts", len(pool), params.e_min, attempts)
        for _ in range(params.initial_retries):
            if len(pool) >= params.e_min:
                break
            src = rng.choice(pool.members)
            cand = perturbed_initial(src, instance, rng, always_open=True, accept_any=True)
            if cand is None:
                cand = _reshuffle_routes(src, rng)
            if cand is not None:
                update_elite(cand, pool, params.proximity_allowance)

    alpha, beta = pool_guidance_stats(pool)
    return pool, alpha, beta


def _reshuffle_routes(src: Solution, rng: random.Random) -> Optional[Solution]:
    """Fallback for single-route solutions: reinsert one route's customers in random order."""
    if src.n_routes == 0:
        return None
    sol = src.copy()
    freed = sol.remove_routes([rng.randrange(sol.n_routes)])
    rng.shuffle(freed)
    for c in freed:
        slot = best_insertion(sol, c)
        if slot is None:
            sol.add_route([c])
        else:
            insert_customer(sol, c, slot[1], slot[2])
    return sol
