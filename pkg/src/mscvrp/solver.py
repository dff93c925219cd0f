"""Top-level Multiple Search loop, plain or with utilization-guided restarts."""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import List, Optional

from .construction import generate_initial_pool
from .elite import guided_threshold, init_weight, manage_guided, manage_plain, update_elite
from .instance import Instance, route_size_class
from .params import Params
from .search import (SearchContext, Strategy, destroy_repair, local_search_improvement,
                     select_strategy)
from .solution import Solution, format_solution, is_feasible, total_cost
from .splitpr import path_relinking

PLAIN = "plain"
GUIDED = "guided"


@dataclass
class SolverConfig:
    mode: str = PLAIN
    enable_pr: bool = True
    t_max: float = 10.0
    seed: int = 0
    params: Optional[Params] = None  # None: defaults for the instance's route class
    max_iterations: Optional[int] = None
    target_cost: Optional[float] = None

    def __post_init__(self):
        if self.mode not in (PLAIN, GUIDED):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.max_iterations is not None and self.max_iterations < 0:
            raise ValueError("max_iterations must be nonnegative")


@dataclass
class RunResult:
    best: Solution
    cost: int
    iterations: int
    elapsed: float
    route_class: str
    trace: List[dict] = field(default_factory=list)

    def trace_json(self) -> str:
        # iteration-indexed only, so equal seeds give equal bytes
        return json.dumps(self.trace, sort_keys=True, separators=(",", ":"))

    def solution_text(self) -> str:
        return format_solution(self.best)


def seed_protocol(run_index: int) -> int:
    """Seed of the ``run_index``-th run (1-based)."""
    if run_index < 1:
        raise ValueError("run_index starts at 1")
    return run_index - 1


def solve(instance: Instance, config: SolverConfig) -> RunResult:
    start = time.perf_counter()
    route_class = route_size_class(instance)
    params = config.params or Params.for_class(route_class)
    rng = random.Random(config.seed)
    guided = config.mode == GUIDED
    trace: List[dict] = []

    pool, alpha, beta = generate_initial_pool(instance, params, rng)
    ctx = SearchContext(instance, params, route_class, rng, pool.best())
    trace.append({"it": 0, "event": "best", "cost": ctx.best.cost})
    if guided:
        pool.w = init_weight(alpha, beta, params)
        trace.append({"it": 0, "event": "weight", "w": pool.w,
                      "threshold": guided_threshold(pool.w, params.max_non_improving)})

    it = 0
    while True:
        if config.target_cost is not None and ctx.best.cost <= config.target_cost:
            break
        if config.max_iterations is not None and it >= config.max_iterations:
            break
        if time.perf_counter() - start >= config.t_max:
            break
        it += 1
        s0 = ctx.best.cost

        for _ in range(params.e_min):
            if len(pool) == 0:
                break
            s = pool.pop_best()
            s1 = destroy_repair(s, ctx)
            s2 = local_search_improvement(s1, ctx)
            update_elite(s2, pool, params.proximity_allowance)
            update_elite(s, pool, params.proximity_allowance)

        if config.enable_pr:
            stats = path_relinking(pool, ctx)
            if stats.moves:
                trace.append({"it": it, "event": "pr", "moves": stats.moves, "splits": stats.splits,
                              "admitted": stats.admitted})

        improved = ctx.best.cost < s0
        theta = pool.theta + 1
        if guided:
            threshold = guided_threshold(pool.w, params.max_non_improving)
            restarted = manage_guided(pool, improved, instance, rng, params)
        else:
            threshold = params.max_non_improving
            restarted = manage_plain(pool, improved, instance, rng, params)

        if improved:
            ctx.granular.reset()
            ctx.strategy = Strategy.FULL
            trace.append({"it": it, "event": "best", "cost": ctx.best.cost})
        else:
            ctx.granular.grow()
            ctx.strategy = select_strategy(route_class, pool.regen_count)
        if restarted:
            event = {"it": it, "event": "restart", "theta": theta, "threshold": threshold,
                     "regen_count": pool.regen_count}
            if guided:
                event["w"] = pool.w
            trace.append(event)

    best = ctx.best
    ok, msg = is_feasible(best)
    if not ok or best.cost != total_cost(best):
        raise AssertionError(f"solver produced an invalid incumbent: {msg}")
    return RunResult(best=best, cost=best.cost, iterations=it,
                     elapsed=time.perf_counter() - start, route_class=route_class, trace=trace)
