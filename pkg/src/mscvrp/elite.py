"""Bounded elite pool and the two restart policies."""

from __future__ import annotations

import math
import random
from typing import Iterator, List, Optional

from .instance import Instance
from .params import Params
from .solution import Solution, proximity


class ElitePool:
    """Unique solutions (by canonical form), at most ``e_max`` of them."""

    def __init__(self, e_min: int, e_max: int):
        self.e_min = e_min
        self.e_max = e_max
        self.members: List[Solution] = []
        self._keys: dict = {}
        self.theta = 0
        self.w: Optional[float] = None
        self.regen_count = 0

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Solution]:
        return iter(self.members)

    def __contains__(self, s: Solution) -> bool:
        return s.canonical() in self._keys

    def contains_key(self, key) -> bool:
        return key in self._keys

    def best(self) -> Solution:
        # first argmin, so ties keep the oldest member as "best"
        return min(self.members, key=lambda s: s.cost)

    def worst(self) -> Solution:
        # last argmax, so the worst differs from the best whenever len > 1
        worst = self.members[0]
        for s in self.members[1:]:
            if s.cost >= worst.cost:
                worst = s
        return worst

    def add(self, s: Solution) -> None:
        key = s.canonical()
        self._keys[key] = s
        self.members.append(s)

    def remove(self, s: Solution) -> None:
        for i, m in enumerate(self.members):
            if m is s:
                del self.members[i]
                break
        else:
            raise ValueError("solution not in pool")
        self._keys.pop(s.canonical(), None)

    def pop_best(self) -> Solution:
        s = self.best()
        self.remove(s)
        return s

    def replace_members(self, members: List[Solution]) -> None:
        self.members = []
        self._keys = {}
        for s in members:
            self.add(s)


def update_elite(s: Solution, pool: ElitePool, allowance: float = 0.2) -> bool:
    """Offer ``s`` to the pool; returns True if it was admitted."""
    key = s.canonical()
    if pool.contains_key(key):
        return False
    if len(pool) < pool.e_max:
        pool.add(s)
        return True
    worst = pool.worst()
    if s.cost < worst.cost:
        pool.remove(worst)
        pool.add(s)
        return True
    if (s.cost - worst.cost) / worst.cost < allowance:
        best = pool.best()
        if proximity(best, s) > proximity(best, worst):
            pool.remove(worst)
            pool.add(s)
            return True
    return False


def _regenerate(pool: ElitePool, instance: Instance, rng: random.Random, params: Params):
    from .construction import generate_initial_pool

    fresh, alpha, beta = generate_initial_pool(instance, params, rng)
    pool.replace_members(fresh.members)
    pool.theta = 0
    pool.regen_count += 1
    return alpha, beta


def manage_plain(pool: ElitePool, improved: bool, instance: Instance, rng: random.Random,
                 params: Params) -> bool:
    """Fixed-threshold restart.  Returns True when the pool was regenerated."""
    if improved:
        pool.theta = 0
        pool.regen_count = 0
        return False
    pool.theta += 1
    if pool.theta > params.max_non_improving:
        _regenerate(pool, instance, rng, params)
        return True
    return False


def clamp_weight(w: float, params: Params) -> float:
    return min(1.0, max(1.0 / params.max_non_improving, w))


def guided_threshold(w: float, big_m: int) -> int:
    # rounding first keeps float noise (e.g. 0.9 * 4000) from bumping the ceiling
    return math.ceil(round(w * big_m, 9))


def init_weight(alpha: float, beta: float, params: Params) -> float:
    return clamp_weight(alpha - beta, params)


def manage_guided(pool: ElitePool, improved: bool, instance: Instance, rng: random.Random,
                  params: Params) -> bool:
    """Restart once the counter exceeds ceil(W * M); W drifts with each fresh pool."""
    if pool.w is None:
        raise ValueError("guided pool needs an initial weight")
    threshold = guided_threshold(pool.w, params.max_non_improving)
    if improved:
        pool.theta = 0
        pool.regen_count = 0
        return False
    pool.theta += 1
    if pool.theta > threshold:
        alpha, beta = _regenerate(pool, instance, rng, params)
        pool.w = clamp_weight((pool.w + alpha + beta) / 2, params)
        return True
    return False
