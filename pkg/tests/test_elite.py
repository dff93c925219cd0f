import random

import pytest
from hypothesis import given, settings, strategies as st

import mscvrp.elite as elite
from mscvrp.elite import (
    ElitePool,
    clamp_weight,
    guided_threshold,
    init_weight,
    manage_guided,
    manage_plain,
    update_elite,
)
from mscvrp.params import Params
from mscvrp.solution import Solution, proximity
from oracles import random_instance, random_solution


@pytest.fixture
def inst():
    return random_instance(random.Random(11), 5, q_max=3, capacity=6)


def test_empty_pool_accepts(inst):
    pool = ElitePool(2, 2)
    s = random_solution(inst, random.Random(0))
    assert update_elite(s, pool)
    assert pool.members == [s]


def test_duplicate_rejected(inst):
    pool = ElitePool(2, 3)
    s = random_solution(inst, random.Random(0))
    update_elite(s, pool)
    twin = Solution(inst, [r[::-1] for r in reversed(s.routes)])
    assert not update_elite(twin, pool)
    assert len(pool) == 1


def find_allowance_case(inst, farther: bool):
    """Best, worst and a candidate that lands in the proximity-allowance branch."""
    rng = random.Random(1)
    sols = {}
    for _ in range(3000):
        s = random_solution(inst, rng)
        sols.setdefault(s.canonical(), s)
    pool_sols = sorted(sols.values(), key=lambda s: s.cost)
    for best in pool_sols:
        for worst in pool_sols:
            if worst.cost <= best.cost:
                continue
            for cand in pool_sols:
                if cand.cost <= worst.cost or (cand.cost - worst.cost) / worst.cost >= 0.2:
                    continue
                if (proximity(best, cand) > proximity(best, worst)) == farther:
                    return best, worst, cand
    raise AssertionError("no case found")


def test_allowance_admits_a_farther_solution(inst):
    best, worst, cand = find_allowance_case(inst, farther=True)
    pool = ElitePool(2, 2)
    update_elite(best, pool)
    update_elite(worst, pool)
    assert update_elite(cand, pool)
    assert worst not in pool.members and cand in pool.members and best in pool.members


def test_allowance_rejects_a_closer_solution(inst):
    best, worst, cand = find_allowance_case(inst, farther=False)
    pool = ElitePool(2, 2)
    update_elite(best, pool)
    update_elite(worst, pool)
    assert not update_elite(cand, pool)
    assert set(map(id, pool.members)) == {id(best), id(worst)}


def test_strictly_cheaper_replaces_worst(inst):
    rng = random.Random(3)
    sols = sorted({s.canonical(): s for s in (random_solution(inst, rng) for _ in range(300))}.values(),
                  key=lambda s: s.cost)
    pool = ElitePool(2, 2)
    update_elite(sols[1], pool)
    update_elite(sols[-1], pool)
    assert update_elite(sols[0], pool)
    assert sols[-1] not in pool.members


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 4))
def test_pool_bounds_and_best_survive(seed, e_max):
    rng = random.Random(seed)
    instance = random_instance(rng, rng.randint(4, 12))
    pool = ElitePool(2, e_max)
    best_cost = None
    for _ in range(40):
        s = random_solution(instance, rng)
        before = pool.best() if len(pool) else None
        update_elite(s, pool)
        if before is not None:
            assert any(m is before for m in pool.members) or s.cost < before.cost or len(pool) < e_max
            assert pool.best().cost <= before.cost
        best_cost = s.cost if best_cost is None else min(best_cost, s.cost)
        assert len(pool) <= e_max
        keys = [m.canonical() for m in pool]
        assert len(keys) == len(set(keys))
        assert all(pool.best().cost <= m.cost for m in pool)
    assert pool.best().cost == best_cost


def test_manage_plain_counter_and_restart(inst):
    params = Params()
    pool = ElitePool(params.e_min, params.e_max)
    update_elite(random_solution(inst, random.Random(0)), pool)
    rng = random.Random(0)
    pool.theta = 17
    pool.regen_count = 2
    assert not manage_plain(pool, True, inst, rng, params)
    assert pool.theta == 0 and pool.regen_count == 0
    pool.theta = 3999
    assert not manage_plain(pool, False, inst, rng, params)
    assert pool.theta == 4000
    assert manage_plain(pool, False, inst, rng, params)
    assert pool.theta == 0 and pool.regen_count == 1
    assert len(pool) >= params.e_min
    keys = [m.canonical() for m in pool]
    assert len(keys) == len(set(keys))


def test_guided_threshold_arithmetic():
    params = Params()
    assert guided_threshold(1.0, 4000) == 4000
    w = init_weight(0.95, 0.05, params)
    assert w == pytest.approx(0.9)
    assert guided_threshold(w, 4000) == 3600
    assert clamp_weight(-0.3, params) == 1 / 4000
    assert clamp_weight(1.7, params) == 1.0


def test_manage_guided_restart_updates_weight(inst, monkeypatch):
    params = Params()
    pool = ElitePool(params.e_min, params.e_max)
    pool.w = 0.9
    calls = []

    def fake_regenerate(p, instance, rng, prm):
        calls.append(1)
        p.theta = 0
        p.regen_count += 1
        return 0.9, 0.1

    monkeypatch.setattr(elite, "_regenerate", fake_regenerate)
    pool.theta = 3599
    assert not manage_guided(pool, False, inst, random.Random(0), params)
    assert pool.theta == 3600 and not calls
    assert manage_guided(pool, False, inst, random.Random(0), params)
    assert calls and pool.w == pytest.approx(0.95)


def test_manage_guided_requires_weight(inst):
    with pytest.raises(ValueError):
        manage_guided(ElitePool(2, 2), False, inst, random.Random(0), Params())
