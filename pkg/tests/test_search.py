import random

import pytest
from hypothesis import given, settings, strategies as st

import mscvrp.search as search
from mscvrp.instance import LONG, SHORT, Instance, route_size_class
from mscvrp.moves import LEVELS, MoveKind
from mscvrp.params import Params
from mscvrp.search import (
    GranularState,
    SearchContext,
    Strategy,
    TabuList,
    VertexCache,
    destroy_repair,
    execute_operator,
    local_search_improvement,
    random_neighborhood_search,
    select_strategy,
)
from mscvrp.solution import Solution, is_feasible
from oracles import random_instance, random_solution, route_len


def context(inst, sol, seed=0, route_class=None, **kw):
    rc = route_class or route_size_class(inst)
    return SearchContext(inst, Params.for_class(rc, **kw), rc, random.Random(seed), sol)


def test_tabu_fifo_and_unordered():
    t = TabuList(3)
    for a, b in [(1, 2), (3, 4), (5, 6)]:
        t.add(a, b)
    assert (2, 1) in t
    t.add(7, 8)
    assert len(t) == 3 and (1, 2) not in t and (8, 7) in t
    t.add(4, 3)  # already present, no eviction
    assert (3, 4) in t and (5, 6) in t
    t.clear()
    assert len(t) == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 30), st.integers(1, 30)), max_size=200))
def test_tabu_never_exceeds_capacity(pairs):
    t = TabuList(50)
    for a, b in pairs:
        t.add(a, b)
        assert len(t) <= 50


def test_vertex_cache_evicts_oldest():
    c = VertexCache(3)
    c.add([0, 1, 2, 3])
    assert c.snapshot() == [1, 2, 3]
    c.add([1, 4])
    assert c.snapshot() == [3, 1, 4]
    c.reset([9])
    assert c.snapshot() == [9]


def test_granular_bounds():
    g = GranularState(5, 5, 25)
    for _ in range(10):
        g.grow()
        assert 5 <= g.value <= 25
    assert g.value == 25
    g.reset()
    assert g.value == 5
    with pytest.raises(ValueError):
        GranularState(30, 5, 25)


@pytest.mark.parametrize("rc, regen, want", [
    (SHORT, 0, Strategy.FULL), (SHORT, 2, Strategy.FULL), (SHORT, 3, Strategy.FULL_GRANULAR),
    (SHORT, 4, Strategy.GRANULAR), (SHORT, 9, Strategy.GRANULAR),
    (LONG, 1, Strategy.FULL), (LONG, 2, Strategy.GRANULAR),
])
def test_select_strategy(rc, regen, want):
    assert select_strategy(rc, regen) is want
    assert select_strategy(rc, regen, new_best_found=True) is Strategy.FULL


@pytest.mark.parametrize("strategy", list(Strategy))
@pytest.mark.parametrize("rc", [SHORT, LONG])
def test_destroy_repair_feasible(strategy, rc):
    rng = random.Random(4)
    for _ in range(10):
        inst = random_instance(rng, rng.randint(3, 30), capacity=rng.randint(10, 40))
        sol = random_solution(inst, rng)
        ctx = context(inst, sol, route_class=rc)
        ctx.strategy = strategy
        before = [r[:] for r in sol.routes]
        out = destroy_repair(sol, ctx)
        assert sol.routes == before
        assert is_feasible(out)[0]
        assert ctx.best.cost <= min(sol.cost, out.cost)
        lost = {c for r in before for c in r} - {c for r in out.routes for c in r}
        assert not lost
        removed = len(before) - sum(r in out.routes for r in before)
        assert removed >= 0 and 0 < len(ctx.cache) <= 50


def test_destroy_single_route_short_class():
    inst = Instance("s", ((0, 0), (1, 0), (2, 0)), (0, 1, 1), 2)
    sol = Solution(inst, [[1, 2]])
    ctx = context(inst, sol, route_class=SHORT)
    out = destroy_repair(sol, ctx)
    assert is_feasible(out)[0] and sorted(ctx.cache.snapshot()) == [1, 2]


def test_empty_cache_leaves_solution():
    rng = random.Random(1)
    inst = random_instance(rng, 20, capacity=30)
    sol = random_solution(inst, rng)
    ctx = context(inst, sol)
    before = [r[:] for r in sol.routes]
    for kind in MoveKind:
        assert not execute_operator(kind, sol, ctx)
    assert sol.routes == before


def test_execute_operator_uncrosses_route():
    inst = Instance("sq", ((0, 0), (0, 10), (10, 10), (0, 20), (10, 20)), (0, 1, 1, 1, 1), 10)
    sol = Solution(inst, [[1, 4, 3, 2]])
    start = sol.cost
    ctx = context(inst, sol)
    ctx.cache.reset(inst.customers)
    assert execute_operator(MoveKind.TWO_OPT, sol, ctx)
    assert sol.cost < start and is_feasible(sol)[0]


def test_local_search_reaches_four_node_optimum():
    inst = Instance("sq", ((0, 0), (0, 10), (10, 10), (0, 20), (10, 20)), (0, 1, 1, 1, 1), 10)
    sol = Solution(inst, [[1, 4, 3, 2]])
    ctx = context(inst, sol)
    ctx.cache.reset(inst.customers)
    out = local_search_improvement(sol, ctx)
    import itertools
    best = min(route_len(inst, p) for p in itertools.permutations([1, 2, 3, 4]))
    assert out.cost == best < sol.cost


@pytest.mark.parametrize("seed", range(8))
def test_local_search_monotone_and_idempotent(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, rng.randint(5, 40), capacity=rng.randint(12, 40))
    sol = random_solution(inst, rng)
    ctx = context(inst, sol, seed)
    ctx.cache.reset(inst.customers)
    out = local_search_improvement(sol, ctx)
    assert out.cost <= sol.cost and is_feasible(out)[0]
    assert ctx.best.cost <= out.cost
    again = local_search_improvement(out, ctx)
    assert again.cost == out.cost


def scripted_operator(monkeypatch, outcomes):
    calls = []

    def fake(kind, sol, ctx):
        calls.append(kind)
        return outcomes(len(calls) - 1, kind)

    monkeypatch.setattr(search, "execute_operator", fake)
    return calls


def test_level_one_without_gain_runs_each_operator_once(monkeypatch):
    calls = scripted_operator(monkeypatch, lambda i, k: False)
    inst = random_instance(random.Random(0), 6)
    sol = random_solution(inst, random.Random(0))
    random_neighborhood_search(1, sol, context(inst, sol))
    assert len(calls) == 2 and set(calls) == set(LEVELS[1])


def test_round_robin_restarts_cycle_after_gain(monkeypatch):
    # only the second operator improves: R jumps to it, and the cycle stops
    # when the last pointer comes back round to it, after rerunning the first
    calls = scripted_operator(monkeypatch, lambda i, k: i == 1)
    inst = random_instance(random.Random(0), 6)
    sol = random_solution(inst, random.Random(0))
    random_neighborhood_search(0, sol, context(inst, sol))
    assert len(calls) == 1 + 9
    assert calls[0] == calls[-1] and len(set(calls)) == 9


def test_operator_order_is_seeded(monkeypatch):
    calls = scripted_operator(monkeypatch, lambda i, k: False)
    inst = random_instance(random.Random(0), 6)
    sol = random_solution(inst, random.Random(0))
    random_neighborhood_search(0, sol, context(inst, sol, seed=3))
    first = list(calls)
    calls.clear()
    random_neighborhood_search(0, sol, context(inst, sol, seed=3))
    assert calls == first
