import math
import random

import pytest

from mscvrp.stats import (
    DEFAULT_ALPHA,
    InsufficientDataError,
    average_ranks,
    exact_lower_tail,
    normal_lower_tail,
    signed_ranks,
    wilcoxon_one_tailed,
)
from oracles import wilcoxon_sign_flip


def test_average_ranks_ties():
    assert average_ranks([3.0, 1.0, 3.0, 2.0]) == [3.5, 1.0, 3.5, 2.0]
    assert average_ranks([]) == []


def test_zero_differences_dropped():
    diffs, ranks = signed_ranks([1, 2, 3], [1, 1, 5])
    assert diffs == [1, -2] and ranks == [1.0, 2.0]
    with pytest.raises(ValueError):
        signed_ranks([1], [1, 2])


def test_too_few_pairs():
    with pytest.raises(InsufficientDataError):
        wilcoxon_one_tailed([1, 2, 3, 4, 5], [1, 2, 3, 4, 6])


def sample(rng, n, ties):
    a = [round(rng.gauss(0, 1), 1 if ties else 6) for _ in range(n)]
    b = [round(x + rng.gauss(0.3, 1), 1 if ties else 6) for x in a]
    return a, b


@pytest.mark.parametrize("seed", range(120))
def test_exact_matches_sign_flip_enumeration(seed):
    rng = random.Random(seed)
    a, b = sample(rng, rng.randint(5, 12), ties=seed % 2 == 0)
    try:
        res = wilcoxon_one_tailed(a, b)
    except InsufficientDataError:
        return
    w, p = wilcoxon_sign_flip(a, b)
    assert res.method == "exact"
    assert res.statistic == pytest.approx(w, abs=1e-12)
    assert abs(res.p_value - p) <= 1e-9


def test_normal_close_to_exact_at_25():
    rng = random.Random(0)
    worst = 0.0
    for _ in range(100):
        a, b = sample(rng, 25, ties=False)
        diffs, ranks = signed_ranks(a, b)
        w = sum(r for d, r in zip(diffs, ranks) if d > 0)
        worst = max(worst, abs(normal_lower_tail(ranks, w) - exact_lower_tail(ranks, w)))
    assert worst <= 0.005


def test_large_samples_use_normal():
    rng = random.Random(1)
    a, b = sample(rng, 40, ties=False)
    assert wilcoxon_one_tailed(a, b).method == "normal"


def test_dominating_sample_rejects():
    # every a below its b: W+ = 0, p = 2^-n
    a = [0.1 * k for k in range(10)]
    b = [x + 0.05 + 0.01 * k for k, x in enumerate(a)]
    res = wilcoxon_one_tailed(a, b)
    assert res.statistic == 0 and res.p_value == pytest.approx(2 ** -10)
    assert res.rejects(DEFAULT_ALPHA)
    assert not wilcoxon_one_tailed(b, a).rejects(DEFAULT_ALPHA)


def test_symmetric_null_median():
    ranks = [1.0, 2.0, 3.0, 4.0]
    # W+ has mean 5 and a symmetric distribution over 0..10
    assert exact_lower_tail(ranks, 10) == 1.0
    assert exact_lower_tail(ranks, 4) + exact_lower_tail(ranks, 5) == pytest.approx(1.0)
    assert math.isclose(exact_lower_tail(ranks, 0), 1 / 16)
