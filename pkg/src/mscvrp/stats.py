"""One-tailed Wilcoxon signed-rank test (alternative: a < b)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

EXACT_MAX_N = 25
MIN_PAIRS = 5
DEFAULT_ALPHA = 0.0125


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # W+, the rank sum of positive differences a - b
    p_value: float
    n_effective: int
    method: str  # "exact" or "normal"

    def rejects(self, alpha: float = DEFAULT_ALPHA) -> bool:
        return self.p_value < alpha


def average_ranks(values: Sequence[float]) -> List[float]:
    """1-based ranks with ties sharing the mean of their positions."""
    order = sorted(range(len(values)), key=lambda k: values[k])
    ranks = [0.0] * len(values)
    k = 0
    while k < len(order):
        m = k
        while m + 1 < len(order) and values[order[m + 1]] == values[order[k]]:
            m += 1
        avg = (k + m) / 2 + 1
        for t in range(k, m + 1):
            ranks[order[t]] = avg
        k = m + 1
    return ranks


def signed_ranks(a: Sequence[float], b: Sequence[float]) -> Tuple[List[float], List[float]]:
    """Nonzero differences a - b and the average ranks of their magnitudes."""
    if len(a) != len(b):
        raise ValueError("paired samples must have equal length")
    diffs = [x - y for x, y in zip(a, b) if x - y != 0]
    return diffs, average_ranks([abs(d) for d in diffs])


def exact_lower_tail(ranks: Sequence[float], w_plus: float) -> float:
    """P(W+ <= w_plus) when each rank's sign is a fair coin.

    Ranks are multiples of 1/2, so the distribution is built over doubled
    integer ranks.
    """
    doubled = [int(round(2 * r)) for r in ranks]
    total = sum(doubled)
    counts = [0] * (total + 1)
    counts[0] = 1
    for r in doubled:
        for s in range(total, r - 1, -1):
            counts[s] += counts[s - r]
    target = int(round(2 * w_plus))
    return sum(counts[: target + 1]) / 2 ** len(doubled)


def normal_lower_tail(ranks: Sequence[float], w_plus: float) -> float:
    """Normal approximation with tie and continuity corrections."""
    n = len(ranks)
    mean = n * (n + 1) / 4
    var = n * (n + 1) * (2 * n + 1) / 24
    tie_sizes = {}
    for r in ranks:
        tie_sizes[r] = tie_sizes.get(r, 0) + 1
    var -= sum(t ** 3 - t for t in tie_sizes.values()) / 48
    if var <= 0:
        return 1.0
    z = (w_plus - mean + 0.5) / math.sqrt(var)
    return 0.5 * (1 + math.erf(z / math.sqrt(2)))


def wilcoxon_one_tailed(a: Sequence[float], b: Sequence[float]) -> WilcoxonResult:
    """Test H0: a and b are exchangeable, against H1: a tends to be smaller than b."""
    diffs, ranks = signed_ranks(a, b)
    n = len(diffs)
    if n < MIN_PAIRS:
        raise InsufficientDataError(f"need at least {MIN_PAIRS} nonzero differences, got {n}")
    w_plus = sum(r for d, r in zip(diffs, ranks) if d > 0)
    if n <= EXACT_MAX_N:
        p, method = exact_lower_tail(ranks, w_plus), "exact"
    else:
        p, method = normal_lower_tail(ranks, w_plus), "normal"
    return WilcoxonResult(statistic=w_plus, p_value=min(1.0, max(0.0, p)), n_effective=n, method=method)
