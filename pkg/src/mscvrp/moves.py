"""Local-search moves with exact integer deltas.

Every evaluator takes a granular pair ``(u, v)`` (v is one of u's nearest
customers) and returns the best capacity-feasible candidate of its kind that
brings ``u`` next to ``v``, as ``(delta, payload)``, or None.  ``apply_move``
performs a payload and returns the customers whose adjacencies changed.
"""

from __future__ import annotations

import enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .solution import DEPOT, Solution

Candidate = Tuple[int, tuple]


class MoveKind(enum.Enum):
    INTRA_RELOCATE = "intra-relocate"
    INTRA_SWAP = "intra-swap"
    TWO_OPT = "2-opt"
    INTER_RELOCATE = "inter-relocate"
    INTER_SWAP = "inter-swap"
    TWO_OPT_STAR = "2-opt*"
    SINGLE_PATH_MOVE = "single-path-move"
    DOUBLE_PATH_MOVE = "double-path-move"
    CROSS_EXCHANGE = "cross-exchange"
    EJ_CHAIN_RELOCATE = "ej-chain-relocate"
    EJ_CHAIN_PATH = "ej-chain-path"

    @property
    def level(self) -> int:
        return 1 if self in (MoveKind.EJ_CHAIN_RELOCATE, MoveKind.EJ_CHAIN_PATH) else 0


LEVELS: Dict[int, List[MoveKind]] = {
    0: [k for k in MoveKind if k.level == 0],
    1: [k for k in MoveKind if k.level == 1],
}

# longest segment exchanged by CROSS-exchange, per side
CROSS_MAX_LEN = 3


def _pred(sol: Solution, c: int) -> int:
    p = sol.pos_of[c]
    return sol.routes[sol.route_of[c]][p - 1] if p > 0 else DEPOT


def _succ(sol: Solution, c: int) -> int:
    r = sol.routes[sol.route_of[c]]
    p = sol.pos_of[c] + 1
    return r[p] if p < len(r) else DEPOT


# ---------------------------------------------------------------------------
# segment relocation: relocate, path moves and ejection-chain stages


def segment_relocate_delta(sol: Solution, first: int, length: int, anchor: int, after: bool,
                           reverse: bool) -> Optional[int]:
    """Delta of moving ``length`` customers starting at ``first`` next to ``anchor``.

    Returns None when the move is malformed (segment overruns its route or
    contains the anchor).  Capacity is not checked here.
    """
    ra = sol.route_of[first]
    A = sol.routes[ra]
    i = sol.pos_of[first]
    if i + length > len(A):
        return None
    if sol.route_of[anchor] == ra and i <= sol.pos_of[anchor] < i + length:
        return None
    last = A[i + length - 1]
    dist = sol.instance.dist
    p = A[i - 1] if i > 0 else DEPOT
    n = A[i + length] if i + length < len(A) else DEPOT
    delta = dist[p][n] - dist[p][first] - dist[last][n]
    if after:
        a = anchor
        b = n if anchor == p else _succ(sol, anchor)
    else:
        b = anchor
        a = p if anchor == n else _pred(sol, anchor)
    x, y = (last, first) if reverse else (first, last)
    return delta + dist[a][x] + dist[y][b] - dist[a][b]


def _segment_fits(sol: Solution, first: int, length: int, anchor: int) -> bool:
    ra, rb = sol.route_of[first], sol.route_of[anchor]
    if ra == rb:
        return True
    i = sol.pos_of[first]
    pre = sol.prefix[ra]
    seg_load = pre[i + length] - pre[i]
    return sol.loads[rb] + seg_load <= sol.instance.capacity


def _segments_with(sol: Solution, u: int, length: int):
    """Start customers of the segments of ``length`` that have ``u`` at an end."""
    r = sol.routes[sol.route_of[u]]
    i = sol.pos_of[u]
    starts = []
    if i + length <= len(r):
        starts.append((r[i], False))  # u first
    if length > 1 and i - length + 1 >= 0:
        starts.append((r[i - length + 1], True))  # u last
    return starts


def _best_segment_move(sol: Solution, u: int, v: int, length: int, same_route: Optional[bool],
                       check_capacity: bool = True) -> Optional[Candidate]:
    ru, rv = sol.route_of[u], sol.route_of[v]
    if same_route is True and ru != rv:
        return None
    if same_route is False and ru == rv:
        return None
    best = None
    for first, u_is_last in _segments_with(sol, u, length):
        if check_capacity and not _segment_fits(sol, first, length, v):
            continue
        for after in (True, False):
            # orient the segment so that u lands next to v
            if length == 1:
                orientations = (False,)
            elif after:
                orientations = (u_is_last,)
            else:
                orientations = (not u_is_last,)
            for reverse in orientations:
                d = segment_relocate_delta(sol, first, length, v, after, reverse)
                if d is not None and (best is None or d < best[0]):
                    best = (d, ("seg", first, length, v, after, reverse))
    return best


def _apply_seg(sol: Solution, first: int, length: int, anchor: int, after: bool,
               reverse: bool, refresh: bool = True) -> List[int]:
    ra = sol.route_of[first]
    A = sol.routes[ra]
    i = sol.pos_of[first]
    touched = [A[i - 1] if i > 0 else DEPOT, A[i + length] if i + length < len(A) else DEPOT]
    seg = A[i:i + length]
    del A[i:i + length]
    if reverse:
        seg.reverse()
    rb = sol.route_of[anchor]
    B = sol.routes[rb]
    k = B.index(anchor) if rb == ra else sol.pos_of[anchor]
    idx = k + 1 if after else k
    touched.append(B[idx - 1] if idx > 0 else DEPOT)
    touched.append(B[idx] if idx < len(B) else DEPOT)
    B[idx:idx] = seg
    touched += seg
    if refresh:
        sol.refresh_route(ra)
        if rb != ra:
            sol.refresh_route(rb)
        sol.drop_empty()
    return touched


def eval_intra_relocate(sol: Solution, u: int, v: int) -> Optional[Candidate]:
    return _best_segment_move(sol, u, v, 1, True)


def eval_inter_relocate(sol: Solution, u: int, v: int) -> Optional[Candidate]:
    return _best_segment_move(sol, u, v, 1, False)


def eval_single_path(sol: Solution, u: int, v: int) -> Optional[Candidate]:
    return _best_segment_move(sol, u, v, 2, None)


def eval_double_path(sol: Solution, u: int, v: int) -> Optional[Candidate]:
    return _best_segment_move(sol, u, v, 3, None)


# ---------------------------------------------------------------------------
# swap


def swap_delta(sol: Solution, u: int, w: int) -> int:
    dist = sol.instance.dist
    pu, nu = _pred(sol, u), _succ(sol, u)
    pw, nw = _pred(sol, w), _succ(sol, w)
    if sol.route_of[u] == sol.route_of[w]:
        if nu == w:
            return dist[pu][w] + dist[u][nw] - dist[pu][u] - dist[w][nw]
        if nw == u:
            return dist[pw][u] + dist[w][nu] - dist[pw][w] - dist[u][nu]
    return (dist[pu][w] + dist[w][nu] - dist[pu][u] - dist[u][nu]
            + dist[pw][u] + dist[u][nw] - dist[pw][w] - dist[w][nw])


def _best_swap(sol: Solution, u: int, v: int, same_route: bool) -> Optional[Candidate]:
    ru, rv = sol.route_of[u], sol.route_of[v]
    if (ru == rv) != same_route:
        return None
    dem = sol.instance.demands
    Q = sol.instance.capacity
    best = None
    for w in (v, _pred(sol, v), _succ(sol, v)):
        if w == DEPOT or w == u:
            continue
        if not same_route:
            diff = dem[w] - dem[u]
            if sol.loads[ru] + diff > Q or sol.loads[rv] - diff > Q:
                continue
        d = swap_delta(sol, u, w)
        if best is None or d < best[0]:
            best = (d, ("swap", u, w))
    return best


def _apply_swap(sol: Solution, u: int, w: int) -> List[int]:
    ru, rw = sol.route_of[u], sol.route_of[w]
    touched = [_pred(sol, u), _succ(sol, u), _pred(sol, w), _succ(sol, w), u, w]
    iu, iw = sol.pos_of[u], sol.pos_of[w]
    sol.routes[ru][iu] = w
    sol.routes[rw][iw] = u
    sol.refresh_route(ru)
    if rw != ru:
        sol.refresh_route(rw)
    return touched


def eval_intra_swap(sol: Solution, u: int, v: int) -> Optional[Candidate]:
    return _best_swap(sol, u, v, True)


def eval_inter_swap(sol: Solution, u: int, v: int) -> Optional[Candidate]:
    return _best_swap(sol, u, v, False)


# ---------------------------------------------------------------------------
# 2-opt (intra) and 2-opt* (inter)


def two_opt_delta(sol: Solution, ri: int, i: int, j: int) -> int:
    """Delta of reversing positions i..j (inclusive) of route ``ri``."""
    r = sol.routes[ri]
    dist = sol.instance.dist
    a = r[i - 1] if i > 0 else DEPOT
    b, c = r[i], r[j]
    d = r[j + 1] if j + 1 < len(r) else DEPOT
    return dist[a][c] + dist[b][d] - dist[a][b] - dist[c][d]


def eval_two_opt(sol: Solution, u: int, v: int) -> Optional[Candidate]:
    ri = sol.route_of[u]
    if sol.route_of[v] != ri:
        return None
    iu, iv = sol.pos_of[u], sol.pos_of[v]
    if iu > iv:
        iu, iv = iv, iu
    best = None
    # (u, v) become adjacent either by reversing (u, v] or [u, v)
    for i, j in ((iu + 1, iv), (iu, iv - 1)):
        if i >= j:
            continue
        d = two_opt_delta(sol, ri, i, j)
        if best is None or d < best[0]:
            best = (d, ("2opt", sol.routes[ri][i], sol.routes[ri][j]))
    return best


def _apply_two_opt(sol: Solution, first: int, last: int) -> List[int]:
    ri = sol.route_of[first]
    r = sol.routes[ri]
    i, j = sol.pos_of[first], sol.pos_of[last]
    touched = [r[i - 1] if i > 0 else DEPOT, r[j + 1] if j + 1 < len(r) else DEPOT, first, last]
    r[i:j + 1] = r[i:j + 1][::-1]
    sol.refresh_route(ri)
    return touched


def _two_opt_star_variants(sol: Solution, u: int, v: int):
    """Yield (variant, delta, new_load_a, new_load_b) for the four reconnections."""
    ra, rb = sol.route_of[u], sol.route_of[v]
    A, B = sol.routes[ra], sol.routes[rb]
    PA, PB = sol.prefix[ra], sol.prefix[rb]
    LA, LB = PA[-1], PB[-1]
    i, j = sol.pos_of[u], sol.pos_of[v]
    dist = sol.instance.dist
    pu = A[i - 1] if i > 0 else DEPOT
    nu = A[i + 1] if i + 1 < len(A) else DEPOT
    pv = B[j - 1] if j > 0 else DEPOT
    nv = B[j + 1] if j + 1 < len(B) else DEPOT
    duv = dist[u][v]
    # A[:i+1] + B[j:] / B[:j] + A[i+1:]
    yield ("tail_uv", duv + dist[pv][nu] - dist[u][nu] - dist[pv][v],
           PA[i + 1] + LB - PB[j], PB[j] + LA - PA[i + 1])
    # A[:i] + B[j+1:] / B[:j+1] + A[i:]
    yield ("tail_vu", duv + dist[pu][nv] - dist[pu][u] - dist[v][nv],
           PA[i] + LB - PB[j + 1], PB[j + 1] + LA - PA[i])
    # A[:i+1] + rev(B[:j+1]) / rev(A[i+1:]) + B[j+1:]
    yield ("rev_uv", duv + dist[nu][nv] - dist[u][nu] - dist[v][nv],
           PA[i + 1] + PB[j + 1], LA - PA[i + 1] + LB - PB[j + 1])
    # rev(B[j:]) + A[i:] / B[:j] + rev(A[:i])
    yield ("rev_vu", duv + dist[pv][pu] - dist[pu][u] - dist[pv][v],
           LB - PB[j] + LA - PA[i], PB[j] + PA[i])


def eval_two_opt_star(sol: Solution, u: int, v: int) -> Optional[Candidate]:
    if sol.route_of[u] == sol.route_of[v]:
        return None
    Q = sol.instance.capacity
    best = None
    for variant, d, la, lb in _two_opt_star_variants(sol, u, v):
        if la > Q or lb > Q:
            continue
        if best is None or d < best[0]:
            best = (d, ("2opt*", variant, u, v))
    return best


def _apply_two_opt_star(sol: Solution, variant: str, u: int, v: int) -> List[int]:
    ra, rb = sol.route_of[u], sol.route_of[v]
    A, B = sol.routes[ra], sol.routes[rb]
    i, j = sol.pos_of[u], sol.pos_of[v]
    touched = [u, v, _pred(sol, u), _succ(sol, u), _pred(sol, v), _succ(sol, v)]
    if variant == "tail_uv":
        newA, newB = A[:i + 1] + B[j:], B[:j] + A[i + 1:]
    elif variant == "tail_vu":
        newA, newB = A[:i] + B[j + 1:], B[:j + 1] + A[i:]
    elif variant == "rev_uv":
        newA, newB = A[:i + 1] + B[:j + 1][::-1], A[i + 1:][::-1] + B[j + 1:]
    else:
        newA, newB = B[j:][::-1] + A[i:], B[:j] + A[:i][::-1]
    sol.routes[ra], sol.routes[rb] = newA, newB
    sol.refresh_route(ra)
    sol.refresh_route(rb)
    sol.drop_empty()
    return touched


# ---------------------------------------------------------------------------
# CROSS-exchange


def eval_cross(sol: Solution, u: int, v: int) -> Optional[Candidate]:
    ra, rb = sol.route_of[u], sol.route_of[v]
    if ra == rb:
        return None
    A, B = sol.routes[ra], sol.routes[rb]
    PA, PB = sol.prefix[ra], sol.prefix[rb]
    LA, LB = PA[-1], PB[-1]
    Q = sol.instance.capacity
    dist = sol.instance.dist
    i, j = sol.pos_of[u], sol.pos_of[v]
    nA, nB = len(A), len(B)
    best = None

    # family "after": A segment starts after u, B segment starts at v -> edge (u, v)
    pv = B[j - 1] if j > 0 else DEPOT
    for la in range(1, CROSS_MAX_LEN + 1):
        if i + la >= nA:
            break
        x1, xl = A[i + 1], A[i + la]
        xa = A[i + la + 1] if i + la + 1 < nA else DEPOT
        seg_a = PA[i + la + 1] - PA[i + 1]
        for lb in range(1, CROSS_MAX_LEN + 1):
            if j + lb > nB:
                break
            yl = B[j + lb - 1]
            yb = B[j + lb] if j + lb < nB else DEPOT
            seg_b = PB[j + lb] - PB[j]
            if LA - seg_a + seg_b > Q or LB - seg_b + seg_a > Q:
                continue
            d = (dist[u][v] + dist[yl][xa] + dist[pv][x1] + dist[xl][yb]
                 - dist[u][x1] - dist[xl][xa] - dist[pv][v] - dist[yl][yb])
            if best is None or d < best[0]:
                best = (d, ("cross", "after", u, la, v, lb))

    # family "before": A segment ends before u, B segment ends at v -> edge (v, u)
    nv = B[j + 1] if j + 1 < nB else DEPOT
    for la in range(1, CROSS_MAX_LEN + 1):
        if i - la < 0:
            break
        x1, xl = A[i - la], A[i - 1]
        xp = A[i - la - 1] if i - la - 1 >= 0 else DEPOT
        seg_a = PA[i] - PA[i - la]
        for lb in range(1, CROSS_MAX_LEN + 1):
            if j - lb + 1 < 0:
                break
            y1 = B[j - lb + 1]
            yp = B[j - lb] if j - lb >= 0 else DEPOT
            seg_b = PB[j + 1] - PB[j - lb + 1]
            if LA - seg_a + seg_b > Q or LB - seg_b + seg_a > Q:
                continue
            d = (dist[xp][y1] + dist[v][u] + dist[yp][x1] + dist[xl][nv]
                 - dist[xp][x1] - dist[xl][u] - dist[yp][y1] - dist[v][nv])
            if best is None or d < best[0]:
                best = (d, ("cross", "before", u, la, v, lb))
    return best


def _apply_cross(sol: Solution, family: str, u: int, la: int, v: int, lb: int) -> List[int]:
    ra, rb = sol.route_of[u], sol.route_of[v]
    A, B = sol.routes[ra], sol.routes[rb]
    i, j = sol.pos_of[u], sol.pos_of[v]
    if family == "after":
        X, Y = A[i + 1:i + 1 + la], B[j:j + lb]
        newA = A[:i + 1] + Y + A[i + 1 + la:]
        newB = B[:j] + X + B[j + lb:]
        ends = [A[i + la + 1] if i + la + 1 < len(A) else DEPOT, B[j - 1] if j > 0 else DEPOT,
                B[j + lb] if j + lb < len(B) else DEPOT]
    else:
        X, Y = A[i - la:i], B[j - lb + 1:j + 1]
        newA = A[:i - la] + Y + A[i:]
        newB = B[:j - lb + 1] + X + B[j + 1:]
        ends = [A[i - la - 1] if i - la - 1 >= 0 else DEPOT, B[j - lb] if j - lb >= 0 else DEPOT,
                B[j + 1] if j + 1 < len(B) else DEPOT]
    touched = [u, v, X[0], X[-1], Y[0], Y[-1]] + ends
    sol.routes[ra], sol.routes[rb] = newA, newB
    sol.refresh_route(ra)
    sol.refresh_route(rb)
    return touched


# ---------------------------------------------------------------------------
# ejection chains: an overloading segment move repaired by relocating a
# customer out of the overloaded route


def _slot_neighbors(route: Sequence[int], idx: int) -> Tuple[int, int]:
    return (route[idx - 1] if idx > 0 else DEPOT, route[idx] if idx < len(route) else DEPOT)


def _eval_chain(sol: Solution, u: int, v: int, length: int, gamma: int) -> Optional[Candidate]:
    ra, rb = sol.route_of[u], sol.route_of[v]
    if ra == rb:
        return None
    inst = sol.instance
    dist, dem, Q = inst.dist, inst.demands, inst.capacity
    stage1 = _best_segment_move(sol, u, v, length, False, check_capacity=False)
    if stage1 is None:
        return None
    d1, payload1 = stage1
    _, first, _, anchor, after, reverse = payload1
    A, B = sol.routes[ra], sol.routes[rb]
    i = sol.pos_of[first]
    seg = A[i:i + length]
    seg_load = sum(dem[c] for c in seg)
    overload = sol.loads[rb] + seg_load - Q
    if overload <= 0:
        return None  # plain path/relocate covers feasible moves

    newA = A[:i] + A[i + length:]
    ins = seg[::-1] if reverse else seg
    k = sol.pos_of[anchor] + (1 if after else 0)
    newB = B[:k] + ins + B[k:]
    load_a = sol.loads[ra] - seg_load
    seg_set = set(seg)
    neighbors = inst.neighbors
    best = None
    for wi, w in enumerate(newB):
        if w in seg_set or dem[w] < overload:
            continue
        p = newB[wi - 1] if wi > 0 else DEPOT
        n = newB[wi + 1] if wi + 1 < len(newB) else DEPOT
        removal = dist[p][n] - dist[p][w] - dist[w][n]
        # rounded inserts cost at least -1, so this bound is safe
        if best is not None and d1 + removal - 1 >= best[0]:
            continue
        if d1 + removal - 1 >= 0:
            continue
        dw = dist[w]
        for z in neighbors[w][:gamma]:
            rz = sol.route_of[z]
            if rz == rb or z in seg_set:
                continue
            if rz == ra:
                if load_a + dem[w] > Q or not newA:
                    continue
                route = newA
                zi = newA.index(z)
            else:
                if sol.loads[rz] + dem[w] > Q:
                    continue
                route = sol.routes[rz]
                zi = sol.pos_of[z]
            for side_after in (True, False):
                a, b = _slot_neighbors(route, zi + 1 if side_after else zi)
                d = d1 + removal + dw[a] + dw[b] - dist[a][b]
                if best is None or d < best[0]:
                    best = (d, ("chain", payload1, ("seg", w, 1, z, side_after, False)))
    return best


def eval_chain_relocate(sol: Solution, u: int, v: int, gamma: int = 25) -> Optional[Candidate]:
    return _eval_chain(sol, u, v, 1, gamma)


def eval_chain_path(sol: Solution, u: int, v: int, gamma: int = 25) -> Optional[Candidate]:
    return _eval_chain(sol, u, v, 2, gamma)


def _apply_chain(sol: Solution, stage1: tuple, stage2: tuple) -> List[int]:
    ra, rb = sol.route_of[stage1[1]], sol.route_of[stage1[3]]
    touched = _apply_seg(sol, *stage1[1:], refresh=False)
    # stage 1 leaves route rb overloaded; reindex before stage 2 looks up positions
    _reindex(sol, ra)
    _reindex(sol, rb)
    rz = sol.route_of[stage2[3]]
    touched += _apply_seg(sol, *stage2[1:], refresh=False)
    for ri in {ra, rb, rz}:
        sol.refresh_route(ri)
    sol.drop_empty()
    return touched


def _reindex(sol: Solution, ri: int) -> None:
    for p, c in enumerate(sol.routes[ri]):
        sol.route_of[c] = ri
        sol.pos_of[c] = p


EVALUATORS: Dict[MoveKind, Callable[..., Optional[Candidate]]] = {
    MoveKind.INTRA_RELOCATE: eval_intra_relocate,
    MoveKind.INTRA_SWAP: eval_intra_swap,
    MoveKind.TWO_OPT: eval_two_opt,
    MoveKind.INTER_RELOCATE: eval_inter_relocate,
    MoveKind.INTER_SWAP: eval_inter_swap,
    MoveKind.TWO_OPT_STAR: eval_two_opt_star,
    MoveKind.SINGLE_PATH_MOVE: eval_single_path,
    MoveKind.DOUBLE_PATH_MOVE: eval_double_path,
    MoveKind.CROSS_EXCHANGE: eval_cross,
    MoveKind.EJ_CHAIN_RELOCATE: eval_chain_relocate,
    MoveKind.EJ_CHAIN_PATH: eval_chain_path,
}


def apply_move(sol: Solution, payload: tuple) -> List[int]:
    """Perform a move payload in place; returns customers with changed adjacencies."""
    tag = payload[0]
    if tag == "seg":
        touched = _apply_seg(sol, *payload[1:])
    elif tag == "swap":
        touched = _apply_swap(sol, *payload[1:])
    elif tag == "2opt":
        touched = _apply_two_opt(sol, *payload[1:])
    elif tag == "2opt*":
        touched = _apply_two_opt_star(sol, *payload[1:])
    elif tag == "cross":
        touched = _apply_cross(sol, *payload[1:])
    elif tag == "chain":
        touched = _apply_chain(sol, *payload[1:])
    else:
        raise ValueError(f"unknown move payload {tag!r}")
    seen = set()
    out = []
    for c in touched:
        if c != DEPOT and c not in seen:
            seen.add(c)
            out.append(c)
    return out


def evaluate(kind: MoveKind, sol: Solution, u: int, v: int, gamma: int = 25) -> Optional[Candidate]:
    if kind.level == 1:
        return EVALUATORS[kind](sol, u, v, gamma)
    return EVALUATORS[kind](sol, u, v)


def payload_delta(sol: Solution, payload: tuple) -> int:
    """Cost change of a payload, measured by applying it to a copy."""
    trial = sol.copy()
    apply_move(trial, payload)
    return trial.cost - sol.cost


def move_delta(kind: MoveKind, sol: Solution, u: int, v: int, gamma: int = 25) -> Optional[int]:
    """Signed cost change of the best ``kind`` move joining ``u`` and ``v``.

    None when no capacity-feasible move of that kind exists for the pair.
    """
    cand = evaluate(kind, sol, u, v, gamma)
    return None if cand is None else cand[0]
