"""Reference solvers used to check the search.

``brute_force`` enumerates walks; ``pseudo_poly_dp`` solves unit instances
(integer arc lengths, unit acceleration bounds, constant caps) exactly by a
shortest path over (node, squared speed) pairs; ``partition_instance``
builds the graph that encodes a subset-sum question.
"""
from __future__ import annotations

import heapq
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded, EndAboveCapError, NoPathError, NotUnitInstance, \
    StartAboveCapError
from .graph import ArcBounds, RoadGraph, concat_bounds
from .profile import SpeedProfile, plan_points, plan_speed

INF = math.inf


@dataclass
class OracleResult:
    path: tuple
    time: float
    profile: SpeedProfile | None = None
    states: int = 0
    levels: int = 0


def _walk_time(g, word, w0, w_end):
    b = concat_bounds(g, word)
    try:
        _, t, _ = plan_points(b, w0, w_end)
    except (StartAboveCapError, EndAboveCapError):
        return INF
    return t


def brute_force(g: RoadGraph, max_len: int, budget: int = 10**7, w0="query") -> OracleResult:
    """Best walk from the source to a target with at most max_len nodes.

    Walks may repeat nodes.  ``w0`` overrides the initial squared speed
    (None leaves it free).
    """
    if g.source is None:
        raise ValueError("graph has no query")
    w_start = g.w_source if w0 == "query" else w0
    best_t, best_p = INF, None
    count = 0
    stack = [(g.source,)]
    while stack:
        word = stack.pop()
        count += 1
        if count > budget:
            raise BudgetExceeded(f"more than {budget} walks enumerated")
        if word[-1] in g.targets:
            t = _walk_time(g, word, w_start, g.w_target)
            if t < best_t - 1e-12 or (t <= best_t + 1e-12 and best_p is not None
                                      and (len(word), word) < (len(best_p), best_p) and t < INF):
                best_t, best_p = t, word
        if len(word) < max_len:
            for v, _ in sorted(g.successors(word[-1]), reverse=True):
                stack.append(word + (v,))
    if best_p is None or best_t == INF:
        raise NoPathError("no feasible walk within the length limit")
    prof = plan_speed(concat_bounds(g, best_p), w_start, g.w_target).profile
    return OracleResult(best_p, best_t, prof, count)


def partition_instance(weights) -> RoadGraph:
    """Graph whose fastest path reaches time sqrt(2W) iff the weights split evenly.

    Nodes 0..n+1; every arc i -> j with i < j; arcs out of node 0 have zero
    length and arcs out of node i >= 1 have length weights[i-1].  No speed
    cap, unit acceleration bounds, start at rest and arrive with squared
    speed W/2.
    """
    weights = [int(w) for w in weights]
    if not weights or any(w <= 0 for w in weights):
        raise ValueError("weights must be positive integers")
    n = len(weights)
    total = sum(weights)
    g = RoadGraph()
    for i in range(n + 2):
        g.add_node(str(i))
    b = ArcBounds.constant(INF, 1.0)
    for i in range(n + 1):
        for j in range(i + 1, n + 2):
            g.add_arc(i, j, 0.0 if i == 0 else weights[i - 1], b)
    return g.set_query(0, {n + 1}, 0.0, total / 2.0)


def partition_target_time(weights) -> float:
    return math.sqrt(2.0 * sum(weights))


def has_even_split(weights) -> bool:
    """Subset-sum check by bitset (independent of the graph encoding)."""
    total = sum(weights)
    if total % 2:
        return False
    reach = 1
    for w in weights:
        reach |= reach << w
    return bool((reach >> (total // 2)) & 1)


# ---------------------------------------------------------------------------
# unit instances

def _unit_time(wa, wb, cap):
    """Fastest traversal of a unit-length piece with |dw/dl| <= 1 and w <= cap."""
    x = (wb - wa + 1.0) / 2.0
    peak = (wa + wb + 1.0) / 2.0

    def seg(d, a, b):
        if d <= 0:
            return 0.0
        s = math.sqrt(a) + math.sqrt(b)
        return INF if s == 0 else 2.0 * d / s

    if peak <= cap:
        return seg(x, wa, peak) + seg(1.0 - x, peak, wb)
    x1 = cap - wa
    x2 = 1.0 - (cap - wb)
    return seg(x1, wa, cap) + seg(x2 - x1, cap, cap) + seg(1.0 - x2, cap, wb)


def check_unit_instance(g: RoadGraph):
    for a in g.arcs:
        if a.length != int(a.length) or a.length < 1:
            raise NotUnitInstance(f"arc {a.tail}->{a.head} length {a.length} is not a positive integer")
        caps = {p[3] for p in a.pieces}
        if len(caps) != 1 or not math.isfinite(next(iter(caps))):
            raise NotUnitInstance(f"arc {a.tail}->{a.head} needs one finite cap")
        for p in a.pieces:
            if p[2] != 0.0 or p[4] != -1.0 or p[5] != 1.0:
                raise NotUnitInstance(f"arc {a.tail}->{a.head} needs mu_minus=0 and alpha=+-1")
    for w in (g.w_source, g.w_target):
        if w is not None and not math.isfinite(w):
            raise NotUnitInstance("boundary squared speeds must be finite")


def speed_levels(g: RoadGraph):
    """Exact set of squared speeds an optimal profile can take at integer positions."""
    caps = [Fraction(a.pieces[0][3]) for a in g.arcs]
    top = max(caps)
    seeds = set(caps) | {Fraction(g.w_source)}
    if g.w_target is not None:
        seeds.add(Fraction(g.w_target))
    levels = set()
    for c in seeds:
        v = c
        while v <= top:
            levels.add(v)
            v += 1
    return sorted(levels)


def state_bound(g: RoadGraph) -> float:
    """|V'| * |E| * (1 + max_cap**2 / 2), V' the nodes after unit subdivision."""
    n_sub = g.n_nodes + sum(int(a.length) - 1 for a in g.arcs)
    top = max(a.pieces[0][3] for a in g.arcs)
    return n_sub * len(g.arcs) * (1.0 + 0.5 * top * top)


def pseudo_poly_dp(g: RoadGraph) -> OracleResult:
    """Exact optimum on unit instances via Dijkstra over (position, squared speed)."""
    check_unit_instance(g)
    levels = speed_levels(g)
    lv = [float(x) for x in levels]
    # unit subdivision: (arc index, offset) identifies an inner point
    out = {}
    for ai, a in enumerate(g.arcs):
        L = int(a.length)
        cap = a.pieces[0][3]
        pts = [("n", a.tail)] + [("i", ai, k) for k in range(1, L)] + [("n", a.head)]
        for u, v in zip(pts, pts[1:]):
            out.setdefault(u, []).append((v, cap))

    w0 = g.w_source
    start = (("n", g.source), levels.index(Fraction(w0)))
    want = None if g.w_target is None else levels.index(Fraction(g.w_target))
    dist = {start: 0.0}
    parent = {start: None}
    heap = [(0.0, start)]
    settled = set()
    while heap:
        d, st = heapq.heappop(heap)
        if st in settled:
            continue
        settled.add(st)
        node, li = st
        if node[0] == "n" and node[1] in g.targets and (want is None or li == want):
            path = []
            cur = st
            while cur is not None:
                if cur[0][0] == "n":
                    path.append(cur[0][1])
                cur = parent[cur]
            path.reverse()
            return OracleResult(tuple(path), d, None, len(settled), len(levels))
        wa = lv[li]
        for nxt, cap in out.get(node, ()):
            if wa > cap:
                continue
            lo = bisect_left(lv, wa - 1.0 - 1e-12)
            hi = bisect_right(lv, min(wa + 1.0, cap) + 1e-12)
            for lj in range(lo, hi):
                wb = lv[lj]
                if wb > cap:
                    break
                t = _unit_time(wa, wb, cap)
                if t == INF:
                    continue
                ns = (nxt, lj)
                nd = d + t
                if nd < dist.get(ns, INF):
                    dist[ns] = nd
                    parent[ns] = st
                    heapq.heappush(heap, (nd, ns))
    raise NoPathError("no feasible path")
