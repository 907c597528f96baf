"""Path search over suffix states.

A state is the word made of the last (at most) k nodes of a partial path,
plus a flag telling whether the path has been closed at a target (so that
the final squared speed is imposed).  The cost of appending a node is the
increase in optimal travel time, evaluated on the state word only: when the
word is a genuine prefix from the source (fewer than k nodes) it starts at
the source squared speed, otherwise it starts from standstill.  The result
is exact as soon as every k-node word that gets expanded is saturating;
``adaptive_astar`` checks that and restarts with a larger k when it fails.
"""
from __future__ import annotations

import heapq
import math
import time as _time
from dataclasses import dataclass, field

from .errors import KLimitExceeded, NoPathError, SaturationViolation, SearchTimeout, UnboundedError
from .graph import PathBounds, RoadGraph, concat_bounds
from .profile import TOL, SpeedProfile, mirror_pieces, plan_points, plan_speed, plan_time
from .reach import _first_touch, k_upper_bound

INF = math.inf
DEFAULT_K_CAP = 12

# travel times keyed by the bounds themselves, shared by all graphs
_SHARED_TIMES: dict = {}


@dataclass
class SearchStats:
    expanded: int = 0
    generated: int = 0
    queue_peak: int = 0
    final_k: int | None = None
    restarts: int = 0
    wall_time: float = 0.0
    violations: list = field(default_factory=list)


@dataclass
class Solution:
    path: tuple
    time: float
    profile: SpeedProfile
    stats: SearchStats
    k: int | None = None

    @property
    def final_k(self):
        return self.stats.final_k


def arc_lower_time(arc) -> float:
    """Time to run an arc at its speed cap everywhere (no acceleration limit)."""
    total = 0.0
    for a, b, _, mp, _, _ in arc.pieces:
        if mp == 0:
            return INF
        total += (b - a) / math.sqrt(mp)
    return total


def heuristic_table(g: RoadGraph) -> list:
    """Lower bound on the remaining time from every node to the target set.

    Reverse Dijkstra from the targets with arc weight equal to the time
    spent on the arc at its speed cap.
    """
    rev = [[] for _ in range(g.n_nodes)]
    for a in g.arcs:
        rev[a.head].append((a.tail, arc_lower_time(a)))
    h = [INF] * g.n_nodes
    heap = [(0.0, t) for t in g.targets]
    for _, t in heap:
        h[t] = 0.0
    heapq.heapify(heap)
    while heap:
        d, v = heapq.heappop(heap)
        if d > h[v]:
            continue
        for u, c in rev[v]:
            nd = d + c
            if nd < h[u]:
                h[u] = nd
                heapq.heappush(heap, (nd, u))
    return h


def gamma(r, sigma, k, g: RoadGraph | None = None):
    """Successor word: the last k nodes of r followed by sigma (None if no arc)."""
    r = tuple(r)
    if g is not None and not g.has_arc(r[-1], sigma):
        return None
    return (r + (sigma,))[-k:]


class CostModel:
    """Memoized travel times of words and the resulting edge costs.

    One instance can be shared by several searches on the same graph and
    query, e.g. across the restarts of the adaptive search.
    """

    def __init__(self, g: RoadGraph):
        self.g = g
        self._times = {}
        self._eta = {}
        self._sat = {}
        self._has_floor = any(p[2] > 0 for a in g.arcs for p in a.pieces)
        # one-node words forget the past only when acceleration is unbounded
        self._free_accel = all(p[4] == -INF and p[5] == INF for a in g.arcs for p in a.pieces)

    def _pieces(self, word):
        g = self.g
        out = []
        off = 0.0
        for a, b in zip(word, word[1:]):
            arc = g.arc(a, b)
            if off == 0.0:
                out.extend(arc.pieces)
            else:
                out.extend((pa + off, pb + off, mm, mp, am, ap)
                           for pa, pb, mm, mp, am, ap in arc.pieces)
            off += arc.length
        return out, off

    def word_time(self, word, full_start, terminal, check_word=None):
        """Optimal time over the word; the final speed is free unless terminal."""
        key = (word, full_start, terminal, check_word)
        t = self._times.get(key)
        if t is not None:
            return t
        g = self.g
        pieces, length = self._pieces(word)
        w0 = g.w_source if full_start else 0.0
        w_end = g.w_target if terminal else None
        if not pieces:
            t = 0.0 if (w_end is None or w_end == w0) else INF
        elif (w0 > pieces[0][3] * (1 + TOL) + TOL
              or (w_end is not None and w_end > pieces[-1][3] * (1 + TOL) + TOL)):
            t = INF
        elif self._has_floor:
            check_from = 0.0
            if check_word is not None:
                check_from = min(self.ell_plus(check_word), g.path_length(check_word))
            _, t, _ = plan_points(PathBounds(length, tuple(pieces), ()), w0, w_end, check_from)
        else:
            w0 = min(w0, pieces[0][3])
            if w_end is not None:
                w_end = min(w_end, pieces[-1][3])
            ck = (tuple(pieces), w0, w_end)
            t = _SHARED_TIMES.get(ck)
            if t is None:
                t = plan_time(pieces, length, w0, w_end)
                if len(_SHARED_TIMES) > 500_000:
                    _SHARED_TIMES.clear()
                _SHARED_TIMES[ck] = t
        self._times[key] = t
        return t

    def eta(self, word, sigma, terminal, full_start):
        key = (word, sigma, terminal, full_start)
        e = self._eta.get(key)
        if e is not None:
            return e
        check = None if full_start else word
        base = self.word_time(word, full_start, False, check)
        ext = self.word_time(word + (sigma,), full_start, terminal, check)
        e = ext - base if base < INF else INF
        if e < 0:
            # rounding only; the extended path can never be faster
            e = 0.0
        self._eta[key] = e
        return e

    def ell_plus(self, word):
        pieces, _ = self._pieces(word)
        return _first_touch(pieces)

    def saturating(self, word):
        if len(word) == 1:
            return self._free_accel
        s = self._sat.get(word)
        if s is None:
            pieces, length = self._pieces(word)
            lp = _first_touch(pieces)
            x = _first_touch(mirror_pieces(pieces, length))
            lm = -INF if math.isinf(x) else length - x
            s = lp <= lm
            self._sat[word] = s
        return s


def incremental_cost(g: RoadGraph, r, sigma, terminal=False, k=None, model=None) -> float:
    """Increase of optimal time when sigma is appended to word r.

    The word starts at the source squared speed when it begins at the source
    and is shorter than k (or k is None); otherwise it starts from standstill.
    """
    r = tuple(r)
    if not g.has_arc(r[-1], sigma):
        return INF
    full = r[0] == g.source and (k is None or len(r) < k)
    model = model or CostModel(g)
    return model.eta(r, sigma, terminal, full)


def _reconstruct(parent, key):
    keys = []
    while key is not None:
        keys.append(key)
        key = parent.get(key)
    keys.reverse()
    path = list(keys[0][0])
    for word, _ in keys[1:]:
        path.append(word[-1])
    return tuple(path)


def _search(g, k, h, check_saturation, model, deadline=None, on_edge=None, stats=None):
    if g.source is None:
        raise ValueError("graph has no query")
    if k < 1:
        raise ValueError("k must be >= 1")
    stats = SearchStats() if stats is None else stats
    targets = g.targets
    start = ((g.source,), False)
    value = {start: 0.0}
    parent = {start: None}
    closed = set()
    if h[g.source] == INF:
        raise NoPathError("no target reachable from the source")
    heap = [(h[g.source], -1, start[0], False, 0.0)]
    stats.generated += 1
    if g.source in targets and (g.w_target is None or g.w_target == g.w_source):
        # the empty path already meets the query
        value[(start[0], True)] = 0.0
        parent[(start[0], True)] = None
        heap.append((h[g.source], -1, start[0], True, 0.0))
        stats.generated += 1
    pops = 0
    while heap:
        f, _, word, term, gv = heapq.heappop(heap)
        key = (word, term)
        if key in closed or gv > value[key]:
            continue
        closed.add(key)
        stats.expanded += 1
        pops += 1
        if deadline is not None and pops % 128 == 0 and _time.perf_counter() > deadline:
            raise SearchTimeout("search exceeded its time budget")
        if check_saturation and len(word) == k and not model.saturating(word):
            raise SaturationViolation(word, k)
        if term:
            return _reconstruct(parent, key), gv, stats
        full = len(word) < k
        last = word[-1]
        for sigma, _arc in g.successors(last):
            hs = h[sigma]
            if hs == INF:
                continue
            nw = (word + (sigma,))[-k:]
            for terminal in ((False, True) if sigma in targets else (False,)):
                nkey = (nw, terminal)
                if nkey in closed:
                    continue
                e = model.eta(word, sigma, terminal, full)
                if on_edge is not None:
                    on_edge(word, sigma, terminal, e, h[last], hs)
                if e == INF:
                    continue
                ng = gv + e
                if ng < value.get(nkey, INF):
                    value[nkey] = ng
                    parent[nkey] = key
                    heapq.heappush(heap, (ng + hs, -len(nw), nw, terminal, ng))
                    stats.generated += 1
        if len(heap) > stats.queue_peak:
            stats.queue_peak = len(heap)
    raise NoPathError("no feasible path to the target set")


def _finish(g, path, value, stats, k):
    res = plan_speed(concat_bounds(g, path), g.w_source, g.w_target)
    return Solution(path, value, res.profile, stats, k)


def astar_k(g: RoadGraph, k: int, h=None, check_saturation=True, model=None,
            timeout=None, on_edge=None) -> Solution:
    """Best-first search over k-suffix states with an admissible heuristic.

    With ``check_saturation`` a SaturationViolation is raised as soon as a
    k-node word that is not saturating is expanded.
    """
    t0 = _time.perf_counter()
    h = heuristic_table(g) if h is None else h
    model = model or CostModel(g)
    deadline = None if timeout is None else t0 + timeout
    path, value, stats = _search(g, k, h, check_saturation, model, deadline, on_edge)
    stats.final_k = k
    sol = _finish(g, path, value, stats, k)
    stats.wall_time = _time.perf_counter() - t0
    return sol


def dijkstra_extended(g: RoadGraph, k: int, model=None, timeout=None, on_edge=None) -> Solution:
    """Uniform-cost search over the same state space (no heuristic, no check)."""
    return astar_k(g, k, h=[0.0] * g.n_nodes, check_saturation=False, model=model,
                   timeout=timeout, on_edge=on_edge)


def default_k_cap(g: RoadGraph) -> int:
    try:
        return k_upper_bound(g)
    except UnboundedError:
        return DEFAULT_K_CAP


def adaptive_astar(g: RoadGraph, k_max=None, k_start=2, timeout=None, on_edge=None) -> Solution:
    """Search with k = 2, 3, ... until no non-saturating k-node word is expanded."""
    t0 = _time.perf_counter()
    k_max = max(default_k_cap(g), k_start) if k_max is None else k_max
    h = heuristic_table(g)
    model = CostModel(g)
    total = SearchStats()
    deadline = None if timeout is None else t0 + timeout
    k = k_start
    while True:
        if k > k_max:
            raise KLimitExceeded(f"k would exceed {k_max}")
        try:
            path, value, _ = _search(g, k, h, True, model, deadline, on_edge, total)
        except SaturationViolation as exc:
            total.violations.append((k, exc.word))
            total.restarts += 1
            k += 1
            continue
        total.final_k = k
        sol = _finish(g, path, value, total, k)
        total.wall_time = _time.perf_counter() - t0
        return sol


def solve_one_basp(g: RoadGraph) -> Solution:
    """Shortest path when acceleration is unbounded: the cap is followed exactly.

    The returned solution refers to the relaxed graph (infinite acceleration
    bounds); replan it on the original graph to get its true travel time.
    """
    rg = g.relaxed()
    sol = dijkstra_extended(rg, 1)
    sol.stats.final_k = 1
    return sol
