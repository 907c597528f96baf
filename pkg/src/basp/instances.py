"""Small reference graphs and random geometric instances.

Geometric instances attach two nodes to every position, one per travel
direction: node 2*i carries the position heading and node 2*i + 1 the
opposite heading.  A connecting curve traversed forward and backward gives
one arc in each layer pair, so every arc leaves a node in the direction of
its heading and enters a node in the direction of the arrival heading.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .dubins import Configuration, angular_distance, dubins_path
from .errors import DegenerateInstance
from .graph import ArcBounds, RoadGraph

INF = math.inf


def chain_example() -> RoadGraph:
    """s -> 1 -> 2 -> f, unit arcs, caps 1, 2/3, 1 and unit acceleration bounds."""
    g = RoadGraph()
    s, a, b, f = (g.add_node(n) for n in ("s", "1", "2", "f"))
    for (u, v), cap in zip([(s, a), (a, b), (b, f)], [1.0, 2.0 / 3.0, 1.0]):
        g.add_arc(u, v, 1.0, ArcBounds.constant(cap, 1.0))
    return g.set_query(s, {f}, 0.0, 0.0)


def example_one() -> RoadGraph:
    """Triangle s, 1, f where the direct arc is shorter but has a lower cap."""
    g = RoadGraph()
    s, a, f = (g.add_node(n) for n in ("s", "1", "f"))
    g.add_arc(s, a, 2.0, ArcBounds.constant(4.0, 1.0))
    g.add_arc(a, f, 2.0, ArcBounds.constant(4.0, 1.0))
    g.add_arc(s, f, 3.0, ArcBounds.constant(3.0, 2.0))
    return g.set_query(s, {f}, 0.0, 0.0)


@dataclass(frozen=True)
class GeneratorParams:
    n: int
    seed: int = 0
    scale: float | None = None     # side of the square, default 10 * sqrt(n)
    accel: float = 0.1             # bound on |dw/dl|
    cap_per_radius: float = 2.0    # mu_plus = cap_per_radius * r
    max_radius: float = 4.0
    mean_degree: float = 4.0
    curvature_bounds: bool = False
    straight_cap: float | None = None  # cap on straight segments, default cap_per_radius * max_radius
    radius_rule: str = "distance"      # "distance" or "fixed_point", see radius_for_edge

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.radius_rule not in ("distance", "fixed_point"):
            raise ValueError(f"unknown radius rule {self.radius_rule!r}")
        for name in ("accel", "cap_per_radius", "max_radius", "mean_degree"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")

    @property
    def side(self):
        return 10.0 * math.sqrt(self.n) if self.scale is None else self.scale


def radius_fixed_point(start, goal, max_radius=4.0, iters=20, tol=1e-9):
    """Radius r with r = min(length(r) / d, max_radius), d the heading change.

    Returns (radius, dubins path).  Falls back to max_radius when the
    iteration does not settle.
    """
    d = angular_distance(start.heading, goal.heading)
    r = max_radius
    path = dubins_path(start, goal, r)
    if d == 0:
        return r, path
    for _ in range(iters):
        nr = min(path.length / d, max_radius)
        if abs(nr - r) <= tol * max(1.0, r):
            return nr, dubins_path(start, goal, nr)
        r = nr
        path = dubins_path(start, goal, r)
    return max_radius, dubins_path(start, goal, max_radius)


def radius_for_edge(start, goal, max_radius=4.0, rule="distance"):
    """Turning radius of the curve joining two configurations, and the curve.

    ``"distance"``: r = min(D / d, max_radius) with D the straight-line
    distance and d the heading change.  ``"fixed_point"`` uses the curve
    length instead of D, which settles on max_radius for almost every pair
    because a curve of radius r that turns by d is at least r * d long.
    """
    if rule == "fixed_point":
        return radius_fixed_point(start, goal, max_radius)
    d = angular_distance(start.heading, goal.heading)
    dist = math.hypot(goal.x - start.x, goal.y - start.y)
    r = max_radius if d == 0 else min(dist / d, max_radius)
    r = max(r, 1e-9 * max_radius)
    return r, dubins_path(start, goal, r)


def _threshold_edges(pos, mean_degree):
    """Pairs closer than the threshold that yields the requested mean degree."""
    n = len(pos)
    i, j = np.triu_indices(n, 1)
    dist = np.hypot(pos[i, 0] - pos[j, 0], pos[i, 1] - pos[j, 1])
    m = min(len(dist), max(1, int(round(n * mean_degree / 2))))
    order = np.argsort(dist, kind="stable")
    tau = dist[order[m - 1]]
    keep = np.nonzero(dist <= tau)[0]
    return [(int(i[e]), int(j[e])) for e in keep], float(tau)


def _arc_bounds(path, params):
    r = path.radius
    turn_cap = params.cap_per_radius * r
    if not params.curvature_bounds:
        return ArcBounds.constant(turn_cap, params.accel)
    straight = (params.straight_cap if params.straight_cap is not None
                else params.cap_per_radius * params.max_radius)
    bps, caps = [], []
    pos = 0.0
    for kind, seg in path.pieces():
        cap = straight if kind == "S" else min(turn_cap, straight)
        if caps and caps[-1] == cap:
            pos += seg
            continue
        bps.append(pos)
        caps.append(cap)
        pos += seg
    if not caps:
        return ArcBounds.constant(turn_cap, params.accel)
    n = len(caps)
    return ArcBounds(mu_plus=tuple(caps), alpha_plus=(params.accel,) * n,
                     alpha_minus=(-params.accel,) * n, mu_minus=(0.0,) * n,
                     breakpoints=tuple(bps))


def _reverse_path(path):
    rev = {"L": "R", "R": "L", "S": "S"}
    return type(path)("".join(rev[c] for c in reversed(path.word)),
                      tuple(reversed(path.segments)), path.radius)


def random_instance(params: GeneratorParams) -> RoadGraph:
    """Random geometric road graph with Dubins connecting curves.

    Positions are uniform in a square, pairs below a distance threshold are
    connected, and each connection is the shortest of the four curves
    leaving and entering with either orientation.  The query is left unset.
    """
    rng = np.random.default_rng(params.seed)
    n = params.n
    pos = rng.uniform(0.0, params.side, size=(n, 2))
    heading = rng.uniform(0.0, 2 * math.pi, size=n)
    edges, _ = _threshold_edges(pos, params.mean_degree)

    g = RoadGraph()
    for i in range(n):
        for side, name in ((0.0, "a"), (math.pi, "b")):
            g.add_node(f"{i}{name}", float(pos[i, 0]), float(pos[i, 1]),
                       (float(heading[i]) + side) % (2 * math.pi))
    for i, j in edges:
        best = None
        for si in (0, 1):
            for sj in (0, 1):
                a = Configuration(pos[i, 0], pos[i, 1], heading[i] + si * math.pi)
                b = Configuration(pos[j, 0], pos[j, 1], heading[j] + sj * math.pi)
                r, path = radius_for_edge(a, b, params.max_radius, params.radius_rule)
                if best is None or path.length < best[0].length - 1e-12:
                    best = (path, si, sj)
        path, si, sj = best
        fwd = _arc_bounds(path, params)
        bwd = _arc_bounds(_reverse_path(path), params)
        g.add_arc(2 * i + si, 2 * j + sj, path.length, fwd)
        g.add_arc(2 * j + (1 - sj), 2 * i + (1 - si), path.length, bwd)
    if not g.arcs:
        raise DegenerateInstance("generated graph has no arcs")
    return g


def reachable(g: RoadGraph, source):
    seen = {source}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u, _ in g.successors(v):
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


def random_query(g: RoadGraph, rng, w_source=0.0, w_target=0.0, tries=200):
    """Random source node and a target position (both its nodes) reachable from it."""
    n_pos = g.n_nodes // 2
    for _ in range(tries):
        s = int(rng.integers(g.n_nodes))
        reach = reachable(g, s)
        cands = sorted({v // 2 for v in reach if v // 2 != s // 2})
        if not cands:
            continue
        t = int(cands[int(rng.integers(len(cands)))])
        return g.with_query(s, {2 * t, 2 * t + 1}, w_source, w_target)
    raise DegenerateInstance(f"no reachable source/target pair among {n_pos} positions")


def corridor_instance(aisles=8, slots=23, spacing=2.86, aisle_gap=6.0, turn_radius=1.0,
                      v_max_sq=2.89, turn_cap_per_radius=2.0, accel_up=0.56,
                      accel_down=0.38) -> RoadGraph:
    """Warehouse-like layout: parallel aisles joined at both ends by cross aisles.

    Every position has two nodes (one per travel direction), so the graph has
    2 * aisles * (slots + 2) nodes.
    """
    g = RoadGraph()
    straight = ArcBounds.constant(v_max_sq, accel_up, -accel_down)
    turn = ArcBounds.constant(min(v_max_sq, turn_cap_per_radius * turn_radius),
                              accel_up, -accel_down)
    xs_right = (slots + 1) * spacing

    def add_position(x, y, h, label):
        a = g.add_node(f"{label}a", x, y, h % (2 * math.pi))
        g.add_node(f"{label}b", x, y, (h + math.pi) % (2 * math.pi))
        return a

    slot_node = {}
    left, right = {}, {}
    for k in range(aisles):
        y = k * aisle_gap
        left[k] = add_position(0.0, y, math.pi / 2, f"L{k}.")
        for s in range(slots):
            slot_node[k, s] = add_position((s + 1) * spacing, y, 0.0, f"A{k}.{s}.")
        right[k] = add_position(xs_right, y, math.pi / 2, f"R{k}.")

    def link(u, v, length, bounds):
        # u, v are "a" nodes; forward along a-heading, backward along b-heading
        g.add_arc(u, v, length, bounds)
        g.add_arc(v + 1, u + 1, length, bounds)

    for k in range(aisles):
        for s in range(slots - 1):
            link(slot_node[k, s], slot_node[k, s + 1], spacing, straight)
        if k + 1 < aisles:
            link(left[k], left[k + 1], aisle_gap, straight)
            link(right[k], right[k + 1], aisle_gap, straight)

    def curve(u, v):
        nu, nv = g.nodes[u], g.nodes[v]
        p = dubins_path(Configuration(nu.x, nu.y, nu.heading),
                        Configuration(nv.x, nv.y, nv.heading), turn_radius)
        g.add_arc(u, v, p.length, turn)

    for k in range(aisles):
        first, last = slot_node[k, 0], slot_node[k, slots - 1]
        for c in (left[k], left[k] + 1):
            curve(c, first)          # enter the aisle heading east
            curve(first + 1, c)      # leave it heading west
        for c in (right[k], right[k] + 1):
            curve(last, c)
            curve(c, last + 1)
    return g
