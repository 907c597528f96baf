"""Random instances and small independent reference computations for the tests."""
import math

import numpy as np

from basp.graph import ArcBounds, RoadGraph, pieces_bounds


def random_pieces(rng, n=None, floor=False, max_len=3.0):
    """Random step bounds laid out on [0, L) as a list of pieces."""
    n = int(rng.integers(1, 6)) if n is None else n
    out = []
    x = 0.0
    for _ in range(n):
        d = float(rng.uniform(0.1, max_len))
        mp = float(rng.uniform(0.2, 5.0))
        mm = float(rng.uniform(0.0, 0.5 * mp)) if floor and rng.random() < 0.3 else 0.0
        am = -float(rng.uniform(0.1, 3.0))
        ap = float(rng.uniform(0.1, 3.0))
        out.append((x, x + d, mm, mp, am, ap))
        x += d
    return out


def bounds_of(pieces):
    return pieces_bounds(pieces)


def split_pieces(pieces, x):
    """Pieces of [0, x) and of [x, L) shifted to start at 0."""
    left, right = [], []
    for a, b, *rest in pieces:
        if b <= x:
            left.append((a, b, *rest))
        elif a >= x:
            right.append((a - x, b - x, *rest))
        else:
            left.append((a, x, *rest))
            right.append((0.0, b - x, *rest))
    return left, right


def cap_at(pieces, lam):
    """Right-continuous cap value (the last piece also owns its end point)."""
    for a, b, mm, mp, am, ap in pieces:
        if a <= lam < b:
            return mp
    return pieces[-1][3]


def fine_forward(pieces, w0, step):
    """First-order forward clipped ramp on a uniform grid."""
    length = pieces[-1][1]
    n = int(round(length / step))
    lam = np.linspace(0.0, length, n + 1)
    w = np.empty(n + 1)
    w[0] = min(w0, cap_at(pieces, 0.0))
    for i in range(n):
        mid = 0.5 * (lam[i] + lam[i + 1])
        ap = next(p[5] for p in pieces if p[0] <= mid < p[1]) if mid < length else pieces[-1][5]
        w[i + 1] = min(cap_at(pieces, lam[i + 1]), w[i] + ap * step)
    return lam, w


def exact_time(lam, w):
    """Travel time of a piecewise-linear squared-speed profile."""
    t = 0.0
    for i in range(len(lam) - 1):
        d = lam[i + 1] - lam[i]
        if d <= 0:
            continue
        s = math.sqrt(w[i]) + math.sqrt(w[i + 1])
        if s == 0:
            return math.inf
        t += 2.0 * d / s
    return t


def unit_instance(rng, n_nodes=5, n_arcs=7, max_len=3, max_cap=4, w_target=0):
    """Random graph with integer lengths, integer caps and unit acceleration bounds."""
    g = RoadGraph()
    for i in range(n_nodes):
        g.add_node(str(i))
    pairs = [(i, j) for i in range(n_nodes) for j in range(n_nodes) if i != j]
    # a chain first so that the target is reachable
    chosen = [(i, i + 1) for i in range(n_nodes - 1)]
    rest = [p for p in pairs if p not in chosen]
    for idx in rng.permutation(len(rest))[: max(0, n_arcs - len(chosen))]:
        chosen.append(rest[idx])
    for u, v in chosen:
        g.add_arc(u, v, int(rng.integers(1, max_len + 1)),
                  ArcBounds.constant(float(rng.integers(1, max_cap + 1)), 1.0))
    return g.set_query(0, {n_nodes - 1}, 0.0, w_target)


def small_random_graph(rng, n_nodes, n_arcs, accel=(0.3, 3.0), cap=(0.5, 4.0), length=(0.5, 3.0)):
    """Random directed graph with constant bounds and a query 0 -> last."""
    g = RoadGraph()
    for i in range(n_nodes):
        g.add_node(str(i))
    pairs = [(i, j) for i in range(n_nodes) for j in range(n_nodes) if i != j]
    for idx in rng.permutation(len(pairs))[:n_arcs]:
        u, v = pairs[idx]
        a = float(rng.uniform(*accel))
        g.add_arc(u, v, float(rng.uniform(*length)),
                  ArcBounds.constant(float(rng.uniform(*cap)), a,
                                     -float(rng.uniform(*accel))))
    return g.set_query(0, {n_nodes - 1}, 0.0, 0.0)
