"""Shortest bounded-curvature paths between two oriented points (Dubins).

Closed forms for the six candidate words in the usual normalized frame:
the start sits at the origin, the goal on the positive x axis at distance
d = D / r, and the headings are measured relative to that axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


def mod2pi(x):
    y = math.fmod(x, TWO_PI)
    return y + TWO_PI if y < 0 else y


def angular_distance(x, y):
    d = abs(mod2pi(x) - mod2pi(y))
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class Configuration:
    x: float
    y: float
    heading: float

    def __post_init__(self):
        object.__setattr__(self, "heading", mod2pi(self.heading))


@dataclass(frozen=True)
class DubinsPath:
    word: str
    segments: tuple  # segment lengths in meters, one per letter of `word`
    radius: float

    @property
    def length(self):
        return sum(self.segments)

    def pieces(self):
        """(kind, length) per non-empty segment, kind in {"L", "R", "S"}."""
        return [(c, s) for c, s in zip(self.word, self.segments) if s > 0]


def _lsl(a, b, d, sa, sb, ca, cb, cab):
    p2 = 2 + d * d - 2 * cab + 2 * d * (sa - sb)
    if p2 < 0:
        return None
    tmp = math.atan2(cb - ca, d + sa - sb)
    return mod2pi(tmp - a), math.sqrt(p2), mod2pi(b - tmp)


def _rsr(a, b, d, sa, sb, ca, cb, cab):
    p2 = 2 + d * d - 2 * cab + 2 * d * (sb - sa)
    if p2 < 0:
        return None
    tmp = math.atan2(ca - cb, d - sa + sb)
    return mod2pi(a - tmp), math.sqrt(p2), mod2pi(tmp - b)


def _lsr(a, b, d, sa, sb, ca, cb, cab):
    p2 = -2 + d * d + 2 * cab + 2 * d * (sa + sb)
    if p2 < 0:
        return None
    p = math.sqrt(p2)
    tmp = math.atan2(-ca - cb, d + sa + sb) - math.atan2(-2.0, p)
    return mod2pi(tmp - a), p, mod2pi(tmp - b)


def _rsl(a, b, d, sa, sb, ca, cb, cab):
    p2 = -2 + d * d + 2 * cab - 2 * d * (sa + sb)
    if p2 < 0:
        return None
    p = math.sqrt(p2)
    tmp = math.atan2(ca + cb, d - sa - sb) - math.atan2(2.0, p)
    return mod2pi(a - tmp), p, mod2pi(b - tmp)


def _rlr(a, b, d, sa, sb, ca, cb, cab):
    tmp = (6.0 - d * d + 2 * cab + 2 * d * (sa - sb)) / 8.0
    if abs(tmp) > 1:
        return None
    p = mod2pi(TWO_PI - math.acos(tmp))
    t = mod2pi(a - math.atan2(ca - cb, d - sa + sb) + p / 2.0)
    return t, p, mod2pi(a - b - t + p)


def _lrl(a, b, d, sa, sb, ca, cb, cab):
    tmp = (6.0 - d * d + 2 * cab + 2 * d * (sb - sa)) / 8.0
    if abs(tmp) > 1:
        return None
    p = mod2pi(TWO_PI - math.acos(tmp))
    t = mod2pi(-a - math.atan2(ca - cb, d + sa - sb) + p / 2.0)
    return t, p, mod2pi(b - a - t + p)


_WORDS = {"LSL": _lsl, "RSR": _rsr, "LSR": _lsr, "RSL": _rsl, "RLR": _rlr, "LRL": _lrl}


def dubins_path(start: Configuration, goal: Configuration, r: float) -> DubinsPath:
    if not r > 0:
        raise ValueError("turning radius must be positive")
    dx, dy = goal.x - start.x, goal.y - start.y
    d = math.hypot(dx, dy) / r
    phi = math.atan2(dy, dx) if d > 0 else 0.0
    a = mod2pi(start.heading - phi)
    b = mod2pi(goal.heading - phi)
    args = (a, b, d, math.sin(a), math.sin(b), math.cos(a), math.cos(b), math.cos(a - b))
    best = None
    for word, fn in _WORDS.items():
        sol = fn(*args)
        if sol is None:
            continue
        total = sum(sol)
        if best is None or total < best[0] - 1e-12:
            best = (total, word, sol)
    _, word, sol = best
    return DubinsPath(word, tuple(s * r for s in sol), r)


def dubins_length(start: Configuration, goal: Configuration, r: float):
    """(length, radius) of the shortest path with turning radius r."""
    p = dubins_path(start, goal, r)
    return p.length, p.radius


def sample_path(start: Configuration, path: DubinsPath, step=0.01):
    """Points along the path, integrating each segment exactly."""
    x, y, th = start.x, start.y, start.heading
    pts = [(x, y, th)]
    r = path.radius
    for kind, seg in path.pieces():
        n = max(1, int(math.ceil(seg / step)))
        ds = seg / n
        for _ in range(n):
            if kind == "S":
                x += ds * math.cos(th)
                y += ds * math.sin(th)
            else:
                sgn = 1.0 if kind == "L" else -1.0
                nth = th + sgn * ds / r
                x += sgn * r * (math.sin(nth) - math.sin(th))
                y += sgn * r * (math.cos(th) - math.cos(nth))
                th = nth
            pts.append((x, y, mod2pi(th)))
    return pts
