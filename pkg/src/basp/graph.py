"""Road graph with per-arc speed and acceleration bounds.

Speeds are handled as squared speeds w = v**2 throughout.  On an arc the
bounds are right-continuous step functions of the arc-length coordinate:

    mu_minus(l) <= w(l) <= mu_plus(l)
    alpha_minus(l) <= dw/dl <= alpha_plus(l)
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

from .errors import DuplicateArcError, InvalidBoundsError, NotAPathError

INF = math.inf

PIECEWISE_CONSTANT = "piecewise_constant"
SAMPLED = "sampled"

# A piece is (start, end, mu_minus, mu_plus, alpha_minus, alpha_plus) on a
# half-open interval [start, end) of positive width.
Piece = tuple


def _as_tuple(values, name):
    if isinstance(values, (int, float)):
        return (float(values),)
    out = tuple(float(v) for v in values)
    if not out:
        raise InvalidBoundsError(f"{name} must not be empty")
    return out


@dataclass(frozen=True)
class ArcBounds:
    """Step-function bounds over one arc.

    For ``kind == "piecewise_constant"`` value i holds on
    [breakpoints[i], breakpoints[i+1]).  For ``kind == "sampled"`` the
    breakpoints are implied by ``step``: value i holds on [i*step, (i+1)*step).
    """

    mu_plus: tuple
    alpha_plus: tuple
    alpha_minus: tuple
    mu_minus: tuple = (0.0,)
    breakpoints: tuple = (0.0,)
    kind: str = PIECEWISE_CONSTANT
    step: float | None = None

    def __post_init__(self):
        vals = {}
        for name in ("mu_minus", "mu_plus", "alpha_minus", "alpha_plus"):
            vals[name] = _as_tuple(getattr(self, name), name)
        n = max(len(v) for v in vals.values())
        for name, v in vals.items():
            if len(v) == 1 and n > 1:
                v = v * n
            if len(v) != n:
                raise InvalidBoundsError(f"{name} has {len(v)} values, expected {n}")
            object.__setattr__(self, name, v)

        if self.kind == SAMPLED:
            if self.step is None or not self.step > 0 or math.isinf(self.step):
                raise InvalidBoundsError("sampled bounds need a finite positive step")
            bps = tuple(i * float(self.step) for i in range(n))
        elif self.kind == PIECEWISE_CONSTANT:
            bps = _as_tuple(self.breakpoints, "breakpoints")
            if len(bps) == 1 and n > 1:
                raise InvalidBoundsError("breakpoints must have one entry per value")
            if len(bps) != n:
                raise InvalidBoundsError(f"breakpoints has {len(bps)} entries, expected {n}")
            if bps[0] != 0.0:
                raise InvalidBoundsError("first breakpoint must be 0")
            if any(b <= a for a, b in zip(bps, bps[1:])):
                raise InvalidBoundsError("breakpoints must be strictly increasing")
        else:
            raise InvalidBoundsError(f"unknown bounds kind {self.kind!r}")
        object.__setattr__(self, "breakpoints", bps)

        for i in range(n):
            mm, mp = self.mu_minus[i], self.mu_plus[i]
            am, ap = self.alpha_minus[i], self.alpha_plus[i]
            if any(math.isnan(x) for x in (mm, mp, am, ap)):
                raise InvalidBoundsError("bounds must not be NaN")
            if mm < 0 or math.isinf(mm):
                raise InvalidBoundsError(f"mu_minus[{i}] must be finite and >= 0")
            if mp < mm:
                raise InvalidBoundsError(f"mu_plus[{i}] < mu_minus[{i}]")
            if am > 0:
                raise InvalidBoundsError(f"alpha_minus[{i}] must be <= 0")
            if ap < 0:
                raise InvalidBoundsError(f"alpha_plus[{i}] must be >= 0")

    @classmethod
    def constant(cls, mu_plus, alpha_plus, alpha_minus=None, mu_minus=0.0):
        if alpha_minus is None:
            alpha_minus = -alpha_plus
        return cls(mu_plus=(mu_plus,), alpha_plus=(alpha_plus,),
                   alpha_minus=(alpha_minus,), mu_minus=(mu_minus,))

    @classmethod
    def sampled(cls, step, mu_plus, alpha_plus, alpha_minus, mu_minus=0.0):
        return cls(mu_plus=mu_plus, alpha_plus=alpha_plus, alpha_minus=alpha_minus,
                   mu_minus=mu_minus, kind=SAMPLED, step=float(step))

    @property
    def n_pieces(self):
        return len(self.mu_plus)

    def check_domain(self, length):
        """Raise unless the breakpoints tile [0, length) with positive-width pieces."""
        if length == 0:
            if self.n_pieces > 1:
                raise InvalidBoundsError("a zero-length arc needs constant bounds")
            return
        if self.kind == SAMPLED:
            needed = max(1, math.ceil(length / self.step - 1e-9))
            if self.n_pieces != needed:
                raise InvalidBoundsError(
                    f"sampled bounds need {needed} values for length {length}, got {self.n_pieces}")
        elif self.breakpoints[-1] >= length:
            raise InvalidBoundsError("a breakpoint lies at or beyond the arc length")

    def pieces(self, length, offset=0.0):
        """Positive-width pieces covering [offset, offset + length)."""
        out = []
        bps = self.breakpoints
        n = len(bps)
        for i in range(n):
            a = bps[i]
            b = bps[i + 1] if i + 1 < n else length
            b = min(b, length)
            if b <= a:
                continue
            out.append((offset + a, offset + b, self.mu_minus[i], self.mu_plus[i],
                        self.alpha_minus[i], self.alpha_plus[i]))
        return out

    def relaxed(self):
        """Same speed bounds with infinite acceleration bounds."""
        n = self.n_pieces
        return ArcBounds(mu_plus=self.mu_plus, alpha_plus=(INF,) * n, alpha_minus=(-INF,) * n,
                         mu_minus=self.mu_minus, breakpoints=self.breakpoints, kind=self.kind,
                         step=self.step)

    def is_constant(self):
        return self.n_pieces == 1


@dataclass(frozen=True)
class Node:
    id: int
    name: str | None = None
    x: float | None = None
    y: float | None = None
    heading: float | None = None

    @property
    def label(self):
        return self.name if self.name is not None else str(self.id)


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    length: float
    bounds: ArcBounds
    pieces: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.bounds.pieces(self.length)))


class RoadGraph:
    """Directed graph whose arcs carry lengths and bounds, plus one query.

    The query is the source node, the target set and the squared speeds
    imposed at the source and at the target (``w_target=None`` leaves the
    final speed free).
    """

    def __init__(self):
        self.nodes: list[Node] = []
        self.arcs: list[Arc] = []
        self._out: list[dict[int, Arc]] = []
        self._by_name: dict[str, int] = {}
        self.source: int | None = None
        self.targets: frozenset = frozenset()
        self.w_source: float = 0.0
        self.w_target: float | None = 0.0

    def add_node(self, name=None, x=None, y=None, heading=None):
        nid = len(self.nodes)
        if name is not None:
            name = str(name)
            if name in self._by_name:
                raise ValueError(f"duplicate node name {name!r}")
            self._by_name[name] = nid
        self.nodes.append(Node(nid, name, x, y, heading))
        self._out.append({})
        return nid

    def add_arc(self, tail, head, length, bounds):
        for v in (tail, head):
            if not 0 <= v < len(self.nodes):
                raise ValueError(f"unknown node {v}")
        length = float(length)
        if not length >= 0 or math.isinf(length):
            raise InvalidBoundsError("arc length must be finite and >= 0")
        if head in self._out[tail]:
            raise DuplicateArcError(f"arc {tail}->{head} already exists")
        bounds.check_domain(length)
        arc = Arc(tail, head, length, bounds)
        self._out[tail][head] = arc
        self.arcs.append(arc)
        return self

    def set_query(self, source, targets, w_source=0.0, w_target=0.0):
        targets = frozenset(int(t) for t in targets)
        for v in (source, *targets):
            if not 0 <= v < len(self.nodes):
                raise ValueError(f"unknown node {v}")
        if not targets:
            raise ValueError("target set must not be empty")
        if w_source is None or w_source < 0 or (w_target is not None and w_target < 0):
            raise ValueError("boundary squared speeds must be >= 0")
        self.source = int(source)
        self.targets = targets
        self.w_source = float(w_source)
        self.w_target = None if w_target is None else float(w_target)
        return self

    def with_query(self, source, targets, w_source=0.0, w_target=0.0):
        """Shallow copy sharing nodes and arcs, with a different query."""
        g = RoadGraph.__new__(RoadGraph)
        g.nodes, g.arcs, g._out, g._by_name = self.nodes, self.arcs, self._out, self._by_name
        return g.set_query(source, targets, w_source, w_target)

    def relaxed(self):
        """Copy of the graph with infinite acceleration bounds on every arc."""
        g = RoadGraph()
        for nd in self.nodes:
            g.add_node(nd.name, nd.x, nd.y, nd.heading)
        for a in self.arcs:
            g.add_arc(a.tail, a.head, a.length, a.bounds.relaxed())
        if self.source is not None:
            g.set_query(self.source, self.targets, self.w_source, self.w_target)
        return g

    @property
    def n_nodes(self):
        return len(self.nodes)

    def successors(self, v):
        return self._out[v].items()

    def arc(self, tail, head):
        try:
            return self._out[tail][head]
        except (KeyError, IndexError):
            raise NotAPathError(f"no arc {tail}->{head}") from None

    def has_arc(self, tail, head):
        return head in self._out[tail]

    def node_id(self, label):
        """Resolve a node by name, falling back to its integer id."""
        label = str(label)
        if label in self._by_name:
            return self._by_name[label]
        try:
            nid = int(label)
        except ValueError:
            raise KeyError(f"unknown node {label!r}") from None
        if not 0 <= nid < len(self.nodes):
            raise KeyError(f"unknown node {label!r}")
        return nid

    def label(self, v):
        return self.nodes[v].label

    def path_length(self, word):
        return sum(self.arc(a, b).length for a, b in zip(word, word[1:]))


@dataclass(frozen=True)
class PathBounds:
    """Bounds of a path laid end to end on [0, length].

    ``pieces`` only holds positive-width pieces; ``junctions[i]`` is the
    coordinate of the i-th node of the word.
    """

    length: float
    pieces: tuple
    junctions: tuple

    @property
    def starts(self):
        return [p[0] for p in self.pieces]

    def _piece_at(self, lam):
        if not self.pieces:
            raise ValueError("empty path has no bounds")
        starts = self.starts
        i = bisect_right(starts, lam) - 1
        return self.pieces[min(max(i, 0), len(self.pieces) - 1)]

    def mu_minus(self, lam):
        return self._piece_at(lam)[2]

    def mu_plus(self, lam):
        return self._piece_at(lam)[3]

    def alpha_minus(self, lam):
        return self._piece_at(lam)[4]

    def alpha_plus(self, lam):
        return self._piece_at(lam)[5]

    def reversed(self):
        """Mirror image: coordinate l maps to length - l and the acceleration
        bounds swap roles (a braking bound becomes a ramp-up bound)."""
        L = self.length
        pieces = tuple((L - b, L - a, mm, mp, -ap, -am)
                       for a, b, mm, mp, am, ap in reversed(self.pieces))
        junctions = tuple(L - j for j in reversed(self.junctions))
        return PathBounds(L, pieces, junctions)

    def shifted_tail(self, start_node):
        """Bounds of the sub-path that starts at the given node index, re-based at 0."""
        off = self.junctions[start_node]
        pieces = tuple((a - off, b - off, *rest) for a, b, *rest in self.pieces if a >= off)
        junctions = tuple(j - off for j in self.junctions[start_node:])
        return PathBounds(self.length - off, pieces, junctions)


def pieces_bounds(pieces, junctions=None):
    """PathBounds from a list of pieces given in path coordinates."""
    pieces = tuple(tuple(float(x) for x in p) for p in pieces)
    length = pieces[-1][1] if pieces else 0.0
    if junctions is None:
        junctions = (0.0, length)
    return PathBounds(length, pieces, tuple(junctions))


def concat_bounds(g: RoadGraph, word) -> PathBounds:
    """Bounds of the path given by a node sequence, laid end to end."""
    word = tuple(word)
    if not word:
        raise NotAPathError("empty word")
    pieces = []
    junctions = [0.0]
    off = 0.0
    for a, b in zip(word, word[1:]):
        arc = g.arc(a, b)
        if off == 0.0:
            pieces.extend(arc.pieces)
        else:
            pieces.extend((pa + off, pb + off, *rest) for pa, pb, *rest in arc.pieces)
        off += arc.length
        junctions.append(off)
    return PathBounds(off, tuple(pieces), tuple(junctions))


def suffix(word, k):
    """Last k nodes of a word (the whole word when it is not longer than k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return tuple(word)[-k:]
