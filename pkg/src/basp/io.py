"""JSON instance files.

Layout::

    {"format": "basp-instance/1",
     "nodes": [{"id": 0, "name": "s", "x": 0.0, "y": 0.0, "heading": 0.0}, ...],
     "arcs": [{"from": 0, "to": 1, "length": 2.0,
               "bounds": {"kind": "piecewise_constant", "breakpoints": [0.0],
                          "mu_minus": [0.0], "mu_plus": [4.0],
                          "alpha_minus": [-1.0], "alpha_plus": [1.0]}}, ...],
     "query": {"source": 0, "targets": [2], "w_source": 0.0, "w_target": 0.0}}

Infinite values are written as the strings "inf" and "-inf"; a null
``w_target`` leaves the final speed free.  Sampled bounds use ``"step"``
instead of ``"breakpoints"``.  Scalars are accepted wherever a list of one
value is expected.
"""
from __future__ import annotations

import json
import math

from .errors import BaspError, ParseError, SchemaError
from .graph import SAMPLED, ArcBounds, RoadGraph

FORMAT = "basp-instance/1"
_BOUND_FIELDS = ("mu_minus", "mu_plus", "alpha_minus", "alpha_plus")


def _enc(x):
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    return x


def _num(value, field):
    if isinstance(value, bool):
        raise SchemaError(field, "expected a number")
    if isinstance(value, (int, float)):
        v = float(value)
    elif isinstance(value, str) and value in ("inf", "+inf", "-inf"):
        v = math.inf if value != "-inf" else -math.inf
    else:
        raise SchemaError(field, f"expected a number, got {value!r}")
    if math.isnan(v):
        raise SchemaError(field, "NaN is not allowed")
    return v


def _nums(value, field):
    if isinstance(value, list):
        if not value:
            raise SchemaError(field, "must not be empty")
        return tuple(_num(v, f"{field}[{i}]") for i, v in enumerate(value))
    return (_num(value, field),)


def _int(value, field):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(field, "expected an integer")
    return value


def _req(obj, key, field):
    if not isinstance(obj, dict):
        raise SchemaError(field, "expected an object")
    if key not in obj:
        raise SchemaError(f"{field}.{key}", "missing")
    return obj[key]


def to_dict(g: RoadGraph) -> dict:
    nodes = []
    for nd in g.nodes:
        d = {"id": nd.id}
        for key in ("name", "x", "y", "heading"):
            v = getattr(nd, key)
            if v is not None:
                d[key] = v
        nodes.append(d)
    arcs = []
    for a in g.arcs:
        b = a.bounds
        bd = {"kind": b.kind}
        if b.kind == SAMPLED:
            bd["step"] = b.step
        else:
            bd["breakpoints"] = list(b.breakpoints)
        for name in _BOUND_FIELDS:
            bd[name] = [_enc(v) for v in getattr(b, name)]
        arcs.append({"from": a.tail, "to": a.head, "length": a.length, "bounds": bd})
    out = {"format": FORMAT, "nodes": nodes, "arcs": arcs}
    if g.source is not None:
        out["query"] = {"source": g.source, "targets": sorted(g.targets),
                        "w_source": _enc(g.w_source),
                        "w_target": None if g.w_target is None else _enc(g.w_target)}
    return out


def from_dict(data) -> RoadGraph:
    if not isinstance(data, dict):
        raise SchemaError("$", "top level must be an object")
    nodes = _req(data, "nodes", "$")
    if not isinstance(nodes, list):
        raise SchemaError("nodes", "expected a list")
    g = RoadGraph()
    for i, nd in enumerate(nodes):
        f = f"nodes[{i}]"
        nid = _int(_req(nd, "id", f), f"{f}.id")
        if nid != i:
            raise SchemaError(f"{f}.id", f"ids must be 0..n-1 in order, got {nid}")
        extra = {}
        for key in ("x", "y", "heading"):
            if nd.get(key) is not None:
                extra[key] = _num(nd[key], f"{f}.{key}")
        name = nd.get("name")
        try:
            g.add_node(name, **extra)
        except ValueError as exc:
            raise SchemaError(f"{f}.name", str(exc)) from None

    arcs = _req(data, "arcs", "$")
    if not isinstance(arcs, list):
        raise SchemaError("arcs", "expected a list")
    n = len(nodes)
    for i, arc in enumerate(arcs):
        f = f"arcs[{i}]"
        tail = _int(_req(arc, "from", f), f"{f}.from")
        head = _int(_req(arc, "to", f), f"{f}.to")
        for key, v in (("from", tail), ("to", head)):
            if not 0 <= v < n:
                raise SchemaError(f"{f}.{key}", f"unknown node {v}")
        length = _num(_req(arc, "length", f), f"{f}.length")
        if not 0 <= length < math.inf:
            raise SchemaError(f"{f}.length", "must be finite and >= 0")
        bd = _req(arc, "bounds", f)
        fb = f"{f}.bounds"
        kind = bd.get("kind", "piecewise_constant") if isinstance(bd, dict) else None
        vals = {name: _nums(_req(bd, name, fb), f"{fb}.{name}")
                for name in ("mu_plus", "alpha_minus", "alpha_plus")}
        vals["mu_minus"] = _nums(bd.get("mu_minus", 0.0), f"{fb}.mu_minus")
        try:
            if kind == SAMPLED:
                step = _num(_req(bd, "step", fb), f"{fb}.step")
                bounds = ArcBounds(kind=SAMPLED, step=step, **vals)
            else:
                bps = _nums(bd.get("breakpoints", [0.0]), f"{fb}.breakpoints")
                bounds = ArcBounds(kind=kind, breakpoints=bps, **vals)
            g.add_arc(tail, head, length, bounds)
        except BaspError as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(fb if exc.code != "DUPLICATE_ARC" else f, str(exc)) from None

    q = data.get("query")
    if q is not None:
        src = _int(_req(q, "source", "query"), "query.source")
        tg = _req(q, "targets", "query")
        if not isinstance(tg, list) or not tg:
            raise SchemaError("query.targets", "expected a non-empty list")
        targets = [_int(t, f"query.targets[{j}]") for j, t in enumerate(tg)]
        ws = _num(q.get("w_source", 0.0), "query.w_source")
        wt = q.get("w_target", 0.0)
        wt = None if wt is None else _num(wt, "query.w_target")
        try:
            g.set_query(src, targets, ws, wt)
        except ValueError as exc:
            raise SchemaError("query", str(exc)) from None
    return g


def dumps(g: RoadGraph) -> str:
    return json.dumps(to_dict(g), indent=1, allow_nan=False)


def loads(text: str) -> RoadGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(data)


def save(g: RoadGraph, pathname) -> None:
    with open(pathname, "w") as fh:
        fh.write(dumps(g))
        fh.write("\n")


def load(pathname) -> RoadGraph:
    with open(pathname) as fh:
        return loads(fh.read())


def graphs_equal(a: RoadGraph, b: RoadGraph) -> bool:
    """Structural equality, including the query."""
    return to_dict(a) == to_dict(b)
