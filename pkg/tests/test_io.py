import json
import math

import pytest

from basp.errors import ParseError, SchemaError
from basp.graph import ArcBounds, RoadGraph
from basp.instances import GeneratorParams, chain_example, example_one, random_instance
from basp.io import FORMAT, dumps, from_dict, graphs_equal, load, loads, save, to_dict


def test_round_trip(tmp_path):
    for g in (chain_example(), example_one(),
              random_instance(GeneratorParams(n=20, seed=1, curvature_bounds=True))):
        path = tmp_path / "g.json"
        save(g, path)
        assert graphs_equal(load(path), g)


def test_free_end_and_infinities():
    g = RoadGraph()
    g.add_node("a")
    g.add_node("b")
    g.add_arc(0, 1, 2.0, ArcBounds.constant(math.inf, math.inf))
    g.set_query(0, {1}, 0.0, None)
    data = to_dict(g)
    assert data["format"] == FORMAT
    assert data["arcs"][0]["bounds"]["alpha_plus"] == ["inf"]
    assert data["arcs"][0]["bounds"]["alpha_minus"] == ["-inf"]
    assert data["query"]["w_target"] is None
    back = loads(dumps(g))
    assert back.arcs[0].bounds.alpha_plus == (math.inf,)
    assert back.w_target is None


def test_sampled_round_trip():
    g = RoadGraph()
    g.add_node()
    g.add_node()
    g.add_arc(0, 1, 1.0, ArcBounds.sampled(0.5, (1.0, 2.0), 1.0, -1.0))
    back = loads(dumps(g))
    assert back.arcs[0].bounds.kind == "sampled" and back.arcs[0].bounds.step == 0.5


def minimal():
    return {"nodes": [{"id": 0}, {"id": 1}],
            "arcs": [{"from": 0, "to": 1, "length": 1.0,
                      "bounds": {"mu_plus": 1.0, "alpha_plus": 1.0, "alpha_minus": -1.0}}],
            "query": {"source": 0, "targets": [1]}}


def test_scalar_shorthand():
    g = from_dict(minimal())
    assert g.arcs[0].bounds.mu_plus == (1.0,)
    assert g.w_source == 0.0 and g.w_target == 0.0


@pytest.mark.parametrize("mutate, field", [
    (lambda d: d["arcs"][0].update(length=-1.0), "arcs[0].length"),
    (lambda d: d["arcs"][0].update(to=5), "arcs[0].to"),
    (lambda d: d["arcs"][0]["bounds"].pop("mu_plus"), "arcs[0].bounds.mu_plus"),
    (lambda d: d["arcs"][0]["bounds"].update(alpha_plus="fast"), "arcs[0].bounds.alpha_plus"),
    (lambda d: d["arcs"][0]["bounds"].update(alpha_plus=-1.0), "arcs[0].bounds"),
    (lambda d: d["arcs"].append(dict(d["arcs"][0])), "arcs[1]"),
    (lambda d: d["nodes"][1].update(id=3), "nodes[1].id"),
    (lambda d: d["query"].update(targets=[]), "query.targets"),
    (lambda d: d.pop("nodes"), "$.nodes"),
])
def test_schema_errors(mutate, field):
    d = minimal()
    mutate(d)
    with pytest.raises(SchemaError) as exc:
        from_dict(d)
    assert exc.value.field == field
    assert exc.value.code == "SCHEMA_ERROR"


def test_parse_error_has_position():
    with pytest.raises(ParseError) as exc:
        loads('{"nodes": [\n  {"id": 0},\n  oops]}')
    assert "line 3" in str(exc.value)


def test_documented_example_parses():
    text = json.dumps({
        "format": "basp-instance/1",
        "nodes": [{"id": 0, "name": "s", "x": 0.0, "y": 0.0, "heading": 0.0},
                  {"id": 1, "name": "f"}],
        "arcs": [{"from": 0, "to": 1, "length": 2.0,
                  "bounds": {"kind": "piecewise_constant", "breakpoints": [0.0, 1.0],
                             "mu_minus": [0.0, 0.0], "mu_plus": [4.0, "inf"],
                             "alpha_minus": [-1.0, -1.0], "alpha_plus": [1.0, 1.0]}}],
        "query": {"source": 0, "targets": [1], "w_source": 0.0, "w_target": 0.0}})
    g = loads(text)
    assert g.node_id("f") == 1
    assert g.arcs[0].bounds.mu_plus == (4.0, math.inf)
