import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_hbgraph
from hbdiff.diffusion import run
from hbdiff.errors import DuplicateId, LengthMismatch, ParseError, SchemaError, UnknownVertex
from hbdiff.evaluate import score_report, sweep_vertices
from hbdiff.formats import (
    COLD, HOT, color_scalars, export_dot, hbedges_csv, parse_graph, parse_trace_csv,
    parse_walk_csv, ramp_color, serialize_graph, sweep_csv, trace_csv, vertices_csv, walk_csv,
)


def doc(**over):
    d = {
        "schema_version": 1,
        "vertices": [{"id": "v1"}, {"id": "v2"}],
        "hbedges": [{"id": "e1", "weight": 1.0, "members": {"v1": 2, "v2": 1}}],
    }
    d.update(over)
    return json.dumps(d)


def test_round_trip(g2):
    text = serialize_graph(g2, {"v1": "x"}, {"seed": 3})
    back = parse_graph(text)
    assert back.graph == g2
    assert back.labels == {"v1": "x"}
    assert back.provenance == {"seed": 3}
    assert serialize_graph(back.graph, back.labels, back.provenance) == text


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_random(seed):
    g = random_hbgraph(np.random.default_rng(seed), isolated=True)
    assert parse_graph(serialize_graph(g)).graph == g


def test_missing_weight_defaults_to_one():
    text = doc(hbedges=[{"id": "e1", "members": {"v1": 1}}])
    assert parse_graph(text).graph.weights[0] == 1.0


@pytest.mark.parametrize(
    "text, err",
    [
        ("{", ParseError),
        (b"\xff\xfe", ParseError),
        ("[]", SchemaError),
        (doc(schema_version=2), SchemaError),
        (doc(extra=1), SchemaError),
        (doc(vertices=[{"id": 1}]), SchemaError),
        (doc(vertices=[{"id": "v1"}, {"id": "v1"}]), SchemaError),
        (doc(hbedges=[{"id": "e1", "members": {"v1": -1}}]), SchemaError),
        (doc(hbedges=[{"id": "e1", "members": {"v1": "2"}}]), SchemaError),
        (doc(hbedges=[{"id": "e1", "members": {"v1": 1}, "colour": 1}]), SchemaError),
        (doc(hbedges=[{"id": "e1", "members": {"v1": 1}}, {"id": "e1", "members": {"v2": 1}}]), SchemaError),
        ('{"schema_version": 1, "vertices": [{"id": "v1"}], '
         '"hbedges": [{"id": "e1", "members": {"v1": NaN}}]}', SchemaError),
        (doc(hbedges=[{"id": "e1", "members": {"zz": 1}}]), UnknownVertex),
        (doc(labels={"zz": "x"}), UnknownVertex),
    ],
)
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_graph(text)


def test_trace_round_trip(g2):
    trace = run(g2, 3)
    text = trace_csv(trace)
    assert text.splitlines()[0] == "kind,id,alpha_0,alpha_1,alpha_2,alpha_3,epsilon_0.5,epsilon_1.5,epsilon_2.5"
    back = parse_trace_csv(text, g2)
    for a, b in zip(trace.alphas, back.alphas):
        np.testing.assert_array_equal(a, b)
    for a, b in zip(trace.epsilons, back.epsilons):
        np.testing.assert_array_equal(a, b)


def test_trace_parse_errors(g1, g2):
    with pytest.raises(ParseError):
        parse_trace_csv("")
    with pytest.raises(ParseError):
        parse_trace_csv("kind,id,alpha_0,alpha_1,epsilon_0.5\nvertex,v1,x,1,\n")
    with pytest.raises(LengthMismatch):
        h = run(g2, 1)
        parse_trace_csv(trace_csv(h).replace("v3", "v9"), g2)


def test_walk_round_trip(g1):
    text = walk_csv(g1, np.array([5, 9, 2]), np.array([7, 3]))
    assert text.splitlines()[:2] == ["kind,id,passages,rank", "vertex,v1,5,2"]
    v, e = parse_walk_csv(text, g1)
    assert list(v) == [5, 9, 2] and list(e) == [7, 3]


def test_tables(g1):
    trace = run(g1, 1)
    rep = score_report(g1, trace.alpha_final, trace.epsilon_final)
    vt = vertices_csv(g1, trace, rep, np.array([1, 2, 3])).splitlines()
    assert vt[0] == "id,alpha_0,alpha_1,m_degree,degree,diffusion_rank,walk_count,walk_rank"
    assert vt[2] == "v2,1.0,1.25,2.0,2,1,2,2"
    et = hbedges_csv(g1, trace, rep).splitlines()
    assert et[0] == "id,epsilon_0.5,m_cardinality,support_cardinality,epsilon_norm,color_ratio,diffusion_rank"
    assert et[1] == "e1,1.5,3.0,2,37.5,0.04,1"
    st_ = sweep_csv([sweep_vertices(g1, trace.alpha_final)]).splitlines()
    assert st_[0] == "target,threshold,ratio,max_relative_eccentricity,subset_fraction,subset_size"
    assert st_[1].startswith("vertices,0.75,0.03,2,")


def test_color_ramp():
    np.testing.assert_allclose(color_scalars([1.0, 2.0, 3.0]), [0.0, 0.5, 1.0])
    np.testing.assert_allclose(color_scalars([4.0, 4.0]), [0.5, 0.5])
    assert ramp_color(0.0) == "#%02x%02x%02x" % COLD
    assert ramp_color(1.0) == "#%02x%02x%02x" % HOT


def test_dot_export(g1):
    trace = run(g1, 1)
    dot = export_dot(g1, trace.alpha_final, [0.5, 1.5])
    assert dot.startswith("graph hbgraph {")
    assert dot.rstrip().endswith("}")
    assert dot.count("--") == 4
    assert dot.count("shape=square") == 2
    assert dot.count("shape=circle") == 3
    assert '"v1" -- "x_e1"' in dot
    with pytest.raises(LengthMismatch):
        export_dot(g1, [1.0], [1.0, 1.0])


def test_dot_name_clash():
    from hbdiff.hbgraph import HbEdge, HbGraph
    from hbdiff.mset import Multiset
    g = HbGraph(["a", "x_e"], [HbEdge("e", Multiset({"a": 1}))])
    with pytest.raises(DuplicateId):
        export_dot(g, [1.0, 1.0], [1.0])
