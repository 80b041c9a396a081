import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_hbgraph
from hbdiff.errors import DuplicateId, EmptySupport, NonPositiveWeight, UnknownHbEdge, UnknownVertex
from hbdiff.hbgraph import UNREACHABLE, HbEdge, HbGraph, build, extra_node_name
from hbdiff.mset import Multiset


def test_g1_metrics(g1):
    assert [g1.m_degree(v) for v in g1.vertices] == [2, 2, 1]
    assert [g1.degree(v) for v in g1.vertices] == [1, 2, 1]
    assert g1.order() == 4
    assert g1.m_cardinality_edge("e1") == 3
    assert g1.m_cardinality_edge("e2") == 2
    assert g1.hb_star("v2") == Multiset({"e1": 1, "e2": 1})
    assert g1.hb_star("v1") == Multiset({"e1": 2})


def test_weighted_m_degree(g2):
    assert list(g2.weighted_m_degrees()) == [4.0, 3.0, 1.0]
    assert g2.weighted_m_degree("v2") == 3.0
    assert g2.m_degree("v2") == 2.0


def test_support_hypergraph(g1):
    h = g1.support_hypergraph()
    assert h.hyperedges == (frozenset({"v1", "v2"}), frozenset({"v2", "v3"}))


def test_extra_vertex_graph(g1):
    ev = g1.extra_vertex_graph()
    assert len(ev.nodes) == 5
    assert len(ev.edges) == 4
    assert ev.degree("v2") == 2
    assert ev.degree(extra_node_name("e1")) == 2


def test_extra_node_name_clash():
    g = HbGraph(["a", "x_e"], [HbEdge("e", Multiset({"a": 1}))])
    with pytest.raises(DuplicateId):
        g.extra_vertex_graph()


def test_path_length(g1):
    assert g1.path_length("v1", "v1") == 0
    assert g1.path_length("v1", "v2") == 1
    assert g1.path_length("v1", "v3") == 2


def test_path_length_unreachable():
    g = HbGraph(["a", "b", "c"], [HbEdge("e", Multiset({"a": 1, "b": 1}))])
    assert g.path_length("a", "c") is UNREACHABLE


@pytest.mark.parametrize(
    "vertices, edges, err",
    [
        (["a"], [HbEdge("e", Multiset())], EmptySupport),
        (["a"], [HbEdge("e", Multiset({"b": 1}))], UnknownVertex),
        (["a"], [HbEdge("e", Multiset({"a": 1}), 0.0)], NonPositiveWeight),
        (["a"], [HbEdge("e", Multiset({"a": 1}), -2.0)], NonPositiveWeight),
        (["a"], [HbEdge("e", Multiset({"a": 1}), float("nan"))], NonPositiveWeight),
        (["a", "a"], [], DuplicateId),
        (["a"], [HbEdge("e", Multiset({"a": 1})), HbEdge("e", Multiset({"a": 2}))], DuplicateId),
    ],
)
def test_validation(vertices, edges, err):
    with pytest.raises(err):
        HbGraph(vertices, edges)


def test_lookup_errors(g1):
    with pytest.raises(UnknownVertex):
        g1.m_degree("zz")
    with pytest.raises(UnknownHbEdge):
        g1.edge("zz")


def test_build_accepts_tuples_and_dicts(g2):
    g = build(["v1", "v2", "v3"], [("e1", {"v1": 2, "v2": 1}, 2.0), {"id": "e2", "members": {"v2": 1, "v3": 1}}])
    assert g == g2


def test_numpy_weight_accepted():
    g = HbGraph(["a"], [HbEdge("e", Multiset({"a": 1}), np.int64(3))])
    assert g.weights[0] == 3.0


def _nx_graph(g):
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    for e in g.hbedges:
        for v in e.members:
            G.add_edge(v, ("x", e.id))
    return G


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_path_length_matches_networkx(seed):
    rng = np.random.default_rng(seed)
    g = random_hbgraph(rng, n_max=15, p_max=8, isolated=True)
    G = _nx_graph(g)
    lengths = dict(nx.all_pairs_shortest_path_length(G))
    for u in g.vertices:
        for v in g.vertices:
            expected = lengths[u].get(v)
            got = g.path_length(u, v)
            if expected is None:
                assert got is UNREACHABLE
            else:
                assert got == expected // 2


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_metric_invariants(seed):
    rng = np.random.default_rng(seed)
    g = random_hbgraph(rng, integer=True)
    assert g.m_degrees().sum() == pytest.approx(g.m_cardinalities().sum())
    assert g.degrees().sum() == g.support_cardinalities().sum()
    assert np.all(g.degrees() <= g.m_degrees())
    assert g.order() <= g.m_degrees().sum()
    v = g.vertices[0]
    assert g.hb_star(v).m_cardinality == g.m_degree(v)
