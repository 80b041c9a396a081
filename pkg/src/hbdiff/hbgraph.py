"""Hb-graphs: families of multisets over a common vertex set.

Vertex and hb-edge order is fixed when the graph is built; every vector and
matrix produced here is indexed by that order.
"""

from __future__ import annotations

import math
import numbers
from collections import deque
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .errors import DuplicateId, EmptySupport, NonPositiveWeight, UnknownHbEdge, UnknownVertex
from .mset import Multiset

__all__ = [
    "HbEdge",
    "HbGraph",
    "SupportHypergraph",
    "ExtraVertexGraph",
    "build",
    "UNREACHABLE",
]

UNREACHABLE = None


@dataclass(frozen=True)
class HbEdge:
    id: Hashable
    members: Multiset
    weight: float = 1.0


@dataclass(frozen=True)
class SupportHypergraph:
    vertices: Tuple
    hyperedges: Tuple[frozenset, ...]


@dataclass(frozen=True)
class ExtraVertexGraph:
    """Bipartite graph with one extra node per hb-edge.

    Node ``i < n`` is vertex ``vertices[i]``; node ``n + j`` is the extra node
    of hb-edge ``j``. ``edges`` holds ``(vertex_id, extra_name)`` pairs.
    """

    vertices: Tuple
    extra_nodes: Tuple[str, ...]
    edges: Tuple[Tuple[Hashable, str], ...]

    @property
    def nodes(self) -> Tuple:
        return self.vertices + self.extra_nodes

    def degree(self, node) -> int:
        return sum(1 for a, b in self.edges if a == node or b == node)


def extra_node_name(edge_id) -> str:
    return f"x_{edge_id}"


class HbGraph:
    """Immutable weighted hb-graph.

    Use :func:`build` (or the constructor, which does the same validation).
    The incidence matrix ``H[i, j] = m_j(v_i)`` is kept in sparse CSR form;
    the flat ``(rows, cols, vals)`` triplets back the elementwise kernels.
    """

    def __init__(self, vertices: Iterable[Hashable], hbedges: Iterable):
        self.vertices: Tuple = tuple(vertices)
        self._vindex: Dict[Hashable, int] = {}
        for i, v in enumerate(self.vertices):
            if v in self._vindex:
                raise DuplicateId(f"duplicate vertex id {v!r}")
            self._vindex[v] = i

        edges: List[HbEdge] = []
        self._eindex: Dict[Hashable, int] = {}
        for raw in hbedges:
            e = _coerce_edge(raw)
            if e.id in self._eindex:
                raise DuplicateId(f"duplicate hb-edge id {e.id!r}")
            if not (_is_real(e.weight) and math.isfinite(e.weight) and e.weight > 0):
                raise NonPositiveWeight(f"hb-edge {e.id!r} has weight {e.weight!r}")
            if len(e.members) == 0:
                raise EmptySupport(f"hb-edge {e.id!r} has empty support")
            for v in e.members:
                if v not in self._vindex:
                    raise UnknownVertex(f"hb-edge {e.id!r} references unknown vertex {v!r}")
            self._eindex[e.id] = len(edges)
            edges.append(e)
        self.hbedges: Tuple[HbEdge, ...] = tuple(edges)

        rows, cols, vals = [], [], []
        for j, e in enumerate(self.hbedges):
            for v, m in e.members.items():
                rows.append(self._vindex[v])
                cols.append(j)
                vals.append(float(m))
        self.rows = np.asarray(rows, dtype=np.int64)
        self.cols = np.asarray(cols, dtype=np.int64)
        self.vals = np.asarray(vals, dtype=np.float64)
        self.weights = np.asarray([float(e.weight) for e in self.hbedges], dtype=np.float64)
        self.incidence = sp.csr_matrix((self.vals, (self.rows, self.cols)), shape=(self.n, self.p))
        self._adjacency = None
        self._cache: Dict[str, object] = {}

    # -- basic shape ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def p(self) -> int:
        return len(self.hbedges)

    @property
    def edge_ids(self) -> Tuple:
        return tuple(e.id for e in self.hbedges)

    @property
    def is_unweighted(self) -> bool:
        return bool(np.all(self.weights == 1.0))

    def vertex_index(self, v) -> int:
        try:
            return self._vindex[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    def edge_index(self, e) -> int:
        try:
            return self._eindex[e]
        except KeyError:
            raise UnknownHbEdge(f"unknown hb-edge {e!r}") from None

    def edge(self, e) -> HbEdge:
        return self.hbedges[self.edge_index(e)]

    def __eq__(self, other):
        if not isinstance(other, HbGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.hbedges == other.hbedges

    def __repr__(self):
        return f"HbGraph(n={self.n}, p={self.p})"

    # -- vector-valued metrics ------------------------------------------

    def m_degrees(self) -> np.ndarray:
        return np.bincount(self.rows, weights=self.vals, minlength=self.n)

    def degrees(self) -> np.ndarray:
        return np.bincount(self.rows, minlength=self.n)

    def weighted_m_degrees(self) -> np.ndarray:
        return np.bincount(self.rows, weights=self.vals * self.weights[self.cols], minlength=self.n)

    def m_cardinalities(self) -> np.ndarray:
        return np.bincount(self.cols, weights=self.vals, minlength=self.p)

    def support_cardinalities(self) -> np.ndarray:
        return np.bincount(self.cols, minlength=self.p)

    def max_multiplicities(self) -> np.ndarray:
        out = np.zeros(self.n)
        np.maximum.at(out, self.rows, self.vals)
        return out

    # -- scalar metrics ---------------------------------------------------

    def m_degree(self, v) -> float:
        """Sum of the multiplicities of ``v`` over all hb-edges."""
        i = self.vertex_index(v)
        return float(self.m_degrees()[i])

    def degree(self, v) -> int:
        """Number of hb-edges whose support contains ``v``."""
        i = self.vertex_index(v)
        return int(self.degrees()[i])

    def weighted_m_degree(self, v) -> float:
        i = self.vertex_index(v)
        return float(self.weighted_m_degrees()[i])

    def order(self) -> float:
        """Sum over vertices of their largest multiplicity in any hb-edge."""
        return float(self.max_multiplicities().sum())

    def m_cardinality_edge(self, e) -> float:
        return float(self.edge(e).members.m_cardinality)

    def hb_star(self, v) -> Multiset:
        """Multiset of hb-edges containing ``v``, with ``v``'s multiplicity in each."""
        self.vertex_index(v)
        return Multiset({e.id: e.members[v] for e in self.hbedges if v in e.members})

    # -- derived structures ---------------------------------------------

    def support_hypergraph(self) -> SupportHypergraph:
        return SupportHypergraph(self.vertices, tuple(e.members.support for e in self.hbedges))

    def extra_vertex_graph(self) -> ExtraVertexGraph:
        names = tuple(extra_node_name(e.id) for e in self.hbedges)
        clash = set(names) & set(self._vindex)
        if clash:
            raise DuplicateId(f"extra-node names collide with vertex ids: {sorted(map(str, clash))}")
        edges = tuple(
            (self.vertices[i], names[j]) for j, i in zip(self.cols.tolist(), self.rows.tolist())
        )
        return ExtraVertexGraph(self.vertices, names, edges)

    def adjacency(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency of the extra-vertex graph, ``(n+p) x (n+p)``."""
        if self._adjacency is None:
            b = sp.csr_matrix(
                (np.ones(len(self.rows)), (self.rows, self.cols)), shape=(self.n, self.p)
            )
            self._adjacency = sp.bmat([[None, b], [b.T, None]], format="csr")
        return self._adjacency

    def bfs_distances(self, source: int) -> np.ndarray:
        """Hop distances from node ``source`` in the extra-vertex graph, -1 if unreachable."""
        adj = self.adjacency()
        indptr, indices = adj.indptr, adj.indices
        dist = np.full(self.n + self.p, -1, dtype=np.int64)
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for w in indices[indptr[u]:indptr[u + 1]]:
                if dist[w] < 0:
                    dist[w] = du
                    queue.append(w)
        return dist

    def path_length(self, u, v) -> Optional[int]:
        """Shortest path length between two vertices, counted in hb-edges.

        Returns ``UNREACHABLE`` (None) when no path exists.
        """
        iu, iv = self.vertex_index(u), self.vertex_index(v)
        d = int(self.bfs_distances(iu)[iv])
        if d < 0:
            return UNREACHABLE
        return d // 2


def _is_real(x) -> bool:
    return isinstance(x, numbers.Real) and not isinstance(x, bool)


def _coerce_edge(raw) -> HbEdge:
    if isinstance(raw, HbEdge):
        e = raw
    elif isinstance(raw, Mapping):
        e = HbEdge(raw["id"], raw["members"], raw.get("weight", 1.0))
    else:
        e = HbEdge(*raw)
    if not isinstance(e.members, Multiset):
        e = HbEdge(e.id, Multiset(e.members), e.weight)
    return e


def build(vertices: Sequence[Hashable], hbedges: Iterable) -> HbGraph:
    """Validate and build an hb-graph.

    ``hbedges`` items may be :class:`HbEdge`, ``(id, members[, weight])``
    tuples, or dicts with ``id``, ``members`` and optional ``weight``.
    """
    return HbGraph(vertices, hbedges)
