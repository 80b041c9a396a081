"""Exchange-based diffusion between vertices and hb-edges.

Each step has two phases. Vertices first hand their value to the hb-edges
they belong to, in proportion to ``m_j(v) * w(e_j)`` over the weighted
m-degree of the vertex. The hb-edges then hand their value back to their
members, in proportion to ``m_j(v) * w(e_j)`` over the m-cardinality of the
hb-edge. In matrix form, with row vectors::

    eps_{t+1/2} = alpha_t  D_wV^-1 H W_E
    alpha_{t+1} = eps_{t+1/2} D_E^-1 W_E H^T

A vertex that belongs to no hb-edge has zero weighted m-degree; it keeps its
value across the step (identity row in the transition matrix).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Hashable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .errors import LengthMismatch
from .hbgraph import HbGraph

__all__ = [
    "DEFAULT_STEPS",
    "DiffusionState",
    "DiffusionTrace",
    "init_state",
    "phase1",
    "phase2",
    "step",
    "transition_matrix",
    "run",
    "rank",
]

DEFAULT_STEPS = 5


@dataclass(frozen=True)
class DiffusionState:
    """Values on vertices (``alpha``) and hb-edges (``epsilon``).

    The time is ``whole + 0.5 * half``. At a whole step ``epsilon`` holds the
    last half-step record (zeros at t=0).
    """

    alpha: np.ndarray
    epsilon: np.ndarray
    whole: int = 0
    half: bool = False

    @property
    def time(self) -> float:
        return self.whole + (0.5 if self.half else 0.0)


@dataclass
class DiffusionTrace:
    """Snapshots of a ``steps``-long run.

    ``alphas[t]`` is alpha at time t (t = 0..T) and ``epsilons[t]`` is
    epsilon at time t + 1/2 (t = 0..T-1).
    """

    vertex_ids: Tuple
    edge_ids: Tuple
    alphas: List[np.ndarray] = field(default_factory=list)
    epsilons: List[np.ndarray] = field(default_factory=list)
    graph_id: Optional[str] = None

    @property
    def steps(self) -> int:
        return len(self.epsilons)

    @property
    def alpha_final(self) -> np.ndarray:
        return self.alphas[-1]

    @property
    def epsilon_final(self) -> np.ndarray:
        """Epsilon at T - 1/2, the hb-edge values used for evaluation."""
        return self.epsilons[-1]

    def alpha_matrix(self) -> np.ndarray:
        return np.column_stack(self.alphas) if self.alphas else np.zeros((len(self.vertex_ids), 0))

    def epsilon_matrix(self) -> np.ndarray:
        if self.epsilons:
            return np.column_stack(self.epsilons)
        return np.zeros((len(self.edge_ids), 0))


def init_state(g: HbGraph) -> DiffusionState:
    return DiffusionState(alpha=np.ones(g.n), epsilon=np.zeros(g.p))


class _Coefficients:
    """Per-incidence-entry factors of both phases, computed once per graph."""

    def __init__(self, g: HbGraph):
        wm = g.vals * g.weights[g.cols]
        dw = np.bincount(g.rows, weights=wm, minlength=g.n)
        card = np.bincount(g.cols, weights=g.vals, minlength=g.p)
        # m_j(v_i) w(e_j) / d_w(v_i); only stored entries, so d_w > 0 here
        self.to_edges = wm / dw[g.rows]
        # m_j(v_i) w(e_j) / #_m(e_j)
        self.to_vertices = wm / card[g.cols]
        self.isolated = np.flatnonzero(dw == 0)


def _coefficients(g: HbGraph) -> _Coefficients:
    c = g._cache.get("diffusion")
    if c is None:
        c = g._cache["diffusion"] = _Coefficients(g)
    return c


def phase1(g: HbGraph, state: DiffusionState) -> DiffusionState:
    """Vertices to hb-edges: time t -> t + 1/2."""
    if state.half:
        raise ValueError("phase1 expects a whole-step state")
    c = _coefficients(g)
    eps = np.bincount(g.cols, weights=c.to_edges * state.alpha[g.rows], minlength=g.p)
    return replace(state, epsilon=eps, half=True)


def phase2(g: HbGraph, state: DiffusionState) -> DiffusionState:
    """Hb-edges to vertices: time t + 1/2 -> t + 1."""
    if not state.half:
        raise ValueError("phase2 expects a half-step state")
    c = _coefficients(g)
    alpha = np.bincount(g.rows, weights=c.to_vertices * state.epsilon[g.cols], minlength=g.n)
    if len(c.isolated):
        alpha[c.isolated] = state.alpha[c.isolated]
    return DiffusionState(alpha=alpha, epsilon=state.epsilon, whole=state.whole + 1, half=False)


def step(g: HbGraph, state: DiffusionState) -> DiffusionState:
    return phase2(g, phase1(g, state))


def transition_matrix(g: HbGraph, sparse: bool = False):
    """The n x n matrix ``T`` with ``alpha_{t+1} = alpha_t T``.

    Built from the sparse incidence matrix and diagonal factors; rows of
    vertices with zero weighted m-degree are identity rows.
    """
    H = g.incidence
    W = sp.diags(g.weights)
    dw = np.asarray(H @ g.weights).ravel()
    isolated = dw == 0
    inv_dw = np.where(isolated, 0.0, 1.0 / np.where(isolated, 1.0, dw))
    d_e = np.asarray(H.sum(axis=0)).ravel()
    T = sp.diags(inv_dw) @ H @ W @ sp.diags(1.0 / d_e) @ W @ H.T
    if isolated.any():
        T = T + sp.diags(isolated.astype(float))
    T = sp.csr_matrix(T)
    return T if sparse else T.toarray()


def run(g: HbGraph, steps: int = DEFAULT_STEPS, graph_id: Optional[str] = None) -> DiffusionTrace:
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    state = init_state(g)
    trace = DiffusionTrace(g.vertices, g.edge_ids, [state.alpha], [], graph_id)
    for _ in range(steps):
        state = phase1(g, state)
        trace.epsilons.append(state.epsilon)
        state = phase2(g, state)
        trace.alphas.append(state.alpha)
    return trace


def rank(values: Sequence[float], ids: Sequence[Hashable]) -> List[Tuple[Hashable, float, int]]:
    """Order ids by decreasing value with 1-based dense ranks.

    Ties keep the order in which ``ids`` are given.

    >>> rank([1.0, 1.25, 0.75], ["v1", "v2", "v3"])
    [('v2', 1.25, 1), ('v1', 1.0, 2), ('v3', 0.75, 3)]
    """
    values = np.asarray(values, dtype=float)
    if len(values) != len(ids):
        raise LengthMismatch(f"{len(values)} values for {len(ids)} ids")
    if not np.all(np.isfinite(values)):
        raise ValueError("rank requires finite values")
    order = sorted(range(len(values)), key=lambda i: (-values[i], i))
    out = []
    current, prev = 0, None
    for i in order:
        v = float(values[i])
        if prev is None or v != prev:
            current += 1
            prev = v
        out.append((ids[i], v, current))
    return out


def rank_vector(values: Sequence[float], ids: Sequence[Hashable]) -> np.ndarray:
    """Dense rank of each position, aligned with ``ids``."""
    ranked = rank(values, ids)
    pos = {ident: k for k, ident in enumerate(ids)}
    out = np.zeros(len(ids), dtype=np.int64)
    for ident, _, r in ranked:
        out[pos[ident]] = r
    return out
