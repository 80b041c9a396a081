"""Evaluation of diffusion results.

Superlevel sets of the final vertex (or hb-edge) values are compared with
their complement through relative eccentricities: for ``u`` in a subset
``S``, the largest hb-edge-count distance from ``u`` to a reachable element
outside ``S``, or ``-inf`` when nothing outside ``S`` is reachable.

Thresholds are reported as ratios to ``alpha_ref = 100 / O(H)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Optional, Sequence

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .diffusion import rank_vector
from .errors import InvalidSubset, LengthMismatch
from .hbgraph import HbGraph

__all__ = [
    "NEG_INFINITY",
    "DEFAULT_SWEEP_STEPS",
    "SweepPoint",
    "EccentricitySweep",
    "ScoreReport",
    "alpha_ref",
    "relative_eccentricity",
    "sweep_vertices",
    "sweep_hbedges",
    "epsilon_norm",
    "epsilon_norms",
    "hbedge_color_ratio",
    "spearman",
    "average_ranks",
    "score_report",
]

NEG_INFINITY = float("-inf")
DEFAULT_SWEEP_STEPS = 100


@dataclass(frozen=True)
class SweepPoint:
    threshold: float
    ratio: float
    max_relative_eccentricity: Optional[int]
    subset_fraction: float
    subset_size: int


@dataclass
class EccentricitySweep:
    target: str
    points: List[SweepPoint] = field(default_factory=list)

    @property
    def ratios(self) -> np.ndarray:
        return np.array([pt.ratio for pt in self.points])

    @property
    def fractions(self) -> np.ndarray:
        return np.array([pt.subset_fraction for pt in self.points])

    @property
    def eccentricities(self) -> List[Optional[int]]:
        return [pt.max_relative_eccentricity for pt in self.points]


def alpha_ref(g: HbGraph) -> float:
    """Reference value ``100 / O(H)``."""
    return 100.0 / g.order()


# -- distances --------------------------------------------------------------


def _distances(g: HbGraph, which: str) -> np.ndarray:
    """Pairwise hb-edge-count distances, ``inf`` when disconnected.

    ``which`` selects vertex-to-vertex or hbedge-to-hbedge distances; both are
    half the hop count in the extra-vertex graph.
    """
    key = f"dist_{which}"
    if key not in g._cache:
        if which == "vertices":
            idx = np.arange(g.n)
        else:
            idx = np.arange(g.n, g.n + g.p)
        if len(idx) == 0:
            d = np.zeros((0, 0))
        else:
            d = shortest_path(g.adjacency(), method="D", unweighted=True, indices=idx)[:, idx]
        g._cache[key] = d / 2.0
    return g._cache[key]


def _relative_ecc(dist: np.ndarray, inside: np.ndarray) -> np.ndarray:
    sub = dist[np.ix_(inside, ~inside)]
    sub = np.where(np.isfinite(sub), sub, NEG_INFINITY)
    if sub.shape[1] == 0:
        return np.full(sub.shape[0], NEG_INFINITY)
    return sub.max(axis=1)


def relative_eccentricity(g: HbGraph, subset: Iterable[Hashable]) -> Dict[Hashable, float]:
    """Relative eccentricity of each vertex of ``subset`` towards the rest.

    Values are integers (as floats) or ``NEG_INFINITY``. Distances come from a
    breadth-first search per source over the extra-vertex graph.
    """
    members = list(dict.fromkeys(subset))
    if not members or len(members) >= g.n:
        raise InvalidSubset("subset must be non-empty and leave at least one vertex out")
    idx = [g.vertex_index(v) for v in members]
    inside = np.zeros(g.n, dtype=bool)
    inside[idx] = True
    out = {}
    for v, i in zip(members, idx):
        d = g.bfs_distances(i)[: g.n]
        reach = d[(~inside) & (d >= 0)]
        out[v] = float(reach.max() // 2) if len(reach) else NEG_INFINITY
    return out


def _sweep(values: np.ndarray, dist: np.ndarray, ref: float, steps: int, target: str) -> EccentricitySweep:
    values = np.asarray(values, dtype=float)
    sweep = EccentricitySweep(target)
    if len(values) == 0:
        return sweep
    if steps < 1:
        raise ValueError("steps must be >= 1")
    vmax = float(values.max())
    total = len(values)
    for i in range(steps + 1):
        s = vmax * i / steps
        inside = values > s
        size = int(inside.sum())
        if size == 0:
            break
        if size == total:
            continue
        ecc = float(_relative_ecc(dist, inside).max())
        if ecc <= 0:
            break
        sweep.points.append(SweepPoint(s, s / ref, int(ecc), size / total, size))
    return sweep


def sweep_vertices(g: HbGraph, alpha: Sequence[float], steps: int = DEFAULT_SWEEP_STEPS) -> EccentricitySweep:
    """Threshold sweep over vertex values from 0 to their maximum."""
    if len(alpha) != g.n:
        raise LengthMismatch(f"{len(alpha)} values for {g.n} vertices")
    return _sweep(alpha, _distances(g, "vertices"), alpha_ref(g), steps, "vertices")


def sweep_hbedges(g: HbGraph, epsilon: Sequence[float], steps: int = DEFAULT_SWEEP_STEPS) -> EccentricitySweep:
    """Threshold sweep over hb-edge values; fractions are relative to the hb-edge count."""
    if len(epsilon) != g.p:
        raise LengthMismatch(f"{len(epsilon)} values for {g.p} hb-edges")
    return _sweep(epsilon, _distances(g, "hbedges"), alpha_ref(g), steps, "hbedges")


# -- hb-edge normalisation ----------------------------------------------------


def epsilon_norms(g: HbGraph) -> np.ndarray:
    """Value each hb-edge would collect if every vertex held ``alpha_ref``."""
    mdeg = g.m_degrees()
    share = g.vals / mdeg[g.rows]
    return np.bincount(g.cols, weights=share, minlength=g.p) * alpha_ref(g)


def epsilon_norm(g: HbGraph, e) -> float:
    return float(epsilon_norms(g)[g.edge_index(e)])


def hbedge_color_ratio(g: HbGraph, epsilon: Sequence[float]) -> np.ndarray:
    epsilon = np.asarray(epsilon, dtype=float)
    if len(epsilon) != g.p:
        raise LengthMismatch(f"{len(epsilon)} values for {g.p} hb-edges")
    return epsilon / epsilon_norms(g)


# -- rank correlation -------------------------------------------------------


def average_ranks(x: Sequence[float]) -> np.ndarray:
    """1-based ranks, tied values sharing the mean of their positions."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x))
    xs = x[order]
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and xs[j + 1] == xs[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(a: Sequence[float], b: Sequence[float]) -> float:
    """Spearman correlation with average ranks for ties.

    Returns nan when either input is constant.
    """
    if len(a) != len(b):
        raise LengthMismatch(f"lengths differ: {len(a)} != {len(b)}")
    if len(a) < 2:
        return float("nan")
    ra = average_ranks(a)
    rb = average_ranks(b)
    ra -= ra.mean()
    rb -= rb.mean()
    denom = np.sqrt((ra * ra).sum() * (rb * rb).sum())
    if denom == 0:
        return float("nan")
    return float(np.clip((ra * rb).sum() / denom, -1.0, 1.0))


# -- report -----------------------------------------------------------------


@dataclass
class ScoreReport:
    alpha_ref: float
    v_ref: float
    vertex_ids: tuple
    alpha: np.ndarray
    vertex_rank: np.ndarray
    edge_ids: tuple
    epsilon: np.ndarray
    edge_rank: np.ndarray
    epsilon_norm: np.ndarray
    color_ratio: np.ndarray


def score_report(g: HbGraph, alpha: Sequence[float], epsilon: Sequence[float]) -> ScoreReport:
    ref = alpha_ref(g)
    return ScoreReport(
        alpha_ref=ref,
        v_ref=ref,
        vertex_ids=g.vertices,
        alpha=np.asarray(alpha, dtype=float),
        vertex_rank=rank_vector(alpha, g.vertices),
        edge_ids=g.edge_ids,
        epsilon=np.asarray(epsilon, dtype=float),
        edge_rank=rank_vector(epsilon, g.edge_ids),
        epsilon_norm=epsilon_norms(g),
        color_ratio=hbedge_color_ratio(g, epsilon),
    )
