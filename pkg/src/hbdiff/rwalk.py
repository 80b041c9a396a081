"""Random walks on hb-graphs with teleportation.

From a vertex ``v`` the walker picks hb-edge ``e`` with probability
``m_e(v) / deg_m(v)``, then a vertex ``w`` of ``e`` with probability
``m_e(w) / #_m(e)``. Before each move it is teleported to a uniformly random
vertex with probability ``1 - beta``. A walker sitting on a vertex that
belongs to no hb-edge always teleports.

Passages are counted for the start vertex, every vertex reached (by a move or
a teleport) and every hb-edge crossed. A walk is *explored* once every vertex
and every hb-edge has been passed at least once.

Uniform variates come from numpy's PCG64 generator and are consumed by a
compiled kernel in fixed blocks of three per step, so results only depend on
the seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numba
import numpy as np

from .diffusion import rank
from .errors import IsolatedVertex, StepCapExceeded
from .hbgraph import HbGraph

__all__ = [
    "WalkConfig",
    "WalkCounts",
    "WalkResult",
    "vertex_to_hbedge_dist",
    "hbedge_to_vertex_dist",
    "walk_until_explored",
    "walk_steps",
    "run_n_walks",
]

DEFAULT_BETA = 0.85
DEFAULT_WALKS = 100
DEFAULT_STEP_CAP = 100_000_000
_BLOCK = 1 << 15


@dataclass(frozen=True)
class WalkConfig:
    beta: float = DEFAULT_BETA
    n_walks: int = DEFAULT_WALKS
    seed: int = 0
    step_cap: int = DEFAULT_STEP_CAP

    def __post_init__(self):
        if not (0.0 < self.beta <= 1.0):
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if self.n_walks < 1:
            raise ValueError(f"n_walks must be >= 1, got {self.n_walks}")


@dataclass
class WalkCounts:
    vertex_passages: np.ndarray
    hbedge_passages: np.ndarray
    total_steps: int = 0

    def __add__(self, other: "WalkCounts") -> "WalkCounts":
        return WalkCounts(
            self.vertex_passages + other.vertex_passages,
            self.hbedge_passages + other.hbedge_passages,
            self.total_steps + other.total_steps,
        )

    @classmethod
    def zeros(cls, n: int, p: int) -> "WalkCounts":
        return cls(np.zeros(n, dtype=np.int64), np.zeros(p, dtype=np.int64), 0)


@dataclass
class WalkResult:
    counts: WalkCounts
    per_walk: List[WalkCounts]
    vertex_ranks: List[Tuple]
    hbedge_ranks: List[Tuple]


def vertex_to_hbedge_dist(g: HbGraph, v) -> np.ndarray:
    i = g.vertex_index(v)
    row = g.incidence.getrow(i).toarray().ravel()
    total = row.sum()
    if total == 0:
        raise IsolatedVertex(f"vertex {v!r} belongs to no hb-edge")
    return row / total


def hbedge_to_vertex_dist(g: HbGraph, e) -> np.ndarray:
    j = g.edge_index(e)
    col = g.incidence.getcol(j).toarray().ravel()
    return col / col.sum()


class _Tables:
    """CSR cumulative distributions for both half-moves."""

    def __init__(self, g: HbGraph):
        self.n, self.p = g.n, g.p
        H = g.incidence.tocsr()
        self.v_indptr, self.v_targets, self.v_cum = _cumulative(H)
        Ht = g.incidence.T.tocsr()
        self.e_indptr, self.e_targets, self.e_cum = _cumulative(Ht)


def _cumulative(M) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    M = M.copy()
    M.sort_indices()
    indptr = M.indptr.astype(np.int64)
    targets = M.indices.astype(np.int64)
    cum = np.empty(len(M.data))
    for r in range(M.shape[0]):
        a, b = indptr[r], indptr[r + 1]
        if b > a:
            c = np.cumsum(M.data[a:b])
            cum[a:b] = c / c[-1]
            cum[b - 1] = 1.0
    return indptr, targets, cum


@numba.njit(cache=True)
def _pick(indptr, targets, cum, row, u):
    lo = indptr[row]
    hi = indptr[row + 1] - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if cum[mid] > u:
            hi = mid
        else:
            lo = mid + 1
    return targets[lo]


@numba.njit(cache=True)
def _walk_kernel(v_indptr, v_targets, v_cum, e_indptr, e_targets, e_cum,
                 tele, u, state, vcount, ecount, stop_explored, max_steps):
    # state: current vertex, steps taken, distinct vertices seen, distinct hb-edges seen
    n = vcount.shape[0]
    p = ecount.shape[0]
    cur = state[0]
    steps = state[1]
    seen_v = state[2]
    seen_e = state[3]
    status = 0
    k = 0
    while k + 3 <= u.shape[0]:
        if stop_explored and seen_v == n and seen_e == p:
            status = 1
            break
        if steps >= max_steps:
            status = 2
            break
        isolated = v_indptr[cur] == v_indptr[cur + 1]
        if isolated or u[k] < tele:
            cur = min(int(u[k + 1] * n), n - 1)
        else:
            e = _pick(v_indptr, v_targets, v_cum, cur, u[k + 1])
            if ecount[e] == 0:
                seen_e += 1
            ecount[e] += 1
            cur = _pick(e_indptr, e_targets, e_cum, e, u[k + 2])
        if vcount[cur] == 0:
            seen_v += 1
        vcount[cur] += 1
        steps += 1
        k += 3
    if status == 0 and stop_explored and seen_v == n and seen_e == p:
        status = 1
    if status == 0 and steps >= max_steps:
        status = 2
    state[0] = cur
    state[1] = steps
    state[2] = seen_v
    state[3] = seen_e
    return status


def _walk(tables: _Tables, beta: float, rng: np.random.Generator, explore: bool,
          max_steps: int) -> Tuple[WalkCounts, int]:
    n, p = tables.n, tables.p
    vcount = np.zeros(n, dtype=np.int64)
    ecount = np.zeros(p, dtype=np.int64)
    start = min(int(rng.random() * n), n - 1)
    vcount[start] = 1
    state = np.array([start, 0, 1, 0], dtype=np.int64)
    tele = 1.0 - beta
    while True:
        u = rng.random(3 * _BLOCK)
        status = _walk_kernel(
            tables.v_indptr, tables.v_targets, tables.v_cum,
            tables.e_indptr, tables.e_targets, tables.e_cum,
            tele, u, state, vcount, ecount, explore, max_steps,
        )
        if status:
            return WalkCounts(vcount, ecount, int(state[1])), status


def walk_until_explored(g: HbGraph, cfg: WalkConfig, rng: np.random.Generator,
                        tables: Optional[_Tables] = None) -> WalkCounts:
    """One walk from a uniformly random vertex until the hb-graph is explored."""
    if g.n == 0:
        return WalkCounts.zeros(0, g.p)
    tables = tables or _Tables(g)
    counts, status = _walk(tables, cfg.beta, rng, True, cfg.step_cap)
    if status != 1:
        raise StepCapExceeded(f"walk not explored after {cfg.step_cap} steps")
    return counts


def walk_steps(g: HbGraph, n_steps: int, beta: float, rng: np.random.Generator) -> WalkCounts:
    """A walk of exactly ``n_steps`` moves, without the exploration stop."""
    counts, _ = _walk(_Tables(g), beta, rng, False, n_steps)
    return counts


def run_n_walks(g: HbGraph, cfg: WalkConfig) -> WalkResult:
    """Aggregate ``cfg.n_walks`` explored walks run on independent substreams.

    Walk ``i`` uses child ``i`` of ``SeedSequence(cfg.seed)``, so the first
    walks of a longer batch repeat a shorter batch with the same seed.
    """
    tables = _Tables(g)
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.n_walks)
    per_walk = [
        walk_until_explored(g, cfg, np.random.Generator(np.random.PCG64(c)), tables)
        for c in children
    ]
    total = WalkCounts.zeros(g.n, g.p)
    for c in per_walk:
        total = total + c
    return WalkResult(
        counts=total,
        per_walk=per_walk,
        vertex_ranks=rank(total.vertex_passages, g.vertices),
        hbedge_ranks=rank(total.hbedge_passages, g.edge_ids),
    )
