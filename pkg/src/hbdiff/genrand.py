"""Random natural hb-graphs with planted important vertices.

A pool of ``n_max`` vertices is shuffled. The first ``n_interconnect`` become
interconnection vertices; the rest is split evenly into ``k`` groups, each
holding a small tier of important vertices followed by a large tier of
ordinary ones. Hb-edges are shared evenly between groups. Each hb-edge draws

* a support size uniform in ``[2, max_support_cardinality]``,
* between 1 and ``max_important_per_edge`` important vertices of its group,
  chosen uniformly,
* the remaining members from the group's ordinary tier with rank-based Zipf
  weights ``r ** -powerlaw_exponent`` (without replacement),
* an integer multiplicity uniform in ``[1, max_multiplicity]`` per member.

Groups are then made internally connected, and with ``connect_single`` the
interconnection vertices are inserted along a random spanning tree over the
groups so the support hypergraph has a single component. Only vertices that
end up in some hb-edge are kept.

Randomness comes from numpy's PCG64 bit generator seeded with ``seed``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import InfeasibleConfig, ParseError
from .hbgraph import HbEdge, HbGraph
from .mset import Multiset

__all__ = ["GeneratorConfig", "generate", "generate_labeled", "group_labels", "DEFAULT_CONFIG"]

INTERCONNECT = "interconnect"


@dataclass(frozen=True)
class GeneratorConfig:
    n_max: int = 10000
    n_components: int = 5
    n_interconnect: int = 10
    important_per_group: Tuple[int, ...] = (6, 16, 12, 18, 2)
    n_hbedges: int = 300
    max_support_cardinality: int = 15
    max_important_per_edge: int = 2
    powerlaw_exponent: float = 1.6
    max_multiplicity: int = 3
    connect_single: bool = True
    ordinary_per_group: Optional[int] = None
    edge_sharing: str = "even"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "important_per_group", tuple(int(x) for x in self.important_per_group))

    def validate(self) -> None:
        k = self.n_components
        if k < 1:
            raise InfeasibleConfig("n_components must be >= 1")
        if len(self.important_per_group) != k:
            raise InfeasibleConfig(
                f"important_per_group has {len(self.important_per_group)} entries, expected {k}"
            )
        if any(c < 1 for c in self.important_per_group):
            raise InfeasibleConfig("every group needs at least one important vertex")
        if self.n_interconnect < 0:
            raise InfeasibleConfig("n_interconnect must be >= 0")
        if sum(self.important_per_group) + self.n_interconnect > self.n_max:
            raise InfeasibleConfig("important and interconnect vertices exceed n_max")
        if self.max_support_cardinality < 1:
            raise InfeasibleConfig("max_support_cardinality must be >= 1")
        if self.max_important_per_edge < 1:
            raise InfeasibleConfig("max_important_per_edge must be >= 1")
        if self.n_hbedges < k:
            raise InfeasibleConfig("need at least one hb-edge per group")
        if self.max_multiplicity < 1:
            raise InfeasibleConfig("max_multiplicity must be >= 1")
        if self.powerlaw_exponent < 0:
            raise InfeasibleConfig("powerlaw_exponent must be >= 0")
        if self.connect_single and k > 1 and self.n_interconnect < k - 1:
            raise InfeasibleConfig(
                f"connecting {k} groups needs at least {k - 1} interconnection vertices"
            )
        if self.edge_sharing not in ("even", "important"):
            raise InfeasibleConfig(f"edge_sharing must be 'even' or 'important', got {self.edge_sharing!r}")
        if self.ordinary_per_group is not None and self.ordinary_per_group < 1:
            raise InfeasibleConfig("ordinary_per_group must be >= 1")
        for j, size in enumerate(self._group_sizes()):
            if self.important_per_group[j] >= size:
                raise InfeasibleConfig(
                    f"group {j} has {size} vertices, too few for "
                    f"{self.important_per_group[j]} important ones plus ordinary ones"
                )

    def _group_sizes(self) -> List[int]:
        rest = self.n_max - self.n_interconnect
        base, extra = divmod(rest, self.n_components)
        return [base + (1 if j < extra else 0) for j in range(self.n_components)]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["important_per_group"] = list(self.important_per_group)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise InfeasibleConfig(f"unknown generator settings: {sorted(unknown)}")
        return cls(**d)

    def with_seed(self, seed: int) -> "GeneratorConfig":
        d = self.to_dict()
        d["seed"] = int(seed)
        return GeneratorConfig.from_dict(d)


DEFAULT_CONFIG = GeneratorConfig()


def _edges_per_group(cfg: GeneratorConfig) -> List[int]:
    k = cfg.n_components
    if cfg.edge_sharing == "even":
        base, extra = divmod(cfg.n_hbedges, k)
        return [base + (1 if j < extra else 0) for j in range(k)]
    # proportional to the important tiers, largest remainder, at least one each
    spare = cfg.n_hbedges - k
    total = sum(cfg.important_per_group)
    quotas = [spare * c / total for c in cfg.important_per_group]
    counts = [int(q) for q in quotas]
    by_remainder = sorted(range(k), key=lambda j: (-(quotas[j] - counts[j]), j))
    for j in by_remainder[: spare - sum(counts)]:
        counts[j] += 1
    return [c + 1 for c in counts]


def _vertex_id(k: int) -> str:
    return f"v{k}"


def _zipf_weights(size: int, exponent: float) -> np.ndarray:
    w = np.arange(1, size + 1, dtype=float) ** -exponent
    return w / w.sum()


def _components(edges: List[Dict[int, int]]) -> List[int]:
    """Union-find over edge supports; returns a root label per edge."""
    parent: Dict[int, int] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        it = iter(e)
        first = find(next(it))
        for v in it:
            r = find(v)
            if r != first:
                parent[r] = first
    return [find(next(iter(e))) for e in edges]


def _connect_group(rng, edges, important, cfg):
    """Join the components of one group's hb-edges into one.

    A stray component is attached by adding a vertex of the main component to
    its smallest hb-edge; when every hb-edge is full, a member present in no
    other hb-edge is swapped out instead.
    """
    important = set(important)
    while True:
        roots = _components(edges)
        main = roots[0]
        stray = [i for i, r in enumerate(roots) if r != main]
        if not stray:
            return
        target_root = roots[stray[0]]
        comp = [i for i in stray if roots[i] == target_root]
        main_vertices = sorted({v for i, r in enumerate(roots) if r == main for v in edges[i]})
        i = min(comp, key=lambda c: (len(edges[c]), c))
        edge = edges[i]
        n_imp = sum(1 for v in edge if v in important)
        candidates = [
            v for v in main_vertices
            if v not in important or n_imp < cfg.max_important_per_edge
        ]
        if not candidates:
            raise InfeasibleConfig("cannot connect group: no admissible linking vertex")
        link = candidates[int(rng.integers(len(candidates)))]
        if len(edge) >= cfg.max_support_cardinality:
            counts: Dict[int, int] = {}
            for e in edges:
                for v in e:
                    counts[v] = counts.get(v, 0) + 1
            leaves = [v for v in edge if counts[v] == 1 and (v not in important or n_imp > 1)]
            if not leaves:
                raise InfeasibleConfig("cannot connect group: hb-edges are saturated")
            del edge[leaves[int(rng.integers(len(leaves)))]]
        edge[link] = 1


def generate_labeled(cfg: GeneratorConfig) -> Tuple[HbGraph, Dict[str, str]]:
    """Generate an hb-graph together with the ground-truth tier of each vertex.

    Labels are ``"important:j"``, ``"ordinary:j"`` (0-based group index) or
    ``"interconnect"``.
    """
    cfg.validate()
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    k = cfg.n_components

    pool = rng.permutation(cfg.n_max)
    v0 = pool[: cfg.n_interconnect]
    label: Dict[int, str] = {int(v): INTERCONNECT for v in v0}

    groups_imp, groups_ord = [], []
    start = cfg.n_interconnect
    for j, size in enumerate(cfg._group_sizes()):
        members = pool[start:start + size]
        start += size
        n_imp = cfg.important_per_group[j]
        ordinary = members[n_imp:]
        if cfg.ordinary_per_group is not None:
            ordinary = ordinary[: cfg.ordinary_per_group]
        groups_imp.append(members[:n_imp])
        groups_ord.append(ordinary)
        label.update({int(v): f"important:{j}" for v in members[:n_imp]})
        label.update({int(v): f"ordinary:{j}" for v in ordinary})

    per_group = _edges_per_group(cfg)

    group_edges: List[List[Dict[int, int]]] = []
    for j in range(k):
        imp, ordn = groups_imp[j], groups_ord[j]
        weights = _zipf_weights(len(ordn), cfg.powerlaw_exponent)
        edges = []
        for _ in range(per_group[j]):
            lo = min(2, cfg.max_support_cardinality)
            size = int(rng.integers(lo, cfg.max_support_cardinality + 1))
            n_imp = int(rng.integers(1, min(cfg.max_important_per_edge, len(imp), size) + 1))
            n_ord = min(size - n_imp, len(ordn))
            chosen = list(rng.choice(imp, n_imp, replace=False))
            if n_ord:
                chosen += list(rng.choice(ordn, n_ord, replace=False, p=weights))
            mults = rng.integers(1, cfg.max_multiplicity + 1, size=len(chosen))
            edges.append({int(v): int(m) for v, m in zip(chosen, mults)})
        _connect_group(rng, edges, [int(v) for v in imp], cfg)
        group_edges.append(edges)

    if cfg.connect_single and k > 1:
        _interconnect(rng, group_edges, [int(v) for v in v0], cfg)

    all_edges = [e for edges in group_edges for e in edges]
    used = sorted({v for e in all_edges for v in e})
    vertices = [_vertex_id(v) for v in used]
    hbedges = [
        HbEdge(f"e{idx}", Multiset({_vertex_id(v): m for v, m in sorted(e.items())}), 1.0)
        for idx, e in enumerate(all_edges)
    ]
    g = HbGraph(vertices, hbedges)
    return g, {_vertex_id(v): label[v] for v in used}


def _interconnect(rng, group_edges, v0, cfg):
    k = len(group_edges)
    order = [int(x) for x in rng.permutation(k)]
    pairs = []
    for pos in range(1, k):
        other = order[int(rng.integers(pos))]
        pairs.append((order[pos], other))
    for _ in range(len(v0) - len(pairs)):
        a, b = (int(x) for x in rng.choice(k, 2, replace=False))
        pairs.append((a, b))
    for vertex, (a, b) in zip(v0, pairs):
        for grp in (a, b):
            open_edges = [
                i for i, e in enumerate(group_edges[grp])
                if len(e) < cfg.max_support_cardinality and vertex not in e
            ]
            if not open_edges:
                raise InfeasibleConfig(f"group {grp} has no hb-edge with room for an interconnection")
            i = open_edges[int(rng.integers(len(open_edges)))]
            group_edges[grp][i][vertex] = 1


def generate(cfg: GeneratorConfig) -> HbGraph:
    return generate_labeled(cfg)[0]


def group_labels(g: HbGraph, cfg: GeneratorConfig) -> Dict[str, str]:
    """Replay generation from ``cfg`` and return the labels of ``g``'s vertices."""
    replay, labels = generate_labeled(cfg)
    if replay != g:
        raise ValueError("graph was not produced by this generator configuration")
    return labels


def load_config(path) -> GeneratorConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed generator config: {exc}") from None
    if not isinstance(data, dict):
        raise InfeasibleConfig("generator config must be a JSON object")
    return GeneratorConfig.from_dict(data)
