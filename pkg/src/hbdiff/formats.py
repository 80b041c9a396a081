"""File formats: graph documents, CSV tables and Graphviz DOT.

Graph document (JSON, ``schema_version`` 1)::

    {
      "schema_version": 1,
      "vertices": [{"id": "v1"}, ...],
      "hbedges": [{"id": "e1", "weight": 1.0, "members": {"v1": 2, "v2": 1}}, ...],
      "labels": {"v1": "important:0", ...},          # optional
      "provenance": {"generator": {...}, "seed": 0}  # optional
    }

CSV tables (fixed headers, floats written with ``repr`` so they round-trip):

* trace: ``kind,id,alpha_0..alpha_T,epsilon_0.5..epsilon_<T-0.5>`` with one
  row per vertex (``kind=vertex``, epsilon cells empty) then one row per
  hb-edge (``kind=hbedge``, alpha cells empty)
* walk: ``kind,id,passages,rank``
* vertices: ``id,alpha_0..alpha_T,m_degree,degree,diffusion_rank,walk_count,walk_rank``
* hbedges: ``id,epsilon_0.5..,m_cardinality,support_cardinality,epsilon_norm,color_ratio,diffusion_rank``
* sweep: ``target,threshold,ratio,max_relative_eccentricity,subset_fraction,subset_size``
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .diffusion import DiffusionTrace, rank_vector
from .errors import LengthMismatch, ParseError, SchemaError
from .evaluate import EccentricitySweep, ScoreReport
from .hbgraph import HbEdge, HbGraph, extra_node_name
from .mset import Multiset

SCHEMA_VERSION = 1

_TOP_KEYS = {"schema_version", "vertices", "hbedges", "labels", "provenance"}
_EDGE_KEYS = {"id", "weight", "members"}

COLD = (49, 54, 149)
MID = (255, 255, 191)
HOT = (165, 0, 38)
EXTRA_BORDER = "#2ca02c"


@dataclass
class GraphDocument:
    graph: HbGraph
    labels: Optional[Dict[str, str]] = None
    provenance: Optional[dict] = None


def fmt(x) -> str:
    """Shortest round-trip text for a number."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


# -- graph documents ----------------------------------------------------------


def serialize_graph(g: HbGraph, labels: Optional[Dict] = None, provenance: Optional[dict] = None) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "vertices": [{"id": v} for v in g.vertices],
        "hbedges": [
            {"id": e.id, "weight": float(e.weight), "members": e.members.to_dict()}
            for e in g.hbedges
        ],
    }
    if labels is not None:
        doc["labels"] = {v: labels[v] for v in g.vertices if v in labels}
    if provenance is not None:
        doc["provenance"] = provenance
    return json.dumps(doc, indent=1) + "\n"


def parse_graph(text) -> GraphDocument:
    """Parse and validate a graph document (``str`` or ``bytes``)."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"graph document is not UTF-8: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed graph document: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("graph document must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise SchemaError(f"schema v{SCHEMA_VERSION}: unknown fields {sorted(unknown)}")

    vertices = _list(doc, "vertices")
    ids = []
    for item in vertices:
        if not isinstance(item, dict) or set(item) != {"id"} or not isinstance(item["id"], str):
            raise SchemaError(f"vertex entries must be {{\"id\": <string>}}, got {item!r}")
        ids.append(item["id"])
    if len(set(ids)) != len(ids):
        raise SchemaError("duplicate vertex id")

    edges = []
    seen = set()
    for item in _list(doc, "hbedges"):
        if not isinstance(item, dict):
            raise SchemaError(f"hb-edge entries must be objects, got {item!r}")
        extra = set(item) - _EDGE_KEYS
        if extra or "id" not in item or "members" not in item:
            raise SchemaError(f"hb-edge entry has fields {sorted(item)}, expected {sorted(_EDGE_KEYS)}")
        eid = item["id"]
        if not isinstance(eid, str):
            raise SchemaError(f"hb-edge id must be a string, got {eid!r}")
        if eid in seen:
            raise SchemaError(f"duplicate hb-edge id {eid!r}")
        seen.add(eid)
        weight = item.get("weight", 1.0)
        if not _is_number(weight):
            raise SchemaError(f"hb-edge {eid!r}: weight must be a number")
        members = item["members"]
        if not isinstance(members, dict):
            raise SchemaError(f"hb-edge {eid!r}: members must be an object")
        for v, m in members.items():
            if not _is_number(m) or m < 0:
                raise SchemaError(f"hb-edge {eid!r}: multiplicity of {v!r} must be a number >= 0")
        edges.append(HbEdge(eid, Multiset(members), weight))

    g = HbGraph(ids, edges)

    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, dict) or not all(isinstance(x, str) for x in labels.values()):
            raise SchemaError("labels must map vertex ids to strings")
        for v in labels:
            g.vertex_index(v)
    provenance = doc.get("provenance")
    if provenance is not None and not isinstance(provenance, dict):
        raise SchemaError("provenance must be an object")
    return GraphDocument(g, labels, provenance)


def _list(doc, key):
    value = doc.get(key)
    if not isinstance(value, list):
        raise SchemaError(f"{key!r} must be a list")
    return value


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def read_graph(path) -> GraphDocument:
    with open(path, "rb") as fh:
        return parse_graph(fh.read())


def write_text(path, text: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)


# -- CSV --------------------------------------------------------------------


def _half_label(t: int) -> str:
    return f"{t}.5"


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def trace_csv(trace: DiffusionTrace) -> str:
    T = trace.steps
    header = ["kind", "id"] + [f"alpha_{t}" for t in range(T + 1)] + [
        f"epsilon_{_half_label(t)}" for t in range(T)
    ]
    A, E = trace.alpha_matrix(), trace.epsilon_matrix()
    rows = []
    for i, v in enumerate(trace.vertex_ids):
        rows.append(["vertex", v] + [fmt(x) for x in A[i]] + [""] * T)
    for j, e in enumerate(trace.edge_ids):
        rows.append(["hbedge", e] + [""] * (T + 1) + [fmt(x) for x in E[j]])
    return _csv_text(header, rows)


def parse_trace_csv(text: str, g: Optional[HbGraph] = None) -> DiffusionTrace:
    """Read a trace table back; with ``g`` given, ids must match its order."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty trace file") from None
    if header[:2] != ["kind", "id"]:
        raise ParseError("trace header must start with kind,id")
    alpha_cols = [k for k, h in enumerate(header) if h.startswith("alpha_")]
    eps_cols = [k for k, h in enumerate(header) if h.startswith("epsilon_")]
    T = len(eps_cols)
    if len(alpha_cols) != T + 1 or T < 1:
        raise ParseError(f"trace has {len(alpha_cols)} alpha and {T} epsilon columns")
    vids, eids, arows, erows = [], [], [], []
    try:
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(f"trace row has {len(row)} cells, expected {len(header)}")
            if row[0] == "vertex":
                vids.append(row[1])
                arows.append([float(row[k]) for k in alpha_cols])
            elif row[0] == "hbedge":
                eids.append(row[1])
                erows.append([float(row[k]) for k in eps_cols])
            else:
                raise ParseError(f"unknown row kind {row[0]!r}")
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad number in trace: {exc}") from None
    A = np.array(arows, dtype=float).reshape(len(vids), T + 1)
    E = np.array(erows, dtype=float).reshape(len(eids), T)
    if g is not None and (tuple(vids) != g.vertices or tuple(eids) != g.edge_ids):
        raise LengthMismatch("trace ids do not match the graph")
    return DiffusionTrace(
        tuple(vids), tuple(eids),
        [A[:, t].copy() for t in range(T + 1)],
        [E[:, t].copy() for t in range(T)],
    )


def walk_csv(g: HbGraph, vertex_passages, hbedge_passages) -> str:
    vr = rank_vector(vertex_passages, g.vertices)
    er = rank_vector(hbedge_passages, g.edge_ids)
    rows = [["vertex", v, fmt(int(c)), fmt(int(r))] for v, c, r in zip(g.vertices, vertex_passages, vr)]
    rows += [["hbedge", e, fmt(int(c)), fmt(int(r))] for e, c, r in zip(g.edge_ids, hbedge_passages, er)]
    return _csv_text(["kind", "id", "passages", "rank"], rows)


def parse_walk_csv(text: str, g: HbGraph) -> Tuple[np.ndarray, np.ndarray]:
    vcount = {}
    ecount = {}
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != ["kind", "id", "passages", "rank"]:
        raise ParseError("walk header must be kind,id,passages,rank")
    try:
        for row in reader:
            target = vcount if row["kind"] == "vertex" else ecount
            target[row["id"]] = int(row["passages"])
    except ValueError as exc:
        raise ParseError(f"bad count in walk file: {exc}") from None
    try:
        return (
            np.array([vcount[v] for v in g.vertices], dtype=np.int64),
            np.array([ecount[e] for e in g.edge_ids], dtype=np.int64),
        )
    except KeyError as exc:
        raise LengthMismatch(f"walk file lacks id {exc.args[0]!r}") from None


def vertices_csv(g: HbGraph, trace: DiffusionTrace, report: ScoreReport,
                 walk_counts: Optional[np.ndarray] = None) -> str:
    T = trace.steps
    header = ["id"] + [f"alpha_{t}" for t in range(T + 1)] + [
        "m_degree", "degree", "diffusion_rank", "walk_count", "walk_rank"
    ]
    A = trace.alpha_matrix()
    mdeg, deg = g.m_degrees(), g.degrees()
    walk_rank = rank_vector(walk_counts, g.vertices) if walk_counts is not None else None
    rows = []
    for i, v in enumerate(g.vertices):
        row = [v] + [fmt(x) for x in A[i]] + [fmt(mdeg[i]), fmt(int(deg[i])), fmt(int(report.vertex_rank[i]))]
        if walk_counts is None:
            row += ["", ""]
        else:
            row += [fmt(int(walk_counts[i])), fmt(int(walk_rank[i]))]
        rows.append(row)
    return _csv_text(header, rows)


def hbedges_csv(g: HbGraph, trace: DiffusionTrace, report: ScoreReport) -> str:
    T = trace.steps
    header = ["id"] + [f"epsilon_{_half_label(t)}" for t in range(T)] + [
        "m_cardinality", "support_cardinality", "epsilon_norm", "color_ratio", "diffusion_rank"
    ]
    E = trace.epsilon_matrix()
    mcard, scard = g.m_cardinalities(), g.support_cardinalities()
    rows = []
    for j, e in enumerate(g.edge_ids):
        rows.append(
            [e] + [fmt(x) for x in E[j]] + [
                fmt(mcard[j]), fmt(int(scard[j])), fmt(report.epsilon_norm[j]),
                fmt(report.color_ratio[j]), fmt(int(report.edge_rank[j])),
            ]
        )
    return _csv_text(header, rows)


def sweep_csv(sweeps: Sequence[EccentricitySweep]) -> str:
    header = ["target", "threshold", "ratio", "max_relative_eccentricity", "subset_fraction", "subset_size"]
    rows = []
    for sw in sweeps:
        for pt in sw.points:
            ecc = "" if pt.max_relative_eccentricity is None else fmt(int(pt.max_relative_eccentricity))
            rows.append([sw.target, fmt(pt.threshold), fmt(pt.ratio), ecc,
                         fmt(pt.subset_fraction), fmt(pt.subset_size)])
    return _csv_text(header, rows)


# -- DOT --------------------------------------------------------------------


def color_scalars(values) -> np.ndarray:
    """Min-max scale to [0, 1]; constant input maps to 0.5 everywhere."""
    values = np.asarray(values, dtype=float)
    if len(values) == 0:
        return values
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.full(len(values), 0.5)
    return (values - lo) / (hi - lo)


def ramp_color(x: float) -> str:
    """Cold-to-hot two-segment palette, ``x`` in [0, 1]."""
    x = min(max(float(x), 0.0), 1.0)
    if x <= 0.5:
        a, b, t = COLD, MID, x / 0.5
    else:
        a, b, t = MID, HOT, (x - 0.5) / 0.5
    rgb = [round(ca + (cb - ca) * t) for ca, cb in zip(a, b)]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _q(name) -> str:
    return '"' + str(name).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: HbGraph, vertex_values, hbedge_ratios) -> str:
    """Extra-vertex graph with colour attributes.

    Vertex nodes are circles coloured by ``vertex_values``; extra nodes are
    green-bordered squares coloured by ``hbedge_ratios``. Every node carries
    its raw ``value`` and the ``scalar`` in [0, 1] used for the colour.
    """
    vertex_values = np.asarray(vertex_values, dtype=float)
    hbedge_ratios = np.asarray(hbedge_ratios, dtype=float)
    if len(vertex_values) != g.n or len(hbedge_ratios) != g.p:
        raise LengthMismatch(
            f"got {len(vertex_values)} vertex and {len(hbedge_ratios)} hb-edge values "
            f"for {g.n} vertices and {g.p} hb-edges"
        )
    evg = g.extra_vertex_graph()
    vs = color_scalars(vertex_values)
    es = color_scalars(hbedge_ratios)
    out: List[str] = [
        "graph hbgraph {",
        "  graph [layout=neato, overlap=false];",
        "  node [style=filled];",
    ]
    for v, x, s in zip(g.vertices, vertex_values, vs):
        out.append(
            f"  {_q(v)} [shape=circle, value={fmt(x)}, scalar={fmt(s)}, fillcolor={_q(ramp_color(s))}];"
        )
    for e, x, s in zip(g.edge_ids, hbedge_ratios, es):
        out.append(
            f"  {_q(extra_node_name(e))} [shape=square, value={fmt(x)}, scalar={fmt(s)}, "
            f"fillcolor={_q(ramp_color(s))}, color={_q(EXTRA_BORDER)}, penwidth=2];"
        )
    for v, x in evg.edges:
        out.append(f"  {_q(v)} -- {_q(x)};")
    out.append("}")
    return "\n".join(out) + "\n"
