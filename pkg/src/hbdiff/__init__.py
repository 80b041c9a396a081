"""Exchange-based diffusion on hb-graphs (multiset hypergraphs)."""

from .diffusion import DiffusionState, DiffusionTrace, init_state, phase1, phase2, rank, run, step, transition_matrix
from .errors import HbGraphError
from .genrand import GeneratorConfig, generate, generate_labeled, group_labels
from .hbgraph import HbEdge, HbGraph, build
from .mset import Multiset, combine, is_submset, m_cardinality, support

__version__ = "0.1.0"

__all__ = [
    "DiffusionState", "DiffusionTrace", "init_state", "phase1", "phase2", "rank", "run", "step",
    "transition_matrix", "HbGraphError", "GeneratorConfig", "generate", "generate_labeled",
    "group_labels", "HbEdge", "HbGraph", "build", "Multiset", "combine", "is_submset",
    "m_cardinality", "support",
]
