"""Local computation of 2-colorings for k-uniform hypergraphs of bounded degree."""

from __future__ import annotations

from .baseline import alon_color, bad_components, merge_components
from .engine import Engine, EngineFailed, FailureKind, run_complete, query_order
from .hypergraph import Hypergraph, generate_bounded_degree, parse, read_hypergraph, serialize
from .params import Params, params_report, prob_bounds, solve_threshold
from .randomness import BLUE, RED, ColorTape
from .verify import exhaustive_two_colorable, is_proper_coloring

__version__ = "0.1.0"

__all__ = [
    "BLUE",
    "RED",
    "ColorTape",
    "Engine",
    "EngineFailed",
    "FailureKind",
    "Hypergraph",
    "Params",
    "alon_color",
    "bad_components",
    "exhaustive_two_colorable",
    "generate_bounded_degree",
    "is_proper_coloring",
    "merge_components",
    "params_report",
    "parse",
    "prob_bounds",
    "query_order",
    "read_hypergraph",
    "run_complete",
    "serialize",
    "solve_threshold",
]
