"""Batch two-phase coloring: cut bad components, merge, then recolor each.

Phase 1 collects the connected components spanned by alpha-bad edges and
merges any two that share an edge. Phase 2 keeps every vertex outside the
components at its initial color and recolors each component with bounded
RESAMPLE restarts on the edges that outside vertices fail to protect.
"""

from __future__ import annotations

import time
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from scipy.cluster.hierarchy import DisjointSet

from .engine import FailureKind, FailureRecord, TrimmedHypergraph
from .hypergraph import Hypergraph
from .params import Params, check_degree_condition
from .randomness import ColorTape
from .resample import resample_with_restarts
from .stats import RunStats
from .structures import is_alpha_bad, is_monochromatic

__all__ = ["bad_components", "merge_components", "phase_two_edges", "AlonResult", "alon_color"]


def _ordered(sets: Iterable[Iterable[int]]) -> list[frozenset[int]]:
    return sorted((frozenset(s) for s in sets), key=min)


def bad_components(h: Hypergraph, tape: ColorTape, alpha: float) -> list[frozenset[int]]:
    """Vertex sets of the connected pieces spanned by alpha-bad edges, by minimum vertex."""
    ds = DisjointSet()
    for f in range(h.m):
        if is_alpha_bad(h, tape, alpha, f):
            e = h.edges[f]
            for v in e:
                ds.add(v)
            for v in e[1:]:
                ds.merge(e[0], v)
    return _ordered(ds.subsets())


def merge_components(h: Hypergraph, comps: Sequence[Iterable[int]]) -> list[frozenset[int]]:
    """Merge components until no edge meets two of them."""
    owner: dict[int, int] = {}
    for i, c in enumerate(comps):
        for v in c:
            if v in owner:
                raise ValueError(f"components {owner[v]} and {i} share vertex {v}")
            owner[v] = i
    ds = DisjointSet(range(len(comps)))
    # one pass suffices: merging never changes which components an edge meets
    for e in h.edges:
        met = {owner[v] for v in e if v in owner}
        if len(met) > 1:
            it = iter(met)
            first = next(it)
            for other in it:
                ds.merge(first, other)
    return _ordered(set().union(*(set(comps[i]) for i in group)) for group in ds.subsets())


def phase_two_edges(h: Hypergraph, tape: ColorTape, comp: frozenset[int]) -> TrimmedHypergraph:
    """``f`` cut to ``comp`` for every edge meeting ``comp`` whose outside part is
    monochromatic or empty under the initial coloring."""
    edges, origin = [], []
    for f in sorted(h.edges_touching(comp)):
        outside = [v for v in h.edges[f] if v not in comp]
        if outside and not is_monochromatic(tape, outside):
            continue
        edges.append(tuple(v for v in h.edges[f] if v in comp))
        origin.append(f)
    return TrimmedHypergraph(tuple(sorted(comp)), edges, origin)


@dataclass
class AlonResult:
    coloring: list[int]
    success: bool
    components: list[frozenset[int]]
    failure: FailureRecord | None
    stats: RunStats


def alon_color(h: Hypergraph, tape: ColorTape, params: Params) -> AlonResult:
    """Color the whole instance in one call.

    On a failed component the returned coloring still holds the last
    state of every other component, but ``success`` is False.
    """
    if not check_degree_condition(h.k, h.delta, params.alpha):
        warnings.warn("degree condition does not hold; the two-phase algorithm may fail", stacklevel=2)
    t0 = time.perf_counter()
    coloring = tape.initial_coloring()
    comps = merge_components(h, bad_components(h, tape, params.alpha))
    trials_used, steps, bits = [], 0, h.n
    failure = None
    for i, comp in enumerate(comps):
        g = phase_two_edges(h, tape, comp)
        out = resample_with_restarts(g, g.vertices, h.delta, params.trial_budget, tape, i)
        steps += out.steps_total
        bits += out.bits_used
        if not out.success:
            trials_used.append(params.trial_budget + 1)
            failure = FailureRecord(FailureKind.TRIALS_EXHAUSTED, None, i,
                                    f"{params.trial_budget} RESAMPLE trials failed on component {i}")
            break
        trials_used.append(out.trials_used)
        for v, c in out.coloring.items():
            coloring[v] = c
    total = time.perf_counter() - t0
    stats = RunStats(
        n=h.n, m=h.m, k=h.k, delta=h.delta, alpha=params.alpha, seed=tape.seed,
        comp_bound=params.comp_bound, trial_budget=params.trial_budget, algo="alon",
        success=failure is None, failure=failure.to_dict() if failure else None,
        num_queries=0,
        num_bad_edges=sum(1 for f in range(h.m) if is_alpha_bad(h, tape, params.alpha, f)),
        num_components=len(comps),
        component_size_histogram=RunStats.histogram(len(c) for c in comps),
        resample_trials_histogram=RunStats.histogram(trials_used),
        resample_steps_total=steps,
        random_bits_consumed=bits,
        timing={"p50_us": 0.0, "p90_us": 0.0, "p99_us": 0.0, "total_s": total},
    )
    return AlonResult(coloring, failure is None, comps, failure, stats)
