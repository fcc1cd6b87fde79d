"""Moser-Tardos RESAMPLE, its conservative variant, and restart loops."""

from __future__ import annotations

import heapq
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from .params import bad_min
from .randomness import BitStream, ColorTape, trial_stream_id

__all__ = [
    "ResampleResult",
    "TrialsOutcome",
    "mt_resample",
    "conservative_resample",
    "step_budget",
    "resample_with_restarts",
]


@dataclass
class ResampleResult:
    coloring: dict[int, int]
    success: bool
    steps_used: int
    resamples_per_edge: list[int]
    trace: list[int] = field(default_factory=list)
    bits_used: int = 0
    resampled: set[int] = field(default_factory=set)


def _as_dict(init: Mapping[int, int] | Sequence[int]) -> dict[int, int]:
    if isinstance(init, Mapping):
        return dict(init)
    return dict(enumerate(init))


def _index(edges: Sequence[Sequence[int]]) -> dict[int, list[int]]:
    inc: dict[int, list[int]] = {}
    for i, e in enumerate(edges):
        for v in e:
            inc.setdefault(v, []).append(i)
    return inc


def _mono(edge: Sequence[int], coloring: dict[int, int]) -> bool:
    it = iter(edge)
    first = coloring[next(it)]
    for v in it:
        if coloring[v] != first:
            return False
    return True


class _ViolationQueue:
    """Min-heap of possibly-monochromatic edge ids; stale entries are
    discarded on pop, so ``pop`` always yields the lowest-id violated edge."""

    def __init__(self, edges, coloring):
        self.edges = edges
        self.coloring = coloring
        self.heap = [i for i, e in enumerate(edges) if e and _mono(e, coloring)]
        heapq.heapify(self.heap)
        self.queued = set(self.heap)

    def touch(self, edge_ids):
        for i in edge_ids:
            if i not in self.queued and _mono(self.edges[i], self.coloring):
                heapq.heappush(self.heap, i)
                self.queued.add(i)

    def pop(self) -> int | None:
        while self.heap:
            i = heapq.heappop(self.heap)
            self.queued.discard(i)
            if _mono(self.edges[i], self.coloring):
                return i
        return None

    def push_back(self, i: int):
        heapq.heappush(self.heap, i)
        self.queued.add(i)


def mt_resample(g, init: Mapping[int, int] | Sequence[int], max_steps: int,
                bits: BitStream) -> ResampleResult:
    """Resample the lowest-id monochromatic edge until none is left or the
    step budget runs out.

    ``g`` is anything with an ``edges`` sequence (a :class:`Hypergraph` or a
    trimmed hypergraph whose edges may be shorter than k). Each resample
    redraws the edge's vertices in ascending order from ``bits``.
    """
    edges = g.edges
    coloring = _as_dict(init)
    inc = _index(edges)
    per_edge = [0] * len(edges)
    trace: list[int] = []
    start = bits.counter
    queue = _ViolationQueue(edges, coloring)
    steps = 0
    while steps < max_steps:
        f = queue.pop()
        if f is None:
            break
        for v in edges[f]:
            coloring[v] = bits.next_bit()
        steps += 1
        per_edge[f] += 1
        trace.append(f)
        touched: set[int] = set()
        for v in edges[f]:
            touched.update(inc[v])
        queue.touch(touched)
    success = not any(e and _mono(e, coloring) for e in edges)
    return ResampleResult(coloring, success, steps, per_edge, trace, bits.counter - start)


def conservative_resample(h, alpha: float, tape: ColorTape, max_steps: int,
                          stream_id: int = 0) -> ResampleResult:
    """RESAMPLE that only grows the resampled set through mostly-fresh edges.

    A vertex is fresh until its color is first redrawn. For a monochromatic
    edge ``f`` (lowest id first): if more than ``(1-alpha)k`` of its vertices
    are fresh the whole edge is redrawn, otherwise only its non-fresh
    vertices are. With ``alpha = 1`` this is plain RESAMPLE.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    edges = h.edges
    k = h.k
    # "more than (1-alpha)k fresh"; alpha = 1 gives "at least one fresh"
    need_fresh = bad_min(k, alpha) if alpha < 1.0 else 1
    coloring = {v: tape.initial_color(v) for v in range(h.n)}
    fresh = set(range(h.n))
    resampled: set[int] = set()
    inc = _index(edges)
    per_edge = [0] * len(edges)
    trace: list[int] = []
    bits = BitStream(tape, stream_id)
    queue = _ViolationQueue(edges, coloring)
    steps = 0
    while steps < max_steps:
        f = queue.pop()
        if f is None:
            break
        fe = edges[f]
        n_fresh = sum(1 for v in fe if v in fresh)
        if n_fresh >= need_fresh:
            targets = fe
        else:
            targets = tuple(v for v in fe if v not in fresh)
        for v in targets:
            coloring[v] = bits.next_bit()
        fresh.difference_update(targets)
        resampled.update(targets)
        steps += 1
        per_edge[f] += 1
        trace.append(f)
        touched: set[int] = set()
        for v in targets:
            touched.update(inc[v])
        touched.add(f)
        queue.touch(touched)
    success = not any(_mono(e, coloring) for e in edges)
    return ResampleResult(coloring, success, steps, per_edge, trace, bits.counter, resampled)


def step_budget(num_edges: int, delta: int) -> int:
    """Steps per trial, ``2 * max(1, ceil(|E| / delta))``."""
    return 2 * max(1, math.ceil(num_edges / max(delta, 1)))


@dataclass
class TrialsOutcome:
    coloring: dict[int, int] | None
    trials_used: int
    steps_total: int
    bits_used: int

    @property
    def success(self) -> bool:
        return self.coloring is not None


def resample_with_restarts(g, vertices: Sequence[int], delta: int, trials: int,
                           tape: ColorTape, component_index: int) -> TrialsOutcome:
    """Independent bounded RESAMPLE runs, each from a fresh random coloring.

    Trial ``t`` reads only stream ``trial_stream_id(component_index, t)``:
    first one bit per vertex (ascending) for its starting coloring, then
    its resample bits. Returns the first proper coloring found.
    """
    steps = step_budget(len(g.edges), delta)
    steps_total = bits_total = 0
    for t in range(trials):
        bits = BitStream(tape, trial_stream_id(component_index, t))
        init = {v: bits.next_bit() for v in vertices}
        res = mt_resample(g, init, steps, bits)
        steps_total += res.steps_used
        bits_total += bits.counter
        if res.success:
            return TrialsOutcome(res.coloring, t + 1, steps_total, bits_total)
    return TrialsOutcome(None, trials, steps_total, bits_total)
