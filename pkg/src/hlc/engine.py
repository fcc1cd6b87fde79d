"""The local coloring engine: per-vertex queries backed by component growth
and per-component RESAMPLE.

State kept between queries is the set of colored vertices and their colors
(``current``) plus the completed components. A query either returns a
stored color, or builds and recolors a component around a fresh structure
containing the vertex, or fixes the vertex at its initial color.
"""

from __future__ import annotations

import enum
import os
import random
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .hypergraph import Hypergraph
from .params import Params
from .randomness import ColorTape
from .resample import resample_with_restarts
from .stats import RunStats, latency_quantiles
from .structures import (
    Role,
    SearchStats,
    Structure,
    find_mono_tail,
    find_structure_containing,
    find_structure_near,
    is_alpha_bad,
    is_monochromatic,
    max_color_count,
    validate_structure,
)

__all__ = [
    "FailureKind",
    "FailureRecord",
    "EngineFailed",
    "Component",
    "TrimmedHypergraph",
    "Engine",
    "RunResult",
    "trim",
    "v1_neighborhood",
    "query_order",
    "run_complete",
    "debug_from_env",
]

_UNSET = 0xFF
_ORDER_TAG = 0x5DEECE66D


def debug_from_env() -> bool:
    return os.environ.get("HLC_DEBUG_ASSERTS", "") not in ("", "0")


class FailureKind(str, enum.Enum):
    COMPONENT_TOO_LARGE = "ComponentTooLarge"
    TRIALS_EXHAUSTED = "ColoringTrialsExhausted"


@dataclass(frozen=True)
class FailureRecord:
    kind: FailureKind
    vertex: int | None = None
    component_index: int | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "vertex": self.vertex,
            "component_index": self.component_index,
            "detail": self.detail,
        }


class EngineFailed(RuntimeError):
    def __init__(self, record: FailureRecord):
        self.record = record
        super().__init__(f"{record.kind.value}: {record.detail}")


@dataclass
class Component:
    index: int
    vertices: frozenset[int]
    trace: tuple[tuple[int, Role], ...]

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass
class TrimmedHypergraph:
    """Edges of ``h`` cut down to a vertex set, keeping cuts of size >= ``min_size``.

    ``origin[i]`` is the id in ``h`` of trimmed edge ``i``; edges keep the
    ascending order of their origins.
    """

    vertices: tuple[int, ...]
    edges: list[tuple[int, ...]]
    origin: list[int]

    def max_edge_degree(self) -> int:
        inc: dict[int, list[int]] = {}
        for i, e in enumerate(self.edges):
            for v in e:
                inc.setdefault(v, []).append(i)
        best = 0
        for i, e in enumerate(self.edges):
            nb = set()
            for v in e:
                nb.update(inc[v])
            best = max(best, len(nb) - 1)
        return best


def trim(h: Hypergraph, comp: Iterable[int], min_size: int, keep=None) -> TrimmedHypergraph:
    cset = comp if isinstance(comp, (set, frozenset)) else set(comp)
    edges, origin = [], []
    for f in sorted(h.edges_touching(cset)):
        if keep is not None and not keep(f):
            continue
        cut = tuple(v for v in h.edges[f] if v in cset)
        if len(cut) >= min_size:
            edges.append(cut)
            origin.append(f)
    return TrimmedHypergraph(tuple(sorted(cset)), edges, origin)


def v1_neighborhood(h: Hypergraph, comp: Iterable[int]) -> set[int]:
    """``comp`` plus every vertex of every edge meeting ``comp``."""
    cset = set(comp)
    out = set(cset)
    for f in h.edges_touching(cset):
        out.update(h.edges[f])
    return out


class Engine:
    """Serial query engine for one (hypergraph, tape, params) triple.

    With ``debug=True`` the expensive invariant checks run on every
    component: trace replay, structure coverage, component separation,
    witness-tree properness and event, and color stability. Violations are
    collected in ``violations`` rather than raised.
    """

    def __init__(self, h: Hypergraph, tape: ColorTape, params: Params, debug: bool | None = None):
        if tape.n != h.n:
            raise ValueError("tape and hypergraph disagree on n")
        self.h = h
        self.tape = tape
        self.params = params
        self.debug = debug_from_env() if debug is None else debug
        self.current = bytearray(b"\xff") * h.n
        self.comp_of: dict[int, int] = {}
        self.components: list[Component] = []
        self.failed: FailureRecord | None = None
        self.search = SearchStats(node_budget=params.node_budget)
        self.trials_used: list[int] = []
        self.resample_steps = 0
        self.resample_bits = 0
        self.initial_bits = 0
        self.queries = 0
        self.violations: list[str] = []
        self.witness_reports: list[dict] = []
        self._querying: int | None = None

    # -- state helpers -----------------------------------------------------

    def color_of(self, v: int) -> int | None:
        c = self.current[v]
        return None if c == _UNSET else c

    def is_colored(self, v: int) -> bool:
        return self.current[v] != _UNSET

    def colored_count(self) -> int:
        return self.h.n - self.current.count(_UNSET)

    def _assign(self, v: int, c: int) -> None:
        old = self.current[v]
        if old == _UNSET:
            self.current[v] = c
            return
        if old != c:
            self.violations.append(f"color stability: vertex {v} changed {old} -> {c}")
            self.current[v] = c

    def _fail(self, kind: FailureKind, detail: str, component_index: int | None = None):
        self.failed = FailureRecord(kind, self._querying, component_index, detail)
        raise EngineFailed(self.failed)

    # -- the three procedures ---------------------------------------------

    def query(self, v: int) -> int:
        if self.failed is not None:
            raise EngineFailed(self.failed)
        if not 0 <= v < self.h.n:
            raise IndexError(f"vertex {v} out of range")
        self.queries += 1
        c = self.current[v]
        if c != _UNSET:
            return c
        self._querying = v
        s = find_structure_containing(self.h, self.tape, self.params.alpha, v,
                                      self.comp_of, self.search)
        if s is None:
            self._assign(v, self.tape.initial_color(v))
            self.initial_bits += 1
            return self.current[v]
        comp = self.build_component(s)
        self._register(comp)
        rho = self.color_component(comp)
        for u, col in rho.items():
            self._assign(u, col)
        for u in v1_neighborhood(self.h, comp.vertices) - comp.vertices:
            if self.current[u] == _UNSET:
                self.initial_bits += 1
            self._assign(u, self.tape.initial_color(u))
        return self.current[v]

    def build_component(self, s: Structure) -> Component:
        h, tape, alpha = self.h, self.tape, self.params.alpha
        index = len(self.components)
        comp: set[int] = set()
        trace: list[tuple[int, Role]] = []

        def absorb(structure: Structure):
            for w in structure.witnesses:
                trace.append((w, Role.WITNESS))
            trace.append((structure.base, Role.MONO))
            comp.update(structure.vertices(h))

        absorb(s)
        while True:
            if len(comp) > self.params.comp_bound:
                self._fail(FailureKind.COMPONENT_TOO_LARGE,
                           f"component reached {len(comp)} > {self.params.comp_bound} vertices", index)
            f = find_mono_tail(h, tape, alpha, comp)
            if f is not None:
                trace.append((f, Role.MONO))
                comp.update(h.edges[f])
                continue
            s2 = find_structure_near(h, tape, alpha, comp, self.comp_of, self.search)
            if s2 is not None:
                absorb(s2)
                continue
            break
        component = Component(index, frozenset(comp), tuple(trace))
        if self.debug:
            self._check_trace(component)
        return component

    def trimmed(self, c: Component) -> TrimmedHypergraph:
        return trim(self.h, c.vertices, self.params.trim_min)

    def color_component(self, c: Component) -> dict[int, int]:
        g = self.trimmed(c)
        if self.debug:
            if any(len(e) < self.params.trim_min or len(e) > self.h.k for e in g.edges):
                self.violations.append(f"component {c.index}: trimmed edge size out of range")
            if g.max_edge_degree() > self.h.delta:
                self.violations.append(f"component {c.index}: trimmed degree exceeds delta")
        out = resample_with_restarts(g, g.vertices, self.h.delta, self.params.trial_budget,
                                     self.tape, c.index)
        self.resample_steps += out.steps_total
        self.resample_bits += out.bits_used
        self.trials_used.append(out.trials_used if out.success else self.params.trial_budget + 1)
        if not out.success:
            self._fail(FailureKind.TRIALS_EXHAUSTED,
                       f"{self.params.trial_budget} RESAMPLE trials failed on component {c.index}",
                       c.index)
        return out.coloring

    def _register(self, c: Component) -> None:
        if self.debug:
            for u in v1_neighborhood(self.h, c.vertices):
                other = self.comp_of.get(u)
                if other is not None:
                    self.violations.append(
                        f"separation: component {c.index} is within distance 1 of component {other}")
                    break
        for u in c.vertices:
            self.comp_of[u] = c.index
        self.components.append(c)

    # -- debug instrumentation ---------------------------------------------

    def _check_trace(self, c: Component) -> None:
        from .witness import event_holds, is_proper, witness_tree_for_trace

        h, tape, alpha = self.h, self.tape, self.params.alpha
        tmin = self.params.tail_min
        seen: set[int] = set()
        for pos, (f, role) in enumerate(c.trace):
            new = [u for u in h.edges[f] if u not in seen]
            if role is Role.MONO:
                ok = len(new) >= tmin and is_monochromatic(tape, new)
            else:
                ok = max_color_count(tape, new) >= tmin
            if not ok:
                self.violations.append(f"component {c.index}: trace entry {pos} (edge {f}) adds too little")
            if role is Role.MONO:
                fset = h.edge_set(f)
                wit = tuple(g for g, _ in c.trace[:pos] if not fset.isdisjoint(h.edges[g]))
                if not validate_structure(h, tape, alpha, Structure(f, wit)):
                    self.violations.append(f"component {c.index}: trace entry {pos} is not covered by a structure")
            seen.update(h.edges[f])
        try:
            tree = witness_tree_for_trace(h, c.trace)
        except Exception as exc:  # construction itself is under test here
            self.violations.append(f"component {c.index}: witness construction failed: {exc}")
            return
        proper = is_proper(h, tape, alpha, tree)
        holds = event_holds(h, tape, alpha, tree)
        if not proper:
            self.violations.append(f"component {c.index}: witness tree improper: {proper.violations}")
        if not holds:
            self.violations.append(f"component {c.index}: witness event does not hold")
        self.witness_reports.append({
            "component": c.index, "size": c.size, "proper": proper.ok, "event_holds": holds,
            "tree": tree,
        })

    def audit_edge_classes(self) -> None:
        """On a complete run: edges missing every component are not initially
        monochromatic, lightly-touched edges are not monochromatic outside
        their component, and heavily-touched edges are proper in the final
        coloring."""
        from .verify import AuditError, classify_edges

        h, tape = self.h, self.tape
        try:
            labels = classify_edges(h, [c.vertices for c in self.components], self.params.alpha)
        except AuditError as exc:
            self.violations.append(f"edge classes: {exc}")
            return
        for f, label in enumerate(labels):
            e = h.edges[f]
            if label == "E1":
                bad = is_monochromatic(tape, e)
            elif label == "E2":
                c = self.comp_of[next(v for v in e if v in self.comp_of)]
                outside = [v for v in e if self.comp_of.get(v) != c]
                bad = is_monochromatic(tape, outside)
            else:
                first = self.current[e[0]]
                bad = all(self.current[v] == first for v in e)
            if bad:
                self.violations.append(f"edge classes: {label} edge {f} is monochromatic")

    def coloring(self) -> list[int]:
        if _UNSET in self.current:
            raise ValueError("coloring is partial; not every vertex has been queried")
        return list(self.current)


def query_order(n: int, seed: int, kind: str = "random") -> list[int]:
    order = list(range(n))
    if kind == "random":
        random.Random(seed ^ _ORDER_TAG).shuffle(order)
    elif kind != "ascending":
        raise ValueError(f"unknown order {kind!r}")
    return order


@dataclass
class RunResult:
    coloring: list[int] | None
    failure: FailureRecord | None
    engine: Engine
    stats: RunStats
    latencies_ns: list[int] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.failure is None


def run_complete(h: Hypergraph, tape: ColorTape, params: Params, order: Sequence[int],
                 debug: bool | None = None) -> RunResult:
    """Query every vertex in ``order``; the run stops at the first failure."""
    eng = Engine(h, tape, params, debug)
    lat: list[int] = []
    clock = time.perf_counter_ns
    t0 = clock()
    failure = None
    for v in order:
        s = clock()
        try:
            eng.query(v)
        except EngineFailed as exc:
            failure = exc.record
            break
        lat.append(clock() - s)
    total = (clock() - t0) / 1e9
    coloring = None
    if failure is None:
        coloring = eng.coloring()
        if eng.debug:
            eng.audit_edge_classes()
    stats = collect_stats(eng, failure, lat, total)
    return RunResult(coloring, failure, eng, stats, lat)


def collect_stats(eng: Engine, failure: FailureRecord | None, lat: Sequence[int], total_s: float) -> RunStats:
    h, p = eng.h, eng.params
    timing = latency_quantiles(lat)
    timing["total_s"] = total_s
    return RunStats(
        n=h.n, m=h.m, k=h.k, delta=h.delta, alpha=p.alpha, seed=eng.tape.seed,
        comp_bound=p.comp_bound, trial_budget=p.trial_budget, algo="lca",
        success=failure is None,
        failure=failure.to_dict() if failure else None,
        num_queries=eng.queries,
        num_bad_edges=sum(1 for f in range(h.m) if is_alpha_bad(h, eng.tape, p.alpha, f)),
        num_structures_found=eng.search.found,
        num_search_budget_exhausted=eng.search.exhausted,
        num_components=len(eng.components),
        component_size_histogram=RunStats.histogram(c.size for c in eng.components),
        resample_trials_histogram=RunStats.histogram(eng.trials_used),
        resample_steps_total=eng.resample_steps,
        random_bits_consumed=eng.initial_bits + eng.resample_bits,
        invariant_violations=len(eng.violations),
        timing=timing,
    )
