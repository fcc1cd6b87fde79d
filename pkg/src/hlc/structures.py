"""Alpha-bad edges, mono-tails and potential resample structures.

A structure is a base edge ``f`` plus an ordered sequence of neighboring
witness edges ``h_1..h_w`` such that

* ``f`` minus the union of the witnesses is initially monochromatic and has
  at least ``(1-alpha)k`` vertices, and
* each ``h_j`` minus ``h_1 .. h_{j-1}`` has at least ``(1-alpha)k``
  vertices of one initial color.

Every edge taking part in a structure therefore carries at least
``(1-alpha)k`` vertices of one color ("heavy" below); the searches only
ever look at heavy edges, which keeps them local and cheap.
"""

from __future__ import annotations

import enum
from collections.abc import Container, Iterable
from dataclasses import dataclass, field

from .hypergraph import Hypergraph
from .params import DEFAULT_NODE_BUDGET, bad_min, tail_min
from .randomness import BLUE, RED, ColorTape

__all__ = [
    "Role",
    "Structure",
    "SearchStats",
    "is_alpha_bad",
    "validate_structure",
    "find_structure_containing",
    "find_structure_near",
    "find_mono_tail",
]


class Role(enum.Enum):
    WITNESS = "W"
    MONO = "M"


@dataclass(frozen=True)
class Structure:
    base: int
    witnesses: tuple[int, ...] = ()

    def trace_order(self) -> tuple[int, ...]:
        """Witnesses in index order, then the base."""
        return self.witnesses + (self.base,)

    def vertices(self, h: Hypergraph) -> frozenset[int]:
        out = set(h.edges[self.base])
        for w in self.witnesses:
            out.update(h.edges[w])
        return frozenset(out)


@dataclass
class SearchStats:
    """Per-call node budget plus counters accumulated over many calls."""

    node_budget: int = DEFAULT_NODE_BUDGET
    calls: int = 0
    nodes: int = 0
    exhausted: int = 0
    found: int = 0


class _BudgetExhausted(Exception):
    pass


class _Either:
    __slots__ = ("a", "b")

    def __init__(self, a: Container[int], b: Container[int]):
        self.a = a
        self.b = b

    def __contains__(self, x) -> bool:
        return x in self.a or x in self.b


def _count_blue(tape: ColorTape, vertices: Iterable[int]) -> tuple[int, int]:
    size = blue = 0
    for u in vertices:
        size += 1
        blue += tape.initial_color(u)
    return size, blue


def max_color_count(tape: ColorTape, vertices: Iterable[int]) -> int:
    size, blue = _count_blue(tape, vertices)
    return max(blue, size - blue)


def is_monochromatic(tape: ColorTape, vertices: Iterable[int]) -> bool:
    size, blue = _count_blue(tape, vertices)
    return blue == 0 or blue == size


def is_alpha_bad(h: Hypergraph, tape: ColorTape, alpha: float, f: int) -> bool:
    """More than ``(1-alpha)k`` vertices of ``f`` share an initial color."""
    return max_color_count(tape, h.edges[f]) >= bad_min(h.k, alpha)


def validate_structure(h: Hypergraph, tape: ColorTape, alpha: float, s: Structure) -> bool:
    tmin = tail_min(h.k, alpha)
    if len(set(s.witnesses)) != len(s.witnesses):
        return False
    nbrs = h.neighbors(s.base)
    covered: set[int] = set()
    for w in s.witnesses:
        if w not in nbrs:
            return False
        if max_color_count(tape, (u for u in h.edges[w] if u not in covered)) < tmin:
            return False
        covered.update(h.edges[w])
    rest = [u for u in h.edges[s.base] if u not in covered]
    return len(rest) >= tmin and is_monochromatic(tape, rest)


def _disjoint(edge: Iterable[int], forbidden: Container[int]) -> bool:
    for u in edge:
        if u in forbidden:
            return False
    return True


def _hits(edge: Iterable[int], target: Container[int]) -> bool:
    for u in edge:
        if u in target:
            return True
    return False


def _search_base(h: Hypergraph, tape: ColorTape, tmin: int, f: int,
                 forbidden: Container[int], target: Container[int],
                 heavy, stats: SearchStats, nodes: list[int]) -> Structure | None:
    """Smallest (lexicographic) witness sequence making ``f`` a structure base.

    Only witnesses that cover a not-yet-covered vertex of ``f`` of the wrong
    color, or that first reach ``target``, are tried. Any structure can be
    pruned to that shape without losing validity, so the search is complete
    up to the node budget. Explored witness sets are memoized: whether a
    prefix can be completed depends only on the set it covers.
    """
    fv = h.edges[f]
    if not _disjoint(fv, forbidden):
        return None
    colors = {u: tape.initial_color(u) for u in fv}
    base_hits = _hits(fv, target)
    cands = sorted(g for g in h.neighbors(f) if heavy(g) and _disjoint(h.edges[g], forbidden))
    for c in (RED, BLUE):
        majority = frozenset(u for u in fv if colors[u] == c)
        if len(majority) < tmin:
            continue
        opposite = frozenset(fv) - majority
        seen: set[frozenset[int]] = set()

        def dfs(chosen: tuple[int, ...], covered: frozenset[int], hit: bool):
            nodes[0] += 1
            if nodes[0] > stats.node_budget:
                raise _BudgetExhausted
            if len(majority - covered) < tmin:
                return None
            open_opp = opposite - covered
            if not open_opp and hit:
                return chosen
            for g in cands:
                if g in chosen:
                    continue
                ge = h.edges[g]
                g_hits = not hit and _hits(ge, target)
                if not (g_hits or not open_opp.isdisjoint(ge)):
                    continue
                if max_color_count(tape, (u for u in ge if u not in covered)) < tmin:
                    continue
                key = frozenset(chosen + (g,))
                if key in seen:
                    continue
                seen.add(key)
                res = dfs(chosen + (g,), covered | frozenset(ge), hit or g_hits)
                if res is not None:
                    return res
            return None

        found = dfs((), frozenset(), base_hits)
        if found is not None:
            return Structure(f, found)
    return None


def _run_search(h, tape, alpha, bases, forbidden, target, stats):
    stats = stats if stats is not None else SearchStats()
    stats.calls += 1
    tmin = tail_min(h.k, alpha)
    heavy_cache: dict[int, bool] = {}

    def heavy(g: int) -> bool:
        v = heavy_cache.get(g)
        if v is None:
            v = heavy_cache[g] = max_color_count(tape, h.edges[g]) >= tmin
        return v

    nodes = [0]
    try:
        for f in bases(heavy):
            res = _search_base(h, tape, tmin, f, forbidden, target, heavy, stats, nodes)
            if res is not None:
                stats.found += 1
                return res
    except _BudgetExhausted:
        stats.exhausted += 1
        return None
    finally:
        stats.nodes += nodes[0]
    return None


def find_structure_containing(h: Hypergraph, tape: ColorTape, alpha: float, v: int,
                              frozen: Container[int] = frozenset(),
                              stats: SearchStats | None = None) -> Structure | None:
    """A structure whose vertex set contains ``v`` and avoids ``frozen``.

    Deterministic: bases are tried in ascending id order, and for each base
    the lexicographically first witness sequence is returned.
    """
    if v in frozen:
        return None

    def bases(heavy):
        incident = [g for g in h.incidence[v] if heavy(g)]
        out = set(incident)
        for g in incident:
            out.update(b for b in h.neighbors(g) if heavy(b))
        return sorted(out)

    return _run_search(h, tape, alpha, bases, frozen, {v}, stats)


def find_structure_near(h: Hypergraph, tape: ColorTape, alpha: float,
                        comp: Container[int] | Iterable[int],
                        frozen: Container[int] = frozenset(),
                        stats: SearchStats | None = None) -> Structure | None:
    """A structure disjoint from ``comp`` and ``frozen`` that some edge links to ``comp``."""
    comp_set = comp if isinstance(comp, (set, frozenset)) else set(comp)
    if not comp_set:
        return None
    ring: set[int] = set()
    for e in h.edges_touching(comp_set):
        ring.update(h.edges[e])
    ring -= comp_set
    if not ring:
        return None
    forbidden = _Either(frozen, comp_set)

    def bases(heavy):
        first = [g for g in h.edges_touching(ring)
                 if heavy(g) and _disjoint(h.edges[g], forbidden)]
        out = set(first)
        for g in first:
            out.update(b for b in h.neighbors(g) if heavy(b))
        return sorted(out)

    return _run_search(h, tape, alpha, bases, forbidden, ring, stats)


def find_mono_tail(h: Hypergraph, tape: ColorTape, alpha: float,
                   comp: Container[int] | Iterable[int]) -> int | None:
    """Lowest-id edge ``f`` meeting ``comp`` whose part outside ``comp`` is
    initially monochromatic with at least ``(1-alpha)k`` vertices.

    With an empty ``comp`` every edge is a candidate.
    """
    comp_set = comp if isinstance(comp, (set, frozenset)) else set(comp)
    tmin = tail_min(h.k, alpha)
    candidates = sorted(h.edges_touching(comp_set)) if comp_set else range(h.m)
    for f in candidates:
        outside = [u for u in h.edges[f] if u not in comp_set]
        if len(outside) >= tmin and is_monochromatic(tape, outside):
            return f
    return None
