"""Ground-truth checks: properness, edge classes, exhaustive colorability."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .hypergraph import Hypergraph
from .params import trim_min

__all__ = [
    "AuditError",
    "is_proper_coloring",
    "classify_edges",
    "exhaustive_two_colorable",
    "read_coloring",
    "format_coloring",
]

ORACLE_MAX_N = 26
_CHUNK = 1 << 18


class AuditError(AssertionError):
    pass


def is_proper_coloring(h: Hypergraph, coloring: Sequence[int]) -> tuple[bool, list[int]]:
    """``(ok, violating_edge_ids)``; every edge must see both colors."""
    if len(coloring) != h.n or any(c not in (0, 1) for c in coloring):
        raise ValueError("coloring must assign 0/1 to every vertex")
    bad = []
    for i, e in enumerate(h.edges):
        first = coloring[e[0]]
        if all(coloring[v] == first for v in e):
            bad.append(i)
    return not bad, bad


def classify_edges(h: Hypergraph, components: Iterable[Iterable[int]], alpha: float) -> list[str]:
    """Label each edge ``E1`` (misses every component), ``E2`` (meets one
    in fewer than alpha*k vertices) or ``E3`` (meets one in at least alpha*k).

    Raises :class:`AuditError` if an edge meets two components.
    """
    owner: dict[int, int] = {}
    for ci, comp in enumerate(components):
        for v in comp:
            if v in owner:
                raise AuditError(f"vertex {v} lies in components {owner[v]} and {ci}")
            owner[v] = ci
    big = trim_min(h.k, alpha)
    labels = []
    for i, e in enumerate(h.edges):
        met: dict[int, int] = {}
        for v in e:
            c = owner.get(v)
            if c is not None:
                met[c] = met.get(c, 0) + 1
        if len(met) > 1:
            raise AuditError(f"edge {i} meets components {sorted(met)}")
        if not met:
            labels.append("E1")
        else:
            labels.append("E3" if next(iter(met.values())) >= big else "E2")
    return labels


def exhaustive_two_colorable(h: Hypergraph) -> list[int] | None:
    """Lexicographically first proper coloring (Red=0 < Blue=1, vertex 0
    most significant), or ``None`` if the hypergraph is not 2-colorable.

    Colorings are scanned as integers in chunks with numpy; vertex ``v`` is
    bit ``n-1-v``, so integer order is lexicographic order.
    """
    n = h.n
    if n > ORACLE_MAX_N:
        raise ValueError(f"oracle enumerates 2^n colorings; n={n} exceeds {ORACLE_MAX_N}")
    masks = np.array([sum(1 << (n - 1 - v) for v in e) for e in h.edges], dtype=np.int64)
    total = 1 << n
    for start in range(0, total, _CHUNK):
        x = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        ok = np.ones(x.shape, dtype=bool)
        for mk in masks:
            part = x & mk
            ok &= (part != 0) & (part != mk)
        hit = np.flatnonzero(ok)
        if hit.size:
            value = int(x[hit[0]])
            return [(value >> (n - 1 - v)) & 1 for v in range(n)]
    return None


def format_coloring(coloring: Sequence[int]) -> str:
    return "".join("RB"[c] + "\n" for c in coloring)


def read_coloring(text: str, n: int | None = None) -> list[int]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s:
            continue
        if s not in ("R", "B"):
            raise ValueError(f"line {lineno}: expected R or B, got {s!r}")
        out.append(0 if s == "R" else 1)
    if n is not None and len(out) != n:
        raise ValueError(f"coloring has {len(out)} entries, hypergraph has {n} vertices")
    return out
