"""k-uniform hypergraphs: representation, text format, neighborhoods, generators."""

from __future__ import annotations

import random
from collections.abc import Iterable, Sequence

__all__ = [
    "Hypergraph",
    "HypergraphFormatError",
    "InfeasibleParameters",
    "parse",
    "serialize",
    "read_hypergraph",
    "write_hypergraph",
    "neighbors",
    "generate_bounded_degree",
]


class HypergraphFormatError(ValueError):
    """Raised for malformed or invalid hypergraph input.

    ``kind`` is a short machine-readable tag, ``line`` the 1-based line
    number the problem was detected on (``None`` when not line-specific).
    """

    def __init__(self, kind: str, message: str, line: int | None = None):
        self.kind = kind
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{kind}: {message}")


class InfeasibleParameters(ValueError):
    pass


class Hypergraph:
    """Immutable k-uniform hypergraph with a vertex -> incident-edges index.

    Vertices are ``0..n-1``, edges ``0..m-1``; each edge is stored as a
    sorted tuple. ``delta`` is the maximum edge degree, i.e. the largest
    number of other edges meeting a single edge.
    """

    __slots__ = ("n", "m", "k", "edges", "incidence", "delta", "_edge_sets", "_nbr_cache")

    def __init__(self, n: int, edges: Iterable[Iterable[int]]):
        edge_list = [tuple(sorted(e)) for e in edges]
        if not edge_list:
            raise HypergraphFormatError("empty", "hypergraph has no edges")
        k = len(edge_list[0])
        seen: dict[tuple[int, ...], int] = {}
        incidence: list[list[int]] = [[] for _ in range(n)]
        for i, e in enumerate(edge_list):
            if len(e) != k:
                raise HypergraphFormatError("non-uniform", f"edge {i} has {len(e)} vertices, expected {k}")
            if len(set(e)) != k:
                raise HypergraphFormatError("duplicate-vertex", f"edge {i} repeats a vertex")
            if e[0] < 0 or e[-1] >= n:
                raise HypergraphFormatError("vertex-out-of-range", f"edge {i} has a vertex outside [0, {n})")
            if e in seen:
                raise HypergraphFormatError("duplicate-edge", f"edge {i} repeats edge {seen[e]}")
            seen[e] = i
            for v in e:
                incidence[v].append(i)
        for v, inc in enumerate(incidence):
            if not inc:
                raise HypergraphFormatError("isolated-vertex", f"vertex {v} lies in no edge")

        self.n = n
        self.m = len(edge_list)
        self.k = k
        self.edges: tuple[tuple[int, ...], ...] = tuple(edge_list)
        self.incidence: tuple[tuple[int, ...], ...] = tuple(tuple(inc) for inc in incidence)
        self._edge_sets = tuple(frozenset(e) for e in edge_list)
        self._nbr_cache: dict[int, frozenset[int]] = {}
        self.delta = max(len(self._compute_neighbors(f)) for f in range(self.m))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, m={self.m}, k={self.k}, delta={self.delta})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    @property
    def vertices(self) -> range:
        return range(self.n)

    def edge_set(self, f: int) -> frozenset[int]:
        return self._edge_sets[f]

    def _compute_neighbors(self, f: int) -> set[int]:
        out: set[int] = set()
        for v in self.edges[f]:
            out.update(self.incidence[v])
        out.discard(f)
        return out

    def neighbors(self, f: int) -> frozenset[int]:
        """Edges sharing at least one vertex with ``f``, excluding ``f``."""
        cached = self._nbr_cache.get(f)
        if cached is None:
            cached = frozenset(self._compute_neighbors(f))
            self._nbr_cache[f] = cached
        return cached

    def edges_touching(self, vertices: Iterable[int]) -> set[int]:
        out: set[int] = set()
        for v in vertices:
            out.update(self.incidence[v])
        return out


def neighbors(h: Hypergraph, f: int) -> frozenset[int]:
    return h.neighbors(f)


def _ints(tokens: Sequence[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise HypergraphFormatError("malformed", f"non-integer token in {' '.join(tokens)!r}", lineno) from None


def parse(text: str) -> Hypergraph:
    """Parse the ``p khyp <n> <m> <k>`` text format.

    Comment lines start with ``c``; each edge line is ``e v1 ... vk`` with
    0-based vertex ids.
    """
    header: tuple[int, int, int] | None = None
    header_line = 0
    edges: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], int] = {}
    incident_seen: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if header is not None:
                raise HypergraphFormatError("malformed-header", "duplicate header", lineno)
            if len(parts) != 5 or parts[1] != "khyp":
                raise HypergraphFormatError("malformed-header", "expected 'p khyp <n> <m> <k>'", lineno)
            n, m, k = _ints(parts[2:], lineno)
            if n < 1 or m < 1 or k < 1:
                raise HypergraphFormatError("malformed-header", "n, m, k must be positive", lineno)
            header = (n, m, k)
            header_line = lineno
        elif tag == "e":
            if header is None:
                raise HypergraphFormatError("malformed-header", "edge line before header", lineno)
            n, m, k = header
            vs = _ints(parts[1:], lineno)
            if len(vs) != k:
                raise HypergraphFormatError("non-uniform", f"edge has {len(vs)} vertices, expected {k}", lineno)
            if any(v < 0 or v >= n for v in vs):
                raise HypergraphFormatError("vertex-out-of-range", f"vertex id outside [0, {n})", lineno)
            if len(set(vs)) != k:
                raise HypergraphFormatError("duplicate-vertex", "edge repeats a vertex", lineno)
            e = tuple(sorted(vs))
            if e in seen:
                raise HypergraphFormatError("duplicate-edge", f"same vertex set as line {seen[e]}", lineno)
            if len(edges) == m:
                raise HypergraphFormatError("edge-count", f"more than {m} edge lines", lineno)
            seen[e] = lineno
            edges.append(e)
            incident_seen.update(e)
        else:
            raise HypergraphFormatError("malformed", f"unknown line tag {tag!r}", lineno)
    if header is None:
        raise HypergraphFormatError("malformed-header", "missing header")
    n, m, _ = header
    if len(edges) != m:
        raise HypergraphFormatError("edge-count", f"header declares {m} edges, found {len(edges)}", header_line)
    if len(incident_seen) != n:
        isolated = min(set(range(n)) - incident_seen)
        raise HypergraphFormatError("isolated-vertex", f"vertex {isolated} lies in no edge", header_line)
    return Hypergraph(n, edges)


def serialize(h: Hypergraph, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p khyp {h.n} {h.m} {h.k}")
    lines.extend("e " + " ".join(map(str, e)) for e in h.edges)
    return "\n".join(lines) + "\n"


def read_hypergraph(path) -> Hypergraph:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write_hypergraph(h: Hypergraph, path, comments: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize(h, comments))


def generate_bounded_degree(n: int, k: int, d: int, seed: int) -> Hypergraph:
    """Random k-uniform hypergraph in which every vertex lies in 1..d edges.

    Heuristic: each vertex gets ``d`` slots, the slots are shuffled and cut
    greedily into k-sets (a slot whose vertex is already in the edge being
    filled is deferred to a later edge), then vertices left uncovered are
    packed into extra edges padded with vertices that still have spare
    capacity, or swapped into an existing edge in place of a vertex that
    is covered twice. Edge degree is therefore at most ``k*(d-1)``; the achieved
    value is ``h.delta``.
    """
    if k < 1 or n < k:
        raise InfeasibleParameters(f"need n >= k >= 1 (n={n}, k={k})")
    if d < 1 or n * d < k:
        raise InfeasibleParameters(f"need d >= 1 and n*d >= k (n={n}, k={k}, d={d})")
    rng = random.Random(seed)
    slots = [v for v in range(n) for _ in range(d)]
    rng.shuffle(slots)

    degree = [0] * n
    edges: list[tuple[int, ...]] = []
    edge_index: set[tuple[int, ...]] = set()

    def commit(vs: Iterable[int]) -> bool:
        e = tuple(sorted(vs))
        if e in edge_index:
            return False
        edge_index.add(e)
        edges.append(e)
        for v in e:
            degree[v] += 1
        return True

    current: list[int] = []
    members: set[int] = set()
    deferred: list[int] = []
    for v in slots:
        if v in members:
            deferred.append(v)
            continue
        current.append(v)
        members.add(v)
        if len(current) == k:
            commit(current)
            current, members = [], set()
            # retry deferred slots now that a fresh edge is open
            pending, deferred = deferred, []
            for u in pending:
                if u in members:
                    deferred.append(u)
                else:
                    current.append(u)
                    members.add(u)
                    if len(current) == k:
                        commit(current)
                        current, members = [], set()

    def swap_in(v: int) -> bool:
        # move v into an existing edge in place of a vertex covered elsewhere
        order = list(range(len(edges)))
        rng.shuffle(order)
        for i in order:
            e = edges[i]
            for u in e:
                if degree[u] < 2:
                    continue
                repl = tuple(sorted((set(e) - {u}) | {v}))
                if repl in edge_index:
                    continue
                edge_index.discard(e)
                edge_index.add(repl)
                edges[i] = repl
                degree[u] -= 1
                degree[v] += 1
                return True
        return False

    # repair: cover every vertex that ended up in no edge
    while True:
        uncovered = [v for v in range(n) if degree[v] == 0]
        if not uncovered:
            break
        group = uncovered[:k]
        chosen = set(group)
        spare = [v for v in range(n) if v not in chosen and degree[v] < d]
        need = k - len(group)
        placed = False
        if len(spare) >= need:
            for _ in range(8):
                if commit(group + rng.sample(spare, need)):
                    placed = True
                    break
        if not placed and not swap_in(group[0]):
            raise InfeasibleParameters(
                f"cannot cover all vertices with degree <= {d} (n={n}, k={k})"
            )
    return Hypergraph(n, edges)
