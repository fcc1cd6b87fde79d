"""Witness trees for components: construction, properness, events, bounds.

A witness tree has one node per edge that grew a component (labelled ``W``
for witnessing edges and ``M`` for mono-tails/base edges) plus ``J`` nodes
that only glue subtrees together. Out-edges are fixed when a node is
inserted, so a node's depth (longest directed path to a root) never
changes afterwards.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

from scipy.cluster.hierarchy import DisjointSet

from .hypergraph import Hypergraph
from .params import ProbBounds, Params, tail_min
from .randomness import ColorTape
from .structures import Role, is_monochromatic, max_color_count

__all__ = [
    "WitnessNode",
    "WitnessTree",
    "WitnessConstructionError",
    "ProperReport",
    "EventBound",
    "build_witness_forest",
    "join_forest",
    "witness_tree_for_trace",
    "w_sets",
    "is_proper",
    "event_holds",
    "event_prob_bound",
    "count_rooted_subtrees",
    "count_rooted_subtrees_dp",
    "union_bound_failure",
]

M, W, J = "M", "W", "J"


class WitnessConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class WitnessNode:
    edge: int
    label: str
    out_edges: tuple[int, ...] = ()


@dataclass
class WitnessTree:
    nodes: list[WitnessNode] = field(default_factory=list)
    depth: list[int] = field(default_factory=list)

    def add(self, edge: int, label: str, out_edges: Sequence[int] = ()) -> int:
        out = tuple(out_edges)
        if any(t >= len(self.nodes) for t in out):
            raise WitnessConstructionError("out-edge to a node that does not exist yet")
        self.nodes.append(WitnessNode(edge, label, out))
        self.depth.append(1 + max(self.depth[t] for t in out) if out else 0)
        return len(self.nodes) - 1

    @property
    def size(self) -> int:
        return len(self.nodes)

    def count(self, label: str) -> int:
        return sum(1 for x in self.nodes if x.label == label)

    @property
    def n_m(self) -> int:
        return self.count(M)

    @property
    def n_w(self) -> int:
        return self.count(W)

    @property
    def n_j(self) -> int:
        return self.count(J)

    def roots(self) -> list[int]:
        return [i for i, x in enumerate(self.nodes) if not x.out_edges]

    def subcomponents(self) -> list[list[int]]:
        """Node sets of the connected pieces of the underlying undirected graph."""
        ds = DisjointSet(range(len(self.nodes)))
        for i, x in enumerate(self.nodes):
            for t in x.out_edges:
                ds.merge(i, t)
        return sorted((sorted(s) for s in ds.subsets()), key=lambda s: s[0])

    def is_connected(self) -> bool:
        return len(self.nodes) > 0 and len(self.subcomponents()) == 1

    def copy(self) -> "WitnessTree":
        return WitnessTree(list(self.nodes), list(self.depth))

    def to_dict(self) -> dict:
        return {
            "nodes": [
                {"id": i, "edge": x.edge, "label": x.label, "out": list(x.out_edges), "depth": self.depth[i]}
                for i, x in enumerate(self.nodes)
            ],
            "n_m": self.n_m,
            "n_w": self.n_w,
            "n_j": self.n_j,
        }


def _deepest(tree: WitnessTree, candidates: Sequence[int]) -> int:
    return min(candidates, key=lambda i: (-tree.depth[i], i))


def build_witness_forest(h: Hypergraph, trace: Sequence[tuple[int, Role]]) -> WitnessTree:
    """One node per trace entry, in order.

    A new node gets one out-edge into every existing subcomponent that holds
    a node whose edge meets the new edge, aimed at the deepest such node
    (lowest node id on ties). Nodes meeting nothing start a new subcomponent.
    """
    tree = WitnessTree()
    ds = DisjointSet()
    for edge, role in trace:
        fset = h.edge_set(edge)
        by_sub: dict[int, list[int]] = {}
        for i, x in enumerate(tree.nodes):
            if x.edge == edge or not fset.isdisjoint(h.edges[x.edge]):
                by_sub.setdefault(ds[i], []).append(i)
        targets = sorted(_deepest(tree, nodes) for nodes in by_sub.values())
        label = W if role is Role.WITNESS else M
        j = tree.add(edge, label, targets)
        ds.add(j)
        for t in targets:
            ds.merge(j, t)
    return tree


def join_forest(h: Hypergraph, forest: WitnessTree) -> WitnessTree:
    """Connect the forest with J nodes.

    While several subcomponents remain, the lowest-id edge of ``h`` meeting
    at least two of them becomes a J node with an out-edge to the deepest
    node it meets in each.
    """
    tree = forest.copy()
    while True:
        subs = tree.subcomponents()
        if len(subs) <= 1:
            return tree
        sub_of: dict[int, int] = {}
        for s_idx, nodes in enumerate(subs):
            for i in nodes:
                sub_of[i] = s_idx
        # vertex -> node ids whose edge contains it
        holders: dict[int, list[int]] = {}
        for i, x in enumerate(tree.nodes):
            for v in h.edges[x.edge]:
                holders.setdefault(v, []).append(i)
        chosen = None
        for f in sorted(h.edges_touching(holders)):
            met: dict[int, set[int]] = {}
            for v in h.edges[f]:
                for i in holders.get(v, ()):
                    met.setdefault(sub_of[i], set()).add(i)
            if len(met) >= 2:
                chosen = (f, met)
                break
        if chosen is None:
            raise WitnessConstructionError("no edge meets two subcomponents; trace is inconsistent")
        f, met = chosen
        targets = sorted(_deepest(tree, sorted(nodes)) for nodes in met.values())
        tree.add(f, J, targets)


def witness_tree_for_trace(h: Hypergraph, trace: Sequence[tuple[int, Role]]) -> WitnessTree:
    return join_forest(h, build_witness_forest(h, trace))


def w_sets(h: Hypergraph, tree: WitnessTree) -> dict[int, frozenset[int]]:
    """``w(x) = f_x`` minus every vertex of nodes strictly shallower than ``x``."""
    by_depth: dict[int, set[int]] = {}
    for i, x in enumerate(tree.nodes):
        by_depth.setdefault(tree.depth[i], set()).update(h.edges[x.edge])
    out: dict[int, frozenset[int]] = {}
    for i, x in enumerate(tree.nodes):
        if x.label == J:
            continue
        d = tree.depth[i]
        shallower: set[int] = set()
        for dd, vs in by_depth.items():
            if dd < d:
                shallower |= vs
        out[i] = frozenset(v for v in h.edges[x.edge] if v not in shallower)
    return out


@dataclass
class ProperReport:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def is_proper(h: Hypergraph, tape: ColorTape | None, alpha: float, t: WitnessTree) -> ProperReport:
    """Check the three properness conditions on a connected tree.

    ``tape`` is unused (properness is purely structural); it is accepted so
    the call mirrors :func:`event_holds`.
    """
    violations: list[str] = []
    if not t.is_connected():
        violations.append("tree is not connected")
    if not t.n_m > t.n_j:
        violations.append(f"N_M={t.n_m} does not exceed N_J={t.n_j}")
    by_depth: dict[int, list[int]] = {}
    for i, x in enumerate(t.nodes):
        if x.label != J:
            by_depth.setdefault(t.depth[i], []).append(i)
    for d, ids in by_depth.items():
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                x, y = t.nodes[ids[a]], t.nodes[ids[b]]
                if not h.edge_set(x.edge).isdisjoint(h.edges[y.edge]):
                    violations.append(f"nodes {ids[a]} and {ids[b]} at depth {d} share vertices")
    threshold = (1.0 - alpha) * h.k
    for i, w in w_sets(h, t).items():
        if not len(w) > threshold + 1e-9:
            violations.append(f"node {i}: |w| = {len(w)} is not above (1-alpha)k = {threshold:g}")
    return ProperReport(not violations, violations)


def event_holds(h: Hypergraph, tape: ColorTape, alpha: float, t: WitnessTree) -> bool:
    """M nodes: w(x) initially monochromatic; W nodes: w(x) has at least
    (1-alpha)k vertices of one initial color; J nodes are ignored."""
    tmin = tail_min(h.k, alpha)
    for i, w in w_sets(h, t).items():
        if t.nodes[i].label == M:
            if not is_monochromatic(tape, w):
                return False
        elif max_color_count(tape, w) < tmin:
            return False
    return True


@dataclass(frozen=True)
class EventBound:
    log2_product: float   # N_W * log2 P_W + N_M * log2 P_M
    log2_q_power: float   # u * log2 q


def event_prob_bound(t: WitnessTree, bounds: ProbBounds) -> EventBound:
    """Bounds on the probability of a proper tree's event.

    Checks ``P_W^N_W P_M^N_M <= q^(N_W + 2 N_M) <= q^u``; the second step
    relies on ``N_M > N_J``.
    """
    n_m, n_w, n_j = t.n_m, t.n_w, t.n_j
    if not n_m > n_j:
        raise ValueError("event bound needs a proper tree (N_M > N_J)")
    product = n_w * bounds.p_w + n_m * bounds.p_m
    chain = (n_w + 2 * n_m) * bounds.q
    q_power = t.size * bounds.q
    tol = 1e-9 * (1 + abs(q_power))
    if not (product <= chain + tol and chain <= q_power + tol):
        raise AssertionError(f"bound chain broken: {product} <= {chain} <= {q_power}")
    return EventBound(product, q_power)


def count_rooted_subtrees(delta: int, u: int) -> int:
    """Rooted subtrees with ``u`` nodes of the infinite tree in which every
    node has ``delta`` children: ``binom(delta*u, u) / ((delta-1)u + 1)``."""
    if delta < 2 or u < 1:
        raise ValueError("need delta >= 2 and u >= 1")
    num = math.comb(delta * u, u)
    den = (delta - 1) * u + 1
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError("closed form is not integral")
    return q


def count_rooted_subtrees_dp(delta: int, u: int) -> int:
    """Same count by direct enumeration: a root plus an independent, possibly
    empty, subtree hanging from each of its ``delta`` child slots."""
    if delta < 2 or u < 1:
        raise ValueError("need delta >= 2 and u >= 1")
    t = [0] * (u + 1)  # t[s]: subtrees of size s rooted at a fixed node
    for s in range(1, u + 1):
        # ways to spread s-1 nodes over delta slots; slot of size 0 means empty
        slot = [1] + t[1:s]
        ways = [1] + [0] * (s - 1)
        for _ in range(delta):
            nxt = [0] * s
            for a, wa in enumerate(ways):
                if wa:
                    for b in range(s - a):
                        if slot[b]:
                            nxt[a + b] += wa * slot[b]
            ways = nxt
        t[s] = ways[s - 1]
    return t[u]


def union_bound_failure(params: Params, bounds: ProbBounds) -> float:
    """log2 of ``2m (6 e delta q)^u`` with ``u = 2 log2 m``.

    This bounds the sum over tree sizes ``j >= u`` of ``m (6 e delta q)^j``
    and is only meaningful when ``6 e delta q <= 1/2``.
    """
    if params.delta == 0:
        return -math.inf
    ratio = math.log2(6 * math.e * params.delta) + bounds.q
    if ratio > -1.0 + 1e-9:
        raise ValueError(f"6e*delta*q = 2^{ratio:.4f} exceeds 1/2; the union bound is meaningless here")
    u = 2 * math.log2(params.m)
    return math.log2(2 * params.m) + u * ratio
