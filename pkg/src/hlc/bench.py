"""Per-query latency sweeps over generated instance families."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from .engine import query_order, run_complete
from .hypergraph import generate_bounded_degree
from .params import Params
from .randomness import ColorTape
from .verify import is_proper_coloring

__all__ = ["Family", "bench", "run_one", "series"]


@dataclass(frozen=True)
class Family:
    ns: tuple[int, ...]
    k: int = 48
    d: int = 4
    alpha: float = 0.22
    order: str = "random"
    instance_seed_offset: int = 0


def bench(family: Family, seeds: Sequence[int], debug: bool = False) -> Iterator[dict]:
    """One stats record per ``(n, seed)``; failures are recorded, never raised.

    The instance for ``(n, seed)`` is generated from ``seed + offset`` and
    colored with a tape seeded by ``seed``. Each record holds the run's
    ``stats`` and ``proper``, the verifier verdict (``None`` on failure).
    """
    for n in family.ns:
        for seed in seeds:
            yield run_one(n, family, seed, debug)


def run_one(n: int, family: Family, seed: int, debug: bool = False) -> dict:
    h = generate_bounded_degree(n, family.k, family.d, seed + family.instance_seed_offset)
    params = Params.for_hypergraph(h, family.alpha)
    res = run_complete(h, ColorTape(seed, h.n), params, query_order(h.n, seed, family.order), debug)
    proper = is_proper_coloring(h, res.coloring)[0] if res.coloring is not None else None
    return {"proper": proper, "stats": res.stats.to_dict()}


def series(family: Family, seeds: Iterable[int], debug: bool = False) -> list[dict]:
    return list(bench(family, list(seeds), debug))
