"""Run statistics record shared by the engine, the CLI and the bench harness."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from importlib import resources

import numpy as np


def _histogram(values) -> dict[str, int]:
    out: dict[int, int] = {}
    for v in values:
        out[v] = out.get(v, 0) + 1
    return {str(k): out[k] for k in sorted(out)}


def latency_quantiles(samples_ns) -> dict[str, float]:
    """p50/p90/p99 of per-query latencies, in microseconds."""
    if len(samples_ns) == 0:
        return {"p50_us": 0.0, "p90_us": 0.0, "p99_us": 0.0}
    q = np.percentile(np.asarray(samples_ns, dtype=np.float64) / 1e3, [50, 90, 99])
    return {"p50_us": float(q[0]), "p90_us": float(q[1]), "p99_us": float(q[2])}


@dataclass
class RunStats:
    n: int
    m: int
    k: int
    delta: int
    alpha: float
    seed: int
    comp_bound: int
    trial_budget: int
    algo: str = "lca"
    success: bool = True
    failure: dict | None = None
    num_queries: int = 0
    num_bad_edges: int = 0
    num_structures_found: int = 0
    num_search_budget_exhausted: int = 0
    num_components: int = 0
    component_size_histogram: dict[str, int] = field(default_factory=dict)
    resample_trials_histogram: dict[str, int] = field(default_factory=dict)
    resample_steps_total: int = 0
    random_bits_consumed: int = 0
    invariant_violations: int = 0
    timing: dict[str, float] = field(default_factory=dict)

    @staticmethod
    def histogram(values) -> dict[str, int]:
        return _histogram(values)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def stats_schema() -> dict:
    text = resources.files("hlc").joinpath("schemas/run_stats.schema.json").read_text(encoding="utf-8")
    return json.loads(text)
