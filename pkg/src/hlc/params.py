"""Thresholds, probability bounds and degree conditions.

All probabilities and inequality sides are carried as base-2 logarithms so
nothing under- or overflows for edge sizes far beyond what is colorable in
practice. ``log`` of an edge count always means ``log2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import bisect

LOG2E = math.log2(math.e)
_EPS = 1e-9

THRESHOLD_NAMES = ("alpha_A", "alpha_B", "alpha_star", "alpha_0")


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy is defined on [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


_EQUATIONS = {
    "alpha_A": lambda a: a - (1.0 - binary_entropy(a)) / 3.0,
    "alpha_B": lambda a: a - (1.0 - binary_entropy(a)) / 2.0,
    "alpha_star": lambda a: a - (1.0 - binary_entropy(a)),
    "alpha_0": lambda a: (1.0 - a) / 2.0 - (1.0 - binary_entropy(a)),
}


def threshold_residual(which: str, alpha: float) -> float:
    return _EQUATIONS[which](alpha)


def solve_threshold(which: str) -> float:
    """Root in (0, 1/2) of one of the four threshold equations.

    Each difference is negative near 0 and positive at 1/2 and crosses
    zero once, so plain bisection on that bracket converges.
    """
    try:
        g = _EQUATIONS[which]
    except KeyError:
        raise ValueError(f"unknown threshold {which!r}; expected one of {THRESHOLD_NAMES}") from None
    return bisect(g, 1e-12, 0.5, xtol=1e-13, maxiter=200)


def _log2_or_neg_inf(x: float) -> float:
    return math.log2(x) if x > 0 else -math.inf


def check_degree_condition(k: int, delta: int, alpha: float) -> bool:
    """``2e(delta+1) < 2^(alpha*k)``, compared in log domain."""
    return math.log(2.0) * alpha * k > math.log(2.0 * math.e * (delta + 1))


@dataclass(frozen=True)
class SecondaryConditions:
    alon: bool      # 4e * delta^3 < 2^((1-H(alpha))k)
    remark: bool    # 4e * delta^2 < 2^((1-H(alpha))k)
    main: bool      # 24e * delta  < 2^((1-H(alpha))k)


def check_secondary_conditions(k: int, delta: int, alpha: float) -> SecondaryConditions:
    rhs = (1.0 - binary_entropy(alpha)) * k
    ld = _log2_or_neg_inf(delta)
    return SecondaryConditions(
        alon=math.log2(4 * math.e) + 3 * ld < rhs,
        remark=math.log2(4 * math.e) + 2 * ld < rhs,
        main=math.log2(24 * math.e) + ld < rhs,
    )


@dataclass(frozen=True)
class ProbBounds:
    """log2 of the per-node event bounds for M and W nodes and of their
    combination ``q = max(P_W, sqrt(P_M))``; each clamped at 0 (probability 1)."""

    p_m: float
    p_w: float
    q: float


def prob_bounds(k: int, alpha: float) -> ProbBounds:
    if k < 1 or not 0.0 < alpha < 1.0:
        raise ValueError(f"need k >= 1 and 0 < alpha < 1 (k={k}, alpha={alpha})")
    p_m = min(0.0, 1.0 - (1.0 - alpha) * k)
    p_w = min(0.0, 1.0 - (1.0 - binary_entropy(alpha)) * k)
    return ProbBounds(p_m=p_m, p_w=p_w, q=max(p_w, p_m / 2.0))


def witness_condition(delta: int, k: int, alpha: float) -> bool:
    """``6e * delta * q < 1/2``."""
    q = prob_bounds(k, alpha).q
    return _log2_or_neg_inf(6 * math.e * delta) + q < -1.0


def comp_bound(k: int, m: int) -> int:
    """Component size cap ``ceil(2k log2 m)``.

    A component above this size was grown by at least ``2 log2 m``
    extending edges, since each edge adds at most ``k`` vertices.
    """
    if m < 2:
        raise ValueError(f"comp_bound needs m >= 2, got {m}")
    return math.ceil(2 * k * math.log2(m) - _EPS)


def trial_budget(m: int) -> int:
    return max(1, math.ceil(2 * math.log2(max(m, 1)) - _EPS))


def agi_feasible(k: int, d: int, c_exponent: float) -> bool:
    """``(kd)^(C+1) < e^-1 * 2^(k-1)``."""
    if c_exponent <= 1:
        raise ValueError("c_exponent must exceed 1")
    return (c_exponent + 1) * math.log2(k * d) < (k - 1) - LOG2E


def max_delta(k: int, alpha: float) -> int:
    """Largest delta passing :func:`check_degree_condition`, or -1 if none does."""
    x = alpha * k - math.log2(2 * math.e)
    if x > 30:
        raise OverflowError("degree bound too large for exact search")
    d = math.ceil(2.0**x) - 2
    while d >= 0 and not check_degree_condition(k, d, alpha):
        d -= 1
    while check_degree_condition(k, d + 1, alpha):
        d += 1
    return max(d, -1)


def degree_implies_witness(k: int, alpha: float) -> bool:
    """Whether every delta allowed by the degree condition also satisfies
    the witness-tree condition (witness_condition is monotone in delta)."""
    x = alpha * k - math.log2(2 * math.e)
    if x <= 30:
        d = max_delta(k, alpha)
        return d < 0 or witness_condition(d, k, alpha)
    # allowed deltas are below 2^x; log2(delta) = x is the worst case
    return math.log2(6 * math.e) + x + prob_bounds(k, alpha).q < -1.0


def tail_min(k: int, alpha: float) -> int:
    """Smallest integer count that is at least ``(1-alpha)k``."""
    return math.ceil((1.0 - alpha) * k - _EPS)


def bad_min(k: int, alpha: float) -> int:
    """Smallest integer count strictly above ``(1-alpha)k``."""
    return math.floor((1.0 - alpha) * k + _EPS) + 1


def trim_min(k: int, alpha: float) -> int:
    """Smallest integer count that is at least ``alpha*k``."""
    return math.ceil(alpha * k - _EPS)


DEFAULT_NODE_BUDGET = 100_000

_comp_bound = comp_bound
_trial_budget = trial_budget


@dataclass(frozen=True)
class Params:
    """Run parameters for one instance.

    ``comp_bound`` and ``trial_budget`` default to ``ceil(2k log2 m)`` and
    ``ceil(2 log2 m)``; ``node_budget`` caps backtracking per structure search.
    """

    k: int
    alpha: float
    n: int
    m: int
    delta: int
    comp_bound: int
    trial_budget: int
    node_budget: int = DEFAULT_NODE_BUDGET

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.alpha * self.k < 1.0 - _EPS:
            raise ValueError(f"alpha*k must be at least 1 (alpha={self.alpha}, k={self.k})")
        if self.comp_bound < self.k:
            raise ValueError(f"comp_bound must be >= k, got {self.comp_bound}")
        if self.trial_budget < 1:
            raise ValueError("trial_budget must be >= 1")

    @classmethod
    def for_hypergraph(cls, h, alpha: float, *, comp_bound: int | None = None,
                       trial_budget: int | None = None,
                       node_budget: int = DEFAULT_NODE_BUDGET) -> "Params":
        m_eff = max(h.m, 2)
        return cls(
            k=h.k,
            alpha=alpha,
            n=h.n,
            m=h.m,
            delta=h.delta,
            comp_bound=comp_bound if comp_bound is not None else _comp_bound(h.k, m_eff),
            trial_budget=trial_budget if trial_budget is not None else _trial_budget(h.m),
            node_budget=node_budget,
        )

    @property
    def log2_p(self) -> float:
        return -float(self.k)

    @property
    def tail_min(self) -> int:
        return tail_min(self.k, self.alpha)

    @property
    def bad_min(self) -> int:
        return bad_min(self.k, self.alpha)

    @property
    def trim_min(self) -> int:
        return trim_min(self.k, self.alpha)


def params_report(k: int, alpha: float, delta: int | None = None, m: int | None = None) -> dict:
    """Every threshold, bound and condition verdict as a flat JSON-able dict."""
    pb = prob_bounds(k, alpha)
    report = {name: solve_threshold(name) for name in THRESHOLD_NAMES}
    report.update(log2_pm=pb.p_m, log2_pw=pb.p_w, log2_q=pb.q)
    if delta is None:
        report.update(cond_theorem2=None, cond_alon=None, cond_remark=None,
                      cond_main=None, cond_witness=None)
    else:
        sc = check_secondary_conditions(k, delta, alpha)
        report.update(
            cond_theorem2=check_degree_condition(k, delta, alpha),
            cond_alon=sc.alon,
            cond_remark=sc.remark,
            cond_main=sc.main,
            cond_witness=witness_condition(delta, k, alpha),
        )
    report["comp_bound"] = comp_bound(k, m) if m is not None and m >= 2 else None
    return report


def witness_implication_k0(alpha: float, k_max: int = 1 << 16) -> int | None:
    """Smallest power-of-two ``k`` from 64 up to ``k_max`` at which
    :func:`degree_implies_witness` holds, or ``None`` if it never does."""
    k = 64
    while k <= k_max:
        if degree_implies_witness(k, alpha):
            return k
        k *= 2
    return None
