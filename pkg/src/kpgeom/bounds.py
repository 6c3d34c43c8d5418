"""Closed-form bounds and thresholds for uniform contractions, and numeric
replays of the inequalities that chain them together."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .measures import ball_intrinsic, kappa, sigma_exact

SQRT2 = math.sqrt(2.0)
SLACK = 1e-12


@dataclass(frozen=True)
class BoundReport:
    name: str
    inputs: dict
    value: float
    applicable: bool
    notes: str = ""


def nth_root(n: int, d: int) -> float:
    """``n ** (1/d)``, exact when ``n`` is a perfect ``d``-th power."""
    if n <= 0:
        raise ValueError("N must be positive")
    r = round(math.exp(math.log(n) / d))
    for cand in (r - 1, r, r + 1):
        if cand > 0 and cand**d == n:
            return float(cand)
    return math.exp(math.log(n) / d)


def jung_factor(d: int) -> float:
    return math.sqrt(2.0 * d / (d + 1.0))


def _check_dk(d: int, k: int):
    if d < 1:
        raise ValueError("dimension must be positive")
    if not 1 <= k <= d:
        raise ValueError(f"order k={k} out of range 1..{d}")


def f_lower(d: int, k: int, lam: float) -> BoundReport:
    """Jung's lower bound on the least ``V_k`` of ``B[q]`` over sets of diameter at most ``lam``."""
    _check_dk(d, k)
    base = 1.0 - jung_factor(d) * lam / 2.0
    ok = 0.0 < lam <= SQRT2 + SLACK
    value = base**k * ball_intrinsic(d, k)
    notes = "" if ok else "lambda outside (0, sqrt 2]"
    return BoundReport("f_lower", {"d": d, "k": k, "lambda": lam}, value, ok, notes)


def g_upper(d: int, k: int, n: int, lam: float) -> BoundReport:
    """Upper bound on the largest ``V_k`` of ``B[p]`` over ``lam``-separated sets of size ``n``."""
    _check_dk(d, k)
    base = 1.0 - (nth_root(n, d) - 1.0) * lam / 2.0
    ok = 0.0 < lam <= SQRT2 + SLACK
    value = max(0.0, base) ** k * ball_intrinsic(d, k)
    notes = "" if ok else "lambda outside (0, sqrt 2]"
    return BoundReport("g_upper", {"d": d, "k": k, "N": n, "lambda": lam}, value, ok, notes)


def packing_forces_empty(d: int, n: int, lam: float) -> bool:
    """``N (lam/2)^d >= (1 + lam/2)^d``: any ``lam``-separated ``N``-set has
    circumradius at least 1."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    # compare d-th roots to keep large d finite
    return nth_root(n, d) * (lam / 2.0) >= (1.0 + lam / 2.0) * (1.0 - SLACK)


@dataclass(frozen=True)
class IntersectionThresholds:
    main: float
    part_a: float
    part_b: float
    part_b_applicable: bool

    @property
    def best(self) -> float:
        cands = [self.part_a] + ([self.part_b] if self.part_b_applicable else [])
        return min(cands)


def intersection_thresholds(d: int, lam: float) -> IntersectionThresholds:
    if d < 1 or lam <= 0:
        raise ValueError("need d >= 1 and lambda > 0")
    return IntersectionThresholds(
        main=(1.0 + SQRT2) ** d,
        part_a=(1.0 + 2.0 / lam) ** d,
        part_b=(1.0 + jung_factor(d)) ** d,
        part_b_applicable=lam <= SQRT2 + SLACK,
    )


@dataclass(frozen=True)
class UnionThresholds:
    main: float
    part_a: float
    part_a_applicable: bool
    part_b: tuple[float, float]
    part_b_applicable: bool
    part_c_lambda_cap: float
    part_c_n: float
    part_c_applicable: bool
    trivial: bool
    notes: list = field(default_factory=list)


def union_thresholds(d: int, lam: float, sigma: float | None = None, sigma_err: float = 0.0) -> UnionThresholds:
    """All union-side thresholds.  ``sigma`` defaults to the closed form for
    ``d <= 2``; for larger ``d`` pass an estimate and its standard error, and
    ``part_b`` comes back as an interval."""
    if d < 1 or lam <= 0:
        raise ValueError("need d >= 1 and lambda > 0")
    if sigma is None:
        sigma = sigma_exact(d)
        if sigma is None:
            raise ValueError(f"sigma_{d} has no closed form here; pass an estimate")
    base_b = (1.0 + 2.0 / lam) ** d
    part_b = (base_b * (sigma - sigma_err), base_b * (sigma + sigma_err))
    trivial = lam >= 2.0
    return UnionThresholds(
        main=(1.0 + 2.0 * d**3) ** d,
        part_a=(1.0 + lam / 2.0) ** d * (d + 2) / 2.0,
        part_a_applicable=SQRT2 - SLACK <= lam < 2.0,
        part_b=part_b,
        part_b_applicable=lam < SQRT2,
        part_c_lambda_cap=1.0 / d**3,
        part_c_n=(2.0 * d * d + 1.0) ** d,
        part_c_applicable=lam < 1.0 / d**3,
        trivial=trivial,
        notes=["lambda >= 2: the union inequality holds trivially"] if trivial else [],
    )


def isodiametric_union_upper(d: int, lam: float) -> float:
    """Volume bound ``(1 + lam/2)^d kappa_d`` for a union of unit balls whose
    centers have diameter at most ``lam``."""
    if not 0.0 <= lam < 2.0:
        raise ValueError("lambda must lie in [0, 2)")
    return (1.0 + lam / 2.0) ** d * kappa(d)


@dataclass(frozen=True)
class ReplayReport:
    name: str
    checked: int
    asserted: int
    min_margin: float
    ok: bool
    details: list = field(default_factory=list)


def replay_intersection_proof(d: int, k: int, n: int, lam: float) -> ReplayReport:
    """Compare the lower bound on ``f_k`` with the upper bound on ``g_k``.

    The comparison is asserted only when ``N^(1/d) - 1 >= sqrt(2d/(d+1))``.
    """
    f = f_lower(d, k, lam)
    g = g_upper(d, k, n, lam)
    margin = f.value - g.value
    applies = f.applicable and nth_root(n, d) - 1.0 >= jung_factor(d) - SLACK
    ok = (not applies) or margin >= -SLACK
    return ReplayReport("intersection_proof", 1, int(applies), margin, ok, [(d, k, n, lam, margin, applies)])


def replay_intersection_grid(dims=range(2, 11), steps: int = 50) -> ReplayReport:
    """Grid replay with ``N = ceil`` of the part-(b) threshold."""
    rows = []
    asserted = 0
    worst = math.inf
    ok = True
    for d in dims:
        n = math.ceil((1.0 + jung_factor(d)) ** d - SLACK)
        for k in sorted({1, d}):
            for lam in np.linspace(SQRT2 / steps, SQRT2, steps):
                r = replay_intersection_proof(d, k, n, float(lam))
                asserted += r.asserted
                worst = min(worst, r.min_margin)
                ok &= r.ok
                rows.extend(r.details)
    return ReplayReport("intersection_proof_grid", len(rows), asserted, worst, ok, rows)


def union_case1_margin(d: int, lam: float) -> float:
    """``1 + 2 d lam exp(-d^5 lam^2) - (1 + lam/2)^d``."""
    return 1.0 + 2.0 * d * lam * math.exp(-(d**5) * lam * lam) - (1.0 + lam / 2.0) ** d


def union_case2_constant(d: int) -> float:
    """``2 (1 - (1 - 1/d)^((d-1)/2) / sqrt(pi))``, to be compared with 1.1."""
    return 2.0 * (1.0 - (1.0 - 1.0 / d) ** ((d - 1) / 2.0) / math.sqrt(math.pi))


def replay_union_case_c(d: int, lam: float | None = None, grid: int = 2000) -> ReplayReport:
    """Check the two-ball estimates behind part (c) on ``(0, 1/d^3]``.

    With ``lam`` given only that value is checked for case 1.
    """
    if d < 2:
        raise ValueError("case (c) replay needs d >= 2")
    cap = 1.0 / d**3
    lams = [lam] if lam is not None else list(np.linspace(cap / grid, cap, grid))
    margins = [union_case1_margin(d, float(x)) for x in lams]
    c2 = union_case2_constant(d) - 1.1
    worst = min(min(margins), c2)
    ok = all(m >= 0 for m in margins) and c2 >= 0
    return ReplayReport(
        "union_case_c", len(lams) + 1, len(lams) + 1, worst, ok,
        [("case1_min", min(margins)), ("case2_margin", c2)],
    )


def in_scope_lambda(lam: float) -> bool:
    return 0.0 < lam <= 2.0


def theorem_hypotheses(theorem: str, d: int, n: int, lam: float, sigma: float | None = None) -> bool:
    """Whether ``(d, N, lam)`` satisfies the hypotheses of a named result.

    ``T4``/``T7a``/``T7b`` concern intersections, ``T5``/``T8a``/``T8b``/``T8c``
    unions, ``T6`` strong contractions (always in scope).
    """
    t = theorem.upper()
    if t == "T6":
        return True
    if t == "P3":
        return False
    if not in_scope_lambda(lam):
        return False
    if t in ("T4", "T7A", "T7B"):
        th = intersection_thresholds(d, lam)
        if t == "T4":
            return n >= th.main * (1 - SLACK)
        if t == "T7A":
            return n >= th.part_a * (1 - SLACK)
        return th.part_b_applicable and n >= th.part_b * (1 - SLACK)
    if t in ("T5", "T8A", "T8B", "T8C"):
        if lam >= 2.0:
            return True
        if t == "T5":
            return n >= (1.0 + 2.0 * d**3) ** d * (1 - SLACK)
        if t == "T8A":
            ut = union_thresholds(d, lam, sigma=sigma if sigma is not None else 1.0)
            return ut.part_a_applicable and n >= ut.part_a * (1 - SLACK)
        if t == "T8B":
            if lam >= SQRT2:
                return False
            s = sigma if sigma is not None else sigma_exact(d)
            if s is None:
                return False
            return n >= (1.0 + 2.0 / lam) ** d * s * (1 - SLACK)
        return lam < 1.0 / d**3 and n >= (2.0 * d * d + 1.0) ** d * (1 - SLACK)
    raise ValueError(f"unknown theorem id {theorem!r}")


INTERSECTION_THEOREMS = ("T4", "T7A", "T7B", "P3")
UNION_THEOREMS = ("T5", "T8A", "T8B", "T8C")
