"""Dimension-generic measures: unit-ball constants, Monte Carlo volumes,
interval unions, caps and cones, and the simplex covering density."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .geometry import regular_simplex

CHUNK = 250_000


@dataclass(frozen=True)
class McEstimate:
    value: float
    stderr: float
    samples: int
    seed: int | None = None


def kappa(d: int) -> float:
    """Volume of the ``d``-dimensional unit ball."""
    if d < 0:
        raise ValueError("dimension must be non-negative")
    return math.exp(0.5 * d * math.log(math.pi) - math.lgamma(0.5 * d + 1.0))


def ball_intrinsic(d: int, k: int) -> float:
    """``V_k`` of the unit ball in ``E^d``: ``C(d, k) kappa_d / kappa_{d-k}``."""
    if not 0 <= k <= d:
        raise ValueError(f"order k={k} out of range 0..{d}")
    return math.comb(d, k) * kappa(d) / kappa(d - k)


def mc_volume(member, box, n: int, seed=None) -> McEstimate:
    """Hit-or-miss volume of ``{x : member(x)}`` inside an axis box.

    ``member`` maps an ``(m, d)`` array to a boolean array of length ``m``;
    ``box`` is ``(lo, hi)``.
    """
    if n <= 0:
        raise ValueError("sample count must be positive")
    lo, hi = (np.asarray(b, dtype=float) for b in box)
    extent = hi - lo
    if np.any(extent < 0):
        raise ValueError("box has negative extent")
    box_vol = float(np.prod(extent))
    rng = np.random.default_rng(seed)
    hits = 0
    left = n
    while left > 0:
        m = min(left, CHUNK)
        x = lo + extent * rng.random((m, len(lo)))
        hits += int(np.count_nonzero(member(x)))
        left -= m
    frac = hits / n
    return McEstimate(frac * box_vol, math.sqrt(frac * (1.0 - frac) / n) * box_vol, n, seed)


def interval_union_length(intervals) -> float:
    """Lebesgue measure of a union of closed intervals, by sort and sweep."""
    ivs = []
    for iv in intervals:
        lo, hi = iv
        if not (lo <= hi):
            raise ValueError(f"malformed interval ({lo}, {hi})")
        ivs.append((float(lo), float(hi)))
    if not ivs:
        return 0.0
    ivs.sort()
    total = 0.0
    cur_lo, cur_hi = ivs[0]
    for lo, hi in ivs[1:]:
        if lo > cur_hi:
            total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        elif hi > cur_hi:
            cur_hi = hi
    return total + (cur_hi - cur_lo)


def interval_intersection_length(intervals) -> float:
    ivs = list(intervals)
    if not ivs:
        raise ValueError("intersection of no intervals is unbounded")
    lo = max(float(a) for a, _ in ivs)
    hi = min(float(b) for _, b in ivs)
    return max(0.0, hi - lo)


def cap_volume(d: int, h: float) -> float:
    """Volume of ``{x in B^d : x_1 >= h}`` for ``h`` in ``[-1, 1]``."""
    if not -1.0 <= h <= 1.0:
        raise ValueError("cap height must lie in [-1, 1]")
    if h < 0:
        return kappa(d) - cap_volume(d, -h)
    if d == 1:
        return 1.0 - h
    return 0.5 * kappa(d) * float(special.betainc(0.5 * (d + 1), 0.5, 1.0 - h * h))


def cone_volume(d: int, h: float) -> float:
    """Cone from the center of ``B^d`` over the disc where ``x_1 = h`` meets the ball."""
    if not 0.0 <= h <= 1.0:
        raise ValueError("cone height must lie in [0, 1]")
    return (h / d) * (1.0 - h * h) ** ((d - 1) / 2.0) * kappa(d - 1)


def cap_sector_bound(d: int, h: float) -> float:
    """Classical upper estimate ``(1-h^2)^((d-1)/2) / (sqrt(2 pi (d-1)) h) * kappa_d``
    for the volume of the sector (cone plus cap) at height ``h``."""
    if d < 2:
        raise ValueError("the cap estimate needs d >= 2")
    if not 0.0 < h <= 1.0:
        raise ValueError("cap estimate needs 0 < h <= 1")
    return (1.0 - h * h) ** ((d - 1) / 2.0) / (math.sqrt(2.0 * math.pi * (d - 1)) * h) * kappa(d)


@dataclass(frozen=True)
class CapCone:
    cap: float
    cone: float
    cap_bound: float | None


def cap_and_cone_volumes(d: int, h: float) -> CapCone:
    if not 0.0 <= h <= 1.0:
        raise ValueError("h must lie in [0, 1]")
    bound = cap_sector_bound(d, h) if d >= 2 and h > 0 else None
    return CapCone(cap_volume(d, h), cone_volume(d, h), bound)


def sigma_simplex_density(d: int, n: int = 1_000_000, seed=None) -> McEstimate:
    """Fraction of a regular edge-2 ``d``-simplex within distance 1 of a vertex."""
    if d < 1:
        raise ValueError("dimension must be positive")
    if n <= 0:
        raise ValueError("sample count must be positive")
    verts = regular_simplex(d, edge=2.0)
    rng = np.random.default_rng(seed)
    hits = 0
    left = n
    while left > 0:
        m = min(left, CHUNK // max(1, d // 4))
        w = rng.dirichlet(np.ones(d + 1), size=m)
        x = w @ verts
        d2 = ((x[:, None, :] - verts[None, :, :]) ** 2).sum(axis=2)
        hits += int(np.count_nonzero(d2.min(axis=1) <= 1.0))
        left -= m
    frac = hits / n
    return McEstimate(frac, math.sqrt(frac * (1.0 - frac) / n), n, seed)


def sigma_exact(d: int) -> float | None:
    """Closed forms for ``d <= 2``; ``None`` otherwise."""
    if d == 1:
        return 1.0
    if d == 2:
        return math.pi / (2.0 * math.sqrt(3.0))
    return None


def sigma_asymptotic(d: int) -> float:
    return d / math.e * 2.0 ** (-d / 2.0)


def random_directions(rng, n: int, d: int) -> np.ndarray:
    u = rng.normal(size=(n, d))
    return u / np.linalg.norm(u, axis=1, keepdims=True)


def mean_width_constant(d: int) -> float:
    """``c_d`` with ``V_1 = c_d * E[width]`` for a uniform random direction."""
    return d * kappa(d) / (2.0 * kappa(d - 1))


def mc_intrinsic_v1(support, d: int, n: int, seed=None) -> McEstimate:
    """Estimate ``V_1`` of a convex body from widths along random directions.

    ``support(u)`` returns the support function at a unit vector ``u``.  The
    body must be convex; this is not checked.
    """
    if n <= 1:
        raise ValueError("need at least two directions")
    rng = np.random.default_rng(seed)
    dirs = random_directions(rng, n, d)
    widths = np.array([support(u) + support(-u) for u in dirs])
    c = mean_width_constant(d)
    return McEstimate(
        c * float(widths.mean()), c * float(widths.std(ddof=1)) / math.sqrt(n), n, seed
    )
