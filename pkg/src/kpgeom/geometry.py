"""Point configurations, contraction predicates and the minimal enclosing ball."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_TOL = 1e-12


class Configuration:
    """An ordered list of ``N`` points in ``E^d``.

    The coordinates live in a read-only ``(N, d)`` float array, so a
    configuration can be shared freely once built.
    """

    __slots__ = ("_points",)

    def __init__(self, points, dim: int | None = None):
        arr = np.array(points, dtype=float)
        if arr.ndim == 1:
            # a flat list is a 1D configuration
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"expected a non-empty (N, d) point array, got shape {arr.shape}")
        if dim is not None and arr.shape[1] != dim:
            raise ValueError(f"points have {arr.shape[1]} coordinates, expected {dim}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("configuration coordinates must be finite")
        arr.setflags(write=False)
        self._points = arr

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def dim(self) -> int:
        return self._points.shape[1]

    def __len__(self) -> int:
        return self._points.shape[0]

    def __iter__(self):
        return iter(self._points)

    def __getitem__(self, i):
        return self._points[i]

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self._points.shape == other._points.shape and bool(np.all(self._points == other._points))

    def __hash__(self):
        return hash((self._points.shape, self._points.tobytes()))

    def __repr__(self):
        return f"Configuration(dim={self.dim}, points={self._points.tolist()})"

    def to_dict(self) -> dict:
        return {"dim": self.dim, "points": self._points.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Configuration":
        try:
            dim = int(data["dim"])
            points = data["points"]
        except (KeyError, TypeError) as exc:
            raise ValueError("configuration JSON needs 'dim' and 'points'") from exc
        for row in points:
            if len(row) != dim:
                raise ValueError(f"point {row!r} does not have {dim} coordinates")
            for v in row:
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                    raise ValueError(f"non-finite or non-numeric coordinate {v!r}")
        return cls(points, dim=dim)


def as_configuration(points) -> Configuration:
    if isinstance(points, Configuration):
        return points
    return Configuration(points)


def load_configuration(path) -> Configuration:
    # json accepts NaN/Infinity literals by default; refuse them up front
    def _reject(token):
        raise ValueError(f"invalid numeric literal {token!r} in configuration JSON")

    text = Path(path).read_text()
    return Configuration.from_dict(json.loads(text, parse_constant=_reject))


def dump_configuration(config: Configuration, path) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), allow_nan=False) + "\n")


@dataclass(frozen=True)
class DistanceSummary:
    min_pairwise: float
    max_pairwise: float
    matrix: np.ndarray


@dataclass(frozen=True)
class CircumballResult:
    center: np.ndarray
    radius: float
    support: tuple = ()


def pairwise_distances(config) -> DistanceSummary:
    pts = as_configuration(config).points
    diff = pts[:, None, :] - pts[None, :, :]
    matrix = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    n = len(pts)
    if n < 2:
        return DistanceSummary(0.0, 0.0, matrix)
    iu = np.triu_indices(n, 1)
    vals = matrix[iu]
    return DistanceSummary(float(vals.min()), float(vals.max()), matrix)


def _check_pair(p, q) -> tuple[Configuration, Configuration]:
    p, q = as_configuration(p), as_configuration(q)
    if len(p) != len(q) or p.dim != q.dim:
        raise ValueError(
            f"configurations differ in shape: {len(p)}x{p.dim} vs {len(q)}x{q.dim}"
        )
    return p, q


def is_contraction(p, q, tol: float = DEFAULT_TOL) -> bool:
    """True iff every pairwise distance of ``q`` is at most that of ``p`` (plus ``tol``)."""
    p, q = _check_pair(p, q)
    if len(p) < 2:
        return True
    dp = pairwise_distances(p).matrix
    dq = pairwise_distances(q).matrix
    return bool(np.all(dq <= dp + tol))


def uniform_contraction_interval(p, q) -> tuple[float, float] | None:
    """The closed interval of separating values ``lam`` with
    ``|q_i - q_j| <= lam <= |p_i - p_j|`` for all ``i != j``, or ``None``."""
    p, q = _check_pair(p, q)
    if len(p) < 2:
        raise ValueError("a separating value needs at least two points")
    lo = pairwise_distances(q).max_pairwise
    hi = pairwise_distances(p).min_pairwise
    if lo <= hi:
        return (lo, hi)
    return None


def is_strong_contraction(p, q, tol: float = DEFAULT_TOL) -> bool:
    """Coordinatewise contraction: every coordinate gap shrinks for every pair."""
    p, q = _check_pair(p, q)
    if len(p) < 2:
        return True
    gp = np.abs(p.points[:, None, :] - p.points[None, :, :])
    gq = np.abs(q.points[:, None, :] - q.points[None, :, :])
    return bool(np.all(gq <= gp + tol))


def one_sided_reflection(config, axis: int, level: float, side: str = "positive") -> Configuration:
    """Reflect the points lying strictly on one side of ``{x[axis] = level}``.

    ``axis`` is 1-based.  Points on the hyperplane or on the other side are
    left alone.
    """
    config = as_configuration(config)
    if not 1 <= axis <= config.dim:
        raise ValueError(f"axis {axis} out of range 1..{config.dim}")
    if side not in ("positive", "negative"):
        raise ValueError(f"side must be 'positive' or 'negative', not {side!r}")
    pts = config.points.copy()
    col = pts[:, axis - 1]
    mask = col > level if side == "positive" else col < level
    col[mask] = 2.0 * level - col[mask]
    return Configuration(pts)


def random_reflection_composite(config, n_reflections: int, rng) -> Configuration:
    """Compose ``n_reflections`` random one-sided reflections.

    Hyperplane levels are drawn inside the current coordinate range so that
    most reflections actually move something.
    """
    out = as_configuration(config)
    for _ in range(n_reflections):
        axis = int(rng.integers(1, out.dim + 1))
        col = out.points[:, axis - 1]
        lo, hi = float(col.min()), float(col.max())
        level = rng.uniform(lo, hi) if hi > lo else lo
        side = "positive" if rng.random() < 0.5 else "negative"
        out = one_sided_reflection(out, axis, level, side)
    return out


def random_lipschitz_map(values: np.ndarray, rng, pieces: int = 6) -> np.ndarray:
    """Apply a random piecewise-linear map with slopes in [-1, 1] to ``values``.

    Any such map is 1-Lipschitz, so the image is a 1D contraction of the
    input; conversely every 1D contraction arises this way.
    """
    values = np.asarray(values, dtype=float)
    lo, hi = float(values.min()), float(values.max())
    if hi <= lo:
        return values + rng.normal()
    knots = np.sort(rng.uniform(lo, hi, size=pieces - 1))
    knots = np.concatenate(([lo], knots, [hi]))
    slopes = rng.uniform(-1.0, 1.0, size=pieces)
    # occasionally pin a slope to +-1 or 0 to hit the boundary cases
    pin = rng.random(pieces) < 0.2
    slopes[pin] = rng.choice([-1.0, 0.0, 1.0], size=int(pin.sum()))
    levels = np.concatenate(([0.0], np.cumsum(slopes * np.diff(knots))))
    idx = np.clip(np.searchsorted(knots, values, side="right") - 1, 0, pieces - 1)
    return levels[idx] + slopes[idx] * (values - knots[idx]) + rng.normal()


def random_coordinatewise_contraction(config, rng) -> Configuration:
    """Independent 1D contractions of each coordinate; always a strong contraction."""
    config = as_configuration(config)
    pts = config.points.copy()
    for k in range(config.dim):
        pts[:, k] = random_lipschitz_map(pts[:, k], rng)
    return Configuration(pts)


# -- minimal enclosing ball ---------------------------------------------------


def _circumsphere(pts: np.ndarray) -> tuple[np.ndarray, float]:
    """Smallest sphere through all of ``pts`` with center in their affine hull."""
    p0 = pts[0]
    if len(pts) == 1:
        return p0.copy(), 0.0
    u = pts[1:] - p0
    gram = u @ u.T
    rhs = 0.5 * np.einsum("ij,ij->i", u, u)
    lam = np.linalg.lstsq(gram, rhs, rcond=None)[0]
    center = p0 + lam @ u
    radius = float(np.max(np.linalg.norm(pts - center, axis=1)))
    return center, radius


def _inside(center, radius, x, rel=1e-12) -> bool:
    return float(np.linalg.norm(x - center)) <= radius * (1.0 + rel) + 1e-14


def circumball(config, rng=None) -> CircumballResult:
    """Minimal enclosing ball by randomized move-to-front (Welzl / Gaertner).

    The input order is shuffled with a fixed seed unless ``rng`` is given, so
    the result is deterministic.
    """
    pts = as_configuration(config).points
    d = pts.shape[1]
    # duplicates only slow the recursion down
    uniq = np.unique(pts, axis=0)
    rng = np.random.default_rng(0) if rng is None else rng
    order = list(rng.permutation(len(uniq)))

    def mtf(limit: int, boundary: list[int]):
        if boundary:
            center, radius = _circumsphere(uniq[boundary])
        else:
            center, radius = None, -1.0
        if len(boundary) == d + 1:
            return center, radius, list(boundary)
        support = list(boundary)
        i = 0
        while i < limit:
            idx = order[i]
            if center is None or not _inside(center, radius, uniq[idx]):
                center, radius, support = mtf(i, boundary + [idx])
                order.insert(0, order.pop(i))
            i += 1
        return center, radius, support

    center, radius, support = mtf(len(order), [])
    return CircumballResult(np.asarray(center, dtype=float), float(radius), tuple(uniq[support].tolist()))


def circumball_bruteforce(config) -> CircumballResult:
    """Exhaustive search over support sets of size at most ``d + 1``."""
    pts = as_configuration(config).points
    d = pts.shape[1]
    best = None
    for size in range(1, min(d + 1, len(pts)) + 1):
        for subset in itertools.combinations(range(len(pts)), size):
            center, radius = _circumsphere(pts[list(subset)])
            if best is not None and radius >= best.radius:
                continue
            if all(_inside(center, radius, x, rel=1e-10) for x in pts):
                best = CircumballResult(center, radius, tuple(pts[list(subset)].tolist()))
    assert best is not None
    return best


def diameter(config) -> float:
    return pairwise_distances(config).max_pairwise


def jung_ratio(d: int) -> float:
    """Circumradius / diameter bound sqrt(2d/(d+1)) / 2."""
    return math.sqrt(2.0 * d / (d + 1.0)) / 2.0


def regular_simplex(d: int, edge: float = 1.0) -> np.ndarray:
    """Vertices of a centered regular ``d``-simplex in ``R^d`` with the given edge."""
    # e_i / sqrt(2) in R^{d+1} has pairwise distance 1
    verts = np.eye(d + 1) / math.sqrt(2.0)
    verts -= verts.mean(axis=0)
    # orthonormal basis of the hyperplane sum(x) = 0
    _, _, vt = np.linalg.svd(verts)
    coords = verts @ vt[:d].T
    return coords * edge


# -- samplers -----------------------------------------------------------------


def _uniform_in_ball(rng, n: int, d: int, radius: float) -> np.ndarray:
    g = rng.normal(size=(n, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = radius * rng.random(n) ** (1.0 / d)
    return g * r[:, None]


class PlacementError(RuntimeError):
    """Dart throwing ran out of retries; the region is too small."""


def sample_min_distance(
    rng, n: int, d: int, min_dist: float, region_radius: float, budget: int | None = None
) -> np.ndarray:
    """Dart throwing: ``n`` points in a ball with pairwise distance >= ``min_dist``."""
    budget = n * 10_000 if budget is None else budget
    placed: list[np.ndarray] = []
    tries = 0
    while len(placed) < n:
        if tries >= budget:
            raise PlacementError(
                f"placed {len(placed)} of {n} points at min distance {min_dist} "
                f"in radius {region_radius} after {budget} tries"
            )
        tries += 1
        x = _uniform_in_ball(rng, 1, d, region_radius)[0]
        if placed:
            dist = np.linalg.norm(np.asarray(placed) - x, axis=1)
            if dist.min() < min_dist:
                continue
        placed.append(x)
    return np.asarray(placed)


def default_region_scale(lam: float, n: int, d: int) -> float:
    return lam * (n ** (1.0 / d) + 2.0)


def sample_uniform_contraction_pair(
    d: int, n: int, lam: float, region_scale: float | None = None, seed=None
) -> tuple[Configuration, Configuration]:
    """Random ``(p, q)`` with ``q`` a uniform contraction of ``p`` at separating value ``lam``.

    ``q`` is i.i.d. uniform in a ball of radius ``lam/2`` (so its diameter is at
    most ``lam``); ``p`` comes from dart throwing with minimum distance ``lam``
    inside a ball of radius ``region_scale``.
    """
    if lam <= 0:
        raise ValueError("separating value must be positive")
    if n < 2:
        raise ValueError("need at least two points")
    rng = np.random.default_rng(seed)
    if region_scale is None:
        region_scale = default_region_scale(lam, n, d)
    p = sample_min_distance(rng, n, d, lam, region_scale)
    q = _uniform_in_ball(rng, n, d, lam / 2.0)
    return Configuration(p), Configuration(q)


def sample_diameter_bounded(rng, n: int, d: int, lam: float) -> Configuration:
    """``n`` points uniform in a ball of radius ``lam/2``: diameter at most ``lam``."""
    return Configuration(_uniform_in_ball(rng, n, d, lam / 2.0))
