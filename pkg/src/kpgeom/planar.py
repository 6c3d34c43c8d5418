"""Exact planar measures for bodies bounded by circular arcs, and the
polygon tools used by the figure fixtures.

A body is described by its boundary arcs, each traversed counterclockwise
around its own circle.  Area follows from Green's theorem applied arc by
arc, so unions with holes need no special treatment: hole boundaries come
out clockwise with respect to the hole and subtract themselves.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import as_configuration, circumball
from .measures import interval_union_length, mc_volume

TWO_PI = 2.0 * math.pi
COINCIDENT_TOL = 1e-12
TANGENT_TOL = 1e-14
_PROBE_ANGLE = 1.2345678901234567


@dataclass(frozen=True)
class Arc:
    """Counterclockwise arc of the circle ``(center, radius)`` starting at
    angle ``start`` in ``[0, 2 pi)`` and sweeping ``sweep`` radians."""

    center: tuple[float, float]
    radius: float
    start: float
    sweep: float

    @property
    def end(self) -> float:
        return self.start + self.sweep

    def point(self, theta: float) -> np.ndarray:
        cx, cy = self.center
        return np.array([cx + self.radius * math.cos(theta), cy + self.radius * math.sin(theta)])

    @property
    def first(self) -> np.ndarray:
        return self.point(self.start)

    @property
    def last(self) -> np.ndarray:
        return self.point(self.end)

    @property
    def length(self) -> float:
        return self.radius * self.sweep

    def green(self) -> float:
        """Twice the signed area contribution, the integral of x dy - y dx."""
        cx, cy = self.center
        r = self.radius
        a, b = self.start, self.end
        return r * r * self.sweep + r * cx * (math.sin(b) - math.sin(a)) - r * cy * (math.cos(b) - math.cos(a))

    def covers_angle(self, theta):
        return np.mod(np.asarray(theta) - self.start, TWO_PI) <= self.sweep


@dataclass(frozen=True)
class PlanarMeasure:
    area: float
    perimeter: float

    @property
    def v1(self) -> float:
        return 0.5 * self.perimeter

    @property
    def v2(self) -> float:
        return self.area

    def intrinsic(self, k: int) -> float:
        if k == 1:
            return self.v1
        if k == 2:
            return self.v2
        raise ValueError(f"planar intrinsic volume order must be 1 or 2, not {k}")


@dataclass(frozen=True)
class DiskBody:
    """Boundary representation of an intersection or union of disks.

    ``kind`` is ``"arcs"`` for a body with a proper arc boundary, ``"point"``
    for a degenerate intersection reduced to ``point``, or ``"empty"``.
    """

    kind: str
    arcs: tuple[Arc, ...] = ()
    point: np.ndarray | None = None
    centers: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    radii: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def vertices(self) -> np.ndarray:
        pts = [a.first for a in self.arcs if a.sweep < TWO_PI]
        if not pts:
            return np.zeros((0, 2))
        pts = np.asarray(pts)
        # arcs meeting at a vertex report it twice
        keep = [0]
        for i in range(1, len(pts)):
            if np.min(np.linalg.norm(pts[keep] - pts[i], axis=1)) > 1e-9:
                keep.append(i)
        return pts[keep]

    def measure(self) -> PlanarMeasure:
        if self.kind != "arcs":
            return PlanarMeasure(0.0, 0.0)
        area = 0.5 * math.fsum(a.green() for a in self.arcs)
        perim = math.fsum(a.length for a in self.arcs)
        return PlanarMeasure(max(area, 0.0), perim)

    def loops(self, tol: float = 1e-9) -> list[list[Arc]]:
        """Chain arcs into closed boundary loops by matching endpoints."""
        remaining = list(self.arcs)
        loops = []
        while remaining:
            loop = [remaining.pop(0)]
            while np.linalg.norm(loop[-1].last - loop[0].first) > tol:
                tail = loop[-1].last
                gaps = [np.linalg.norm(a.first - tail) for a in remaining]
                if not gaps or min(gaps) > tol:
                    raise ValueError("arc boundary does not close")
                loop.append(remaining.pop(int(np.argmin(gaps))))
            loops.append(loop)
        return loops

    # queries meaningful for convex bodies (intersections, spindle hulls)

    def support(self, u) -> float:
        return float(self.supports(np.asarray(u, dtype=float)[None, :])[0])

    def supports(self, u) -> np.ndarray:
        """Support function at each row of an ``(m, 2)`` array of directions."""
        u = np.atleast_2d(np.asarray(u, dtype=float))
        if self.kind == "empty":
            raise ValueError("support of an empty body")
        if self.kind == "point":
            return u @ self.point
        theta = np.arctan2(u[:, 1], u[:, 0])
        norm = np.linalg.norm(u, axis=1)
        best = np.full(len(u), -np.inf)
        for a in self.arcs:
            val = u @ np.asarray(a.center) + a.radius * norm
            best = np.where(a.covers_angle(theta), np.maximum(best, val), best)
        verts = self.vertices
        if len(verts):
            best = np.maximum(best, np.max(u @ verts.T, axis=1))
        return best

    def farthest_distance(self, y) -> np.ndarray | float:
        """Largest distance from ``y`` (one point or an ``(m, 2)`` array) to the body."""
        y = np.asarray(y, dtype=float)
        single = y.ndim == 1
        y2 = np.atleast_2d(y)
        if self.kind == "empty":
            raise ValueError("farthest point of an empty body")
        if self.kind == "point":
            out = np.linalg.norm(y2 - self.point, axis=1)
            return float(out[0]) if single else out
        out = np.full(len(y2), -np.inf)
        verts = self.vertices
        if len(verts):
            out = np.max(np.linalg.norm(y2[:, None, :] - verts[None, :, :], axis=2), axis=1)
        for a in self.arcs:
            c = np.asarray(a.center)
            v = c - y2
            dist = np.linalg.norm(v, axis=1)
            # the farthest circle point from y is c + r (c - y)/|c - y|
            theta = np.arctan2(v[:, 1], v[:, 0])
            hit = a.covers_angle(theta) | (dist == 0.0)
            out = np.where(hit, np.maximum(out, dist + a.radius), out)
        return float(out[0]) if single else out

    def contains(self, y, tol: float = 0.0):
        """Membership for intersection bodies: within radius of every center."""
        y = np.atleast_2d(np.asarray(y, dtype=float))
        if self.kind == "empty":
            return np.zeros(len(y), dtype=bool)
        d = np.linalg.norm(y[:, None, :] - self.centers[None, :, :], axis=2)
        return np.all(d <= self.radii[None, :] + tol, axis=1)


def _dedupe(centers: np.ndarray, radii: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keep_c, keep_r = [], []
    for c, r in zip(centers, radii):
        dup = any(
            np.linalg.norm(c - c2) <= COINCIDENT_TOL and abs(r - r2) <= COINCIDENT_TOL
            for c2, r2 in zip(keep_c, keep_r)
        )
        if not dup:
            keep_c.append(c)
            keep_r.append(r)
    return np.asarray(keep_c, dtype=float).reshape(-1, 2), np.asarray(keep_r, dtype=float)


def _crossing_angles(ci, ri, cj, rj) -> list[float]:
    """Angles on circle i where it properly crosses circle j; tangency gives none."""
    dx, dy = cj[0] - ci[0], cj[1] - ci[1]
    dist = math.hypot(dx, dy)
    if dist == 0.0 or dist > ri + rj or dist < abs(ri - rj):
        return []
    a = (dist * dist + ri * ri - rj * rj) / (2.0 * dist)
    h2 = ri * ri - a * a
    if h2 <= TANGENT_TOL * max(ri * ri, 1.0):
        return []
    base = math.atan2(dy, dx)
    half = math.acos(max(-1.0, min(1.0, a / ri)))
    return [(base - half) % TWO_PI, (base + half) % TWO_PI]


def _clip_circles(centers: np.ndarray, radii: np.ndarray, keep_inside: bool) -> list[Arc]:
    arcs: list[Arc] = []
    n = len(centers)
    for i in range(n):
        ci, ri = centers[i], radii[i]
        others = [j for j in range(n) if j != i]
        angles = []
        for j in others:
            angles.extend(_crossing_angles(ci, ri, centers[j], radii[j]))
        if not angles:
            pieces = [(0.0, TWO_PI)]
        else:
            angles.sort()
            pieces = []
            for k, a in enumerate(angles):
                b = angles[k + 1] if k + 1 < len(angles) else angles[0] + TWO_PI
                if b - a > 1e-15:
                    pieces.append((a, b - a))
        for start, sweep in pieces:
            mid = start + (0.5 * sweep if sweep < TWO_PI else _PROBE_ANGLE)
            m = ci + ri * np.array([math.cos(mid), math.sin(mid)])
            if others:
                dist = np.linalg.norm(centers[others] - m, axis=1)
                inside = dist <= radii[others]
                ok = bool(np.all(inside)) if keep_inside else not bool(np.any(inside))
            else:
                ok = True
            if ok:
                arcs.append(Arc((float(ci[0]), float(ci[1])), float(ri), float(start % TWO_PI), float(sweep)))
    return arcs


def disk_intersection(centers, radius: float = 1.0) -> DiskBody:
    """Boundary of the intersection of congruent disks."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    pts = as_configuration(centers).points
    if pts.shape[1] != 2:
        raise ValueError("planar bodies need 2D centers")
    c, r = _dedupe(pts, np.full(len(pts), float(radius)))
    arcs = _clip_circles(c, r, keep_inside=True)
    if arcs:
        return DiskBody("arcs", tuple(arcs), None, c, r)
    ball = circumball(c)
    if ball.radius <= radius * (1.0 + 1e-9):
        return DiskBody("point", (), ball.center, c, r)
    return DiskBody("empty", (), None, c, r)


def disk_union(centers, radius=1.0) -> DiskBody:
    """Boundary of a union of disks; ``radius`` may be per-disk."""
    pts = as_configuration(centers).points
    if pts.shape[1] != 2:
        raise ValueError("planar bodies need 2D centers")
    r = np.broadcast_to(np.asarray(radius, dtype=float), (len(pts),)).copy()
    if np.any(r <= 0):
        raise ValueError("radii must be positive")
    c, r = _dedupe(pts, r)
    arcs = _clip_circles(c, r, keep_inside=False)
    return DiskBody("arcs" if arcs else "empty", tuple(arcs), None, c, r)


def disk_intersection_measure(centers, radius: float = 1.0) -> PlanarMeasure:
    return disk_intersection(centers, radius).measure()


def disk_union_measure(centers, radius=1.0) -> PlanarMeasure:
    return disk_union(centers, radius).measure()


# -- spindle hulls ------------------------------------------------------------


class SpindleDualityError(RuntimeError):
    """The arc duality used for planar spindle hulls disagreed with Monte Carlo."""


def _spindle_hull_raw(points, radius: float) -> DiskBody:
    body = disk_intersection(points, radius)
    if body.kind == "empty":
        raise ValueError("spindle hull needs circumradius <= radius")
    if body.kind == "point":
        # B[X] is one point w, so the hull is the full disk around w
        return disk_intersection([body.point], radius)
    verts = body.vertices
    if len(verts) == 0:
        # a single distinct center: the hull is that point
        c = body.centers[0]
        return DiskBody("point", (), c.copy(), body.centers, body.radii)
    return disk_intersection(verts, radius)


def spindle_hull_membership(points, radius: float, y, tol: float = 0.0):
    """``y`` lies in the spindle hull iff the whole body ``B[X, radius]`` is within ``radius`` of it."""
    body = disk_intersection(points, radius)
    return np.asarray(body.farthest_distance(np.atleast_2d(y))) <= radius + tol


@functools.lru_cache(maxsize=1)
def spindle_duality_selftest(instances: int = 50, samples: int = 40_000, seed: int = 20_170_301) -> float:
    """Compare hull areas from the arc duality with a Monte Carlo membership
    oracle; raise :class:`SpindleDualityError` on disagreement.

    Returns the worst z-score seen.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for t in range(instances):
        n = int(rng.integers(2, 7))
        radius = float(rng.uniform(0.5, 2.0))
        pts = rng.uniform(-1.0, 1.0, size=(n, 2)) * radius * 0.6
        if circumball(pts).radius > radius:
            continue
        exact = _spindle_hull_raw(pts, radius).measure().area
        lo = pts.min(axis=0) - radius
        hi = pts.max(axis=0) + radius
        est = mc_volume(lambda y: spindle_hull_membership(pts, radius, y), (lo, hi), samples, seed=seed + t)
        z = abs(exact - est.value) / max(est.stderr, 1e-12)
        worst = max(worst, z)
        if z > 5.0:
            raise SpindleDualityError(
                f"instance {t}: duality area {exact:.6f} vs Monte Carlo {est.value:.6f} "
                f"+- {est.stderr:.2g} (points={pts.tolist()}, radius={radius})"
            )
    return worst


def spindle_hull(points, radius: float = 1.0) -> DiskBody:
    """Arc boundary of the ``radius``-spindle convex hull of planar points.

    Its arcs have radius ``radius`` and are centered at the vertices of
    ``B[X, radius]``.
    """
    spindle_duality_selftest()
    return _spindle_hull_raw(points, radius)


def spindle_hull_measure(points, radius: float = 1.0) -> PlanarMeasure:
    return spindle_hull(points, radius).measure()


# -- polygons -----------------------------------------------------------------


def polygon_area(poly) -> float:
    p = np.asarray(poly, dtype=float)
    if len(p) < 3:
        return 0.0
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def polygon_perimeter(poly) -> float:
    p = np.asarray(poly, dtype=float)
    return float(np.sum(np.linalg.norm(np.roll(p, -1, axis=0) - p, axis=1)))


def _halfplanes(poly: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rows ``a`` and offsets ``b`` with the polygon equal to ``a x <= b``."""
    e = np.roll(poly, -1, axis=0) - poly
    a = np.stack([e[:, 1], -e[:, 0]], axis=1)
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    b = np.einsum("ij,ij->i", a, poly)
    return a, b


def check_convex_polygon(poly) -> np.ndarray:
    p = np.asarray(poly, dtype=float)
    if p.ndim != 2 or p.shape[1] != 2 or len(p) < 3:
        raise ValueError("a polygon needs at least three 2D vertices")
    if polygon_area(p) <= 0:
        raise ValueError("polygon must be counterclockwise with positive area")
    e = np.roll(p, -1, axis=0) - p
    cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
    if np.any(cross < -1e-12):
        raise ValueError("polygon is not convex")
    if np.any(np.linalg.norm(e, axis=1) == 0):
        raise ValueError("polygon has a repeated vertex")
    return p


def convex_polygon_intersection(polys) -> np.ndarray:
    """Sutherland-Hodgman clipping of convex polygons; may return < 3 vertices."""
    polys = [check_convex_polygon(p) for p in polys]
    out = polys[0]
    for clip in polys[1:]:
        a, b = _halfplanes(clip)
        for ai, bi in zip(a, b):
            if len(out) == 0:
                return out
            s = out @ ai - bi
            res = []
            for k in range(len(out)):
                cur, nxt = out[k], out[(k + 1) % len(out)]
                sc, sn = s[k], s[(k + 1) % len(out)]
                if sc <= 0:
                    res.append(cur)
                if (sc < 0 < sn) or (sn < 0 < sc):
                    t = sc / (sc - sn)
                    res.append(cur + t * (nxt - cur))
            out = np.asarray(res).reshape(-1, 2)
    return out


def _covered_params(p0, direction, normal, a, b, tol=1e-12):
    """Parameters ``t`` in [0, 1] with ``p0 + t direction + eps normal`` inside
    the open polygon ``a x < b`` for all small ``eps > 0``.  Returns an interval
    or ``None``."""
    lo, hi = 0.0, 1.0
    for ai, bi in zip(a, b):
        alpha = float(ai @ p0) - bi
        beta = float(ai @ direction)
        an = float(ai @ normal)
        closed = an < -tol
        if abs(beta) <= tol:
            if alpha > tol or (alpha > -tol and not closed):
                return None
            continue
        t = -alpha / beta
        if beta > 0:
            hi = min(hi, t)
        else:
            lo = max(lo, t)
        if lo >= hi:
            return None
    return (lo, hi)


def polygon_union_perimeter(polys) -> float:
    """Exact perimeter of a union of convex polygons by clipping each edge."""
    polys = [check_convex_polygon(p) for p in polys]
    planes = [_halfplanes(p) for p in polys]
    total = 0.0
    for i, poly in enumerate(polys):
        a_i, _ = planes[i]
        for k in range(len(poly)):
            p0 = poly[k]
            direction = poly[(k + 1) % len(poly)] - p0
            normal = a_i[k]
            covered = []
            for j, (a, b) in enumerate(planes):
                if j == i:
                    continue
                iv = _covered_params(p0, direction, normal, a, b)
                if iv is not None:
                    covered.append(iv)
                if j < i:
                    # a coincident edge with the same outward side is counted once
                    iv = _covered_params(p0, direction, -normal, a, b)
                    if iv is not None:
                        covered.append(iv)
            frac = 1.0 - interval_union_length(covered)
            total += frac * float(np.linalg.norm(direction))
    return total


@dataclass(frozen=True)
class PolygonUnionMeasure:
    area: float
    area_stderr: float
    perimeter: float


def polygon_union_measure(polys, n: int | None = None, seed=0, rel_stderr: float = 1e-4) -> PolygonUnionMeasure:
    """Union area by Monte Carlo (standard error at most ``rel_stderr`` times
    the bounding-box area unless ``n`` is given) and exact perimeter."""
    polys = [check_convex_polygon(p) for p in polys]
    planes = [_halfplanes(p) for p in polys]
    allpts = np.vstack(polys)
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)

    def member(x):
        hit = np.zeros(len(x), dtype=bool)
        for a, b in planes:
            hit |= np.all(x @ a.T <= b, axis=1)
        return hit

    if n is None:
        n = int(math.ceil(0.25 / rel_stderr**2))
    est = mc_volume(member, (lo, hi), n, seed=seed)
    return PolygonUnionMeasure(est.value, est.stderr, polygon_union_perimeter(polys))
