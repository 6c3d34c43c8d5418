"""Intersections of congruent balls ``B[X, rho]`` and spindle convex hulls.

Planar queries are exact, through the arc boundary from :mod:`kpgeom.planar`.
In higher dimensions the support function is a small smooth convex program
and farthest-point distances come with certified bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import planar
from .geometry import Configuration, as_configuration, circumball


class EmptyBodyError(ValueError):
    """The ball intersection is empty."""


@dataclass(frozen=True)
class CheckReport:
    name: str
    samples: int
    failures: int
    worst_margin: float
    seed: int | None

    @property
    def passed(self) -> bool:
        return self.failures == 0


class BallIntersection:
    """The body ``B[X, rho]``: all points within ``rho`` of every center."""

    def __init__(self, centers, radius: float = 1.0):
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.centers = as_configuration(centers)
        self.radius = float(radius)
        self._ball = circumball(self.centers)
        self._planar = None

    @property
    def dim(self) -> int:
        return self.centers.dim

    @property
    def circumradius(self) -> float:
        return self._ball.radius

    def is_empty(self, tol: float = 1e-12) -> bool:
        return self._ball.radius > self.radius * (1.0 + tol)

    def planar_body(self) -> planar.DiskBody:
        if self.dim != 2:
            raise ValueError("arc boundaries exist only in the plane")
        if self._planar is None:
            self._planar = planar.disk_intersection(self.centers, self.radius)
        return self._planar

    def _check_point(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if y.shape[-1] != self.dim:
            raise ValueError(f"point has dimension {y.shape[-1]}, body has {self.dim}")
        return y

    def contains(self, y, tol: float = 1e-12):
        """Vectorized: ``max_i |y - x_i| <= rho + tol``."""
        y = self._check_point(y)
        single = y.ndim == 1
        y2 = np.atleast_2d(y)
        dist = np.linalg.norm(y2[:, None, :] - self.centers.points[None, :, :], axis=2)
        out = dist.max(axis=1) <= self.radius + tol
        return bool(out[0]) if single else out

    def support(self, u, tol: float = 1e-9) -> float:
        """``max <u, z>`` over the body, for a unit vector ``u``."""
        u = self._check_point(u)
        if abs(np.linalg.norm(u) - 1.0) > 1e-9:
            raise ValueError("support direction must be a unit vector")
        if self.is_empty():
            raise EmptyBodyError("support of an empty ball intersection")
        if len(self.centers) == 1:
            return float(self.centers[0] @ u) + self.radius
        if self.dim == 1:
            return float(np.min(self.centers.points[:, 0] * u[0])) + self.radius
        if self.dim == 2:
            return self.planar_body().support(u)
        return float(self.support_point(u, tol) @ u)

    def support_point(self, u, tol: float = 1e-9) -> np.ndarray:
        """A maximizer of ``<u, z>`` over the body, any dimension."""
        u = np.asarray(u, dtype=float)
        x = self.centers.points
        r2 = self.radius**2
        start = self._ball.center.copy()
        cons = {
            "type": "ineq",
            "fun": lambda z: r2 - np.sum((z - x) ** 2, axis=1),
            "jac": lambda z: -2.0 * (z - x),
        }
        res = optimize.minimize(
            lambda z: -float(z @ u),
            start + 0.5 * (self.radius - self._ball.radius) * u,
            jac=lambda z: -u,
            constraints=[cons],
            method="SLSQP",
            options={"ftol": 1e-15, "maxiter": 500},
        )
        z = res.x
        # pull any slight infeasibility back toward the center
        excess = np.max(np.linalg.norm(z - x, axis=1)) - self.radius
        if excess > 0:
            c = self._ball.center
            slack = self.radius - self._ball.radius
            t = excess / (excess + slack) if slack > 0 else 1.0
            z = z + t * (c - z)
        if np.max(np.linalg.norm(z - x, axis=1)) > self.radius + max(tol, 1e-9):
            raise RuntimeError("support point search left the body")
        return z

    def farthest_point_distance(self, y, tol: float = 1e-6, restarts: int = 16, seed: int = 0) -> float:
        """``max |y - z|`` over the body.

        Exact in the plane.  Otherwise an ascent over support points gives a
        lower bound and ``min_i |y - x_i| + rho`` an upper bound; the gap must
        be within ``tol``.
        """
        y = self._check_point(y)
        if self.is_empty():
            raise EmptyBodyError("farthest point of an empty ball intersection")
        x = self.centers.points
        if self.dim == 2:
            return float(self.planar_body().farthest_distance(y))
        if self.dim == 1:
            lo = float(np.max(x[:, 0])) - self.radius
            hi = float(np.min(x[:, 0])) + self.radius
            return max(abs(y[0] - lo), abs(y[0] - hi))
        upper = float(np.min(np.linalg.norm(x - y, axis=1))) + self.radius
        rng = np.random.default_rng(seed)
        lower = 0.0
        for _ in range(restarts):
            u = rng.normal(size=self.dim)
            u /= np.linalg.norm(u)
            for _ in range(50):
                z = self.support_point(u)
                v = z - y
                nv = np.linalg.norm(v)
                if nv == 0:
                    break
                u_new = v / nv
                lower = max(lower, float(nv))
                if np.linalg.norm(u_new - u) < 1e-12:
                    break
                u = u_new
        if upper - lower > tol:
            raise RuntimeError(
                f"farthest distance only bracketed to [{lower:.9g}, {upper:.9g}] in dimension {self.dim}"
            )
        return upper


class SpindleHull:
    """``conv_rho(X) = B[B[X, rho], rho]``, the intersection of all
    ``rho``-balls containing ``X``."""

    def __init__(self, generators, radius: float = 1.0):
        self.generators = as_configuration(generators)
        self.radius = float(radius)
        self.dual = BallIntersection(self.generators, self.radius)
        if self.dual.is_empty():
            raise ValueError("spindle hull needs circumradius(X) <= radius")

    @property
    def dim(self) -> int:
        return self.generators.dim

    def contains(self, y, tol: float = 1e-12) -> bool:
        return spindle_hull_contains(self, y, tol)

    def planar_body(self) -> planar.DiskBody:
        if self.dim != 2:
            raise ValueError("arc boundaries exist only in the plane")
        return planar.spindle_hull(self.generators, self.radius)

    def support(self, u) -> float:
        u = np.asarray(u, dtype=float)
        if self.dim == 2:
            return self.planar_body().support(u)
        raise NotImplementedError("exact spindle hulls are planar only")


def spindle_hull_contains(hull: SpindleHull, y, tol: float = 1e-12) -> bool:
    """``y`` is in the hull iff ``B[X, rho]`` lies inside ``B[y, rho]``."""
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != hull.dim:
        raise ValueError("dimension mismatch")
    return hull.dual.farthest_point_distance(y) <= hull.radius + tol


def _sampling_box(points: np.ndarray, radius: float) -> tuple[np.ndarray, np.ndarray]:
    ball = circumball(points)
    half = ball.radius + radius
    return ball.center - half, ball.center + half


def check_spindle_fixed_point(X, radius: float = 1.0, sample_count: int = 10_000, seed=0, tol: float = 1e-9) -> CheckReport:
    """Sample ``y`` and compare ``y in B[X]`` with ``y in B[conv(X)]``.

    The second membership uses the exact hull boundary in the plane; in
    higher dimensions it uses hull points from convex combinations of ``X``
    (which lie in the hull), so there it checks one direction only.
    A failure is a sign disagreement by more than ``tol``.
    """
    X = as_configuration(X)
    body = BallIntersection(X, radius)
    if body.is_empty():
        raise EmptyBodyError("need circumradius(X) <= radius")
    rng = np.random.default_rng(seed)
    lo, hi = _sampling_box(X.points, radius)
    y = lo + (hi - lo) * rng.random((sample_count, X.dim))
    s1 = np.max(np.linalg.norm(y[:, None, :] - X.points[None, :, :], axis=2), axis=1) - radius
    if X.dim == 2:
        hull = planar.spindle_hull(X, radius)
        s2 = np.asarray(hull.farthest_distance(y)) - radius
    else:
        w = rng.dirichlet(np.ones(len(X)), size=256)
        pts = np.vstack([X.points, w @ X.points])
        s2 = np.max(np.linalg.norm(y[:, None, :] - pts[None, :, :], axis=2), axis=1) - radius
    in1 = s1 <= 0
    in2 = s2 <= 0
    bad = (in1 != in2) & (np.maximum(np.abs(s1), np.abs(s2)) > tol)
    worst = float(np.max(np.where(in1 != in2, np.maximum(np.abs(s1), np.abs(s2)), 0.0)))
    return CheckReport("spindle_fixed_point", sample_count, int(bad.sum()), worst, seed)


def check_ball_covering_containment(q, mu: float, sample_count: int = 100_000, seed=0) -> CheckReport:
    """Every sampled ``y`` in ``B[q, 1]`` is within ``1 + mu`` of every point of
    every ``B[q_i, mu]``."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    q = as_configuration(q)
    body = BallIntersection(q, 1.0)
    if body.is_empty():
        raise EmptyBodyError("B[q] is empty")
    rng = np.random.default_rng(seed)
    # B[q] lies in the unit ball around the circumcenter of q
    c = body._ball.center
    lo, hi = c - 1.0, c + 1.0
    got = 0
    failures = 0
    worst = -math.inf
    while got < sample_count:
        y = lo + (hi - lo) * rng.random((4 * (sample_count - got) + 16, q.dim))
        near = np.max(np.linalg.norm(y[:, None, :] - q.points[None, :, :], axis=2), axis=1)
        y_in = near <= 1.0
        far = near[y_in][: sample_count - got] + mu
        got += len(far)
        failures += int(np.count_nonzero(far > 1.0 + mu))
        if len(far):
            worst = max(worst, float(np.max(far - (1.0 + mu))))
    return CheckReport("ball_covering_containment", sample_count, failures, worst, seed)
