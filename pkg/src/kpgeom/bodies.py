"""Unconditional convex bodies and axis-parallel slicing.

Every body here is symmetric under all coordinate sign flips, so a line
parallel to a coordinate axis meets a translate ``t + K`` in an interval
centered at ``t``'s coordinate on that axis.  That symmetry is what makes
slice-by-slice comparison of translated families work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Configuration, as_configuration
from .measures import interval_intersection_length, interval_union_length

FAMILIES = ("axis_box", "scaled_lp_ball", "cross_polytope", "intersection")
_EMPTY = -1e300


@dataclass(frozen=True)
class UnconditionalBody:
    """A centered unconditional body.

    ``axis_box`` has half-extents ``a``; ``scaled_lp_ball`` is
    ``sum |x_i / a_i|^p <= 1``; ``cross_polytope`` is the ``p = 1`` case;
    ``intersection`` intersects ``members``.
    """

    family: str
    half_extents: tuple[float, ...] = ()
    p: float = 2.0
    members: tuple["UnconditionalBody", ...] = field(default=())

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown body family {self.family!r}")
        if self.family == "intersection":
            if not self.members:
                raise ValueError("an intersection body needs members")
            dims = {m.dim for m in self.members}
            if len(dims) != 1:
                raise ValueError("intersection members must share a dimension")
        else:
            a = tuple(float(v) for v in self.half_extents)
            if not a or any(not (v > 0 and math.isfinite(v)) for v in a):
                raise ValueError("half extents must be positive and finite")
            object.__setattr__(self, "half_extents", a)
        if self.family == "scaled_lp_ball" and not self.p >= 1:
            raise ValueError("lp exponent must be at least 1")

    @property
    def dim(self) -> int:
        if self.family == "intersection":
            return self.members[0].dim
        return len(self.half_extents)

    @property
    def exponent(self) -> float:
        return 1.0 if self.family == "cross_polytope" else self.p

    def bounding_half_extents(self) -> np.ndarray:
        if self.family == "intersection":
            return np.min([m.bounding_half_extents() for m in self.members], axis=0)
        return np.asarray(self.half_extents)

    def member(self, x) -> np.ndarray | bool:
        """Closed-form membership for one point or an ``(m, d)`` array."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise ValueError(f"point has dimension {x.shape[-1]}, body has {self.dim}")
        single = x.ndim == 1
        x2 = np.atleast_2d(x)
        if self.family == "intersection":
            out = np.all([m.member(x2) for m in self.members], axis=0)
        elif self.family == "axis_box":
            out = np.all(np.abs(x2) <= np.asarray(self.half_extents), axis=1)
        else:
            s = np.sum(np.abs(x2 / np.asarray(self.half_extents)) ** self.exponent, axis=1)
            out = s <= 1.0 + 1e-15
        return bool(out[0]) if single else out

    def halflength(self, axis: int, offsets) -> np.ndarray:
        """Half-length of the chord along ``axis`` (0-based) through points whose
        other coordinates are ``offsets`` (relative to the center); ``-1`` where
        the line misses the body.  ``offsets`` has shape ``(m, d)``; its
        ``axis`` column is ignored."""
        off = np.atleast_2d(np.asarray(offsets, dtype=float))
        others = [k for k in range(self.dim) if k != axis]
        if self.family == "intersection":
            return np.min([m.halflength(axis, off) for m in self.members], axis=0)
        a = np.asarray(self.half_extents)
        if self.family == "axis_box":
            ok = np.all(np.abs(off[:, others]) <= a[others], axis=1)
            return np.where(ok, a[axis], -1.0)
        p = self.exponent
        rest = np.sum(np.abs(off[:, others] / a[others]) ** p, axis=1) if others else np.zeros(len(off))
        w = a[axis] * np.clip(1.0 - rest, 0.0, None) ** (1.0 / p)
        return np.where(rest <= 1.0, w, -1.0)

    def to_dict(self) -> dict:
        if self.family == "intersection":
            return {"family": "intersection", "members": [m.to_dict() for m in self.members]}
        out = {"family": self.family, "half_extents": list(self.half_extents)}
        if self.family == "scaled_lp_ball":
            out["p"] = self.p
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "UnconditionalBody":
        fam = data.get("family")
        if fam == "intersection":
            return cls("intersection", members=tuple(cls.from_dict(m) for m in data["members"]))
        return cls(fam, tuple(data["half_extents"]), float(data.get("p", 2.0)))


def axis_box(*half_extents) -> UnconditionalBody:
    return UnconditionalBody("axis_box", tuple(half_extents))


def lp_ball(half_extents, p: float) -> UnconditionalBody:
    return UnconditionalBody("scaled_lp_ball", tuple(half_extents), p)


def cross_polytope(*half_extents) -> UnconditionalBody:
    return UnconditionalBody("cross_polytope", tuple(half_extents))


@dataclass(frozen=True)
class PlacedBodies:
    """The family ``translations[i] + bodies[i]``."""

    bodies: tuple[UnconditionalBody, ...]
    translations: Configuration

    def __post_init__(self):
        object.__setattr__(self, "bodies", tuple(self.bodies))
        object.__setattr__(self, "translations", as_configuration(self.translations))
        if len(self.bodies) != len(self.translations):
            raise ValueError("need one translation per body")
        if any(b.dim != self.translations.dim for b in self.bodies):
            raise ValueError("body and translation dimensions differ")

    @property
    def dim(self) -> int:
        return self.translations.dim

    def moved(self, translations) -> "PlacedBodies":
        return PlacedBodies(self.bodies, as_configuration(translations))

    def union_member(self, x) -> np.ndarray:
        x = np.atleast_2d(x)
        out = np.zeros(len(x), dtype=bool)
        for b, t in zip(self.bodies, self.translations):
            out |= b.member(x - t)
        return out

    def intersection_member(self, x) -> np.ndarray:
        x = np.atleast_2d(x)
        out = np.ones(len(x), dtype=bool)
        for b, t in zip(self.bodies, self.translations):
            out &= b.member(x - t)
        return out

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        half = np.array([b.bounding_half_extents() for b in self.bodies])
        t = self.translations.points
        return (t - half).min(axis=0), (t + half).max(axis=0)

    def to_dict(self) -> dict:
        return {"bodies": [b.to_dict() for b in self.bodies], "translations": self.translations.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "PlacedBodies":
        return cls(
            tuple(UnconditionalBody.from_dict(b) for b in data["bodies"]),
            Configuration.from_dict(data["translations"]),
        )


def axis_slice(body: UnconditionalBody, translation, axis: int, point) -> tuple[float, float] | None:
    """The chord of ``translation + body`` on the line through ``point``
    parallel to ``axis`` (0-based), as ``(center, halflength)``, or ``None``."""
    t = np.asarray(translation, dtype=float)
    w = float(body.halflength(axis, np.asarray(point, dtype=float) - t)[0])
    if w < 0:
        return None
    return float(t[axis]), w


def _slice_intervals(placed: PlacedBodies, axis: int, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-line interval endpoints, shape ``(m, N)``; missed bodies get an empty
    interval far to the left."""
    lo = np.empty((len(points), len(placed.bodies)))
    hi = np.empty_like(lo)
    for i, (b, t) in enumerate(zip(placed.bodies, placed.translations)):
        w = b.halflength(axis, points - t)
        hit = w >= 0
        lo[:, i] = np.where(hit, t[axis] - w, _EMPTY)
        hi[:, i] = np.where(hit, t[axis] + w, _EMPTY)
    return lo, hi


def _union_lengths(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    order = np.argsort(lo, axis=1)
    lo = np.take_along_axis(lo, order, axis=1)
    hi = np.take_along_axis(hi, order, axis=1)
    reach = np.maximum.accumulate(hi, axis=1)
    prev = np.concatenate([np.full((len(lo), 1), _EMPTY), reach[:, :-1]], axis=1)
    return np.sum(np.clip(hi - np.maximum(lo, prev), 0.0, None), axis=1)


def _intersection_lengths(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    missed = np.any(hi <= _EMPTY / 2, axis=1)
    return np.where(missed, 0.0, np.clip(hi.min(axis=1) - lo.max(axis=1), 0.0, None))


def union_slice_length(placed: PlacedBodies, axis: int, point) -> float:
    """Length of the union of the family along one axis-parallel line."""
    ivs = []
    for b, t in zip(placed.bodies, placed.translations):
        s = axis_slice(b, t, axis, point)
        if s is not None:
            ivs.append((s[0] - s[1], s[0] + s[1]))
    return interval_union_length(ivs)


def intersection_slice_length(placed: PlacedBodies, axis: int, point) -> float:
    ivs = []
    for b, t in zip(placed.bodies, placed.translations):
        s = axis_slice(b, t, axis, point)
        if s is None:
            return 0.0
        ivs.append((s[0] - s[1], s[0] + s[1]))
    return interval_intersection_length(ivs)


def _offsets(body: UnconditionalBody, k: int) -> list[float]:
    """Offsets along axis ``k`` where a slice length may jump or kink."""
    if body.family == "intersection":
        return sorted({v for m in body.members for v in _offsets(m, k)})
    a = body.half_extents[k]
    return [-a, 0.0, a]


@dataclass(frozen=True)
class _Axis:
    """Nodes along one transverse axis: each panel contributes its two end
    limits (taken just inside) around its cell midpoints."""

    nodes: np.ndarray
    weights: np.ndarray  # zero at panel ends
    panels: tuple[tuple[int, int, float], ...]  # (start, stop, cell width)


def _panel_axis(breaks: np.ndarray, resolution: int, span: float) -> _Axis:
    widths = np.diff(breaks)
    keep = widths > 1e-12 * span
    left, widths = breaks[:-1][keep], widths[keep]
    counts = np.maximum(1, np.round(resolution * widths / widths.sum()).astype(int))
    eps = 1e-9 * span
    nodes, weights, panels = [], [], []
    start = 0
    for a, w, n in zip(left, widths, counts):
        h = w / n
        nodes += [a + min(eps, 0.25 * h), *(a + h * (np.arange(n) + 0.5)), a + w - min(eps, 0.25 * h)]
        weights += [0.0, *([h] * n), 0.0]
        panels.append((start, start + n + 2, h))
        start += n + 2
    return _Axis(np.array(nodes), np.array(weights), tuple(panels))


def _grid_axes(placed: PlacedBodies, axis: int, resolution: int) -> list[_Axis]:
    lo, hi = placed.bounding_box()
    out = []
    for k in range(placed.dim):
        if k == axis:
            continue
        cuts = [t[k] + v for b, t in zip(placed.bodies, placed.translations) for v in _offsets(b, k)]
        breaks = np.unique(np.clip(np.array(cuts + [lo[k], hi[k]]), lo[k], hi[k]))
        out.append(_panel_axis(breaks, resolution, float(hi[k] - lo[k])))
    return out


def transverse_grid(placed: PlacedBodies, axis: int, resolution: int):
    """Tensor grid over the bounding box projected off ``axis``: points of
    shape ``(m, d)`` and their cell volumes (zero for panel-end nodes).

    Panel walls include every translated body extent, so a slice length that
    jumps (box faces) only does so between panels.
    """
    axes = _grid_axes(placed, axis, resolution)
    others = [k for k in range(placed.dim) if k != axis]
    mesh = np.meshgrid(*[ax.nodes for ax in axes], indexing="ij")
    pts = np.zeros((mesh[0].size, placed.dim))
    for k, m in zip(others, mesh):
        pts[:, k] = m.ravel()
    cell = np.ones(mesh[0].size)
    for w in np.meshgrid(*[ax.weights for ax in axes], indexing="ij"):
        cell *= w.ravel()
    return pts, cell


def _slice_lengths(placed: PlacedBodies, pts: np.ndarray, axis: int, lengths) -> np.ndarray:
    # chunk to bound memory in d = 3
    out = [lengths(*_slice_intervals(placed, axis, pts[s : s + 200_000])) for s in range(0, len(pts), 200_000)]
    return np.concatenate(out)


def _midpoint_bound(f: np.ndarray, axes: list[_Axis]) -> float:
    """Bound on the midpoint-rule error of the tensor grid.

    Inside a panel the slice length is continuous and piecewise smooth; a
    slope change ``s`` inside a cell of width ``h`` costs at most
    ``|s| h^2 / 8``, so each panel contributes ``h^2 / 8`` times the total
    variation of its secant slopes.  Directions add up for the product rule.
    """
    total = 0.0
    for j, ax in enumerate(axes):
        g = np.moveaxis(f, j, 0)
        other = np.ones(g.shape[1:])
        for w in np.meshgrid(*[a.weights for i, a in enumerate(axes) if i != j], indexing="ij"):
            other = other * w
        for start, stop, h in ax.panels:
            x = ax.nodes[start:stop]
            slopes = np.diff(g[start:stop], axis=0) / np.diff(x).reshape((-1,) + (1,) * (g.ndim - 1))
            tv = np.sum(np.abs(np.diff(slopes, axis=0)), axis=0)
            total += h * h / 8.0 * float(np.sum(tv * other))
    return total


def _by_slicing(placed: PlacedBodies, resolution: int, axis: int, lengths) -> tuple[float, float]:
    if placed.dim < 2:
        raise ValueError("slicing needs d >= 2")
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    axes = _grid_axes(placed, axis, resolution)
    pts, cell = transverse_grid(placed, axis, resolution)
    f = _slice_lengths(placed, pts, axis, lengths)
    value = float(np.dot(f, cell))
    err = _midpoint_bound(f.reshape([len(a.nodes) for a in axes]), axes)
    if lengths is _intersection_lengths:
        err += _unseen_intersection(placed, axis, pts, cell, f, axes)
    return value, err


def _unseen_intersection(placed, axis, pts, cell, f, axes) -> float:
    """Upper bound on the intersection hiding in cells whose midpoint misses it.

    Halflengths of unconditional bodies do not grow with ``|offset|``, so the
    point of a cell closest to each center gives a chord that covers every
    chord through the cell.
    """
    blank = (f <= 0) & (cell > 0)
    if not np.any(blank):
        return 0.0
    others = [k for k in range(placed.dim) if k != axis]
    half = np.ones((len(pts), len(others)))
    for i, w in enumerate(np.meshgrid(*[a.weights for a in axes], indexing="ij")):
        half[:, i] = 0.5 * w.ravel()
    mid, half = pts[blank], half[blank]
    near = mid.copy()
    reach_lo = np.full(len(mid), -np.inf)
    reach_hi = np.full(len(mid), np.inf)
    for b, t in zip(placed.bodies, placed.translations):
        near[:, others] = np.clip(t[others], mid[:, others] - half, mid[:, others] + half)
        w = b.halflength(axis, near - t)
        w = np.where(w >= 0, w, np.nan)
        reach_lo = np.maximum(reach_lo, t[axis] - w)
        reach_hi = np.minimum(reach_hi, t[axis] + w)
    upper = np.nan_to_num(np.clip(reach_hi - reach_lo, 0.0, None), nan=0.0)
    return float(np.dot(upper, cell[blank]))


def union_volume_by_slicing(placed: PlacedBodies, resolution: int = 200, axis: int = 0) -> tuple[float, float]:
    """Volume of the union as an integral of slice lengths over the transverse
    hyperplane, midpoint rule with about ``resolution`` cells per transverse
    axis, cell walls aligned with the body extents.

    Returns the value and a bound on the quadrature error built from the
    variation of slice-length slopes inside each panel.
    """
    return _by_slicing(placed, resolution, axis, _union_lengths)


def intersection_volume_by_slicing(placed: PlacedBodies, resolution: int = 200, axis: int = 0) -> tuple[float, float]:
    return _by_slicing(placed, resolution, axis, _intersection_lengths)


def slicewise_domination(p_family: PlacedBodies, q_family: PlacedBodies, axis: int, resolution: int) -> tuple[float, float]:
    """Smallest per-line margins ``len_p - len_q`` (union) and
    ``len_q - len_p`` (intersection) over a transverse grid.

    When the two families differ only in coordinate ``axis`` and that
    coordinate is contracted, both margins are non-negative line by line.
    """
    pts_p, _ = transverse_grid(p_family, axis, resolution)
    pts_q, _ = transverse_grid(q_family, axis, resolution)
    pts = np.vstack([pts_p, pts_q])
    lp, hp = _slice_intervals(p_family, axis, pts)
    lq, hq = _slice_intervals(q_family, axis, pts)
    u = _union_lengths(lp, hp) - _union_lengths(lq, hq)
    i = _intersection_lengths(lq, hq) - _intersection_lengths(lp, hp)
    return float(u.min()), float(i.min())


def exact_1d_lengths(centers, halfwidths) -> tuple[float, float]:
    """Union and intersection lengths of intervals ``[c - w, c + w]``."""
    ivs = [(c - w, c + w) for c, w in zip(centers, halfwidths)]
    return interval_union_length(ivs), interval_intersection_length(ivs)
