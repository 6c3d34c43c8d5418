import numpy as np
import pytest

from kpgeom.measures import mc_volume


def mc_disk_area(centers, radius=1.0, kind="intersection", n=200_000, seed=0):
    """Hit-or-miss oracle for intersections or unions of equal disks."""
    c = np.asarray(centers, dtype=float)
    if kind == "intersection":
        lo, hi = (c - radius).max(axis=0), (c + radius).min(axis=0)
        if np.any(hi <= lo):
            return 0.0, 0.0
    else:
        lo, hi = c.min(axis=0) - radius, c.max(axis=0) + radius

    def member(x):
        d2 = np.sum((x[:, None, :] - c[None, :, :]) ** 2, axis=2)
        inside = d2 <= radius * radius
        return inside.all(axis=1) if kind == "intersection" else inside.any(axis=1)

    est = mc_volume(member, (lo, hi), n, seed=seed)
    return est.value, est.stderr


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
