import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpgeom.measures import (
    ball_intrinsic,
    cap_and_cone_volumes,
    cap_sector_bound,
    cap_volume,
    cone_volume,
    interval_intersection_length,
    interval_union_length,
    kappa,
    mc_intrinsic_v1,
    mc_volume,
    sigma_asymptotic,
    sigma_simplex_density,
)


def test_kappa_values():
    assert kappa(1) == pytest.approx(2.0, abs=1e-15)
    assert kappa(2) == pytest.approx(math.pi, abs=1e-15)
    assert kappa(3) == pytest.approx(4 * math.pi / 3, abs=1e-15)


@pytest.mark.parametrize("d", range(2, 21))
def test_kappa_recursion(d):
    ratio = math.sqrt(math.pi) * math.gamma((d + 1) / 2) / math.gamma(d / 2 + 1)
    assert kappa(d) == pytest.approx(kappa(d - 1) * ratio, rel=1e-12)


def test_ball_intrinsic_values():
    for d in range(1, 8):
        assert ball_intrinsic(d, d) == pytest.approx(kappa(d))
    assert ball_intrinsic(2, 1) == pytest.approx(math.pi)
    assert ball_intrinsic(3, 1) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        ball_intrinsic(2, 3)


# -- Monte Carlo volume --------------------------------------------------------


def test_mc_volume_examples():
    box = (np.zeros(2), np.ones(2))
    full = mc_volume(lambda x: np.ones(len(x), dtype=bool), box, 1000, seed=0)
    assert full.value == 1.0 and full.stderr == 0.0
    empty = mc_volume(lambda x: np.zeros(len(x), dtype=bool), box, 1000, seed=0)
    assert empty.value == 0.0
    disk = mc_volume(lambda x: np.sum(x * x, axis=1) <= 1, (-np.ones(2), np.ones(2)), 10**6, seed=1)
    assert abs(disk.value - math.pi) <= 4 * disk.stderr
    with pytest.raises(ValueError):
        mc_volume(lambda x: x[:, 0] > 0, box, 0)


def test_mc_volume_reproducible():
    member = lambda x: np.sum(x * x, axis=1) <= 1  # noqa: E731
    box = (-np.ones(3), np.ones(3))
    a = mc_volume(member, box, 50_000, seed=9)
    b = mc_volume(member, box, 50_000, seed=9)
    assert a == b


def test_mc_volume_homogeneity():
    box = (-np.ones(3), np.ones(3))
    unit = mc_volume(lambda x: np.sum(x * x, axis=1) <= 1, box, 200_000, seed=2)
    half = mc_volume(lambda x: np.sum(x * x, axis=1) <= 0.25, box, 200_000, seed=3)
    err = math.hypot(unit.stderr / 8, half.stderr)
    assert abs(unit.value / 8 - half.value) <= 4 * err


# -- intervals --------------------------------------------------------------------


def test_interval_examples():
    assert interval_union_length([(0, 1), (0.5, 2)]) == 2
    assert interval_union_length([(0, 1), (2, 3)]) == 2
    assert interval_union_length([(0, 3), (1, 2)]) == 3
    assert interval_union_length([]) == 0
    assert interval_intersection_length([(0, 3), (1, 2)]) == 1
    assert interval_intersection_length([(0, 1), (2, 3)]) == 0
    with pytest.raises(ValueError):
        interval_union_length([(2, 1)])


intervals = st.lists(
    st.tuples(st.floats(-100, 100), st.floats(0, 50)).map(lambda t: (t[0], t[0] + t[1])), max_size=12
)


@settings(max_examples=150, deadline=None)
@given(intervals, st.randoms(use_true_random=False))
def test_interval_union_permutation_and_monotone(ivs, rnd):
    base = interval_union_length(ivs)
    shuffled = list(ivs)
    rnd.shuffle(shuffled)
    assert interval_union_length(shuffled) == pytest.approx(base, abs=1e-9)
    assert interval_union_length(ivs + [(0.0, 1.0)]) >= base - 1e-9
    # grid oracle
    if ivs:
        xs = np.linspace(-100, 150, 250_001)
        cover = np.zeros_like(xs, dtype=bool)
        for a, b in ivs:
            cover |= (xs >= a) & (xs <= b)
        assert abs(cover.sum() * (xs[1] - xs[0]) - base) <= 2 * len(ivs) * (xs[1] - xs[0]) + 1e-9


# -- caps and cones -------------------------------------------------------------------


def test_cap_examples():
    assert cap_volume(2, 0.0) == pytest.approx(math.pi / 2, abs=1e-14)
    h = 0.5
    assert cap_volume(3, h) == pytest.approx(math.pi * (2 / 3 - h + h**3 / 3), abs=1e-12)
    near = cap_and_cone_volumes(5, 1.0)
    assert near.cap == pytest.approx(0.0, abs=1e-15) and near.cone == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        cap_volume(3, 1.5)


def test_cone_formula_2d():
    # triangle with apex at the center over a chord at height h
    h = 0.6
    assert cone_volume(2, h) == pytest.approx(h * math.sqrt(1 - h * h))


@pytest.mark.parametrize("d", range(2, 11))
def test_cap_complement(d):
    for h in np.linspace(-0.95, 0.95, 39):
        assert cap_volume(d, h) == pytest.approx(kappa(d) - cap_volume(d, -h), abs=1e-12)


@pytest.mark.parametrize("d", range(2, 11))
def test_cap_bound_dominates_sector(d):
    # the estimate bounds cap plus cone (the sector), hence the cap alone
    for h in np.linspace(1e-3, 1 - 1e-6, 2000):
        cc = cap_and_cone_volumes(d, float(h))
        assert cc.cap + cc.cone <= cc.cap_bound * (1 + 1e-12)
        assert cap_sector_bound(d, float(h)) == cc.cap_bound


def test_cap_against_monte_carlo():
    d, h = 4, 0.3
    est = mc_volume(lambda x: (np.sum(x * x, axis=1) <= 1) & (x[:, 0] >= h), (-np.ones(d), np.ones(d)), 10**6, seed=5)
    assert abs(est.value - cap_volume(d, h)) <= 4 * est.stderr


# -- simplex density -------------------------------------------------------------------


def test_sigma_low_dimensions():
    s1 = sigma_simplex_density(1, 10_000, seed=0)
    assert abs(s1.value - 1.0) <= max(4 * s1.stderr, 1e-12)
    s2 = sigma_simplex_density(2, 10**6, seed=1)
    assert abs(s2.value - math.pi / (2 * math.sqrt(3))) <= 4 * s2.stderr


def test_sigma_reproducible_and_asymptotic_shape():
    a = sigma_simplex_density(4, 200_000, seed=1)
    assert a == sigma_simplex_density(4, 200_000, seed=1)
    s8 = sigma_simplex_density(8, 200_000, seed=2)
    ratio = s8.value / sigma_asymptotic(8)
    assert 0.5 <= ratio <= 2.0


# -- mean width ---------------------------------------------------------------------------


def test_v1_of_ball_and_segment():
    ball = mc_intrinsic_v1(lambda u: 1.0, 3, 2000, seed=0)
    assert ball.value == pytest.approx(4.0)
    length = 1.7
    seg = mc_intrinsic_v1(lambda u: 0.5 * length * abs(u[0]), 2, 20_000, seed=1)
    assert abs(seg.value - length) <= 4 * seg.stderr
    point = mc_intrinsic_v1(lambda u: float(u @ np.array([0.3, -0.2])), 2, 100, seed=2)
    assert point.value == pytest.approx(0.0, abs=1e-12)
