"""Acceptance suite: one test per criterion, each printing a single
``[PASS]``/``[FAIL]`` line with the numbers behind the verdict.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or as a script.
"""

import math
import time

import numpy as np
import pytest

from kpgeom import bounds, experiments, planar
from kpgeom.balls import check_ball_covering_containment, check_spindle_fixed_point
from kpgeom.cli import main as cli_main
from kpgeom.geometry import (
    Configuration,
    PlacementError,
    circumball,
    circumball_bruteforce,
    sample_diameter_bounded,
    sample_min_distance,
)
from kpgeom.measures import ball_intrinsic, random_directions, sigma_simplex_density

SQRT2 = math.sqrt(2.0)


def _uniform_disk(rng, n, radius):
    r = radius * np.sqrt(rng.uniform(size=n))
    t = rng.uniform(0, 2 * math.pi, size=n)
    return np.stack([r * np.cos(t), r * np.sin(t)], axis=1)


def criterion_1():
    t0 = time.perf_counter()
    worst, bad = math.inf, 0
    for k in (1, 2):
        s = experiments.campaign("T4", 2, k, 6, experiments.default_lambda_grid(), trials=1000, seed=1)
        bad += s.counts["violated"] + sum(r.method != "planar_exact" for r in s.records)
        worst = min(worst, s.min_margin())
    took = time.perf_counter() - t0
    ok = bad == 0 and worst >= -1e-9 and took < 120
    return ok, f"violations={bad} min_margin={worst:.3e} time={took:.1f}s"


def criterion_2():
    t0 = time.perf_counter()
    r = bounds.replay_intersection_grid(range(2, 11), 50)
    took = time.perf_counter() - t0
    ok = r.ok and r.min_margin >= -1e-12 and took < 1.0
    return ok, f"checked={r.checked} min_margin={r.min_margin:.3e} time={took:.3f}s"


def criterion_3():
    rng = np.random.default_rng(3)
    worst_f = worst_g = math.inf
    n_q = 0
    while n_q < 500:
        lam = float(rng.uniform(0.01, SQRT2))
        q = sample_diameter_bounded(rng, int(rng.integers(2, 9)), 2, lam)
        m = planar.disk_intersection_measure(q.points)
        for k in (1, 2):
            worst_f = min(worst_f, m.intrinsic(k) - bounds.f_lower(2, k, lam).value)
        n_q += 1
    n_p = 0
    while n_p < 500:
        lam = float(rng.uniform(0.05, SQRT2))
        n = int(rng.integers(2, 10))
        try:
            p = sample_min_distance(rng, n, 2, lam, 0.5 + lam, budget=5_000)
        except PlacementError:
            continue
        m = planar.disk_intersection_measure(p)
        for k in (1, 2):
            worst_g = min(worst_g, bounds.g_upper(2, k, n, lam).value - m.intrinsic(k))
        n_p += 1
    ok = worst_f >= -1e-9 and worst_g >= -1e-9
    return ok, f"q-sets={n_q} min(V_k - f_lower)={worst_f:.3e} p-sets={n_p} min(g_upper - V_k)={worst_g:.3e}"


def _random_spindle_instance(rng):
    rho = float(rng.uniform(0.3, 2.0))
    while True:
        x = _uniform_disk(rng, int(rng.integers(1, 8)), rho) + rng.normal(size=2)
        if circumball(x).radius <= rho:
            return x, rho


def criterion_4():
    rng = np.random.default_rng(4)
    worst = -math.inf
    for _ in range(500):
        x, rho = _random_spindle_instance(rng)
        hull = planar.spindle_hull_measure(x, rho)
        inter = planar.disk_intersection_measure(x, rho)
        for k in (1, 2):
            lhs = hull.intrinsic(k) ** (1 / k) + inter.intrinsic(k) ** (1 / k)
            worst = max(worst, lhs - rho * ball_intrinsic(2, k) ** (1 / k))
    return worst <= 1e-9, f"instances=500 max(lhs - rhs)={worst:.3e}"


def criterion_5():
    rng = np.random.default_rng(5)
    worst_diff = worst_width = 0.0
    for _ in range(100):
        x, rho = _random_spindle_instance(rng)
        y = planar.spindle_hull(x, rho)
        b = planar.disk_intersection(x, rho)
        u = random_directions(rng, 10_000, 2)
        hy, hy_neg = y.supports(u), y.supports(-u)
        hb, hb_neg = b.supports(u), b.supports(-u)
        worst_diff = max(worst_diff, float(np.max(np.abs(hy + hb_neg - rho))))
        worst_width = max(worst_width, float(np.max(np.abs(hy + hb + hy_neg + hb_neg - 2 * rho))))
    ok = worst_diff <= 1e-8 and worst_width <= 1e-8
    return ok, f"instances=100 directions=1e4 sup|h_Y(u)+h_B(-u)-rho|={worst_diff:.3e} sup|width-2rho|={worst_width:.3e}"


def criterion_6():
    s2 = sigma_simplex_density(2, 1_000_000, seed=6)
    s1 = sigma_simplex_density(1, 1_000_000, seed=6)
    z2 = abs(s2.value - math.pi / (2 * math.sqrt(3))) / s2.stderr
    ok1 = abs(s1.value - 1.0) <= max(4 * s1.stderr, 1e-12)
    return z2 <= 4 and ok1, f"sigma_2={s2.value:.6f} z={z2:.2f} sigma_1={s1.value:.6f}"


def criterion_7():
    bad, worst, details = 0, math.inf, []
    for lam in (1.45, 1.6, 1.8):
        n = math.ceil((1 + lam / 2) ** 2 * 2)
        s = experiments.campaign("T8A", 2, 2, n, [lam], trials=500, seed=7)
        bad += s.counts["violated"]
        worst = min(worst, s.min_margin())
        details.append(f"N({lam})={n}")
    replay = [bounds.replay_union_case_c(d) for d in range(2, 11)]
    case_c = min(r.min_margin for r in replay)
    ok = bad == 0 and worst >= -1e-9 and all(r.ok for r in replay) and case_c >= 0
    return ok, f"{' '.join(details)} violations={bad} min_margin={worst:.3e} case_c_min_margin={case_c:.3e}"


def criterion_8():
    parts, ok = [], True
    for d, trials in ((1, 100_000), (2, 500), (3, 100)):
        s = experiments.strong_contraction_campaign(d, trials=trials, seed=8)
        ok &= s.violations == 0 and s.min_slice_margin >= -1e-12
        parts.append(f"d={d}: trials={trials} violated={s.violations} inconclusive={s.counts['inconclusive']}")
    return ok, "; ".join(parts)


def criterion_9():
    fig1, fig2 = experiments.figure_fixtures()
    ok = fig1.passed and fig2.passed
    return ok, (
        f"fig1 second intersection area={fig1.values['intersection_area_second']:.2e} "
        f"strong both ways={fig1.checks['second_is_strong_contraction_of_first'] and fig1.checks['first_is_strong_contraction_of_second']}; "
        f"fig2 perimeter gain={fig2.values['perimeter_gain']:.4f}"
    )


def criterion_10():
    rng = np.random.default_rng(10)
    worst_cb = 0.0
    for i in range(200):
        d = 1 + i % 3
        pts = rng.normal(size=(int(rng.integers(1, 12)), d)) * rng.uniform(0.1, 10)
        fast, slow = circumball(pts), circumball_bruteforce(pts)
        worst_cb = max(worst_cb, abs(fast.radius - slow.radius) / max(1.0, slow.radius))
    from conftest import mc_disk_area

    mc_bad = 0
    for i in range(200):
        pts = rng.uniform(-0.7, 0.7, size=(int(rng.integers(1, 7)), 2))
        kind = "intersection" if i % 2 == 0 else "union"
        fn = planar.disk_intersection_measure if kind == "intersection" else planar.disk_union_measure
        value, err = mc_disk_area(pts, kind=kind, n=100_000, seed=i)
        mc_bad += abs(value - fn(pts).area) > 4 * err + 1e-12
    cover_fail = 0
    for i in range(50):
        q = _uniform_disk(rng, int(rng.integers(1, 6)), 0.45)
        rep = check_ball_covering_containment(q, float(rng.uniform(0.05, 1.0)), 2_000, seed=i)
        cover_fail += rep.failures
    fixed = 0.0
    for i in range(50):
        x = _uniform_disk(rng, int(rng.integers(1, 6)), 0.6)
        fixed = max(fixed, check_spindle_fixed_point(x, 1.0, 2_000, seed=i).worst_margin)
    ok = worst_cb <= 1e-10 and mc_bad == 0 and cover_fail == 0 and fixed <= 1e-9
    return ok, (f"circumball rel err={worst_cb:.1e}; MC misses={mc_bad}/200; "
                f"containment failures={cover_fail}/1e5; spindle fixed point={fixed:.1e}")


def criterion_11(tmp_path):
    runs = {
        "verify": ["verify", "--theorem", "T4", "--d", "2", "--N", "6", "--lambda-grid", "0.5,1.5",
                   "--trials", "25", "--seed", "11"],
        "verify-mc": ["verify", "--theorem", "T4", "--d", "3", "--k", "3", "--N", "15", "--lambda", "1.0",
                      "--trials", "4", "--budget", "5000", "--seed", "11"],
        "strong": ["verify", "--theorem", "T6", "--d", "2", "--trials", "8", "--resolution", "40", "--seed", "11"],
    }
    same = True
    for name, argv in runs.items():
        blobs = []
        for i, threads in enumerate(("1", "1", "4")):
            out = tmp_path / f"{name}{i}"
            cli_main(argv + ["--threads", threads, "--out", str(out)])
            blobs.append((out / "results.csv").read_bytes())
        same &= blobs[0] == blobs[1] == blobs[2]
    return same, f"{len(runs)} commands x 3 runs (threads 1, 1, 4): byte-identical={same}"


def _check(capsys, name, result):
    ok, detail = result
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {name}: {detail}")
    assert ok, detail


def test_criterion_01_intersection_campaign(capsys):
    _check(capsys, "1 (intersection campaign, d=2, N=6)", criterion_1())


def test_criterion_02_intersection_replay(capsys):
    _check(capsys, "2 (intersection proof replay)", criterion_2())


def test_criterion_03_bound_soundness(capsys):
    _check(capsys, "3 (f_lower / g_upper soundness)", criterion_3())


def test_criterion_04_additive_blaschke_santalo(capsys):
    _check(capsys, "4 (additive Blaschke-Santalo)", criterion_4())


def test_criterion_05_minkowski_difference(capsys):
    _check(capsys, "5 (Minkowski difference, constant width)", criterion_5())


def test_criterion_06_sigma(capsys):
    _check(capsys, "6 (simplex density)", criterion_6())


def test_criterion_07_union_campaigns(capsys):
    _check(capsys, "7 (union part a campaigns, case c replay)", criterion_7())


def test_criterion_08_strong_contractions(capsys):
    _check(capsys, "8 (strong contractions)", criterion_8())


def test_criterion_09_figures(capsys):
    _check(capsys, "9 (figure fixtures)", criterion_9())


def test_criterion_10_oracles(capsys):
    _check(capsys, "10 (geometry kernel oracles)", criterion_10())


def test_criterion_11_determinism(capsys, tmp_path):
    _check(capsys, "11 (determinism)", criterion_11(tmp_path))


if __name__ == "__main__":
    import sys
    import tempfile
    from pathlib import Path

    sys.path.insert(0, str(Path(__file__).parent))
    failed = 0
    for i in range(1, 12):
        fn = globals()[f"criterion_{i}"]
        if i == 11:
            with tempfile.TemporaryDirectory() as tmp:
                ok, detail = fn(Path(tmp))
        else:
            ok, detail = fn()
        failed += not ok
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {i}: {detail}", flush=True)
    sys.exit(1 if failed else 0)
