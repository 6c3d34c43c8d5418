"""Verification campaigns over random contractions, annealing search for
counterexamples, strong-contraction checks and the figure fixtures."""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import bounds, planar
from .balls import BallIntersection
from .bodies import (
    PlacedBodies,
    UnconditionalBody,
    axis_box,
    cross_polytope,
    exact_1d_lengths,
    intersection_volume_by_slicing,
    lp_ball,
    slicewise_domination,
    union_volume_by_slicing,
)
from .geometry import (
    Configuration,
    as_configuration,
    dump_configuration,
    is_contraction,
    is_strong_contraction,
    pairwise_distances,
    random_coordinatewise_contraction,
    random_reflection_composite,
    sample_uniform_contraction_pair,
    uniform_contraction_interval,
)
from .measures import interval_union_length, mc_intrinsic_v1, mc_volume

log = logging.getLogger(__name__)

Z_VIOLATION = 5.0
EXACT_TOL = 1e-9
SAMPLER = "dart-throwing-p/uniform-ball-q"
RESULT_COLUMNS = (
    "theorem", "d", "k", "N", "lambda", "trial", "lhs", "lhs_err",
    "rhs", "rhs_err", "margin", "method", "verdict", "seed",
)


@dataclass
class VerificationRecord:
    """One inequality check ``lhs <= rhs`` (intersection form) or
    ``lhs >= rhs`` (union form); ``margin`` is positive when it holds."""

    theorem: str
    d: int
    k: int
    n: int
    lam: float
    lhs: float
    lhs_err: float
    rhs: float
    rhs_err: float
    margin: float
    method: str
    seed: int | None
    verdict: str = ""
    trial: int = 0
    exploratory: bool = False
    notes: str = ""

    def __post_init__(self):
        if not self.verdict:
            self.verdict = classify(self.margin, self.lhs_err, self.rhs_err, self.method)

    def row(self) -> dict:
        return {
            "theorem": self.theorem, "d": self.d, "k": self.k, "N": self.n,
            "lambda": self.lam, "trial": self.trial, "lhs": self.lhs, "lhs_err": self.lhs_err,
            "rhs": self.rhs, "rhs_err": self.rhs_err, "margin": self.margin,
            "method": self.method, "verdict": self.verdict, "seed": self.seed,
        }


def classify(margin: float, lhs_err: float, rhs_err: float, method: str) -> str:
    """``violated`` only for a negative margin beyond the method's tolerance:
    ``EXACT_TOL`` for exact methods, ``Z_VIOLATION`` combined standard errors
    for Monte Carlo.  A negative margin inside the error bars is
    ``inconclusive``."""
    if method in ("planar_exact", "exact_1d"):
        return "holds" if margin >= -EXACT_TOL else "violated"
    err = math.hypot(lhs_err, rhs_err)
    if margin >= 0:
        return "holds"
    if method == "slicing":
        return "inconclusive" if margin >= -(lhs_err + rhs_err) - 1e-12 else "violated"
    return "inconclusive" if margin >= -Z_VIOLATION * err else "violated"


def derive_seed(master: int, *path: int) -> int:
    return int(np.random.SeedSequence([int(master), *map(int, path)]).generate_state(1)[0])


# -- measuring one configuration ------------------------------------------------


def _intersection_box(points: np.ndarray, radius: float = 1.0):
    return (points - radius).max(axis=0), (points + radius).min(axis=0)


def intersection_intrinsic(config, k: int, method: str = "auto", budget: int = 200_000, seed=0) -> tuple[float, float, str]:
    """``V_k`` of ``B[config]`` with its standard error and the method used."""
    config = as_configuration(config)
    d = config.dim
    pts = config.points
    if not 1 <= k <= d:
        raise ValueError(f"order k={k} out of range 1..{d}")
    if method in ("auto", "exact", "planar_exact", "exact_1d") and d <= 2:
        if d == 1:
            return max(0.0, float(pts.min() - pts.max()) + 2.0), 0.0, "exact_1d"
        return planar.disk_intersection_measure(pts).intrinsic(k), 0.0, "planar_exact"
    if method in ("exact", "planar_exact", "exact_1d"):
        raise ValueError(f"no exact method for d={d}")
    body = BallIntersection(config)
    if body.is_empty():
        return 0.0, 0.0, "mc"
    if k == d:
        lo, hi = _intersection_box(pts)
        est = mc_volume(body.contains, (lo, hi), budget, seed=seed)
        return est.value, est.stderr, "mc"
    if k == 1:
        est = mc_intrinsic_v1(body.support, d, max(2, budget), seed=seed)
        return est.value, est.stderr, "mc"
    raise ValueError(f"V_{k} is not available in dimension {d}")


def union_volume(config, method: str = "auto", budget: int = 200_000, seed=0) -> tuple[float, float, str]:
    config = as_configuration(config)
    d = config.dim
    pts = config.points
    if method in ("auto", "exact", "planar_exact", "exact_1d") and d <= 2:
        if d == 1:
            return interval_union_length([(x - 1.0, x + 1.0) for x in pts[:, 0]]), 0.0, "exact_1d"
        return planar.disk_union_measure(pts).area, 0.0, "planar_exact"
    if method in ("exact", "planar_exact", "exact_1d"):
        raise ValueError(f"no exact method for d={d}")
    lo, hi = pts.min(axis=0) - 1.0, pts.max(axis=0) + 1.0

    def member(x):
        out = np.zeros(len(x), dtype=bool)
        for c in pts:
            out |= np.sum((x - c) ** 2, axis=1) <= 1.0
        return out

    est = mc_volume(member, (lo, hi), budget, seed=seed)
    return est.value, est.stderr, "mc"


def _separating_value(p, q) -> float:
    iv = uniform_contraction_interval(p, q)
    return iv[1] if iv else float("nan")


def verify_intersection_pair(p, q, k: int, method: str = "auto", budget: int = 200_000, seed=0,
                             theorem: str = "T4", lam: float | None = None) -> VerificationRecord:
    """Check ``V_k(B[p]) <= V_k(B[q])`` for a contraction ``q`` of ``p``."""
    p, q = as_configuration(p), as_configuration(q)
    if not is_contraction(p, q):
        raise ValueError("q is not a contraction of p")
    lhs, le, m = intersection_intrinsic(p, k, method, budget, seed)
    # common random numbers for both sides
    rhs, re_, _ = intersection_intrinsic(q, k, method, budget, seed)
    lam = _separating_value(p, q) if lam is None else lam
    rec = VerificationRecord(theorem, p.dim, k, len(p), lam, lhs, le, rhs, re_, rhs - lhs, m, seed)
    if rec.verdict == "violated" and m == "mc" and p.dim == 2:
        log.warning("Monte Carlo violation in the plane; rechecking exactly")
        return verify_intersection_pair(p, q, k, "planar_exact", budget, seed, theorem, lam)
    return rec


def verify_union_pair(p, q, method: str = "auto", budget: int = 200_000, seed=0,
                      theorem: str = "T5", lam: float | None = None) -> VerificationRecord:
    """Check ``V_d(union B[p]) >= V_d(union B[q])``."""
    p, q = as_configuration(p), as_configuration(q)
    if not is_contraction(p, q):
        raise ValueError("q is not a contraction of p")
    lam = _separating_value(p, q) if lam is None else lam
    lhs, le, m = union_volume(p, method, budget, seed)
    rhs, re_, _ = union_volume(q, method, budget, seed)
    notes = "trivial regime: lambda >= 2" if lam >= 2.0 else ""
    rec = VerificationRecord(theorem, p.dim, p.dim, len(p), lam, lhs, le, rhs, re_, lhs - rhs, m, seed, notes=notes)
    if rec.verdict == "violated" and m == "mc" and p.dim == 2:
        return verify_union_pair(p, q, "planar_exact", budget, seed, theorem, lam)
    return rec


# -- campaigns --------------------------------------------------------------------


@dataclass
class CampaignSummary:
    theorem: str
    d: int
    k: int
    n: int
    lambdas: list
    trials: int
    seed: int
    exploratory: bool
    counts: dict = field(default_factory=lambda: {"holds": 0, "violated": 0, "inconclusive": 0})
    records: list = field(default_factory=list)
    in_hypotheses: dict = field(default_factory=dict)
    sampler: str = SAMPLER

    @property
    def violations_in_hypotheses(self) -> int:
        return sum(
            1 for r in self.records if r.verdict == "violated" and self.in_hypotheses.get(r.lam, False)
        )

    def min_margin(self) -> float:
        return min((r.margin for r in self.records), default=math.nan)


def default_lambda_grid() -> list[float]:
    return [0.25 * i for i in range(1, 9)]


def _trial(theorem: str, d: int, k: int, n: int, lam: float, cell: int, t: int, seed: int, method: str,
           budget: int, exploratory: bool) -> VerificationRecord:
    s = derive_seed(seed, cell, t)
    p, q = sample_uniform_contraction_pair(d, n, lam, seed=s)
    if theorem.upper() in bounds.UNION_THEOREMS:
        rec = verify_union_pair(p, q, method, budget, s, theorem, lam)
    else:
        rec = verify_intersection_pair(p, q, k, method, budget, s, theorem, lam)
    rec.trial = t
    rec.exploratory = exploratory
    return rec


def campaign(theorem: str, d: int, k: int, n: int, lambdas=None, trials: int = 1000, seed: int = 0,
             method: str = "auto", budget: int = 100_000, exploratory: bool = False, threads: int = 1,
             out_dir=None, sigma: float | None = None) -> CampaignSummary:
    """Random uniform-contraction trials against one inequality.

    Cells outside the named result's hypotheses are refused unless
    ``exploratory`` is set.  Violated records are dumped as configuration
    pairs into ``out_dir`` when given.
    """
    theorem = theorem.upper()
    if theorem == "T6":
        raise ValueError("use strong_contraction_campaign for T6")
    lambdas = default_lambda_grid() if lambdas is None else [float(x) for x in lambdas]
    summary = CampaignSummary(theorem, d, k, n, lambdas, trials, seed, exploratory)
    for lam in lambdas:
        ok = bounds.theorem_hypotheses(theorem, d, n, lam, sigma)
        summary.in_hypotheses[lam] = ok
        if not ok and not exploratory:
            raise ValueError(
                f"{theorem} hypotheses fail at d={d}, N={n}, lambda={lam}; pass exploratory=True"
            )
    jobs = [(theorem, d, k, n, lam, c, t, seed, method, budget, exploratory)
            for c, lam in enumerate(lambdas) for t in range(trials)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda a: _trial(*a), jobs))
    else:
        records = [_trial(*a) for a in jobs]
    for rec in records:
        summary.counts[rec.verdict] += 1
    summary.records = records
    if out_dir is not None:
        dump_violations(summary, out_dir)
    return summary


def dump_violations(summary: CampaignSummary, out_dir) -> list[Path]:
    out = Path(out_dir)
    written = []
    for c, lam in enumerate(summary.lambdas):
        for rec in summary.records:
            if rec.lam != lam or rec.verdict != "violated":
                continue
            out.mkdir(parents=True, exist_ok=True)
            s = derive_seed(summary.seed, c, rec.trial)
            p, q = sample_uniform_contraction_pair(summary.d, summary.n, lam, seed=s)
            stem = out / f"violation_{summary.theorem}_l{c}_t{rec.trial}"
            dump_configuration(p, f"{stem}_p.json")
            dump_configuration(q, f"{stem}_q.json")
            written.append(stem)
    return written


# -- annealing search ----------------------------------------------------------------


@dataclass
class SearchState:
    p: Configuration
    q: Configuration
    objective: float
    temperature: float
    best_p: Configuration
    best_q: Configuration
    best_objective: float
    trace: list = field(default_factory=list)
    repairs: dict = field(default_factory=lambda: {"q_rescaled": 0, "p_pushed": 0, "p_rescaled": 0, "rejected": 0})
    accepted: int = 0


def _repair_q(q: np.ndarray, lam: float) -> tuple[np.ndarray, bool]:
    diam = pairwise_distances(q).max_pairwise
    if diam <= lam:
        return q, False
    c = q.mean(axis=0)
    return c + (q - c) * (lam / diam) * (1.0 - 1e-12), True


def _repair_p(p: np.ndarray, lam: float, rng, pushes: int = 50) -> tuple[np.ndarray, str]:
    p = p.copy()
    how = ""
    for _ in range(pushes):
        dist = pairwise_distances(p).matrix + np.diag(np.full(len(p), np.inf))
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        if dist[i, j] >= lam:
            return p, how
        v = p[j] - p[i]
        nv = np.linalg.norm(v)
        if nv == 0:
            v = rng.normal(size=p.shape[1])
            nv = np.linalg.norm(v)
        shift = 0.5 * (lam * (1.0 + 1e-12) - dist[i, j]) * v / nv
        p[i] -= shift
        p[j] += shift
        how = "pushed"
    # fall back to scaling about the centroid, which always works
    m = pairwise_distances(p).min_pairwise
    if m < lam:
        c = p.mean(axis=0)
        p = c + (p - c) * (lam / m) * (1.0 + 1e-12)
        how = "rescaled"
    return p, how


def _objective(p, q, k, method, budget, seed) -> float:
    lp = intersection_intrinsic(p, k, method, budget, seed)[0]
    lq = intersection_intrinsic(q, k, method, budget, seed)[0]
    return lp - lq


def anneal_search(d: int, k: int, n: int, lam: float, iterations: int = 10_000,
                  schedule: tuple[float, float] = (0.05, 1e-4), seed: int = 0, step: float | None = None,
                  method: str = "auto", budget: int = 20_000, trace_every: int = 1) -> SearchState:
    """Simulated annealing for ``V_k(B[p]) - V_k(B[q]) > 0`` under (UC).

    Each move perturbs one family with Gaussian noise, then repairs: ``q`` is
    shrunk about its centroid to diameter ``lam``, then ``p``'s closest pairs
    are pushed apart to distance ``lam``.  Only states satisfying (UC)
    exactly are accepted.  ``schedule`` is the geometric temperature range.
    """
    if not 0 < lam <= 2:
        raise ValueError("lambda must lie in (0, 2]")
    rng = np.random.default_rng(seed)
    # start with p near the unit ball so B[p] is not trivially empty
    region = max(1.0, lam * 1.05)
    try:
        p0, q0 = sample_uniform_contraction_pair(d, n, lam, region_scale=region, seed=derive_seed(seed, 0))
    except RuntimeError:
        p0, q0 = sample_uniform_contraction_pair(d, n, lam, seed=derive_seed(seed, 0))
    step = 0.1 * lam if step is None else step
    cur_p, cur_q = p0.points.copy(), q0.points.copy()
    cur = _objective(p0, q0, k, method, budget, seed)
    t0, t1 = schedule
    state = SearchState(p0, q0, cur, t0, p0, q0, cur)
    state.trace.append((0, cur, cur, t0))
    for it in range(1, iterations + 1):
        temp = t0 * (t1 / t0) ** (it / max(1, iterations))
        new_p, new_q = cur_p.copy(), cur_q.copy()
        if rng.random() < 0.5:
            new_p += rng.normal(scale=step, size=new_p.shape)
        else:
            new_q += rng.normal(scale=step, size=new_q.shape)
        new_q, scaled = _repair_q(new_q, lam)
        new_p, how = _repair_p(new_p, lam, rng)
        state.repairs["q_rescaled"] += int(scaled)
        if how == "pushed":
            state.repairs["p_pushed"] += 1
        elif how == "rescaled":
            state.repairs["p_rescaled"] += 1
        dq = pairwise_distances(new_q).max_pairwise
        dp = pairwise_distances(new_p).min_pairwise
        if not dq <= lam <= dp:
            state.repairs["rejected"] += 1
            continue
        obj = _objective(new_p, new_q, k, method, budget, seed)
        if obj >= cur or rng.random() < math.exp((obj - cur) / temp):
            cur_p, cur_q, cur = new_p, new_q, obj
            state.accepted += 1
            if cur > state.best_objective:
                state.best_objective = cur
                state.best_p, state.best_q = Configuration(cur_p), Configuration(cur_q)
        if it % trace_every == 0 or it == iterations:
            state.trace.append((it, cur, state.best_objective, temp))
    state.p, state.q, state.objective, state.temperature = Configuration(cur_p), Configuration(cur_q), cur, temp
    return state


# -- strong contractions ------------------------------------------------------------------


def random_body(rng, d: int, family: str) -> UnconditionalBody:
    a = rng.uniform(0.3, 1.5, size=d)
    if family == "axis_box":
        return axis_box(*a)
    if family == "cross_polytope":
        return cross_polytope(*a)
    if family == "l2":
        return lp_ball(a, 2.0)
    if family == "lp":
        return lp_ball(a, float(rng.uniform(1.0, 6.0)))
    if family == "intersection":
        return UnconditionalBody("intersection", members=(axis_box(*a), lp_ball(a * 1.2, 2.0)))
    raise ValueError(f"unknown family {family!r}")


def random_strong_contraction(config, rng, mode: str) -> Configuration:
    if mode == "reflections":
        return random_reflection_composite(config, int(rng.integers(1, 6)), rng)
    if mode == "coordinatewise":
        return random_coordinatewise_contraction(config, rng)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass
class StrongSummary:
    d: int
    trials: int
    seed: int
    counts: dict = field(default_factory=lambda: {"holds": 0, "violated": 0, "inconclusive": 0})
    records: list = field(default_factory=list)
    min_slice_margin: float = math.inf

    @property
    def violations(self) -> int:
        return self.counts["violated"]


def _coordinate_path(p: np.ndarray, q: np.ndarray) -> list[np.ndarray]:
    """``p = r_0, r_1, ..., r_d = q`` where ``r_k`` takes its first ``k``
    coordinates from ``q``; each step contracts one coordinate."""
    path = [p.copy()]
    cur = p.copy()
    for k in range(p.shape[1]):
        cur = cur.copy()
        cur[:, k] = q[:, k]
        path.append(cur)
    return path


def strong_contraction_trial(d: int, families, n: int, seed: int, trial: int = 0,
                             resolution: int | None = None) -> tuple[VerificationRecord, VerificationRecord, float]:
    rng = np.random.default_rng(seed)
    fams = list(families)
    bodies = tuple(random_body(rng, d, fams[int(rng.integers(len(fams)))]) for _ in range(n))
    p = Configuration(rng.uniform(-2.0, 2.0, size=(n, d)))
    mode = "reflections" if trial % 2 == 0 else "coordinatewise"
    q = random_strong_contraction(p, rng, mode)
    if not is_strong_contraction(p, q, tol=1e-12):
        raise AssertionError("generated configuration is not a strong contraction")
    if d == 1:
        w = [b.half_extents[0] for b in bodies]
        up, ip = exact_1d_lengths(p.points[:, 0], w)
        uq, iq = exact_1d_lengths(q.points[:, 0], w)
        ru = VerificationRecord("T6:union", 1, 1, n, math.nan, up, 0.0, uq, 0.0, up - uq, "exact_1d", seed, trial=trial)
        ri = VerificationRecord("T6:intersection", 1, 1, n, math.nan, ip, 0.0, iq, 0.0, iq - ip, "exact_1d", seed, trial=trial)
        return ru, ri, min(up - uq, iq - ip)
    if resolution is None:
        resolution = 200 if d == 2 else 64
    fp = PlacedBodies(bodies, p)
    fq = PlacedBodies(bodies, q)
    up, eup = union_volume_by_slicing(fp, resolution)
    uq, euq = union_volume_by_slicing(fq, resolution)
    ip, eip = intersection_volume_by_slicing(fp, resolution)
    iq, eiq = intersection_volume_by_slicing(fq, resolution)
    ru = VerificationRecord("T6:union", d, d, n, math.nan, up, eup, uq, euq, up - uq, "slicing", seed, trial=trial)
    ri = VerificationRecord("T6:intersection", d, d, n, math.nan, ip, eip, iq, eiq, iq - ip, "slicing", seed, trial=trial)
    # one coordinate at a time, each step compared line by line
    worst = math.inf
    path = _coordinate_path(p.points, q.points)
    for k in range(d):
        a, b = fp.moved(path[k]), fp.moved(path[k + 1])
        mu, mi = slicewise_domination(a, b, k, max(8, resolution // 4))
        worst = min(worst, mu, mi)
    return ru, ri, worst


def strong_contraction_campaign(d: int, families=("axis_box", "cross_polytope", "l2"), n: int | None = None,
                                trials: int = 100, seed: int = 0, resolution: int | None = None,
                                threads: int = 1) -> StrongSummary:
    """Random unconditional families under random strong contractions.

    Trials alternate between compositions of one-sided reflections and
    independent coordinatewise 1-Lipschitz maps.  ``n`` defaults to a
    per-trial draw from 2..6.
    """
    summary = StrongSummary(d, trials, seed)

    def one(t):
        s = derive_seed(seed, t)
        nn = n if n is not None else 2 + int(np.random.default_rng(s).integers(0, 5))
        return strong_contraction_trial(d, families, nn, s, t, resolution)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, range(trials)))
    else:
        results = [one(t) for t in range(trials)]
    for ru, ri, worst in results:
        for rec in (ru, ri):
            summary.counts[rec.verdict] += 1
            summary.records.append(rec)
        summary.min_slice_margin = min(summary.min_slice_margin, worst)
    return summary


# -- figure fixtures ------------------------------------------------------------------------


def load_figure_data(path=None) -> dict:
    if path is None:
        text = resources.files("kpgeom").joinpath("data/figures.json").read_text()
    else:
        p = Path(path)
        if not p.exists():
            raise FileNotFoundError(f"figure fixture file {p} is missing")
        text = p.read_text()
    data = json.loads(text)
    if data.get("schema") != "kpgeom-figures/1":
        raise ValueError(f"unknown fixture schema {data.get('schema')!r}")
    return data


def body_polygon(body: UnconditionalBody, center) -> np.ndarray:
    """Counterclockwise vertices of a planar box or cross-polytope."""
    cx, cy = center
    a, b = body.half_extents
    if body.family == "axis_box":
        pts = [(a, -b), (a, b), (-a, b), (-a, -b)]
    elif body.family == "cross_polytope":
        pts = [(a, 0.0), (0.0, b), (-a, 0.0), (0.0, -b)]
    else:
        raise ValueError(f"{body.family} has no polygon form")
    return np.array([(cx + x, cy + y) for x, y in pts])


@dataclass
class FigureReport:
    name: str
    values: dict
    checks: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def figure_fixtures(path=None, seed: int = 0) -> tuple[FigureReport, FigureReport]:
    """Replay the two frozen figure examples from frozen coordinates.

    Triangles: two translation triples, each a strong contraction of the
    other, whose intersections differ (a triangle versus a point) and whose
    unions shrink.  Unconditional bodies: a contraction that increases the
    perimeter of the union.
    """
    data = load_figure_data(path)
    tri = data["triangles"]
    t = np.asarray(tri["triangle"], dtype=float)
    first, second = Configuration(tri["first"]), Configuration(tri["second"])
    polys1 = [t + v for v in first.points]
    polys2 = [t + v for v in second.points]
    inter1 = planar.polygon_area(planar.convex_polygon_intersection(polys1))
    inter2 = planar.polygon_area(planar.convex_polygon_intersection(polys2))
    u1 = planar.polygon_union_measure(polys1, seed=seed)
    u2 = planar.polygon_union_measure(polys2, seed=seed + 1)
    area_gap = u1.area - u2.area
    fig1 = FigureReport(
        "triangles",
        {
            "intersection_area_first": inter1, "intersection_area_second": inter2,
            "union_area_first": u1.area, "union_area_second": u2.area,
            "union_area_stderr": math.hypot(u1.area_stderr, u2.area_stderr),
            "union_perimeter_first": u1.perimeter, "union_perimeter_second": u2.perimeter,
        },
        {
            "second_is_strong_contraction_of_first": is_strong_contraction(first, second, tol=0.0),
            "first_is_strong_contraction_of_second": is_strong_contraction(second, first, tol=0.0),
            "first_intersection_positive": inter1 > 1e-9,
            "second_intersection_is_point": inter2 < 1e-9,
            "union_area_larger_first": area_gap > Z_VIOLATION * math.hypot(u1.area_stderr, u2.area_stderr),
            "union_perimeter_larger_first": u1.perimeter > u2.perimeter,
        },
    )
    unc = data["unconditional"]
    bodies = [UnconditionalBody.from_dict(b) for b in unc["bodies"]]
    a, b = Configuration(unc["first"]), Configuration(unc["second"])
    per1 = planar.polygon_union_perimeter([body_polygon(bd, c) for bd, c in zip(bodies, a.points)])
    per2 = planar.polygon_union_perimeter([body_polygon(bd, c) for bd, c in zip(bodies, b.points)])
    vol1, e1 = union_volume_by_slicing(PlacedBodies(tuple(bodies), a), 400)
    vol2, e2 = union_volume_by_slicing(PlacedBodies(tuple(bodies), b), 400)
    fig2 = FigureReport(
        "unconditional_perimeter",
        {"union_perimeter_first": per1, "union_perimeter_second": per2, "perimeter_gain": per2 - per1,
         "union_area_first": vol1, "union_area_second": vol2, "area_err": e1 + e2},
        {
            "all_bodies_unconditional": all(bd.family in ("axis_box", "cross_polytope") for bd in bodies),
            "second_is_contraction_of_first": is_contraction(a, b, tol=0.0),
            "second_is_strong_contraction_of_first": is_strong_contraction(a, b, tol=0.0),
            "perimeter_gain_exceeds_0.01": per2 - per1 > 0.01,
            "area_does_not_increase": vol1 - vol2 >= -(e1 + e2),
        },
    )
    return fig1, fig2


# -- result files ------------------------------------------------------------------------------

CSV_VERSION = "kpgeom-results/1"


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def write_records_csv(records, path, columns=RESULT_COLUMNS, version: str = CSV_VERSION) -> Path:
    """Write rows with floats at 17 significant digits so reading them back
    is lossless.  The first line is a ``# version`` comment."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {version}", ",".join(columns)]
    for rec in records:
        row = rec.row() if hasattr(rec, "row") else rec
        lines.append(",".join(format_value(row[c]) for c in columns))
    path.write_text("\n".join(lines) + "\n")
    return path


def _parse(v: str):
    if v == "":
        return None
    if v in ("true", "false"):
        return v == "true"
    try:
        return int(v)
    except ValueError:
        pass
    try:
        return float(v)
    except ValueError:
        return v


def read_records_csv(path, version: str = CSV_VERSION) -> list[dict]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != f"# {version}":
        raise ValueError(f"{path}: expected version header '# {version}'")
    header = lines[1].split(",")
    return [dict(zip(header, map(_parse, ln.split(",")))) for ln in lines[2:] if ln]


def write_manifest(path, **entries) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(entries, indent=2, sort_keys=True, default=format_value) + "\n")
    return path


def write_campaign(summary, out_dir) -> Path:
    """``results.csv`` plus ``manifest.json`` describing the run."""
    out = Path(out_dir)
    csv = write_records_csv(summary.records, out / "results.csv")
    meta = {
        "d": summary.d, "trials": summary.trials, "seed": summary.seed,
        "counts": summary.counts, "results": csv.name,
    }
    if isinstance(summary, CampaignSummary):
        meta.update(
            theorem=summary.theorem, k=summary.k, N=summary.n, lambdas=summary.lambdas,
            exploratory=summary.exploratory, sampler=summary.sampler,
            violations_in_hypotheses=summary.violations_in_hypotheses,
        )
    else:
        meta.update(theorem="T6", min_slice_margin=summary.min_slice_margin)
    write_manifest(out / "manifest.json", **meta)
    return csv
