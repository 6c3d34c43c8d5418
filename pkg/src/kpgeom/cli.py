"""Command-line front end: ``kpgeom {bounds,verify,search,sigma,demo-figures}``."""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import math
import sys
from pathlib import Path

from . import __version__, bounds, experiments
from .measures import kappa, sigma_asymptotic, sigma_exact, sigma_simplex_density

log = logging.getLogger("kpgeom")

BOUNDS_COLUMNS = ("name", "d", "k", "N", "lambda", "value", "applicable")
BOUNDS_VERSION = "kpgeom-bounds/1"


def _count(text: str) -> int:
    """Accept ``1000000`` as well as ``1e6``."""
    v = float(text)
    if v != int(v) or v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(v)


def _grid(text: str) -> list[float]:
    """``a,b,c`` or ``start:stop:step`` (inclusive stop)."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(n)]
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid lambda grid {text!r}") from None
    if not vals or any(not (v > 0 and math.isfinite(v)) for v in vals):
        raise argparse.ArgumentTypeError(f"invalid lambda grid {text!r}")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kpgeom", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, stochastic):
        p.add_argument("--d", type=int, required=True, help="dimension")
        p.add_argument("--seed", type=int, required=stochastic, default=None)
        p.add_argument("--out", type=Path, default=None, help="output directory (or file for bounds)")

    b = sub.add_parser("bounds", help="tabulate bounds and thresholds")
    common(b, False)
    b.add_argument("--k", type=int)
    b.add_argument("--N", type=int)
    b.add_argument("--lambda", dest="lam", type=float)
    b.add_argument("--lambda-grid", type=_grid)

    v = sub.add_parser("verify", help="run a verification campaign")
    common(v, True)
    v.add_argument("--theorem", required=True, type=str.upper,
                   choices=sorted(bounds.INTERSECTION_THEOREMS + bounds.UNION_THEOREMS + ("T6",)))
    v.add_argument("--k", type=int)
    v.add_argument("--N", type=int)
    v.add_argument("--lambda", dest="lam", type=float)
    v.add_argument("--lambda-grid", type=_grid)
    v.add_argument("--trials", type=_count, default=100)
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--method", choices=("exact", "mc", "slicing"), default=None)
    v.add_argument("--budget", type=_count, default=100_000, help="Monte Carlo samples per measure")
    v.add_argument("--resolution", type=int, default=None, help="slicing grid resolution")
    v.add_argument("--families", default="axis_box,cross_polytope,l2")
    v.add_argument("--exploratory", action="store_true")

    s = sub.add_parser("search", help="annealing search for a counterexample")
    common(s, True)
    s.add_argument("--k", type=int)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--lambda", dest="lam", type=float, required=True)
    s.add_argument("--iters", type=_count, default=10_000)
    s.add_argument("--t-start", type=float, default=0.05)
    s.add_argument("--t-end", type=float, default=1e-4)
    s.add_argument("--exploratory", action="store_true")

    g = sub.add_parser("sigma", help="estimate the simplex density sigma_d")
    common(g, True)
    g.add_argument("--n", type=_count, default=1_000_000)

    f = sub.add_parser("demo-figures", help="replay the two frozen figure examples")
    f.add_argument("--out", type=Path, default=None)
    return parser


def _manifest(args, outputs: list[Path], **extra) -> dict:
    params = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}
    return {
        "command": args.command,
        "parameters": params,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "outputs": [str(p) for p in outputs],
        **extra,
    }


def _write_manifest(args, out_dir: Path | None, outputs, **extra):
    if out_dir is None:
        return
    experiments.write_manifest(out_dir / "manifest.json", **_manifest(args, outputs, **extra))


# -- subcommands ---------------------------------------------------------------------


def bounds_rows(d: int, k: int | None, n: int | None, lams) -> list[dict]:
    if d < 1:
        raise ValueError("dimension must be positive")
    ks = [k] if k is not None else sorted({1, d})
    rows = [{"name": "kappa", "d": d, "k": None, "N": None, "lambda": None, "value": kappa(d), "applicable": True}]

    def add(name, value, applicable, kk=None, nn=None, lam=None):
        rows.append({"name": name, "d": d, "k": kk, "N": nn, "lambda": lam, "value": value, "applicable": applicable})

    it = bounds.intersection_thresholds(d, 1.0)
    add("intersection_main", it.main, True)
    add("union_main", (1.0 + 2.0 * d**3) ** d, True)
    add("union_case_c_lambda_cap", 1.0 / d**3, True)
    add("union_case_c_N", (2.0 * d * d + 1.0) ** d, True)
    sig = sigma_exact(d)
    add("sigma", sig if sig is not None else sigma_asymptotic(d), sig is not None)
    for lam in lams:
        th = bounds.intersection_thresholds(d, lam)
        add("intersection_part_a", th.part_a, True, lam=lam)
        add("intersection_part_b", th.part_b, th.part_b_applicable, lam=lam)
        ut = bounds.union_thresholds(d, lam, sigma=sig if sig is not None else sigma_asymptotic(d))
        add("union_part_a", ut.part_a, ut.part_a_applicable, lam=lam)
        add("union_part_b", ut.part_b[0], ut.part_b_applicable and sig is not None, lam=lam)
        if lam < 2.0:
            add("isodiametric_union_upper", bounds.isodiametric_union_upper(d, lam), True, lam=lam)
        for kk in ks:
            f = bounds.f_lower(d, kk, lam)
            add("f_lower", f.value, f.applicable, kk, lam=lam)
            if n is not None:
                gg = bounds.g_upper(d, kk, n, lam)
                add("g_upper", gg.value, gg.applicable, kk, n, lam)
        if n is not None:
            add("packing_forces_empty", float(bounds.packing_forces_empty(d, n, lam)), True, nn=n, lam=lam)
    return rows


def cmd_bounds(args) -> int:
    if args.lambda_grid is not None:
        lams = args.lambda_grid
    elif args.lam is not None:
        lams = [args.lam]
    else:
        lams = [0.25 * i for i in range(1, 9)]
    if args.k is not None and not 1 <= args.k <= args.d:
        raise ValueError(f"k must lie in 1..{args.d}")
    rows = bounds_rows(args.d, args.k, args.N, lams)
    lines = [f"# {BOUNDS_VERSION}", ",".join(BOUNDS_COLUMNS)]
    lines += [",".join(experiments.format_value(r[c]) for c in BOUNDS_COLUMNS) for r in rows]
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.mkdir(parents=True, exist_ok=True)
        path = args.out / "bounds.csv"
        path.write_text(text)
        _write_manifest(args, args.out, [path])
    return 0


def _method(name: str | None) -> str:
    return {"exact": "exact", "mc": "mc", "slicing": "slicing", None: "auto"}[name]


def cmd_verify(args) -> int:
    if args.theorem == "T6":
        fams = [f for f in args.families.split(",") if f]
        summary = experiments.strong_contraction_campaign(
            args.d, fams, args.N, args.trials, args.seed, args.resolution, args.threads
        )
        bad = summary.violations
        print(f"T6 d={args.d} trials={args.trials}: {summary.counts} min_slice_margin={summary.min_slice_margin:.3g}")
    else:
        if args.N is None:
            raise ValueError("--N is required")
        k = args.k if args.k is not None else args.d
        lams = args.lambda_grid if args.lambda_grid is not None else ([args.lam] if args.lam is not None else None)
        summary = experiments.campaign(
            args.theorem, args.d, k, args.N, lams, args.trials, args.seed, _method(args.method),
            args.budget, args.exploratory, args.threads, args.out,
        )
        bad = summary.violations_in_hypotheses
        print(f"{args.theorem} d={args.d} k={k} N={args.N}: {summary.counts} min_margin={summary.min_margin():.6g}")
    if args.out is not None:
        csv = experiments.write_campaign(summary, args.out)
        _write_manifest(args, args.out, [csv], counts=summary.counts)
    return 1 if bad else 0


def cmd_search(args) -> int:
    k = args.k if args.k is not None else args.d
    if not args.exploratory and not bounds.theorem_hypotheses("T4", args.d, args.N, args.lam):
        log.info("search below the proven threshold; running as exploration")
    state = experiments.anneal_search(
        args.d, k, args.N, args.lam, args.iters, (args.t_start, args.t_end), args.seed
    )
    print(f"best objective {state.best_objective:.17g} after {args.iters} iterations "
          f"({state.accepted} accepted, repairs {state.repairs})")
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        from .geometry import dump_configuration

        dump_configuration(state.best_p, args.out / "best_p.json")
        dump_configuration(state.best_q, args.out / "best_q.json")
        trace = args.out / "trace.json"
        trace.write_text(json.dumps({
            "best_objective": state.best_objective,
            "repairs": state.repairs,
            "accepted": state.accepted,
            "trace": [list(t) for t in state.trace],
        }) + "\n")
        _write_manifest(args, args.out, [trace, args.out / "best_p.json", args.out / "best_q.json"])
    return 0


def cmd_sigma(args) -> int:
    est = sigma_simplex_density(args.d, args.n, seed=args.seed)
    ref = sigma_exact(args.d)
    line = f"sigma_{args.d} = {est.value:.17g} +- {est.stderr:.3g} (n={args.n}, seed={args.seed})"
    if ref is not None:
        line += f"; closed form {ref:.17g}, z = {(est.value - ref) / est.stderr if est.stderr else 0.0:.3g}"
    print(line)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        path = args.out / "sigma.json"
        path.write_text(json.dumps({"d": args.d, "n": args.n, "seed": args.seed, "value": est.value,
                                    "stderr": est.stderr, "closed_form": ref}) + "\n")
        _write_manifest(args, args.out, [path])
    return 0


def cmd_demo_figures(args) -> int:
    reports = experiments.figure_fixtures()
    ok = True
    for rep in reports:
        print(f"[{'pass' if rep.passed else 'FAIL'}] {rep.name}")
        for key, val in rep.values.items():
            print(f"    {key} = {float(val):.17g}")
        for key, val in rep.checks.items():
            print(f"    {key}: {bool(val)}")
        ok &= rep.passed
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        path = args.out / "figures.json"
        path.write_text(json.dumps(
            {r.name: {"values": {k: float(v) for k, v in r.values.items()},
                      "checks": {k: bool(v) for k, v in r.checks.items()}} for r in reports},
            indent=2) + "\n")
        _write_manifest(args, args.out, [path])
    return 0 if ok else 1


COMMANDS = {
    "bounds": cmd_bounds,
    "verify": cmd_verify,
    "search": cmd_search,
    "sigma": cmd_sigma,
    "demo-figures": cmd_demo_figures,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ValueError as exc:
        parser.exit(2, f"kpgeom {args.command}: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
