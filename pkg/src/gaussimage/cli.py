"""Command-line front end: ``gip <command> ...``.

Exit codes: 0 Solution, 2 NoSolution, 3 Infeasible, 4 InvalidInput,
5 Ambiguous, 6 mu concentrated on a closed hemisphere.  ``verify`` exits 1
when a claimed solution does not check out.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from . import instances as gen
from .core import Tolerances, dump_instance, load_instance
from .errors import AllNegativeInfinity, GIPError, InvalidInstance
from .feasibility import feasibility_report
from .loops import search_loops
from .oracle import oracle_maximizers
from .pipeline import EXIT_CODES, SolveReport, solve, solve_safely
from .polytope import Polytope, export_geometry, to_obj, verify_solution

log = logging.getLogger("gaussimage")


def _tolerances(args) -> Tolerances:
    base = Tolerances()
    return Tolerances(
        unit=base.unit,
        distinct=base.distinct,
        dot=args.tol_dot,
        tie=args.tol_tie,
        strict_init=args.eps_init,
        strict_min=base.strict_min,
        loop=base.loop,
    )


def _emit(payload, out: str | None) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def cmd_solve(args) -> int:
    tol = _tolerances(args)
    try:
        raw = _read_json(args.instance)
    except (OSError, json.JSONDecodeError) as exc:
        report, inst = SolveReport("InvalidInput", diagnostics={"error": str(exc)}), None
    else:
        report, inst = solve_safely(raw, tol)
    _emit(report.to_dict(timings=args.timings), args.output)
    if args.plot and inst is not None and report.alphas is not None and inst.n in (2, 3):
        from .plotting import plot_polytope

        plot_polytope(inst, report.polytope(inst), args.plot, title=report.status)
    return report.exit_code


def cmd_check(args) -> int:
    inst = load_instance(args.instance, _tolerances(args))
    rep = feasibility_report(inst, _tolerances(args))
    _emit(rep.to_dict(), args.output)
    if not rep.weak_aleksandrov:
        return EXIT_CODES["Infeasible"]
    return EXIT_CODES["Concentrated"] if rep.concentrated else 0


def _solution_polytope(inst, sol) -> tuple[Polytope, list[int]]:
    if sol.get("alphas") is None or sol.get("assignment") is None:
        raise InvalidInstance("solution file carries no alphas/assignment")
    return Polytope(inst.v, sol["alphas"]), sol["assignment"]


def cmd_verify(args) -> int:
    tol = _tolerances(args)
    inst = load_instance(args.instance, tol)
    P, f = _solution_polytope(inst, _read_json(args.solution))
    rep = verify_solution(inst, P, f, tol)
    _emit(rep.to_dict(), args.output)
    return 0 if rep.ok else 1


def cmd_oracle(args) -> int:
    tol = _tolerances(args)
    inst = load_instance(args.instance, tol)
    try:
        rep = oracle_maximizers(inst, tol)
    except AllNegativeInfinity:
        _emit({"all_assignments_count": None, "maximizers": [], "value": None, "top_gap": None}, args.output)
        return EXIT_CODES["Infeasible"]
    _emit(rep.to_dict(), args.output)
    return 0 if len(rep.maximizers) == 1 else EXIT_CODES["NoSolution"]


def cmd_gen(args) -> int:
    weights = tuple(int(w) for w in args.weights.split(",")) if args.weights else (1,) * args.m
    spec = gen.GenSpec(args.kind, n=args.n, l=args.l, weights=weights, seed=args.seed, extra=args.extra)
    _emit(dump_instance(gen.generate(spec, _tolerances(args))), args.output)
    return 0


def cmd_loops(args) -> int:
    tol = _tolerances(args)
    inst = load_instance(args.instance, tol)
    found = search_loops(inst, args.max_loop_len or inst.m, tol)
    _emit([c.to_dict() for c in found], args.output)
    return 0


def cmd_generic(args) -> int:
    weights = [int(w) for w in args.weights.split(",")] if args.weights else [1] * args.m
    tally = gen.generic_rate(args.n, weights, args.trials, args.seed, _tolerances(args), workers=args.workers)
    _emit(tally.to_dict(), args.output)
    if args.plot:
        from .plotting import plot_tally

        plot_tally(tally.to_dict(), args.plot, title=f"n={args.n}, m={len(weights)}, seed={args.seed}")
    return 0


def cmd_export(args) -> int:
    tol = _tolerances(args)
    inst = load_instance(args.instance, tol)
    P, _ = _solution_polytope(inst, _read_json(args.solution))
    if args.format == "obj":
        _emit(to_obj(P), args.output)
    else:
        verts, _ = export_geometry(P)
        _emit({"vertices": verts.tolist(), "alphas": P.alphas.tolist()}, args.output)
    return 0


def cmd_report(args) -> int:
    """Named examples plus a genericity run: CSV tables and PNG figures in one directory."""
    from .loops import LoopCertificate
    from .plotting import plot_loop, plot_margins, plot_polytope, plot_tally

    tol = _tolerances(args)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    named = [("triangle", gen.triangle()), ("simplex3", gen.simplex(3))]
    named += [(f"polygon{l}", gen.regular_polygon(l)) for l in range(3, 9)]
    named += [(f"loop2d_seed{s}", gen.loop_seeded(2, 5, s)) for s in range(2)]
    rows = []
    for name, inst in named:
        rep = solve(inst, tol)
        diag = rep.to_dict()["diagnostics"]
        rows.append(
            {
                "instance": name,
                "n": inst.n,
                "m": inst.m,
                "k": inst.k,
                "status": rep.status,
                "exit_code": rep.exit_code,
                "value": rep.to_dict()["value"],
                "min_margin": diag.get("min_margin"),
                "gap": diag.get("gap"),
            }
        )
        if rep.alphas is not None and inst.n in (2, 3):
            plot_polytope(inst, rep.polytope(inst), out / f"{name}.png", title=f"{name}: {rep.status}")
        loop = rep.certificates.get("loop")
        if loop and inst.n == 2:
            from .loops import build_loop

            cert = build_loop(inst, loop["v_cycle"], loop["u_cycle"], tol)
            if isinstance(cert, LoopCertificate):
                plot_loop(inst, cert, out / f"{name}_loop.png", title=f"{name}: edge-normal loop")
    with open(out / "examples.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)

    weights = [1] * args.m
    tally = gen.generic_rate(args.n, weights, args.trials, args.seed, tol)
    with open(out / "generic.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "m", "trials", "seed", "filtered", "solvable", "nonunique", "ambiguous", "infeasible"])
        t = tally.to_dict()
        writer.writerow([args.n, args.m, args.trials, args.seed] + [t[k] for k in ("filtered", "solvable", "nonunique", "ambiguous", "infeasible")])
    plot_tally(tally.to_dict(), out / "generic.png", title=f"random n={args.n}, m=k={args.m}")

    margins = []
    for trial in range(min(args.trials, 200)):
        inst = gen.random_instance(args.n, weights, gen.trial_seed(args.seed, trial), tol)
        rep = solve(inst, tol)
        if rep.status == "Solution":
            margins.append(rep.diagnostics["min_margin"])
    plot_margins(margins, out / "margins.png", title="cone margins of constructed polytopes")
    sys.stdout.write(f"wrote {len(rows)} examples and {tally.filtered} filtered trials to {out}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-dot", type=float, default=Tolerances.dot, help="positivity threshold for dot products")
    common.add_argument("--tol-tie", type=float, default=Tolerances.tie, help="relative tie tolerance")
    common.add_argument("--eps-init", type=float, default=Tolerances.strict_init, help="initial strict slack")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")

    parser = argparse.ArgumentParser(prog="gip", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="decide and construct a solution")
    p.add_argument("instance")
    p.add_argument("--plot", help="also render the polytope (n = 2, 3) to this image file")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte stability)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", parents=[common], help="weak Aleksandrov and hemisphere checks")
    p.add_argument("instance")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", parents=[common], help="re-verify a solution file")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", parents=[common], help="brute-force maximizers")
    p.add_argument("instance")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", parents=[common], help="generate an instance")
    p.add_argument("kind", choices=gen.KINDS)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--l", type=int, default=4, help="polygon / loop length")
    p.add_argument("--m", type=int, default=3, help="atom count for random instances with unit weights")
    p.add_argument("--weights", help="comma-separated mu weights for random instances")
    p.add_argument("--extra", type=int, default=0, help="random atoms added to a planted loop")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("loops", parents=[common], help="exhaustive edge-normal loop search")
    p.add_argument("instance")
    p.add_argument("--max-loop-len", type=int, default=None)
    p.set_defaults(func=cmd_loops)

    p = sub.add_parser("generic", parents=[common], help="Monte Carlo solvability rate")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--weights")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--plot", help="render the tally as a bar chart")
    p.set_defaults(func=cmd_generic)

    p = sub.add_parser("export", parents=[common], help="export a solution polytope")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--format", choices=("json", "obj"), default="json")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("report", parents=[common], help="CSV tables and figures for named and random instances")
    p.add_argument("outdir")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("GIP_LOG", "WARNING").upper(), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInstance, OSError, json.JSONDecodeError) as exc:
        log.error("%s", exc)
        return EXIT_CODES["InvalidInput"]
    except GIPError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
