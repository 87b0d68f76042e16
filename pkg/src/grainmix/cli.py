"""Command-line front end.

Commands: demo, gen-3dm, reduce, solve, verify, eval.  All file formats
are the JSON documents described in ``grainmix.jsonio``.  Exit codes:
0 success, 1 an asserted verification check failed, 2 malformed input.

Runs are deterministic: the same command, seed, and input files produce
byte-identical outputs.  ``GRAINMIX_SEED`` supplies the seed when
``--seed`` is omitted.  ``--manifest PATH`` records the command, seed,
configuration, and SHA-256 checksums of inputs and outputs.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from fractions import Fraction

from . import jsonio
from .demo import demo_config, run_demo
from .jsonio import FormatError
from .model import evaluate, validate
from .reduction import PlanarParams, reduce_planar, reduce_standard
from .solve import SolveConfig, solve_exact, solve_local_search
from .tdm import gen_random_tdm
from .verify import batch_planar, batch_standard

_PROTEIN_MODES = {"det": "deterministic", "rand": "random"}


def _env_seed() -> int:
    try:
        return int(os.environ.get("GRAINMIX_SEED", "0"))
    except ValueError:
        return 0


def _money(x) -> str:
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    return jsonio.format_cost(x)


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _sha256_file(path: str) -> str:
    with open(path, "rb") as handle:
        return hashlib.sha256(handle.read()).hexdigest()


def _emit(args, text: str, command: str, seed, config: dict, inputs: list[str]) -> None:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    manifest_path = getattr(args, "manifest", None)
    if manifest_path:
        manifest = {
            "format": jsonio.FORMAT_VERSION,
            "kind": "run_manifest",
            "command": command,
            "seed": seed,
            "config": config,
            "inputs": {path: _sha256_file(path) for path in inputs},
            "outputs": {out or "<stdout>": _sha256(text)},
        }
        with open(manifest_path, "w") as handle:
            handle.write(jsonio.dumps(manifest))


def cmd_demo(args) -> int:
    result = run_demo()
    if args.json:
        doc = {
            "format": jsonio.FORMAT_VERSION,
            "kind": "demo_report",
            "unmixed": jsonio.profit_report_to_dict(result.unmixed_report),
            "mixed": jsonio.profit_report_to_dict(result.mixed_report),
            "gain": jsonio.format_rational(result.gain),
            "unmixed_solution": jsonio.solution_to_dict(result.unmixed),
            "mixed_solution": jsonio.solution_to_dict(result.mixed),
        }
        sys.stdout.write(jsonio.dumps(doc))
    else:
        print(
            f"unmixed={_money(result.unmixed_report.revenue)} "
            f"mixed={_money(result.mixed_report.revenue)} "
            f"gain={_money(result.gain)}"
        )
    return 0


def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    tdm = gen_random_tdm(args.alpha, args.triples, seed=seed, plant_perfect=args.plant)
    text = jsonio.dumps(jsonio.tdm_to_dict(tdm))
    config = {"alpha": args.alpha, "triples": args.triples, "plant": args.plant}
    _emit(args, text, "gen-3dm", seed, config, [])
    return 0


def _planar_params(args) -> PlanarParams:
    return PlanarParams(
        base_protein=Fraction(args.base_protein),
        spread=Fraction(args.spread),
        window_price=Fraction(args.price),
        trip_cost=Fraction(args.cost),
    )


def cmd_reduce(args) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    tdm = jsonio.tdm_from_dict(jsonio.read_document(args.infile), args.infile)
    if args.mode == "std":
        artifacts = reduce_standard(
            tdm,
            mode=_PROTEIN_MODES[args.protein_mode],
            seed=seed,
            policy=args.omega_policy,
        )
    else:
        artifacts = reduce_planar(tdm, _planar_params(args))
    text = jsonio.dumps(jsonio.artifacts_to_dict(artifacts))
    config = {
        "mode": args.mode,
        "omega_policy": args.omega_policy,
        "protein_mode": args.protein_mode,
    }
    _emit(args, text, "reduce", seed, config, [args.infile])
    return 0


def _load_instance(path: str):
    doc = jsonio.read_document(path)
    kind = doc.get("kind")
    if kind == "reduction_artifacts":
        return jsonio.artifacts_from_dict(doc, path).gm
    return jsonio.instance_from_dict(doc, path)


def cmd_solve(args) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    instance = _load_instance(args.infile)
    config = SolveConfig(
        lattice_denominator=args.lattice, quantity_unit=Fraction(args.unit)
    )
    if args.solver == "exact":
        solution, report = solve_exact(instance, config)
    else:
        solution, report = solve_local_search(
            instance, config, seed=seed, iterations=args.iterations
        )
    doc = {
        "format": jsonio.FORMAT_VERSION,
        "kind": "solve_report",
        "solver": args.solver,
        "solution": jsonio.solution_to_dict(solution),
        "report": jsonio.profit_report_to_dict(report),
    }
    snapshot = {
        "solver": args.solver,
        "lattice": args.lattice,
        "unit": args.unit,
        "iterations": args.iterations,
    }
    _emit(args, jsonio.dumps(doc), "solve", seed, snapshot, [args.infile])
    return 0


def cmd_eval(args) -> int:
    instance = _load_instance(args.instance)
    solution = jsonio.solution_from_dict(
        jsonio.read_document(args.solution), args.solution
    )
    violations = validate(instance, solution)
    doc = {
        "format": jsonio.FORMAT_VERSION,
        "kind": "eval_report",
        "violations": jsonio.violations_to_list(violations),
        "report": jsonio.profit_report_to_dict(evaluate(instance, solution))
        if not violations
        else None,
    }
    _emit(args, jsonio.dumps(doc), "eval", None, {}, [args.instance, args.solution])
    return 0


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    alphas = tuple(int(a) for a in args.alphas.split(","))
    config = SolveConfig(lattice_denominator=args.lattice)
    if args.mode == "std":
        reports, summary = batch_standard(
            trials=args.trials,
            seed=seed,
            alphas=alphas,
            policy=args.omega_policy,
            config=config,
            planted=args.plant,
            max_triples=args.max_triples,
            mode=_PROTEIN_MODES[args.protein_mode],
            jobs=args.jobs,
        )
        # the constructive direction is asserted; profit/matching equality
        # is audited and counted
        failed = summary.forward_failures > 0
    else:
        reports, summary = batch_planar(
            trials=args.trials,
            seed=seed,
            alphas=alphas,
            params=_planar_params(args),
            config=config,
            planted=args.plant,
            max_triples=args.max_triples,
            jobs=args.jobs,
        )
        failed = summary.discrepancies > 0
    for i, report in enumerate(reports):
        status = "ok" if not report.discrepancy else "DISCREPANCY"
        print(
            f"trial {i}: alpha*={report.alpha_star} "
            f"profit*={_money(report.profit_star)} {status}",
            file=sys.stderr,
        )
    print(
        f"{summary.kind}: trials={summary.trials} "
        f"discrepancies={summary.discrepancies} "
        f"forward_failures={summary.forward_failures}",
        file=sys.stderr,
    )
    text = jsonio.dumps(jsonio.batch_report_to_dict(reports, summary))
    snapshot = {
        "mode": args.mode,
        "trials": args.trials,
        "alphas": args.alphas,
        "plant": args.plant,
        "lattice": args.lattice,
    }
    _emit(args, text, "verify", seed, snapshot, [])
    return 1 if failed else 0


def _add_planar_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--base-protein", default="12", help="window lower edge")
    parser.add_argument("--spread", default="1/2", help="half the window width")
    parser.add_argument("--price", default="10", help="window price per unit")
    parser.add_argument("--cost", default="1", help="mixing/delivery cost per leg")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grainmix",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demo", help="bushel-scale example: unmixed vs mixed optimum")
    p.add_argument("--json", action="store_true", help="emit machine-readable reports")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("gen-3dm", help="generate a random 3-dimensional matching instance")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--triples", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--plant", action=argparse.BooleanOptionalAction, default=True,
                   help="plant a perfect matching (default on)")
    p.add_argument("--out", default=None)
    p.add_argument("--manifest", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", help="construct a grain mixing instance from a matching instance")
    p.add_argument("--in", dest="infile", required=True, help="tdm_instance JSON")
    p.add_argument("--mode", choices=["std", "planar"], required=True)
    p.add_argument("--omega-policy", choices=["paper", "clamped"], default="clamped")
    p.add_argument("--protein-mode", choices=["det", "rand"], default="det")
    p.add_argument("--seed", type=int, default=None)
    _add_planar_flags(p)
    p.add_argument("--out", default=None)
    p.add_argument("--manifest", default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="solve a grain mixing instance")
    p.add_argument("--in", dest="infile", required=True,
                   help="gm_instance or reduction_artifacts JSON")
    p.add_argument("--solver", choices=["exact", "ls"], default="exact")
    p.add_argument("--lattice", type=int, default=12, help="quantity lattice denominator")
    p.add_argument("--unit", default="1", help="quantity unit (rational)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--iterations", type=int, default=200, help="local search rounds")
    p.add_argument("--out", default=None)
    p.add_argument("--manifest", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("eval", help="validate a solution and report its profit")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--manifest", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="batch-check matching size vs optimal profit")
    p.add_argument("--mode", choices=["std", "planar"], required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--alphas", default=None,
                   help="comma-separated ground set sizes (default 1,2,3 std / 1,2 planar)")
    p.add_argument("--max-triples", type=int, default=8)
    p.add_argument("--omega-policy", choices=["paper", "clamped"], default="clamped")
    p.add_argument("--protein-mode", choices=["det", "rand"], default="det")
    p.add_argument("--lattice", type=int, default=12)
    p.add_argument("--plant", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--jobs", type=int, default=1, help="parallel trial workers")
    _add_planar_flags(p)
    p.add_argument("--out", default=None)
    p.add_argument("--manifest", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.alphas is None:
        args.alphas = "1,2,3" if args.mode == "std" else "1,2"
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
