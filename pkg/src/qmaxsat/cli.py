"""Command-line entry point: ``qmaxsat {solve,decide,analyze,validate,gen,bench}``.

Exit codes: 0 success, 1 input error, 2 every trial ran out of restarts,
3 resource cap exceeded, 4 engine validation failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import asdict

from . import analysis, kernels
from .formula import (Formula, FormulaError, generate_complete, generate_random, read_dimacs,
                      serialize_dimacs)
from .oracle import DEFAULT_ENUM_CAP, CapExceeded, density_profile, max_report
from .simulator import DEFAULT_NAIVE_CAP, RunConfig, compare_engines, gt4_cascade, run_trials

EXIT_OK, EXIT_INPUT, EXIT_EXHAUSTED, EXIT_CAP, EXIT_INVALID = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def _mu_arg(text: str):
    if text == "auto":
        return text
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("mu must be >= 0")
    return value


def _r_arg(text: str):
    if text == "auto":
        return text
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("r must be >= 1")
    return value


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("instance")
    g.add_argument("--input", help="DIMACS CNF file with exactly three literals per clause")
    g.add_argument("--n", type=int, help="variables for a generated instance (complete unless --m is given)")
    g.add_argument("--m", type=int, help="clauses for a random generated instance")
    g.add_argument("--instance-seed", type=int, help="seed for random instance generation (default: --seed)")
    g = p.add_argument_group("algorithm")
    g.add_argument("--mu", type=_mu_arg, default=0, help="dummy clauses, or 'auto' from --pr-max")
    g.add_argument("--r", type=_r_arg, default="auto", help="iterations, or 'auto' from --lambda")
    g.add_argument("--lambda", dest="lam", type=float, default=2.0, help="epsilon = 10^-lambda")
    g.add_argument("--epsilon", type=float, help="gap threshold; enables the epsilon-gap stop rule")
    g.add_argument("--pr-max", type=float, default=0.99, help="target first-iteration probability for auto mu")
    g.add_argument("--seed", type=int, help="RNG seed (fallback: $QMAXSAT_SEED, then 0)")
    g.add_argument("--trials", type=int, default=1)
    g.add_argument("--max-restarts", type=int, default=100)
    g.add_argument("--workers", type=int, help="threads for concurrent trials")
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=("json", "csv", "text"), default="json")
    g.add_argument("--out", help="write output here instead of stdout")
    g.add_argument("--timing", action="store_true", help="include wall-clock fields (breaks byte-reproducibility)")
    g = p.add_argument_group("limits")
    g.add_argument("--naive-cap", type=int, default=DEFAULT_NAIVE_CAP)
    g.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmaxsat", description="Simulate quantum amplification for MAX-E3-SAT.",
                                     epilog=__doc__.split("\n\n", 1)[1].strip())
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("solve", "run the amplification algorithm and compare with brute force"),
        ("decide", "report SAT/UNSAT from the measured truth vectors"),
        ("analyze", "convergence curve, bound check and tuning tables"),
        ("validate", "cross-check the structured engine against the gate-level engine"),
        ("bench", "time the compiled kernels against the numpy fallback"),
    ]:
        _common(sub.add_parser(name, help=helptext))
    gen = sub.add_parser("gen", help="write a generated instance as DIMACS")
    gen.add_argument("kind", choices=("complete", "random"))
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--out")
    return parser


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QMAXSAT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"QMAXSAT_SEED must be an integer, got {env!r}") from None


def load_instance(args) -> tuple[Formula, str]:
    if args.input:
        try:
            return read_dimacs(args.input), args.input
        except OSError as exc:
            raise InputError(str(exc)) from None
    if args.n is None:
        raise InputError("give --input or --n [--m]")
    if args.m is None:
        return generate_complete(args.n), f"complete(n={args.n})"
    seed = args.instance_seed if args.instance_seed is not None else _seed(args)
    return generate_random(args.n, args.m, seed), f"random(n={args.n}, m={args.m}, seed={seed})"


def resolve_config(args, f: Formula) -> tuple[RunConfig, dict]:
    if args.trials < 1:
        raise InputError("--trials must be >= 1")
    if args.lam <= 0:
        raise InputError("--lambda must be > 0")
    if args.mu == "auto":
        if not 0 < args.pr_max < 1:
            raise InputError("--pr-max must lie in (0, 1)")
        mu = analysis.required_dummies(f.m, args.pr_max).mu_required
    else:
        mu = args.mu
    r = analysis.auto_iterations(f.m + mu, args.lam) if args.r == "auto" else args.r
    cfg = RunConfig(mu=mu, r=r, lam=args.lam, epsilon=args.epsilon,
                    stop_rule="epsilon-gap" if args.epsilon is not None else "fixed",
                    max_restarts=args.max_restarts, seed=_seed(args))
    resolved = {
        "mu": mu, "mu_source": "auto" if args.mu == "auto" else "given",
        "r": r, "r_source": "auto" if args.r == "auto" else "given",
        "lambda": args.lam, "epsilon": cfg.resolved_epsilon(), "stop_rule": cfg.stop_rule,
        "pr_max": args.pr_max, "seed": cfg.seed, "trials": args.trials,
        "max_restarts": args.max_restarts, "backend": kernels.BACKEND,
        "enum_cap": args.enum_cap, "naive_cap": args.naive_cap,
    }
    return cfg, resolved


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _rows_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def _solve_common(args):
    f, source = load_instance(args)
    cfg, resolved = resolve_config(args, f)
    profile = density_profile(f, args.enum_cap)
    oracle = max_report(profile)
    reports = [rep.with_oracle(oracle.d_max)
               for rep in run_trials(f, cfg, args.trials, args.workers, profile)]
    return f, source, resolved, oracle, reports


def cmd_solve(args) -> int:
    f, source, resolved, oracle, reports = _solve_common(args)
    rows = [rep.to_dict(args.timing) for rep in reports]
    done = [rep for rep in reports if rep.ok]
    summary = {
        "successful_trials": len(done),
        "optimal_trials": sum(bool(rep.optimal) for rep in done),
        "best_density": max((rep.achieved_density for rep in done), default=None),
    }
    if args.format == "csv":
        text = _rows_csv(rows)
    elif args.format == "text":
        lines = [f"instance {source}: n={f.n} m={f.m}",
                 f"mu={resolved['mu']} r={resolved['r']} lambda={resolved['lambda']} seed={resolved['seed']}",
                 f"oracle d_max={oracle.d_max} satisfiable={oracle.satisfiable}"]
        for rep in reports:
            if rep.ok:
                lines.append(f"seed {rep.seed}: density {rep.achieved_density}/{f.m} "
                             f"{'SAT' if rep.satisfiable_verdict else 'UNSAT'} assignment {rep.measured_assignment} "
                             f"restarts {rep.restarts} optimal={rep.optimal}")
            else:
                lines.append(f"seed {rep.seed}: exhausted after {rep.restarts} restarts")
        text = "\n".join(lines) + "\n"
    else:
        text = _dump({"command": "solve", "instance": {"source": source, "n": f.n, "m": f.m},
                      "config": resolved, "oracle": oracle.to_dict(), "summary": summary,
                      "trials": rows})
    _emit(text, args.out)
    return EXIT_OK if done else EXIT_EXHAUSTED


def cmd_decide(args) -> int:
    f, source, resolved, oracle, reports = _solve_common(args)
    done = [rep for rep in reports if rep.ok]
    if not done:
        verdict, best = "UNKNOWN", None
    else:
        best = max(rep.achieved_density for rep in done)
        verdict = "SAT" if best == f.m else "UNSAT"
    payload = {"command": "decide", "instance": {"source": source, "n": f.n, "m": f.m},
               "verdict": verdict, "max_density_found": best,
               "successful_trials": len(done), "config": resolved,
               "oracle_agrees": None if not done else (verdict == "SAT") == oracle.satisfiable}
    if args.format == "json":
        text = _dump(payload)
    elif args.format == "csv":
        text = _rows_csv([{k: v for k, v in payload.items() if k not in ("config", "instance")}])
    else:
        text = f"{verdict} (max density {best}/{f.m}, r={resolved['r']}, mu={resolved['mu']}, trials={len(reports)})\n"
    _emit(text, args.out)
    return EXIT_OK if done else EXIT_EXHAUSTED


def cmd_analyze(args) -> int:
    f, source = load_instance(args)
    cfg, resolved = resolve_config(args, f)
    profile = density_profile(f, args.enum_cap)
    r_max = cfg.resolved_r(f.m)
    curve = analysis.convergence_curve(profile, cfg.mu, r_max)
    m_ext = f.m + cfg.mu
    lams = sorted({1.0, 2.0, 3.0, args.lam})
    iterations = [{"m": mm, "lambda": lam, "exact": analysis.required_iterations(mm, lam),
                   "lower_bound": analysis.iteration_lower_bound(mm, lam)}
                  for mm in sorted({f.m, m_ext}) if mm >= 2 for lam in lams]
    dummies = [dict(m=f.m, **asdict(analysis.required_dummies(f.m, p)))
               for p in sorted({0.8, 0.9, 0.95, 0.99, 0.999, args.pr_max}) if 0 < p < 1]
    if args.format == "csv":
        text = analysis.curve_csv(curve)
    else:
        payload = {
            "command": "analyze", "instance": {"source": source, "n": f.n, "m": f.m},
            "config": resolved, "histogram": {str(d): c for d, c in profile.histogram.items()},
            "oracle": max_report(profile).to_dict(),
            "lemma1": asdict(analysis.lemma1_bounds(profile)),
            "success_probability_at_r": analysis.success_probability(profile, cfg.mu, r_max),
            "completion_probability_at_r": analysis.completion_probability(profile, cfg.mu, r_max),
            "curve": [asdict(p) for p in curve],
            "required_iterations": iterations, "required_dummies": dummies,
        }
        if args.format == "json":
            text = _dump(payload)
        else:
            first = curve[0]
            text = (f"instance {source}: n={f.n} m={f.m} mu={cfg.mu}\n"
                    f"r=1: pr_ax_one={first.pr_ax_one:.6f} pr_cmax={first.pr_cmax:.6f}\n"
                    f"r={curve[-1].r}: pr_ax_one={curve[-1].pr_ax_one:.6f} pr_cmax={curve[-1].pr_cmax:.6f}\n"
                    f"lemma1 within={payload['lemma1']['within']}\n")
    _emit(text, args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    f, source = load_instance(args)
    mu = 0 if args.mu == "auto" else args.mu
    r = 3 if args.r == "auto" else args.r
    if f.n + f.m + mu + 1 > args.naive_cap:
        raise CapExceeded(f"{f.n + f.m + mu + 1} qubits exceed the naive-engine cap of {args.naive_cap}")
    rep = compare_engines(f, mu, r, cap=args.naive_cap)
    cascade_ok = all(gt4_cascade(f, k) == f.truth_vector(k) for k in range(1 << f.n))
    payload = {"command": "validate", "instance": {"source": source, "n": f.n, "m": f.m},
               "config": {"mu": mu, "r": r, "naive_cap": args.naive_cap},
               "engines": rep.to_dict(), "clause_register_matches_truth_table": cascade_ok,
               "passed": rep.passed and cascade_ok}
    if args.format == "json":
        text = _dump(payload)
    elif args.format == "csv":
        text = _rows_csv([dict(rep.to_dict(), clause_register_matches_truth_table=cascade_ok)])
    else:
        text = (f"{'PASS' if payload['passed'] else 'FAIL'}: max probability deviation "
                f"{rep.max_prob_deviation:.3e} (tolerance {rep.tolerance:g}), truth tables match={cascade_ok}\n")
    _emit(text, args.out)
    return EXIT_OK if payload["passed"] else EXIT_INVALID


def cmd_gen(args) -> int:
    if args.kind == "complete":
        f = generate_complete(args.n)
    else:
        if args.m is None:
            raise InputError("gen random needs --m")
        f = generate_random(args.n, args.m, _seed(args))
    _emit(serialize_dimacs(f), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    f, source = load_instance(args)
    cfg, resolved = resolve_config(args, f)
    profile = density_profile(f, args.enum_cap)
    results = {}
    for name in sorted(kernels.BACKENDS):
        bcfg = RunConfig(**{**asdict(cfg), "backend": name})
        t0 = time.perf_counter()
        reps = run_trials(f, bcfg, args.trials, 1, profile)
        results[name] = {"seconds": time.perf_counter() - t0,
                         "iterations": sum(rep.total_iterations for rep in reps),
                         "reports": [rep.to_dict(False) | {"backend": None} for rep in reps]}
    payload = {"command": "bench", "instance": {"source": source, "n": f.n, "m": f.m},
               "config": resolved,
               "backends": {k: {"seconds": v["seconds"], "iterations": v["iterations"]}
                            for k, v in results.items()}}
    if "cython" in results:
        payload["speedup"] = results["python"]["seconds"] / max(results["cython"]["seconds"], 1e-12)
        payload["identical_reports"] = results["python"]["reports"] == results["cython"]["reports"]
    if args.format == "json":
        text = _dump(payload)
    else:
        text = "".join(f"{k}: {v['seconds']:.4f} s for {v['iterations']} iterations\n"
                       for k, v in payload["backends"].items())
        if "speedup" in payload:
            text += f"speedup {payload['speedup']:.1f}x, identical reports: {payload['identical_reports']}\n"
    _emit(text, args.out)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "decide": cmd_decide, "analyze": cmd_analyze,
            "validate": cmd_validate, "gen": cmd_gen, "bench": cmd_bench}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (FormulaError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
