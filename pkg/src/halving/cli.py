"""Command-line interface.

Exit codes: 0 success, 1 a requested check failed (e.g. an enumeration
found a violation), 2 usage or input errors. Every subcommand echoes its
resolved configuration as the first output line ('#'-prefixed in CSV
mode, embedded as the "config" key in JSON mode) so any run can be
reproduced from its output alone.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .algorithms import BatchConfig, run_ash, run_bsh, run_jun16, run_sh, simple_regret
from .core import RewardSource
from .errors import HalvingError
from .experiments import (
    ALGORITHMS,
    LARGE,
    SMALL,
    equivalence_from_records,
    fit_slope,
    make_instance,
    read_sweep_csv,
    regret_sweep,
    slope_points,
    write_sweep_csv,
)
from .schedule import ADVANCE, BREADTH, advance_first_targets, breadth_first_targets, build_schedule
from .theory import (
    check_conditions,
    check_promotion_margin,
    check_promotion_safety,
    find_tightness_counterexample,
    margin_violated,
)

_PREVIEW = 48


def _config_line(config: dict) -> str:
    return "config " + json.dumps(config, sort_keys=True)


@contextlib.contextmanager
def _open_out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout, True
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh, False


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halving",
        description="Sequential halving and fixed-size-batch variants for "
        "best-arm identification, with enumeration checks and sweep tooling.",
    )
    parser.add_argument("--version", action="version", version=_version_string())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schedule", help="print the round table and target pulls")
    p.add_argument("--n", type=int, required=True, help="number of arms")
    p.add_argument("--budget", type=int, required=True, help="total pull budget")
    p.add_argument("--mode", choices=(BREADTH, ADVANCE), default=ADVANCE)
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("--full", action="store_true", help="print the whole sequence")
    p.add_argument("--out", default=None)

    p = sub.add_parser("run", help="run one algorithm and report the selection")
    p.add_argument("--algo", choices=ALGORITHMS, required=True)
    p.add_argument("--n", type=int, default=None, help="cross-check of the instance arm count")
    p.add_argument(
        "--instance",
        default=None,
        help="bandit instance as 'n,alpha,mu_min,mu_max' (Bernoulli rewards)",
    )
    p.add_argument("--matrix", default=None, help="explicit reward matrix CSV instead of --instance")
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--batch-budget", type=int, default=None)
    p.add_argument("--budget", type=int, default=None, help="total budget (sh only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=(BREADTH, ADVANCE), default=ADVANCE, help="sh target order")
    p.add_argument("--trace", default=None, help="write the pull-by-pull trace CSV here")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("check", help="enumeration checks of the batching theory")
    check_sub = p.add_subparsers(dest="check_command", required=True)

    c = check_sub.add_parser("lemma", help="promotion margin over all batch sizes")
    c.add_argument("--max-b", type=int, default=4096)

    c = check_sub.add_parser("inequality", help="promotion safety for one (n, b, B)")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--b", type=int, required=True)
    c.add_argument("--B", type=int, required=True)

    c = check_sub.add_parser("tightness", help="counterexample search below the factor 4")
    c.add_argument("--alpha", required=True)
    c.add_argument("--max-b", type=int, default=1000)

    p = sub.add_parser("conditions", help="condition-region table as CSV")
    p.add_argument(
        "--grid",
        required=True,
        help="'nmax,Bmax,b1,b2,...': n in [2,nmax] x B in [1,Bmax] per batch size",
    )
    p.add_argument("--out", default=None)

    p = sub.add_parser("sweep", help="paired regret sweep over sampled instances")
    p.add_argument("--regime", choices=(LARGE, SMALL), default=LARGE)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--n-max", type=int, default=256)
    p.add_argument("--algos", default="ash,bsh,jun16,sh", help="comma-separated subset")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)

    p = sub.add_parser("fit", help="through-origin slope of each variant against a baseline")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--baseline", default="sh")
    p.add_argument("--out", default=None)

    return parser


def _version_string() -> str:
    return f"halving {__version__} (python {sys.version.split()[0]}, numpy {np.__version__})"


def _cmd_schedule(args) -> int:
    config = {
        "command": "schedule",
        "n": args.n,
        "budget": args.budget,
        "mode": args.mode,
    }
    sched = build_schedule(args.n, args.budget)
    targets = (
        breadth_first_targets(args.n, args.budget)
        if args.mode == BREADTH
        else advance_first_targets(args.n, args.budget)
    )
    with _open_out(args.out) as (fh, is_stdout):
        if args.json:
            payload = {
                "config": config,
                "rounds": [
                    {
                        "round": r,
                        "active_size": spec.active_size,
                        "pulls_per_arm": spec.pulls_per_arm,
                        "round_budget": spec.round_budget,
                    }
                    for r, spec in enumerate(sched.rounds)
                ],
                "leftover": sched.leftover,
                "leftover_discard": sched.leftover_discard,
                "consumed": sched.consumed,
                "targets": list(targets.values if args.full else targets.values[:_PREVIEW]),
                "targets_truncated": not args.full and len(targets) > _PREVIEW,
            }
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        else:
            fh.write(_config_line(config) + "\n")
            fh.write("round  active  pulls/arm  budget\n")
            for r, spec in enumerate(sched.rounds):
                fh.write(
                    f"{r:>5}  {spec.active_size:>6}  {spec.pulls_per_arm:>9}  {spec.round_budget:>6}\n"
                )
            fh.write(
                f"leftover {sched.leftover} (discarded {sched.leftover_discard}), "
                f"consumed {sched.consumed} of {sched.budget}\n"
            )
            values = targets.values if args.full else targets.values[:_PREVIEW]
            tail = "" if args.full or len(targets) <= _PREVIEW else ",..."
            fh.write(f"targets[{args.mode}] = ({','.join(map(str, values))}{tail})\n")
        if not is_stdout:
            print(_config_line(config))
    return 0


def _parse_instance(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError("--instance must be 'n,alpha,mu_min,mu_max'")
    return make_instance(int(parts[0]), float(parts[1]), float(parts[2]), float(parts[3]))


def _cmd_run(args) -> int:
    if (args.instance is None) == (args.matrix is None):
        print("error: provide exactly one of --instance or --matrix", file=sys.stderr)
        return 2
    if args.matrix is not None:
        source = RewardSource.from_csv(args.matrix)
        n = source.n
    else:
        instance = _parse_instance(args.instance)
        if args.n is not None and args.n != instance.n:
            print(
                f"error: --n {args.n} disagrees with the instance arm count {instance.n}",
                file=sys.stderr,
            )
            return 2
        source = RewardSource.bernoulli(instance.means, args.seed)
        n = instance.n

    if args.algo == "sh":
        budget = args.budget
        if budget is None:
            if args.batch_size is None or args.batch_budget is None:
                print("error: sh needs --budget or --batch-size with --batch-budget", file=sys.stderr)
                return 2
            budget = args.batch_size * args.batch_budget
        config = {
            "command": "run",
            "algo": "sh",
            "n": n,
            "budget": budget,
            "mode": args.mode,
            "seed": args.seed,
        }
        trace = run_sh(n, budget, source, args.mode)
    else:
        if args.batch_size is None or args.batch_budget is None:
            print("error: batched algorithms need --batch-size and --batch-budget", file=sys.stderr)
            return 2
        cfg = BatchConfig(args.batch_size, args.batch_budget)
        config = {
            "command": "run",
            "algo": args.algo,
            "n": n,
            "batch_size": cfg.batch_size,
            "batch_budget": cfg.batch_budget,
            "seed": args.seed,
        }
        runner = {"ash": run_ash, "bsh": run_bsh, "jun16": run_jun16}[args.algo]
        trace = runner(n, cfg, source)

    regret = simple_regret(trace, source.means)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# {_config_line(config)}\n")
            if args.algo == "jun16":
                fh.write("# jun16 remainder batches are assigned to the final round\n")
            fh.write("step,batch,arm,reward\n")
            for p in trace.pulls:
                fh.write(f"{p.step},{p.batch},{p.arm},{p.reward!r}\n")
    if args.format == "json":
        payload = {
            "config": config,
            "selected": trace.selected,
            "regret": regret,
            "consumed": trace.consumed,
            "short_final_batch": trace.short_final_batch,
            "pull_counts": list(trace.pull_counts()),
            "means": [s.mean for s in trace.final_stats],
        }
        json.dump(payload, sys.stdout, indent=2)
        print()
    else:
        print(_config_line(config))
        print(f"selected arm {trace.selected}")
        print(f"simple regret {regret!r}")
        print(f"consumed {trace.consumed} pulls")
    return 0


def _cmd_check(args) -> int:
    if args.check_command == "lemma":
        config = {"command": "check lemma", "max_b": args.max_b}
        print(_config_line(config))
        for b in range(2, args.max_b + 1):
            result = check_promotion_margin(b)
            if not result.holds:
                print(f"margin violated at b={b}, x={result.violating_x}")
                return 1
        print(f"margin holds for all b in [2, {args.max_b}]")
        return 0
    if args.check_command == "inequality":
        config = {"command": "check inequality", "n": args.n, "b": args.b, "B": args.B}
        print(_config_line(config))
        report = check_conditions(args.n, args.b, args.B)
        print(
            f"c1 (executable): {report.c1_holds}; c2 (equivalence): {report.c2_holds}; "
            f"guaranteed: {report.equivalence_guaranteed}"
        )
        result = check_promotion_safety(args.n, args.b, args.B)
        if result.holds:
            print(f"promotion safety holds for all rounds and splits (n={args.n}, b={args.b}, B={args.B})")
            return 0
        r, z = result.witness
        print(f"promotion safety violated at round {r}, split z={z}")
        return 1
    if args.check_command == "tightness":
        config = {"command": "check tightness", "alpha": str(args.alpha), "max_b": args.max_b}
        print(_config_line(config))
        witness = find_tightness_counterexample(args.alpha, args.max_b)
        if witness is None:
            print(f"no counterexample up to b={args.max_b}")
            return 1
        verified = margin_violated(witness.b, witness.x, args.alpha)
        print(
            f"counterexample: b={witness.b}, x={witness.x} "
            f"(re-checked: {'violated' if verified else 'NOT violated'})"
        )
        return 0 if verified else 1
    raise AssertionError(f"unhandled check {args.check_command!r}")


def _cmd_conditions(args) -> int:
    parts = [int(v) for v in args.grid.split(",")]
    if len(parts) < 3:
        print("error: --grid needs 'nmax,Bmax,b1[,b2,...]'", file=sys.stderr)
        return 2
    n_max, b_budget_max, batch_sizes = parts[0], parts[1], parts[2:]
    config = {
        "command": "conditions",
        "n_max": n_max,
        "B_max": b_budget_max,
        "batch_sizes": batch_sizes,
    }
    with _open_out(args.out) as (fh, is_stdout):
        fh.write(f"# {_config_line(config)}\n")
        fh.write("n,B,b,c1,c2\n")
        for b in batch_sizes:
            for n in range(2, n_max + 1):
                for B in range(1, b_budget_max + 1):
                    report = check_conditions(n, b, B)
                    fh.write(
                        f"{n},{B},{b},{int(report.c1_holds)},{int(report.c2_holds)}\n"
                    )
        if not is_stdout:
            print(f"# {_config_line(config)}")
    return 0


def _cmd_sweep(args) -> int:
    algos = tuple(a.strip() for a in args.algos.split(",") if a.strip())
    config = {
        "command": "sweep",
        "regime": args.regime,
        "trials": args.trials,
        "seeds": args.seeds,
        "rng_seed": args.rng_seed,
        "n_max": args.n_max,
        "algos": sorted(algos),
    }
    records = regret_sweep(
        algos,
        trials=args.trials,
        seeds_per_trial=args.seeds,
        rng_seed=args.rng_seed,
        regime=args.regime,
        n_max=args.n_max,
        workers=args.workers,
    )
    metadata = [
        _config_line(config),
        "sampler: n~U[2,n_max]; alpha~{0.5,1.0,2.0}; mu bounds distinct from "
        "{0.1..0.9}; B~U[4R,10R] (large) or U[R,4R-1] (small); b~U[2,5n]; "
        "resampled until b*B >= n*R",
    ]
    if "jun16" in algos:
        metadata.append("jun16 remainder batches are assigned to the final round")
    with _open_out(args.out) as (fh, is_stdout):
        write_sweep_csv(records, fh, metadata)
        if not is_stdout:
            print(f"# {_config_line(config)}")
            print(f"# wrote {len(records)} records to {args.out}")
    return 0


def _cmd_fit(args) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            records = read_sweep_csv(fh)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read sweep CSV: {exc}", file=sys.stderr)
        return 2
    algos = sorted({r.algo for r in records})
    if args.baseline not in algos:
        print(f"error: baseline {args.baseline!r} absent from {args.input}", file=sys.stderr)
        return 2
    config = {"command": "fit", "input": args.input, "baseline": args.baseline}
    # the baseline's self-pairing is included as an identity sanity row
    fits = {}
    for algo in algos:
        points = slope_points(records, algo, args.baseline)
        try:
            fit = fit_slope(points)
        except HalvingError as exc:
            print(f"error: fit for {algo!r} is degenerate: {exc}", file=sys.stderr)
            return 2
        fits[algo] = {"beta": fit.beta, "points": fit.point_count}
    report = equivalence_from_records(records)
    payload = {"config": config, "fits": fits}
    if report.total:
        payload["ash_match_rate"] = report.match_rate
    with _open_out(args.out) as (fh, is_stdout):
        json.dump(payload, fh, indent=2)
        fh.write("\n")
        if not is_stdout:
            print(_config_line(config))
    return 0


def dispatch(argv: Sequence[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        if args.command == "schedule":
            return _cmd_schedule(args)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "conditions":
            return _cmd_conditions(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "fit":
            return _cmd_fit(args)
    except HalvingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError(f"unhandled command {args.command!r}")


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
