"""Batch command-line front end.

Subcommands: run, solve, bench, check-bound, fig1, blowup, entropy,
compile-1tape.  Exit codes: 0 success/pass, 1 check failure, 2 usage or
encoding error.  Ranges are written lo..hi, lo..hi:STEP or lo..hi:x2 for
doubling; a bare integer is a one-element range.  All randomness defaults
to seed 4261 and the seed is echoed in the output header.
"""

from __future__ import annotations

import argparse
import sys

from .bench import (
    SweepPlan,
    doubling_ratios,
    entropy_experiment,
    export_bound_report,
    export_entropy,
    export_fig1,
    export_ratios,
    export_records,
    fig1_table,
    import_records,
    loglog_slopes,
    partial_cert_blowup,
    run_sweep,
    tradeoff_consistency,
)
from .machine import EncodingError, run, trace
from .problems import get_problem, parse_dimacs, sat3_verifier_fuel
from .single_tape import compile_to_single_tape
from .tmformat import TmFormatError, load_tm, save_tm
from .verifier import decide_by_enumeration

DEFAULT_SEED = 4261

USAGE_ERROR = 2
CHECK_FAILURE = 1


class CliError(Exception):
    """Usage-level failure; maps to exit code 2."""


def parse_range(text: str) -> tuple[int, ...]:
    text = text.strip()
    if ".." not in text:
        return (int(text),)
    lo_s, _, rest = text.partition("..")
    hi_s, _, step_s = rest.partition(":")
    lo, hi = int(lo_s), int(hi_s)
    if lo > hi:
        raise CliError(f"empty range {text!r}")
    if not step_s:
        return tuple(range(lo, hi + 1))
    if step_s.startswith("x"):
        factor = int(step_s[1:])
        if factor < 2:
            raise CliError("multiplicative step must be >= 2")
        out = []
        v = lo
        while v <= hi:
            out.append(v)
            v *= factor
        return tuple(out)
    step = int(step_s)
    if step < 1:
        raise CliError("step must be >= 1")
    return tuple(range(lo, hi + 1, step))


def _cmd_run(args) -> int:
    spec = load_tm(args.machine)
    if args.trace is not None:
        configs = trace(spec, args.input, args.cert, fuel=args.fuel, limit=args.trace)
        for cfg in configs:
            heads = " ".join(str(h) for h in cfg.heads)
            print(f"step {cfg.steps_elapsed:6d} state={cfg.state} heads=[{heads}]")
    result = run(spec, args.input, args.cert, fuel=args.fuel)
    print(f"machine: {spec.name}")
    print(f"status: {result.status}")
    print(f"steps: {result.steps}")
    print(f"final-state: {result.final_state}")
    return 0


def _cmd_solve(args) -> int:
    prob = get_problem(args.problem)
    print(f"# problem={args.problem} role={args.role} seed={args.seed}")
    for n in parse_range(args.n):
        inst, cert = prob.accepting_instance(n, args.seed)
        fuel = prob.verifier_fuel(n)
        if args.role == "naive":
            if prob.build_naive_solver is None:
                raise CliError(f"{args.problem} ships no naive solver")
            result = run(prob.build_naive_solver().machine, inst.symbols, "",
                         fuel=prob.solver_fuel(n))
            print(f"n={n} verdict={result.status} steps={result.steps}")
        else:
            outcome = decide_by_enumeration(prob.build_verifier(), inst, fuel=fuel)
            print(f"n={n} verdict={outcome.verdict} candidates={outcome.candidates_tried} "
                  f"machine_steps={outcome.machine_steps} total_steps={outcome.total_steps}")
    return 0


def _cmd_bench(args) -> int:
    roles = tuple(args.roles.split(","))
    plan = SweepPlan(problem=args.problem, roles=roles, n_values=parse_range(args.n),
                     instances=args.instances, seed=args.seed,
                     fuel_factor=args.fuel_factor)
    records = run_sweep(plan, jobs=args.jobs)
    export_records(records, args.csv, fmt="json" if args.csv.endswith(".json") else "csv")
    print(f"# problem={args.problem} roles={args.roles} seed={args.seed} jobs={args.jobs}")
    print(f"wrote {len(records)} records to {args.csv}")
    rows, notes = doubling_ratios(records)
    for row in rows:
        print(f"ratio {row.problem}/{row.role} {row.n_from}->{row.n_to}: {row.ratio:.3f}")
    for note in notes:
        print(f"note: {note}")
    for (problem, role), slope in sorted(loglog_slopes(records).items()):
        print(f"loglog-slope {problem}/{role}: {slope:.3f} (reported, not gated)")
    if args.ratios_csv:
        export_ratios(rows, args.ratios_csv)
        print(f"wrote ratios to {args.ratios_csv}")
    return 0


def _pick_role(records, wanted: tuple[str, ...], side: str):
    roles = {r.role for r in records}
    for role in wanted:
        if role in roles:
            picked = [r for r in records if r.role == role]
            if len(roles) > 1:
                print(f"note: using {role!r} records for the {side} side")
            return picked
    return records


def _cmd_check_bound(args) -> int:
    solver = _pick_role(import_records(args.solver_csv),
                        ("naive-solver", "enum-solver"), "solver")
    verifier = _pick_role(import_records(args.verifier_csv),
                          ("verifier", "single-tape-verifier"), "verifier")
    report = tradeoff_consistency(solver, verifier, args.tolerance_bits)
    print(f"# tolerance_bits={args.tolerance_bits}")
    for row in report.rows:
        print(f"n={row.n} f={row.f_steps:.0f} g={row.g_steps:.0f} "
              f"speedup={row.speedup:.2f} delta={row.delta_bits} "
              f"required={row.required_bits} slack={row.slack}")
    for n in report.unmatched_n:
        print(f"note: n={n} present on one side only")
    if args.csv:
        export_bound_report(report, args.csv)
        print(f"wrote bound report to {args.csv}")
    print(f"slack >= -{report.tolerance_bits}: {'PASS' if report.passes else 'FAIL'}")
    return 0 if report.passes else CHECK_FAILURE


def _cmd_fig1(args) -> int:
    rows = fig1_table(args.f0, args.max_delta)
    print("delta g")
    for d, g in rows:
        print(f"{d} {g}")
    if args.csv:
        export_fig1(rows, args.csv)
        print(f"wrote fig1 table to {args.csv}")
    return 0


def _cmd_blowup(args) -> int:
    with open(args.cnf, encoding="utf-8") as fh:
        formula = parse_dimacs(fh.read())
    missing = parse_range(args.missing)
    fuel = args.fuel if args.fuel else sat3_verifier_fuel(formula)
    try:
        result = partial_cert_blowup(formula, missing, fuel=fuel)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    print(f"# n={formula.num_vars} m={formula.num_clauses} fuel={fuel}")
    print("missing candidates machine_steps total_steps")
    for row in result.rows:
        print(f"{row.missing_bits} {row.candidates} {row.machine_steps} {row.total_steps}")
    checked = [r for i, r in enumerate(result.step_ratios) if missing[i] >= 2]
    ok = all(1.95 <= r <= 2.05 for r in checked)
    print("step ratios:", " ".join(f"{r:.4f}" for r in result.step_ratios))
    print(f"halving law (m >= 2): {'PASS' if ok else 'FAIL'}")
    return 0 if ok else CHECK_FAILURE


def _cmd_entropy(args) -> int:
    result = entropy_experiment(parse_range(args.n), args.samples, args.seed)
    print(f"# samples={args.samples} seed={args.seed}")
    print("n m mean_count log2_mean analytic_mean")
    for rec in result.records:
        log2s = f"{rec.log2_mean:.4f}" if rec.log2_mean is not None else "nan"
        print(f"{rec.n} {rec.m} {rec.mean_count:.3f} {log2s} "
              f"{result.analytic_mean(rec.n):.3f}")
    print(f"fitted slope: {result.slope:.4f}")
    for n in result.excluded_n:
        print(f"warning: n={n} had zero-mean counts and was excluded from the fit")
    if args.csv:
        export_entropy(result, args.csv)
        print(f"wrote entropy records to {args.csv}")
    if args.expect_slope:
        lo, hi = (float(x) for x in args.expect_slope.split(".."))
        ok = lo <= result.slope <= hi
        print(f"slope in [{lo}, {hi}]: {'PASS' if ok else 'FAIL'}")
        return 0 if ok else CHECK_FAILURE
    return 0


def _cmd_compile_1tape(args) -> int:
    spec = load_tm(args.machine)
    compiled = compile_to_single_tape(spec, cap=args.cap)
    save_tm(compiled, args.out)
    print(f"compiled {spec.name} ({len(spec.states)} states) -> "
          f"{compiled.name} ({len(compiled.states)} states, {len(compiled.rules)} rules)")
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="certlab",
        description="certificate-complexity laboratory: simulate, enumerate, measure",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a .tm machine on one input")
    p.add_argument("--machine", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--cert", default="")
    p.add_argument("--fuel", type=int, required=True)
    p.add_argument("--trace", type=int, default=None, metavar="LIMIT")
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("solve", help="decide generated instances without certificates")
    p.add_argument("--problem", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--role", choices=("naive", "enum"), default="enum")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("bench", help="sweep sizes and export step-count records")
    p.add_argument("--problem", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--csv", required=True)
    p.add_argument("--roles", default="verifier,naive-solver")
    p.add_argument("--instances", type=int, default=5)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--ratios-csv", default=None)
    p.add_argument("--fuel-factor", type=float, default=1.0,
                   help="scale the problem's fuel policy (default 1.0)")
    p.set_defaults(fn=_cmd_bench)

    p = sub.add_parser("check-bound", help="trade-off consistency from two record CSVs")
    p.add_argument("--solver-csv", required=True)
    p.add_argument("--verifier-csv", required=True)
    p.add_argument("--tolerance-bits", type=int, default=2)
    p.add_argument("--csv", default=None, help="write the bound-report CSV here")
    p.set_defaults(fn=_cmd_check_bound)

    p = sub.add_parser("fig1", help="fixed-input halving table")
    p.add_argument("--f0", type=int, default=1024)
    p.add_argument("--max-delta", type=int, default=10)
    p.add_argument("--csv", default=None)
    p.set_defaults(fn=_cmd_fig1)

    p = sub.add_parser("blowup", help="partial-certificate blowup on an UNSAT formula")
    p.add_argument("--cnf", required=True)
    p.add_argument("--missing", required=True)
    p.add_argument("--fuel", type=int, default=None)
    p.set_defaults(fn=_cmd_blowup)

    p = sub.add_parser("entropy", help="solution-count slope near the phase transition")
    p.add_argument("--n", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--csv", default=None)
    p.add_argument("--expect-slope", default=None, metavar="LO..HI")
    p.set_defaults(fn=_cmd_entropy)

    p = sub.add_parser("compile-1tape", help="compile a machine to single-tape form")
    p.add_argument("--machine", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--cap", type=int, default=4096)
    p.set_defaults(fn=_cmd_compile_1tape)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return args.fn(args)
    except (CliError, EncodingError, TmFormatError, FileNotFoundError,
            KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
