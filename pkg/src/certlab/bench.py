"""Sweep harness: measures step counts, checks trade-off consistency,
reproduces the fixed-input halving table and the solution-entropy slope.

All randomness is seeded and every export is canonically ordered, so
identical plans produce byte-identical files, with or without worker
threads (the simulator's hot loop releases the GIL).
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .machine import run
from .problems import CnfFormula, get_problem, sat3_verifier_fuel
from .problems.sat3 import build_sat3_verifier, count_satisfying, encode as encode_cnf
from .single_tape import compile_to_single_tape, single_tape_fuel
from .verifier import BoundReport, build_bound_report, decide_by_enumeration, decide_by_extension

ROLES = ("verifier", "naive-solver", "enum-solver", "single-tape-verifier")

CSV_HEADER = "problem,role,n,cert_bits,instance_id,seed,steps,verdict,fuel"
ENTROPY_HEADER = "n,m,samples,mean_count,log2_mean,fitted_slope"
RATIO_HEADER = "problem,role,n_from,n_to,ratio"
BOUND_HEADER = "n,f_steps,g_steps,speedup,delta_bits,required_bits,slack,tolerance_bits,within"
FIG1_HEADER = "delta,g"

CLAUSE_RATIO = 4.26  # random 3-SAT phase-transition clause/variable ratio


@dataclass(frozen=True)
class SweepPlan:
    problem: str
    roles: tuple[str, ...]
    n_values: tuple[int, ...]
    instances: int = 5
    seed: int = 4261
    fuel_factor: float = 1.0  # scales the problem's fuel policy; < 1 starves runs

    def validate(self) -> None:
        get_problem(self.problem)
        for role in self.roles:
            if role not in ROLES:
                raise ValueError(f"unknown role {role!r}; expected one of {ROLES}")
        if list(self.n_values) != sorted(self.n_values):
            raise ValueError("n values must be sorted ascending")
        if self.instances < 1:
            raise ValueError("instances must be >= 1")
        if not self.fuel_factor > 0:
            raise ValueError("fuel_factor must be positive")

    def fuel_for(self, policy_fuel: int) -> int:
        return max(1, int(policy_fuel * self.fuel_factor))


@dataclass(frozen=True)
class ExperimentRecord:
    problem: str
    role: str
    n: int
    cert_bits: int
    instance_id: int
    seed: int
    steps: int
    verdict: str
    fuel: int
    timestamp: float = 0.0  # informational; never exported

    def sort_key(self):
        return (self.problem, self.role, self.n, self.instance_id)


def _cell_seed(base: int, n: int, i: int) -> int:
    return (base * 1_000_003 + n * 7_919 + i) & 0x7FFFFFFF


_SINGLE_TAPE_CACHE: dict[str, object] = {}


def _single_tape_machine(problem_name: str):
    if problem_name not in _SINGLE_TAPE_CACHE:
        verifier = get_problem(problem_name).build_verifier()
        _SINGLE_TAPE_CACHE[problem_name] = compile_to_single_tape(verifier.machine)
    return _SINGLE_TAPE_CACHE[problem_name]


def _run_cell(plan: SweepPlan, role: str, n: int, i: int) -> ExperimentRecord:
    prob = get_problem(plan.problem)
    seed = _cell_seed(plan.seed, n, i)
    stamp = time.time()
    if role == "verifier":
        inst, cert = prob.accepting_instance(n, seed)
        fuel = plan.fuel_for(prob.verifier_fuel(n))
        result = run(prob.build_verifier().machine, inst.symbols, cert, fuel=fuel)
        return ExperimentRecord(plan.problem, role, n, len(cert), i, seed,
                                result.steps, result.status, fuel, stamp)
    if role == "naive-solver":
        if prob.worst_instance is None or prob.build_naive_solver is None:
            raise ValueError(f"problem {plan.problem!r} has no naive solver")
        inst = prob.worst_instance(n)
        fuel = plan.fuel_for(prob.solver_fuel(n))
        result = run(prob.build_naive_solver().machine, inst.symbols, "", fuel=fuel)
        return ExperimentRecord(plan.problem, role, n, 0, i, seed,
                                result.steps, result.status, fuel, stamp)
    if role == "enum-solver":
        inst, _ = prob.accepting_instance(n, seed)
        fuel = plan.fuel_for(prob.verifier_fuel(n))
        outcome = decide_by_enumeration(prob.build_verifier(), inst, fuel=fuel)
        return ExperimentRecord(plan.problem, role, n, outcome.bits, i, seed,
                                outcome.total_steps, outcome.verdict, fuel, stamp)
    if role == "single-tape-verifier":
        inst, cert = prob.accepting_instance(n, seed)
        machine = _single_tape_machine(plan.problem)
        base_fuel = plan.fuel_for(prob.verifier_fuel(n))
        t = len(prob.build_verifier().machine.tapes)
        fuel = single_tape_fuel(n, len(cert), t, base_fuel)
        result = run(machine, inst.symbols, cert, fuel=fuel)
        return ExperimentRecord(plan.problem, role, n, len(cert), i, seed,
                                result.steps, result.status, fuel, stamp)
    raise ValueError(f"unknown role {role!r}")


def run_sweep(plan: SweepPlan, jobs: int = 1) -> list[ExperimentRecord]:
    """One record per (role, n, instance); deterministic given the plan."""
    plan.validate()
    cells = [(role, n, i)
             for role in plan.roles
             for n in plan.n_values
             for i in range(plan.instances)]
    if jobs <= 1:
        records = [_run_cell(plan, *cell) for cell in cells]
    else:
        if "single-tape-verifier" in plan.roles:
            _single_tape_machine(plan.problem)  # compile once, not per worker
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(lambda c: _run_cell(plan, *c), cells))
    return sorted(records, key=ExperimentRecord.sort_key)


@dataclass(frozen=True)
class RatioRow:
    problem: str
    role: str
    n_from: int
    n_to: int
    ratio: float


def doubling_ratios(records: list[ExperimentRecord]) -> tuple[list[RatioRow], list[str]]:
    """Ratios of median steps at consecutive doubled n, per (problem, role)."""
    grouped: dict[tuple[str, str], dict[int, list[int]]] = {}
    for rec in records:
        grouped.setdefault((rec.problem, rec.role), {}).setdefault(rec.n, []).append(rec.steps)
    rows: list[RatioRow] = []
    notes: list[str] = []
    for (problem, role), by_n in sorted(grouped.items()):
        ns = sorted(by_n)
        for n in ns:
            if 2 * n in by_n:
                med_lo = float(np.median(by_n[n]))
                med_hi = float(np.median(by_n[2 * n]))
                rows.append(RatioRow(problem, role, n, 2 * n, med_hi / med_lo))
            elif n != ns[-1]:
                notes.append(f"{problem}/{role}: no doubled partner for n={n}")
    return rows, notes


def loglog_slopes(records: list[ExperimentRecord]) -> dict[tuple[str, str], float]:
    """Least-squares slope of log2(median steps) against log2 n per role.

    Reported for orientation only; desk-scale log factors blur exponents, so
    acceptance gates on doubling ratios instead.
    """
    grouped: dict[tuple[str, str], dict[int, list[int]]] = {}
    for rec in records:
        grouped.setdefault((rec.problem, rec.role), {}).setdefault(rec.n, []).append(rec.steps)
    slopes: dict[tuple[str, str], float] = {}
    for key, by_n in grouped.items():
        if len(by_n) < 2:
            continue
        xs = np.log2(sorted(by_n))
        ys = np.log2([float(np.median(by_n[n])) for n in sorted(by_n)])
        slopes[key] = float(np.polyfit(xs, ys, 1)[0])
    return slopes


def fig1_table(f0: int = 1024, max_delta: int = 10) -> list[tuple[int, int]]:
    """Rows (delta, f0 // 2^delta) for delta = 0..max_delta, exact integers."""
    if f0 < 1:
        raise ValueError("f0 must be >= 1")
    return [(d, f0 // (1 << d)) for d in range(max_delta + 1)]


def tradeoff_consistency(
    solver_records: list[ExperimentRecord],
    verifier_records: list[ExperimentRecord],
    tolerance_bits: int = 2,
) -> BoundReport:
    return build_bound_report(solver_records, verifier_records, tolerance_bits)


@dataclass(frozen=True)
class BlowupRow:
    missing_bits: int
    candidates: int
    machine_steps: int
    total_steps: int


@dataclass(frozen=True)
class BlowupResult:
    rows: tuple[BlowupRow, ...]
    candidate_ratios: tuple[float, ...]
    step_ratios: tuple[float, ...]


def partial_cert_blowup(
    formula: CnfFormula,
    missing_range: tuple[int, ...],
    fuel: int | None = None,
) -> BlowupResult:
    """Removing certificate bits multiplies enumeration work.

    Requires an unsatisfiable formula: exhaustion is then forced and every
    missing bit exactly doubles the candidate count.
    """
    if count_satisfying(formula) > 0:
        raise ValueError(
            "formula is satisfiable; the blowup experiment needs an UNSAT instance "
            "(exhaustion must be forced) -- pick another seed or formula")
    if fuel is None:
        fuel = sat3_verifier_fuel(formula)
    n = formula.num_vars
    if max(missing_range) > n:
        raise ValueError("missing bits cannot exceed the variable count")
    verifier = build_sat3_verifier()
    inst = encode_cnf(formula)
    rows: list[BlowupRow] = []
    for m in missing_range:
        prefix = "0" * (n - m)
        outcome = decide_by_extension(verifier, inst, prefix, m, fuel=fuel)
        assert outcome.verdict == "rejected"
        assert outcome.candidates_tried == (1 << m)
        rows.append(BlowupRow(m, outcome.candidates_tried, outcome.machine_steps,
                              outcome.total_steps))
    cand_ratios = tuple(rows[i + 1].candidates / rows[i].candidates for i in range(len(rows) - 1))
    step_ratios = tuple(
        rows[i + 1].machine_steps / rows[i].machine_steps for i in range(len(rows) - 1))
    return BlowupResult(tuple(rows), cand_ratios, step_ratios)


@dataclass(frozen=True)
class EntropyRecord:
    n: int
    m: int
    samples: int
    counts: tuple[int, ...]
    mean_count: float
    log2_mean: float | None  # None when every sample had zero solutions


@dataclass(frozen=True)
class EntropyResult:
    records: tuple[EntropyRecord, ...]
    slope: float
    intercept: float
    excluded_n: tuple[int, ...]

    def analytic_mean(self, n: int) -> float:
        m = round(CLAUSE_RATIO * n)
        return (2.0 ** n) * (7.0 / 8.0) ** m


def entropy_experiment(
    n_values: tuple[int, ...],
    samples: int,
    seed: int,
) -> EntropyResult:
    """Mean satisfying-assignment counts near the phase transition.

    m = round(4.26 n) clauses per formula; the fitted least-squares slope of
    log2(mean count) against n is the solution-entropy proxy.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    records: list[EntropyRecord] = []
    excluded: list[int] = []
    from .problems import gen_random_3sat

    for n in n_values:
        m = round(CLAUSE_RATIO * n)
        counts = []
        for i in range(samples):
            formula = gen_random_3sat(n, m, seed=_cell_seed(seed, n, i))
            counts.append(count_satisfying(formula))
        mean = sum(counts) / samples
        log2_mean = math.log2(mean) if mean > 0 else None
        if log2_mean is None:
            excluded.append(n)
        records.append(EntropyRecord(n, m, samples, tuple(counts), mean, log2_mean))
    fit_pts = [(r.n, r.log2_mean) for r in records if r.log2_mean is not None]
    if len(fit_pts) < 2:
        raise ValueError("not enough usable n values to fit a slope")
    xs = np.array([p[0] for p in fit_pts], dtype=float)
    ys = np.array([p[1] for p in fit_pts], dtype=float)
    slope, intercept = np.polyfit(xs, ys, 1)
    return EntropyResult(tuple(records), float(slope), float(intercept), tuple(excluded))


# ---- import/export -------------------------------------------------------


def _record_to_row(rec: ExperimentRecord) -> str:
    return (f"{rec.problem},{rec.role},{rec.n},{rec.cert_bits},{rec.instance_id},"
            f"{rec.seed},{rec.steps},{rec.verdict},{rec.fuel}")


def export_records(records: list[ExperimentRecord], path: str, fmt: str = "csv") -> None:
    ordered = sorted(records, key=ExperimentRecord.sort_key)
    if fmt == "csv":
        body = "\n".join([CSV_HEADER] + [_record_to_row(r) for r in ordered])
        text = body + "\n"
    elif fmt == "json":
        objs = [
            {"problem": r.problem, "role": r.role, "n": r.n, "cert_bits": r.cert_bits,
             "instance_id": r.instance_id, "seed": r.seed, "steps": r.steps,
             "verdict": r.verdict, "fuel": r.fuel}
            for r in ordered
        ]
        text = json.dumps(objs, indent=2) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def import_records(path: str) -> list[ExperimentRecord]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    records: list[ExperimentRecord] = []
    if path.endswith(".json") or text.lstrip().startswith("["):
        for obj in json.loads(text):
            records.append(ExperimentRecord(
                obj["problem"], obj["role"], int(obj["n"]), int(obj["cert_bits"]),
                int(obj["instance_id"]), int(obj["seed"]), int(obj["steps"]),
                obj["verdict"], int(obj["fuel"])))
        return records
    lines = text.strip().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"unrecognized records CSV header in {path}")
    for line in lines[1:]:
        p, role, n, cb, iid, seed, steps, verdict, fuel = line.split(",")
        records.append(ExperimentRecord(
            p, role, int(n), int(cb), int(iid), int(seed), int(steps), verdict, int(fuel)))
    return records


def export_ratios(rows: list[RatioRow], path: str) -> None:
    lines = [RATIO_HEADER]
    for r in rows:
        lines.append(f"{r.problem},{r.role},{r.n_from},{r.n_to},{r.ratio:.6f}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def export_bound_report(report: BoundReport, path: str) -> None:
    lines = [BOUND_HEADER]
    for row in report.rows:
        within = row.slack >= -report.tolerance_bits
        lines.append(
            f"{row.n},{row.f_steps:.1f},{row.g_steps:.1f},{row.speedup:.6f},"
            f"{row.delta_bits},{row.required_bits},{row.slack},{report.tolerance_bits},"
            f"{'pass' if within else 'fail'}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def export_entropy(result: EntropyResult, path: str) -> None:
    lines = [ENTROPY_HEADER]
    for r in result.records:
        log2s = f"{r.log2_mean:.6f}" if r.log2_mean is not None else "nan"
        lines.append(
            f"{r.n},{r.m},{r.samples},{r.mean_count:.6f},{log2s},{result.slope:.6f}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def export_fig1(rows: list[tuple[int, int]], path: str) -> None:
    lines = [FIG1_HEADER] + [f"{d},{g}" for d, g in rows]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
