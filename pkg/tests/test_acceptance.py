"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run pytest with -s to stream them).
Budgets are wall-clock upper bounds; the shared sweeps run once per session.
"""

import itertools
import random
import time

import pytest

from certlab.bench import (
    SweepPlan,
    doubling_ratios,
    entropy_experiment,
    export_records,
    fig1_table,
    partial_cert_blowup,
    run_sweep,
    tradeoff_consistency,
)
from certlab.instances import int_to_bits, log2_width
from certlab.machine import run
from certlab.problems import (
    gen_periodic,
    gen_random_3sat,
    get_problem,
    periodic_oracle,
    rotation_oracle,
    sat3_oracle,
    sat3_verifier_fuel,
)
from certlab.problems.periodic import build_periodic_verifier, encode as encode_periodic
from certlab.problems.rotation import build_rotation_verifier, encode as encode_rotation
from certlab.problems.sat3 import build_sat3_verifier, encode as encode_cnf
from certlab.single_tape import compile_to_single_tape, single_tape_fuel
from certlab.verifier import decide_by_enumeration

SEED = 4261
STRING_NS = (256, 512, 1024, 2048, 4096)


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} -- {detail}")


@pytest.fixture(scope="module")
def string_sweeps():
    t0 = time.perf_counter()
    records = {}
    for problem in ("periodic", "rotation"):
        plan = SweepPlan(problem, ("verifier", "naive-solver"), STRING_NS,
                         instances=5, seed=SEED)
        records[problem] = run_sweep(plan, jobs=4)
    return records, time.perf_counter() - t0


def test_criterion_1_fig1_exact_reproduction():
    t0 = time.perf_counter()
    rows = fig1_table(1024, 10)
    elapsed = time.perf_counter() - t0
    expected = [(0, 1024), (1, 512), (2, 256), (3, 128), (4, 64), (5, 32),
                (6, 16), (7, 8), (8, 4), (9, 2), (10, 1)]
    ok = rows == expected and elapsed < 1.0
    report("1 fig1", ok, f"rows exact for delta=0..10, {elapsed:.3f}s")
    assert rows == expected
    assert elapsed < 1.0


def test_criterion_2_oracle_equivalence_exhaustive():
    t0 = time.perf_counter()
    v = build_periodic_verifier()
    fuel = get_problem("periodic").verifier_fuel(14)
    strings = 0
    for n in range(1, 15):
        for tup in itertools.product("ab", repeat=n):
            x = "".join(tup)
            outcome = decide_by_enumeration(v, encode_periodic(x), fuel=fuel)
            assert outcome.accepted == periodic_oracle(x)[0], x
            strings += 1
    assert strings == 32_766

    vr = build_rotation_verifier()
    fuel = get_problem("rotation").verifier_fuel(8)
    pairs = 0
    for n in range(0, 9):
        for ta in itertools.product("ab", repeat=n):
            a = "".join(ta)
            for tb in itertools.product("ab", repeat=n):
                b = "".join(tb)
                outcome = decide_by_enumeration(vr, encode_rotation((a, b)), fuel=fuel)
                assert outcome.accepted == rotation_oracle(a, b)[0], (a, b)
                pairs += 1
    assert pairs == 87_381

    vs = build_sat3_verifier()
    formulas = 0
    for i in range(200):
        n = 3 + (i % 10)
        formula = gen_random_3sat(n, round(4.26 * n), seed=i)
        outcome = decide_by_enumeration(
            vs, encode_cnf(formula), fuel=sat3_verifier_fuel(formula))
        assert outcome.accepted == sat3_oracle(formula)[0], (i, n)
        formulas += 1
    assert formulas == 200

    elapsed = time.perf_counter() - t0
    ok = elapsed < 300
    report("2 oracle-equivalence", ok,
           f"{strings} strings, {pairs} pairs, {formulas} formulas all agree, {elapsed:.1f}s")
    assert ok


def test_criterion_3_asymptotic_gap(string_sweeps):
    sweeps, sweep_elapsed = string_sweeps
    failures = []
    details = []
    for problem, records in sweeps.items():
        rows, _ = doubling_ratios(records)
        for row in rows:
            if row.role == "verifier" and not row.ratio <= 2.7:
                failures.append((problem, row))
            if row.role == "naive-solver" and not 3.4 <= row.ratio <= 4.6:
                failures.append((problem, row))
        v = [f"{r.ratio:.2f}" for r in rows if r.role == "verifier"]
        s = [f"{r.ratio:.2f}" for r in rows if r.role == "naive-solver"]
        details.append(f"{problem} verifier={v} solver={s}")
    ok = not failures and sweep_elapsed < 600
    report("3 asymptotic-gap", ok,
           "; ".join(details) + f", sweeps took {sweep_elapsed:.1f}s")
    assert not failures, failures
    assert sweep_elapsed < 600


def test_criterion_4_tradeoff_consistency(string_sweeps):
    sweeps, _ = string_sweeps
    bad = []
    details = []
    for problem, records in sweeps.items():
        rep = tradeoff_consistency(
            [r for r in records if r.role == "naive-solver"],
            [r for r in records if r.role == "verifier"],
            tolerance_bits=2,
        )
        for row in rep.rows:
            assert row.delta_bits == log2_width(row.n)  # b(n) = ceil(log2 n)
            if row.slack < -2:
                bad.append((problem, row))
        details.append(
            f"{problem} slack={[r.slack for r in rep.rows]}")
    ok = not bad
    report("4 tradeoff-consistency", ok, "; ".join(details))
    assert not bad, bad


def test_criterion_5_enumeration_accounting():
    # the identity and upper bound are asserted inside every enumeration run
    # (see verifier._finish); recheck both from the outcome fields here
    checked = 0
    for problem, payloads in (
        ("periodic", ["abab", "ab", "aaaaaa", "abba"]),
        ("rotation", [("ab", "ba"), ("aab", "aba"), ("aa", "ab")]),
    ):
        prob = get_problem(problem)
        verifier = prob.build_verifier()
        for payload in payloads:
            enc = encode_periodic(payload) if problem == "periodic" else encode_rotation(payload)
            fuel = prob.verifier_fuel(enc.n)
            outcome = decide_by_enumeration(verifier, enc, fuel=fuel)
            b = outcome.bits
            assert outcome.total_steps == outcome.machine_steps + outcome.candidates_tried * (b + 1)
            assert outcome.total_steps <= (1 << b) * (fuel + b + 1)
            if not outcome.accepted:
                assert outcome.candidates_tried == (1 << b)
            checked += 1
    report("5 enumeration-accounting", True,
           f"identity and upper bound hold on {checked} fresh runs "
           f"(and structurally on every run in the suite)")


def test_criterion_6_halving_law():
    t0 = time.perf_counter()
    formula = gen_random_3sat(16, round(4.26 * 16), seed=6)
    sat, count = sat3_oracle(formula)
    assert not sat and count == 0
    result = partial_cert_blowup(formula, tuple(range(0, 11)))
    for i, row in enumerate(result.rows):
        assert row.candidates == 1 << row.missing_bits
        if i:
            assert result.candidate_ratios[i - 1] == 2.0
    bad_ratios = [
        (result.rows[i + 1].missing_bits, r)
        for i, r in enumerate(result.step_ratios)
        if result.rows[i + 1].missing_bits >= 2 and not 1.95 <= r <= 2.05
    ]
    elapsed = time.perf_counter() - t0
    ok = not bad_ratios and elapsed < 120
    report("6 halving-law", ok,
           f"candidates double exactly for m=0..10, step ratios "
           f"{result.step_ratios[1]:.4f}..{result.step_ratios[-1]:.4f}, {elapsed:.1f}s")
    assert not bad_ratios, bad_ratios
    assert elapsed < 120


def test_criterion_7_entropy_slope():
    t0 = time.perf_counter()
    result = entropy_experiment((12, 14, 16, 18, 20), samples=400, seed=SEED)
    mean_ok = True
    for rec in result.records:
        analytic = result.analytic_mean(rec.n)
        if not (analytic / 3 <= rec.mean_count <= analytic * 3):
            mean_ok = False
    elapsed = time.perf_counter() - t0
    slope_ok = 0.12 <= result.slope <= 0.24
    ok = slope_ok and mean_ok and elapsed < 600
    report("7 entropy-slope", ok,
           f"slope={result.slope:.4f} in [0.12, 0.24], means within 3x of "
           f"2^n*(7/8)^m, {elapsed:.1f}s")
    assert slope_ok, result.slope
    assert mean_ok
    assert elapsed < 600


def _divisors_at_most_half(n: int) -> list[int]:
    return [d for d in range(1, n // 2 + 1) if n % d == 0]


def test_criterion_8_model_overhead():
    t0 = time.perf_counter()
    multi = build_periodic_verifier().machine
    compiled = compile_to_single_tape(multi)

    rng = random.Random("model-overhead")
    schedule = [(4, 150), (8, 120), (16, 100), (32, 60), (64, 40), (128, 20), (256, 10)]
    assert sum(c for _, c in schedule) == 500
    agreements = 0
    for n, count in schedule:
        bits = log2_width(n)
        for i in range(count):
            if i % 2 == 0:
                x = "".join(rng.choice("ab") for _ in range(n))
                cert = int_to_bits(rng.randrange(1 << bits), bits)
            else:
                ell = rng.choice(_divisors_at_most_half(n))
                x = "".join(gen_periodic(n, ell, seed=rng.randrange(10**6)).symbols)
                cert = int_to_bits(ell, bits)
            multi_fuel = get_problem("periodic").verifier_fuel(n)
            rm = run(multi, x, cert, fuel=multi_fuel)
            rs = run(compiled, x, cert, fuel=single_tape_fuel(n, bits, 4, multi_fuel))
            assert rm.status == rs.status, (x, cert, rm.status, rs.status)
            agreements += 1
    assert agreements == 500

    plan = SweepPlan("periodic", ("verifier", "single-tape-verifier"),
                     (128, 256, 512), instances=5, seed=SEED)
    rows, _ = doubling_ratios(run_sweep(plan, jobs=4))
    single = [r.ratio for r in rows if r.role == "single-tape-verifier"]
    multi_ratios = [r.ratio for r in rows if r.role == "verifier"]
    elapsed = time.perf_counter() - t0
    ok = all(r >= 3.2 for r in single) and all(r <= 2.7 for r in multi_ratios)
    report("8 model-overhead", ok,
           f"500/500 verdict agreements; single-tape ratios "
           f"{[f'{r:.2f}' for r in single]} >= 3.2 vs multi "
           f"{[f'{r:.2f}' for r in multi_ratios]} <= 2.7, {elapsed:.1f}s")
    assert all(r >= 3.2 for r in single), single
    assert all(r <= 2.7 for r in multi_ratios), multi_ratios


def test_criterion_9_deterministic_exports(tmp_path):
    plan = SweepPlan("periodic", ("verifier", "naive-solver", "enum-solver"),
                     (16, 32, 64), instances=3, seed=SEED)
    blobs = []
    for i, jobs in enumerate((1, 1, 4)):
        path = str(tmp_path / f"sweep{i}.csv")
        export_records(run_sweep(plan, jobs=jobs), path)
        with open(path, "rb") as fh:
            blobs.append(fh.read())
    ok = blobs[0] == blobs[1] == blobs[2]
    report("9 determinism", ok,
           f"three exports (sequential x2, 4 threads x1) byte-identical "
           f"({len(blobs[0])} bytes)")
    assert ok
