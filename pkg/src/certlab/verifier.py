"""Verifier/solver wrappers and the two enumeration constructions.

decide_by_enumeration tries every b(n)-bit certificate against a clocked
verifier; decide_by_extension fixes a prefix and enumerates only the missing
suffix bits.  Both charge the harness bits+1 steps per candidate (binary
counter increment plus dispatch), so the solver cost

    total-steps = sum of per-candidate steps + candidates * (b + 1)
                <= 2^b * (fuel + b + 1)

is inspectable and holds structurally on every run.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .instances import Instance, int_to_bits
from .machine import ACCEPTED, MachineSpec, run

DEFAULT_ENUM_CAP = 24


class EnumerationCapError(ValueError):
    pass


class CertificateWidthError(ValueError):
    pass


@dataclass(frozen=True)
class VerifierSpec:
    """A machine plus its certificate budget b(n) and encoding name."""

    machine: MachineSpec
    cert_width: Callable[[int], int]
    instance_encoder: str
    problem_name: str


@dataclass(frozen=True)
class SolverRole:
    """A verifier with b(n) = 0 semantics: the certificate tape is ignored."""

    machine: MachineSpec
    problem_name: str


@dataclass(frozen=True)
class EnumerationOutcome:
    verdict: str  # accepted | rejected
    witness: str | None
    candidates_tried: int
    machine_steps: int
    harness_steps: int
    total_steps: int
    bits: int  # b(n) for the run
    enumerated_bits: int  # delta for extension runs, b(n) otherwise

    @property
    def accepted(self) -> bool:
        return self.verdict == ACCEPTED


def _finish(
    verdict: str, witness: str | None, tried: int, machine_steps: int,
    bits: int, enumerated: int, fuel: int,
) -> EnumerationOutcome:
    harness = tried * (bits + 1)
    total = machine_steps + harness
    # Structural accounting law (constructive half of the enumeration bound).
    assert total == machine_steps + tried * (bits + 1)
    assert total <= (1 << bits) * (fuel + bits + 1), "enumeration exceeded its own bound"
    assert tried <= (1 << enumerated)
    return EnumerationOutcome(verdict, witness, tried, machine_steps, harness, total, bits, enumerated)


def decide_by_enumeration(
    verifier: VerifierSpec,
    instance: Instance,
    fuel: int,
    cap: int = DEFAULT_ENUM_CAP,
) -> EnumerationOutcome:
    """Try certificates in lexicographic order; first accept wins."""
    if fuel < 1:
        raise ValueError("enumeration requires an explicit fuel >= 1")
    bits = verifier.cert_width(instance.n)
    if bits > cap:
        raise EnumerationCapError(f"b(n)={bits} exceeds enumeration cap {cap}")
    return _enumerate(verifier, instance, "", bits, bits, fuel)


def decide_by_extension(
    verifier: VerifierSpec,
    instance: Instance,
    prefix: str,
    delta: int,
    fuel: int,
    cap: int = DEFAULT_ENUM_CAP,
) -> EnumerationOutcome:
    """Enumerate only the delta-bit suffix of prefix-extended certificates."""
    if fuel < 1:
        raise ValueError("enumeration requires an explicit fuel >= 1")
    bits = verifier.cert_width(instance.n)
    if len(prefix) + delta != bits:
        raise CertificateWidthError(
            f"|prefix|={len(prefix)} plus delta={delta} must equal b(n)={bits}")
    if delta > cap:
        raise EnumerationCapError(f"delta={delta} exceeds enumeration cap {cap}")
    return _enumerate(verifier, instance, prefix, delta, bits, fuel)


def _enumerate(
    verifier: VerifierSpec, instance: Instance, prefix: str,
    delta: int, bits: int, fuel: int,
) -> EnumerationOutcome:
    machine_steps = 0
    tried = 0
    for i in range(1 << delta):
        cert = prefix + int_to_bits(i, delta)
        result = run(verifier.machine, instance.symbols, cert, fuel=fuel)
        tried += 1
        machine_steps += result.steps
        if result.status == ACCEPTED:
            return _finish(ACCEPTED, cert, tried, machine_steps, bits, delta, fuel)
    return _finish("rejected", None, tried, machine_steps, bits, delta, fuel)


@dataclass(frozen=True)
class IndependenceReport:
    instances_checked: int
    trials: int
    divergences: tuple[tuple[int, str, str], ...]  # (instance index, baseline, got)

    @property
    def ok(self) -> bool:
        return not self.divergences


def check_solver_certificate_independence(
    solver: SolverRole,
    instances: Sequence[Instance],
    trials: int,
    fuel: int = 10**7,
    seed: int = 0,
) -> IndependenceReport:
    """Rerun each instance under random certificate-tape contents.

    A solver's verdict must not depend on the certificate tape; any
    divergence from the blank-certificate baseline is flagged.
    """
    if trials < 2:
        raise ValueError("trials must be >= 2")
    rng = random.Random(seed)
    divergences: list[tuple[int, str, str]] = []
    for i, inst in enumerate(instances):
        baseline = run(solver.machine, inst.symbols, "", fuel=fuel).status
        width = max(8, inst.n)
        for _ in range(trials):
            noise = "".join(rng.choice("01") for _ in range(width))
            got = run(solver.machine, inst.symbols, noise, fuel=fuel).status
            if got != baseline:
                divergences.append((i, baseline, got))
    return IndependenceReport(len(instances), trials, tuple(divergences))


def required_delta(f_steps: int, g_steps: int) -> int:
    """ceil(log2(f/g)) floored at 0, computed in exact integer arithmetic."""
    if f_steps < 1 or g_steps < 1:
        raise ValueError("step counts must be >= 1")
    d = 0
    while (g_steps << d) < f_steps:
        d += 1
    return d


def _required_delta_fraction(f_steps: Fraction, g_steps: Fraction) -> int:
    if f_steps <= 0 or g_steps <= 0:
        raise ValueError("step counts must be positive")
    d = 0
    while g_steps * (1 << d) < f_steps:
        d += 1
    return d


@dataclass(frozen=True)
class BoundRow:
    n: int
    f_steps: float
    g_steps: float
    speedup: float
    delta_bits: int
    required_bits: int
    slack: int


@dataclass(frozen=True)
class BoundReport:
    rows: tuple[BoundRow, ...]
    unmatched_n: tuple[int, ...]
    tolerance_bits: int

    @property
    def passes(self) -> bool:
        return all(r.slack >= -self.tolerance_bits for r in self.rows)


def _median_fraction(values: list[int]) -> Fraction:
    ordered = sorted(values)
    mid = len(ordered) // 2
    if len(ordered) % 2:
        return Fraction(ordered[mid])
    return Fraction(ordered[mid - 1] + ordered[mid], 2)


def build_bound_report(
    solver_records: Iterable,
    verifier_records: Iterable,
    tolerance_bits: int = 2,
) -> BoundReport:
    """Per-n trade-off rows from measured step counts.

    Records need .n, .steps and .cert_bits attributes; per-n medians are
    used.  required-bits is ceil(log2 f/g); slack is delta minus that.
    """
    by_n_f: dict[int, list[int]] = {}
    by_n_g: dict[int, list[tuple[int, int]]] = {}
    solver_bits: dict[int, list[int]] = {}
    for rec in solver_records:
        by_n_f.setdefault(rec.n, []).append(rec.steps)
        solver_bits.setdefault(rec.n, []).append(rec.cert_bits)
    for rec in verifier_records:
        by_n_g.setdefault(rec.n, []).append((rec.steps, rec.cert_bits))

    rows: list[BoundRow] = []
    unmatched: set[int] = set(by_n_f) ^ set(by_n_g)
    for n in sorted(set(by_n_f) & set(by_n_g)):
        f_med = _median_fraction(by_n_f[n])
        g_med = _median_fraction([s for s, _ in by_n_g[n]])
        delta = max(b for _, b in by_n_g[n]) - max(solver_bits.get(n, [0]))
        required = _required_delta_fraction(f_med, g_med)
        rows.append(BoundRow(
            n=n,
            f_steps=float(f_med),
            g_steps=float(g_med),
            speedup=float(f_med / g_med),
            delta_bits=delta,
            required_bits=required,
            slack=delta - required,
        ))
    return BoundReport(tuple(rows), tuple(sorted(unmatched)), tolerance_bits)
