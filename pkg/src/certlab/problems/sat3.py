"""3-SAT with assignment certificates (one bit per variable, b(n) = n).

Input-tape encoding per literal: a sign symbol (+ or -) followed by the
variable index in fixed-width big-endian binary; clauses are separated by
'#'.  The verifier looks each literal up by walking the certificate tape
(Theta(n) per literal) and scans every clause before announcing a verdict,
so its step count on a fixed formula is identical for all n-bit
certificates; only the verdict depends on the assignment.

Counting oracles: count_satisfying evaluates all 2^n assignments bit-
parallel in 64-assignment words; count_satisfying_slow is the independent
per-assignment cross-check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from ..assembler import (
    Branch,
    CopyUntil,
    CounterDec,
    Goto,
    Halt,
    Move,
    ProgramIR,
    Seek,
    TapeDecl,
    assemble,
)
from ..instances import Instance
from ..machine import TapeRole
from ..verifier import VerifierSpec

PROBLEM = "sat3"
ORACLE_VAR_CAP = 26


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise ValueError("formulas need at least one variable")
        for clause in self.clauses:
            if len(clause) != 3:
                raise ValueError(f"clause {clause} is not a 3-clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range in {clause}")
            if len({abs(lit) for lit in clause}) != 3:
                raise ValueError(f"clause {clause} repeats a variable")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def ratio(self) -> float:
        return self.num_clauses / self.num_vars

    def satisfied_by(self, bits: str) -> bool:
        assign = [b == "1" for b in bits]
        for clause in self.clauses:
            if not any((lit > 0) == assign[abs(lit) - 1] for lit in clause):
                return False
        return True


def index_width(n: int) -> int:
    """Bits per variable index; indices run 1..n so index 0 is never valid."""
    return max(1, n.bit_length())


def encode(formula: CnfFormula) -> Instance:
    w = index_width(formula.num_vars)
    parts: list[str] = []
    for ci, clause in enumerate(formula.clauses):
        if ci:
            parts.append("#")
        for lit in clause:
            parts.append("+" if lit > 0 else "-")
            parts.append(format(abs(lit), f"0{w}b"))
    return Instance(PROBLEM, formula, formula.num_vars, tuple("".join(parts)))


def decode(inst: Instance) -> CnfFormula:
    text = "".join(inst.symbols)
    n = inst.n
    w = index_width(n)
    clauses: list[tuple[int, int, int]] = []
    if text:
        for chunk in text.split("#"):
            lits: list[int] = []
            pos = 0
            while pos < len(chunk):
                sign = 1 if chunk[pos] == "+" else -1
                idx = int(chunk[pos + 1: pos + 1 + w], 2)
                lits.append(sign * idx)
                pos += 1 + w
            clauses.append(tuple(lits))  # type: ignore[arg-type]
    return CnfFormula(n, tuple(clauses))




def gen_random_3sat(n: int, m: int, seed: int) -> CnfFormula:
    """Each clause: 3 distinct variables uniformly, signs uniform.

    Whole-clause duplicates are allowed, matching the expectation
    E[N] = 2^n * (7/8)^m for the satisfying-assignment count.
    """
    if n < 3:
        raise ValueError("need n >= 3 for distinct-variable 3-clauses")
    if m < 1:
        raise ValueError("need m >= 1")
    rng = random.Random(f"sat3|{seed}|{n}|{m}")
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), 3)
        clauses.append(tuple(v if rng.getrandbits(1) else -v for v in vs))
    return CnfFormula(n, tuple(clauses))


_WORD_PATTERNS = tuple(
    sum(((j >> p) & 1) << j for j in range(64)) for p in range(6)
)


def count_satisfying(formula: CnfFormula) -> int:
    """Exact satisfying-assignment count, bit-parallel over uint64 words."""
    n = formula.num_vars
    if n > ORACLE_VAR_CAP:
        raise ValueError(f"counting oracle capped at n <= {ORACLE_VAR_CAP}")
    words = 1 << max(0, n - 6)
    tail_bits = min(n, 6)
    word_idx = np.arange(words, dtype=np.uint64)
    falsified = np.zeros(words, dtype=np.uint64)

    def true_mask(var: int) -> np.ndarray | int:
        p = var - 1
        if p < 6:
            return np.uint64(_WORD_PATTERNS[p])
        bit = (word_idx >> np.uint64(p - 6)) & np.uint64(1)
        return bit * np.uint64(0xFFFFFFFFFFFFFFFF)

    for clause in formula.clauses:
        mask = np.uint64(0xFFFFFFFFFFFFFFFF)
        for lit in clause:
            tm = true_mask(abs(lit))
            false_lit = ~tm if lit > 0 else tm
            mask = mask & false_lit
        falsified |= mask
    if tail_bits < 6:
        keep = np.uint64((1 << (1 << tail_bits)) - 1)
        falsified &= keep
    return (1 << n) - int(np.bitwise_count(falsified).sum())


def count_satisfying_slow(formula: CnfFormula) -> int:
    """Independent brute force, one assignment at a time (cross-check)."""
    n = formula.num_vars
    if n > 20:
        raise ValueError("slow oracle capped at n <= 20")
    count = 0
    for a in range(1 << n):
        ok = True
        for clause in formula.clauses:
            sat = False
            for lit in clause:
                bit = (a >> (abs(lit) - 1)) & 1
                if (lit > 0) == bool(bit):
                    sat = True
                    break
            if not sat:
                ok = False
                break
        if ok:
            count += 1
    return count


def sat3_oracle(formula: CnfFormula) -> tuple[bool, int]:
    """(satisfiable, exact count of satisfying assignments)."""
    count = count_satisfying(formula)
    return count > 0, count


def find_satisfying(formula: CnfFormula) -> str | None:
    """Lexicographically smallest satisfying assignment as a bit string.

    Assignment bit i is variable i+1; within the counting words the low
    variables are the fastest-cycling bits, so word/bit order is already
    lexicographic in the reversed-bit reading.  We search directly instead.
    """
    n = formula.num_vars
    for a in range(1 << n):
        bits = format(a, f"0{n}b")
        if formula.satisfied_by(bits):
            return bits
    return None


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = None
    num_clauses = None
    lits: list[int] = []
    clauses: list[tuple[int, int, int]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {line!r}")
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            continue
        for tok in line.split():
            v = int(tok)
            if v == 0:
                if len(lits) != 3:
                    raise ValueError(f"clause {lits} is not a 3-clause")
                clauses.append((lits[0], lits[1], lits[2]))
                lits = []
            else:
                lits.append(v)
    if lits:
        raise ValueError("trailing literals without terminating 0")
    if num_vars is None:
        raise ValueError("missing 'p cnf' line")
    if num_clauses is not None and num_clauses != len(clauses):
        raise ValueError(f"header promises {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def format_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def _verifier_program() -> ProgramIR:
    """Clause scanner with (fail, clause-satisfied) flags folded into labels."""
    blocks: list = [
        (None, Branch("x", cases=(("_", "accept"),))),  # empty formula is vacuous
    ]
    for f in (0, 1):
        for s in (0, 1):
            ctx = f"f{f}s{s}"
            end_target = "accept" if (f == 0 and s == 1) else "reject"
            closing_flag = f if s == 1 else 1
            blocks += [
                (f"clause_{ctx}", Branch("x", cases=(
                    ("+", f"lit_{ctx}_p"),
                    ("-", f"lit_{ctx}_m"),
                    ("#", f"endcl_{ctx}"),
                    ("_", end_target),
                ), otherwise="reject")),
                (f"endcl_{ctx}", Move("x", "R", 1)),
                (None, Goto(f"clause_f{closing_flag}s0")),
            ]
            for sign, sat_bit in (("p", "1"), ("m", "0")):
                lit = f"lit_{ctx}_{sign}"
                blocks += [
                    (lit, Move("x", "R", 1)),
                    (None, CopyUntil("x", "idx", "R", stops=(
                        ("+", None), ("-", None), ("#", None), ("_", None)))),
                    (None, Move("idx", "L", 1)),
                    (None, CounterDec("idx", on_zero="reject")),  # index 0 is malformed
                    (f"walk_{ctx}_{sign}", CounterDec("idx", on_zero=f"read_{ctx}_{sign}")),
                    (None, Move("w", "R", 1)),
                    (None, Goto(f"walk_{ctx}_{sign}")),
                    (f"read_{ctx}_{sign}", Branch("w", cases=(
                        (sat_bit, f"rewind_f{f}s1"),
                        ("0" if sat_bit == "1" else "1", f"rewind_{ctx}"),
                        ("_", "reject"),
                    ))),
                ]
    for f in (0, 1):
        for s in (0, 1):
            ctx = f"f{f}s{s}"
            blocks += [
                (f"rewind_{ctx}", Move("w", "L", 1)),
                (None, Seek("w", "L", stops=(("_", None),))),
                (None, Move("w", "R", 1)),
                (None, Move("idx", "L", 1)),
                (None, Seek("idx", "L", stops=(("_", None),))),
                (None, Move("idx", "R", 1)),
                (None, Goto(f"clause_{ctx}")),
            ]
    blocks.append((None, Halt("reject")))  # unreachable terminator
    return ProgramIR(
        name="sat3-verifier",
        tapes=(
            TapeDecl("x", TapeRole.INPUT, ("0", "1", "+", "-", "#")),
            TapeDecl("w", TapeRole.CERTIFICATE, ("0", "1")),
            TapeDecl("idx", TapeRole.WORK, ("0", "1")),
        ),
        blocks=tuple(blocks),
    )


_VERIFIER_CACHE: VerifierSpec | None = None


def build_sat3_verifier() -> VerifierSpec:
    global _VERIFIER_CACHE
    if _VERIFIER_CACHE is None:
        machine = assemble(_verifier_program()).machine
        _VERIFIER_CACHE = VerifierSpec(machine, lambda n: n, "cnf", PROBLEM)
    return _VERIFIER_CACHE
