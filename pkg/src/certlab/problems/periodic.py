"""PERIODIC: strings x = p^k with k >= 2; certificate is the period length.

The verifier copies the first l input cells to a work tape and cycles that
buffer against the input, so divisibility and the k >= 2 requirement fall
out of whether the cycle completes exactly at the end of the input.  The
naive solver grows the candidate period one cell at a time and rescans the
whole input per candidate, which keeps it Theta(n^2) on every input; the
asymptotically better failure-function method lives only in the oracle.
"""

from __future__ import annotations

import random

from ..assembler import (
    Branch,
    CompareLoop,
    CopyCell,
    CopyUntil,
    CounterDec,
    Goto,
    Move,
    ProgramIR,
    Seek,
    TapeDecl,
    assemble,
)
from ..instances import Instance, log2_width
from ..machine import TapeRole
from ..verifier import SolverRole, VerifierSpec

PROBLEM = "periodic"
ALPHABET = "ab"


def encode(x: str) -> Instance:
    if any(ch not in ALPHABET for ch in x):
        raise ValueError(f"periodic instances use symbols {ALPHABET!r}")
    return Instance(PROBLEM, x, len(x), tuple(x))


def decode(inst: Instance) -> str:
    return "".join(inst.symbols)


def cert_width(n: int) -> int:
    return log2_width(n)


def periodic_oracle(x: str) -> tuple[bool, int | None]:
    """Smallest period via the KMP failure function; host-level reference."""
    n = len(x)
    if n < 2:
        return False, None
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k > 0 and x[i] != x[k]:
            k = fail[k - 1]
        if x[i] == x[k]:
            k += 1
        fail[i] = k
    period = n - fail[n - 1]
    if period < n and n % period == 0:
        return True, period
    return False, None


def periodic_brute(x: str) -> tuple[bool, int | None]:
    """Independent check: try every period length directly."""
    n = len(x)
    for ell in range(1, n // 2 + 1):
        if n % ell == 0 and all(x[i] == x[i % ell] for i in range(n)):
            return True, ell
    return False, None


def gen_periodic(n: int, ell: int, seed: int) -> Instance:
    if ell < 1 or n % ell != 0 or ell > n // 2:
        raise ValueError(f"need ell | n and ell <= n/2, got n={n} ell={ell}")
    rng = random.Random(f"periodic|{seed}|{n}|{ell}")
    p = "".join(rng.choice(ALPHABET) for _ in range(ell))
    return encode(p * (n // ell))


def gen_worst_aperiodic(n: int) -> Instance:
    if n < 2:
        raise ValueError("worst-case aperiodic strings need n >= 2")
    return encode("a" * (n - 1) + "b")


def _rewind(tape: str) -> list:
    # Head may sit on the trailing blank; step left first, then find the
    # blank below cell 0 and step back onto cell 0.
    return [
        (None, Move(tape, "L", 1)),
        (None, Seek(tape, "L", stops=(("_", None),))),
        (None, Move(tape, "R", 1)),
    ]


def _verifier_program() -> ProgramIR:
    blocks = [
        # load l into the binary counter, parked at the low-order bit
        (None, CopyUntil("w", "ctr", "R", stops=(("_", None),))),
        (None, Move("ctr", "L", 1)),
        (None, CounterDec("ctr", on_zero="reject")),  # l = 0 rejects; else l -= 1
        # copy the first l input cells into the period buffer
        ("copyloop", CopyCell("x", "buf", "R", "R", guard=(("_", "reject"),))),
        (None, CounterDec("ctr", on_zero="copied")),
        (None, Goto("copyloop")),
        ("copied", Move("buf", "L", 1)),
        (None, Seek("buf", "L", stops=(("_", None),))),
        (None, Move("buf", "R", 1)),
        # cycle the buffer against the rest of the input
        ("cmp", CompareLoop("x", "buf", "R", "R",
                            stops_a=(("_", "endx"),), stops_b=(("_", "wrap"),),
                            on_mismatch="reject")),
        ("wrap", Move("buf", "L", 1)),
        (None, Seek("buf", "L", stops=(("_", None),))),
        (None, Move("buf", "R", 1)),
        (None, Goto("cmp")),
        # accept iff the input and the cycle end together (l | n and k >= 2)
        ("endx", Branch("buf", cases=(("_", "accept"),), otherwise="reject")),
    ]
    return ProgramIR(
        name="periodic-verifier",
        tapes=(
            TapeDecl("x", TapeRole.INPUT, ("a", "b")),
            TapeDecl("w", TapeRole.CERTIFICATE, ("0", "1")),
            TapeDecl("buf", TapeRole.WORK, ("a", "b")),
            TapeDecl("ctr", TapeRole.WORK, ("0", "1")),
        ),
        blocks=tuple(blocks),
    )


def _naive_solver_program() -> ProgramIR:
    blocks = [
        (None, CopyCell("x", "buf", "R", "R", guard=(("_", "reject"),))),  # l = 1
        # invariant at iter: x head at l, buf holds x[0:l] with head one past
        ("iter", Move("buf", "L", 1)),
        (None, Seek("buf", "L", stops=(("_", None),))),
        (None, Move("buf", "R", 1)),
        # pass 1: divisibility scan from x[l], cycling the buffer, no compare
        ("pass1", CompareLoop("x", "buf", "R", "R",
                              stops_a=(("_", "divq"),), stops_b=(("_", "wrap1"),),
                              on_mismatch=False)),
        ("wrap1", Move("buf", "L", 1)),
        (None, Seek("buf", "L", stops=(("_", None),))),
        (None, Move("buf", "R", 1)),
        (None, Goto("pass1")),
        ("divq", Branch("buf", cases=(("_", "divis"),), otherwise="realign")),
        # pass 2: full comparison scan from x[0]
        ("divis", Move("x", "L", 1)),
        (None, Seek("x", "L", stops=(("_", None),))),
        (None, Move("x", "R", 1)),
        (None, Move("buf", "L", 1)),
        (None, Seek("buf", "L", stops=(("_", None),))),
        (None, Move("buf", "R", 1)),
        ("pass2", CompareLoop("x", "buf", "R", "R",
                              stops_a=(("_", "accept"),), stops_b=(("_", "wrap2"),),
                              on_mismatch="realign")),
        ("wrap2", Move("buf", "L", 1)),
        (None, Seek("buf", "L", stops=(("_", None),))),
        (None, Move("buf", "R", 1)),
        (None, Goto("pass2")),
        # next l: rewind, advance x to the buffer end, append one cell
        ("realign", Move("x", "L", 1)),
        (None, Seek("x", "L", stops=(("_", None),))),
        (None, Move("x", "R", 1)),
        (None, Move("buf", "L", 1)),
        (None, Seek("buf", "L", stops=(("_", None),))),
        (None, Move("buf", "R", 1)),
        ("advance", CompareLoop("x", "buf", "R", "R",
                                stops_a=(("_", "reject"),), stops_b=(("_", "append"),),
                                on_mismatch=False)),
        ("append", CopyCell("x", "buf", "R", "R", guard=(("_", "reject"),))),
        (None, Goto("iter")),
    ]
    return ProgramIR(
        name="periodic-naive-solver",
        tapes=(
            TapeDecl("x", TapeRole.INPUT, ("a", "b")),
            TapeDecl("w", TapeRole.CERTIFICATE, ("0", "1")),
            TapeDecl("buf", TapeRole.WORK, ("a", "b")),
        ),
        blocks=tuple(blocks),
    )


_VERIFIER_CACHE: VerifierSpec | None = None
_SOLVER_CACHE: SolverRole | None = None


def build_periodic_verifier() -> VerifierSpec:
    global _VERIFIER_CACHE
    if _VERIFIER_CACHE is None:
        machine = assemble(_verifier_program()).machine
        _VERIFIER_CACHE = VerifierSpec(machine, cert_width, "string", PROBLEM)
    return _VERIFIER_CACHE


def build_periodic_naive_solver() -> SolverRole:
    global _SOLVER_CACHE
    if _SOLVER_CACHE is None:
        machine = assemble(_naive_solver_program()).machine
        _SOLVER_CACHE = SolverRole(machine, PROBLEM)
    return _SOLVER_CACHE
