"""STRING-ROTATION: pairs (A, B) with B = A[k:] + A[:k] for some k in [0, |A|).

The input tape holds A#B.  The verifier copies A to a work tape, checks the
lengths in one backward/forward pass, advances the copy's head k cells by
binary-counter decrement, and compares with a single wraparound rewind.  The
naive solver keeps the tried offset in unary and re-walks it every round, so
each candidate costs Theta(n) even when the comparison fails early.

The empty pair is not a member: k ranges over [0, |A|), which is empty for
|A| = 0.  The linear-time substring-of-AA method lives only in the oracle.
"""

from __future__ import annotations

import random

from ..assembler import (
    Branch,
    CompareLoop,
    CopyUntil,
    CounterDec,
    Goto,
    Move,
    ProgramIR,
    Seek,
    TapeDecl,
    Write,
    assemble,
)
from ..instances import Instance, log2_width
from ..machine import TapeRole
from ..verifier import SolverRole, VerifierSpec

PROBLEM = "rotation"
ALPHABET = "ab"
SEPARATOR = "#"


def encode(pair: tuple[str, str]) -> Instance:
    a, b = pair
    for s in (a, b):
        if any(ch not in ALPHABET for ch in s):
            raise ValueError(f"rotation instances use symbols {ALPHABET!r}")
    return Instance(PROBLEM, (a, b), len(a), tuple(a + SEPARATOR + b))


def decode(inst: Instance) -> tuple[str, str]:
    text = "".join(inst.symbols)
    a, _, b = text.partition(SEPARATOR)
    return a, b


def cert_width(n: int) -> int:
    return log2_width(n)


def rotation_oracle(a: str, b: str) -> tuple[bool, int | None]:
    """Substring search of B in A+A; (", ") is a non-member by definition."""
    if len(a) != len(b) or len(a) == 0:
        return False, None
    k = (a + a).find(b)
    if 0 <= k < len(a):
        return True, k
    return False, None


def rotation_brute(a: str, b: str) -> tuple[bool, int | None]:
    if len(a) != len(b):
        return False, None
    for k in range(len(a)):
        if a[k:] + a[:k] == b:
            return True, k
    return False, None


def gen_rotation(n: int, k: int, seed: int) -> Instance:
    if n < 1 or not 0 <= k < n:
        raise ValueError(f"need n >= 1 and 0 <= k < n, got n={n} k={k}")
    rng = random.Random(f"rotation|{seed}|{n}|{k}")
    a = "".join(rng.choice(ALPHABET) for _ in range(n))
    return encode((a, a[k:] + a[:k]))


def gen_worst_nonrotation(n: int) -> Instance:
    if n < 2:
        raise ValueError("worst-case non-rotations need n >= 2")
    return encode(("a" * n, "a" * (n - 1) + "b"))


def _prologue() -> list:
    # copy A, step onto B, check |A| = |B| with one backward co-walk,
    # then rewind the input head to the start of B and the copy to cell 0
    return [
        (None, CopyUntil("x", "buf", "R", stops=((SEPARATOR, None), ("_", "reject")))),
        (None, Move("x", "R", 1)),
        (None, Move("buf", "L", 1)),
        ("lencheck", CompareLoop("x", "buf", "R", "L",
                                 stops_a=(("_", "lenend"),), stops_b=(("_", "reject"),),
                                 on_mismatch=False)),
        ("lenend", Branch("buf", cases=(("_", None),), otherwise="reject")),
        (None, Seek("x", "L", stops=((SEPARATOR, None),))),
        (None, Move("x", "R", 1)),
        (None, Seek("buf", "L", stops=(("_", None),))),
        (None, Move("buf", "R", 1)),
    ]


def _verifier_program() -> ProgramIR:
    blocks = _prologue() + [
        # load k, then advance the copy's head k cells
        (None, CopyUntil("w", "ctr", "R", stops=(("_", None),))),
        (None, Move("ctr", "L", 1)),
        ("adv", CounterDec("ctr", on_zero="cmpstart")),
        (None, Move("buf", "R", 1)),
        (None, Branch("buf", cases=(("_", "reject"),))),
        (None, Goto("adv")),
        # k >= n (and the empty pair) land the head on a blank
        ("cmpstart", Branch("buf", cases=(("_", "reject"),))),
        ("cmpk", CompareLoop("x", "buf", "R", "R",
                             stops_a=(("_", "accept"),), stops_b=(("_", "wrapk"),),
                             on_mismatch="reject")),
        ("wrapk", Move("buf", "L", 1)),
        (None, Seek("buf", "L", stops=(("_", None),))),
        (None, Move("buf", "R", 1)),
        (None, Goto("cmpk")),
    ]
    return ProgramIR(
        name="rotation-verifier",
        tapes=(
            TapeDecl("x", TapeRole.INPUT, ("a", "b", SEPARATOR)),
            TapeDecl("w", TapeRole.CERTIFICATE, ("0", "1")),
            TapeDecl("buf", TapeRole.WORK, ("a", "b")),
            TapeDecl("ctr", TapeRole.WORK, ("0", "1")),
        ),
        blocks=tuple(blocks),
    )


def _naive_solver_program() -> ProgramIR:
    blocks = _prologue() + [
        # entry per round: x at B[0], buf at 0, off at 0 holding k unary marks
        ("kloop", CompareLoop("off", "buf", "R", "R",
                              stops_a=(("_", "cmpstart"),), stops_b=(("_", "reject"),),
                              on_mismatch=False)),
        ("cmpstart", Branch("buf", cases=(("_", "reject"),))),
        ("cmpk", CompareLoop("x", "buf", "R", "R",
                             stops_a=(("_", "accept"),), stops_b=(("_", "wrapk"),),
                             on_mismatch="nextk")),
        ("wrapk", Move("buf", "L", 1)),
        (None, Seek("buf", "L", stops=(("_", None),))),
        (None, Move("buf", "R", 1)),
        (None, Goto("cmpk")),
        # realign and extend the offset by one mark
        ("nextk", Seek("x", "L", stops=((SEPARATOR, None),))),
        (None, Move("x", "R", 1)),
        (None, Move("buf", "L", 1)),
        (None, Seek("buf", "L", stops=(("_", None),))),
        (None, Move("buf", "R", 1)),
        (None, Write("off", "1", "R")),
        (None, Move("off", "L", 1)),
        (None, Seek("off", "L", stops=(("_", None),))),
        (None, Move("off", "R", 1)),
        (None, Goto("kloop")),
    ]
    return ProgramIR(
        name="rotation-naive-solver",
        tapes=(
            TapeDecl("x", TapeRole.INPUT, ("a", "b", SEPARATOR)),
            TapeDecl("w", TapeRole.CERTIFICATE, ("0", "1")),
            TapeDecl("buf", TapeRole.WORK, ("a", "b")),
            TapeDecl("off", TapeRole.WORK, ("1",)),
        ),
        blocks=tuple(blocks),
    )


_VERIFIER_CACHE: VerifierSpec | None = None
_SOLVER_CACHE: SolverRole | None = None


def build_rotation_verifier() -> VerifierSpec:
    global _VERIFIER_CACHE
    if _VERIFIER_CACHE is None:
        machine = assemble(_verifier_program()).machine
        _VERIFIER_CACHE = VerifierSpec(machine, cert_width, "pair", PROBLEM)
    return _VERIFIER_CACHE


def build_rotation_naive_solver() -> SolverRole:
    global _SOLVER_CACHE
    if _SOLVER_CACHE is None:
        machine = assemble(_naive_solver_program()).machine
        _SOLVER_CACHE = SolverRole(machine, PROBLEM)
    return _SOLVER_CACHE
