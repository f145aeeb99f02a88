"""Multi-tape deterministic Turing machines with exact step accounting.

The machine model: one read-only input tape, one read-only certificate tape,
zero or more read-write work tapes, all two-way infinite and blank-filled.
Each transition reads one symbol per tape and rewrites/moves every tape; a
step costs exactly 1 regardless of tape count.  Acceptance is by halting in
the accept state; a missing transition (stuck) counts as rejection for
language semantics but is reported distinctly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, NamedTuple, Sequence

MOVES = ("L", "S", "R")


class TapeRole(str, Enum):
    INPUT = "input-readonly"
    CERTIFICATE = "certificate-readonly"
    WORK = "work"


class Rule(NamedTuple):
    state: str
    reads: tuple[str, ...]
    next_state: str
    writes: tuple[str, ...]
    moves: tuple[str, ...]


@dataclass(frozen=True, eq=False)
class MachineSpec:
    """A validated machine description.  Immutable; safe to share."""

    name: str
    tapes: tuple[TapeRole, ...]
    alphabet: tuple[str, ...]  # first symbol is the blank
    states: tuple[str, ...]
    start: str
    accept: str
    reject: str
    rules: tuple[Rule, ...]

    @property
    def blank(self) -> str:
        return self.alphabet[0]

    @property
    def input_tape(self) -> int:
        return self.tapes.index(TapeRole.INPUT)

    @property
    def certificate_tape(self) -> int:
        return self.tapes.index(TapeRole.CERTIFICATE)

    def rule_map(self) -> dict[tuple[str, tuple[str, ...]], Rule]:
        # Later duplicates win here; validate_machine reports them.
        return {(r.state, r.reads): r for r in self.rules}


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    line: int | None = None

    def __str__(self) -> str:
        where = f" (line {self.line})" if self.line is not None else ""
        return f"{self.kind}: {self.message}{where}"


@dataclass(frozen=True)
class Configuration:
    state: str
    tapes: tuple[dict[int, str], ...]  # sparse non-blank cells
    heads: tuple[int, ...]
    steps_elapsed: int


@dataclass(frozen=True)
class RunResult:
    status: str  # accepted | rejected | fuel-exhausted | stuck
    steps: int
    max_excursion: tuple[tuple[int, int], ...]  # per-tape (leftmost, rightmost)
    final_state: str

    @property
    def accepted(self) -> bool:
        return self.status == ACCEPTED


ACCEPTED = "accepted"
REJECTED = "rejected"
FUEL_EXHAUSTED = "fuel-exhausted"
STUCK = "stuck"


class EncodingError(ValueError):
    """Input or certificate symbol outside the machine alphabet."""


class InvalidMachineError(ValueError):
    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = violations


def validate_machine(spec: MachineSpec) -> list[Violation]:
    """Return all model-constraint violations (empty list iff well formed)."""
    out: list[Violation] = []
    t = len(spec.tapes)

    n_in = sum(1 for r in spec.tapes if r is TapeRole.INPUT)
    n_cert = sum(1 for r in spec.tapes if r is TapeRole.CERTIFICATE)
    if n_in != 1:
        out.append(Violation("TapeRoles", f"expected exactly one input tape, found {n_in}"))
    if n_cert != 1:
        out.append(Violation("TapeRoles", f"expected exactly one certificate tape, found {n_cert}"))

    if not spec.alphabet:
        out.append(Violation("Alphabet", "alphabet is empty"))
    if len(set(spec.alphabet)) != len(spec.alphabet):
        out.append(Violation("Alphabet", "alphabet contains duplicate symbols"))

    if len(set(spec.states)) != len(spec.states):
        out.append(Violation("States", "state list contains duplicates"))
    state_set = set(spec.states)
    for role, name in (("start", spec.start), ("accept", spec.accept), ("reject", spec.reject)):
        if name not in state_set:
            out.append(Violation("States", f"{role} state {name!r} not in state list"))
    if spec.accept == spec.reject:
        out.append(Violation("States", "accept and reject states coincide"))

    alpha = set(spec.alphabet)
    readonly = {i for i, r in enumerate(spec.tapes) if r is not TapeRole.WORK}
    seen: dict[tuple[str, tuple[str, ...]], Rule] = {}
    for rule in spec.rules:
        key = f"{rule.state} {','.join(rule.reads)}"
        if len(rule.reads) != t or len(rule.writes) != t or len(rule.moves) != t:
            out.append(Violation("Arity", f"rule [{key}] does not have {t} reads/writes/moves"))
            continue
        if rule.state not in state_set:
            out.append(Violation("UnknownState", f"rule [{key}] uses unknown state {rule.state!r}"))
        if rule.next_state not in state_set:
            out.append(Violation("UnknownState", f"rule [{key}] targets unknown state {rule.next_state!r}"))
        if rule.state in (spec.accept, spec.reject):
            out.append(Violation("HaltingOutgoing", f"halting state {rule.state!r} has outgoing rule [{key}]"))
        for sym in rule.reads + rule.writes:
            if sym not in alpha:
                out.append(Violation("BadSymbol", f"rule [{key}] uses symbol {sym!r} not in alphabet"))
        for mv in rule.moves:
            if mv not in MOVES:
                out.append(Violation("BadMove", f"rule [{key}] uses move {mv!r}"))
        for k in readonly:
            if k < len(rule.reads) and k < len(rule.writes) and rule.writes[k] != rule.reads[k]:
                out.append(Violation(
                    "ReadOnlyWrite",
                    f"rule [{key}] writes {rule.writes[k]!r} over {rule.reads[k]!r} on read-only tape {k}"))
        if (rule.state, rule.reads) in seen:
            out.append(Violation("Nondeterministic", f"duplicate rule for [{key}]"))
        else:
            seen[(rule.state, rule.reads)] = rule
    return out


def _as_symbols(text: str | Sequence[str]) -> tuple[str, ...]:
    if isinstance(text, str):
        return tuple(text)
    return tuple(text)


def encode_tapes(
    spec: MachineSpec, input_syms: str | Sequence[str], certificate: str | Sequence[str]
) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Check symbols against the alphabet; raises EncodingError before any step."""
    inp = _as_symbols(input_syms)
    cert = _as_symbols(certificate)
    alpha = set(spec.alphabet)
    for kind, syms in (("input", inp), ("certificate", cert)):
        for s in syms:
            if s not in alpha:
                raise EncodingError(f"{kind} symbol {s!r} not in machine alphabet")
    return inp, cert


def _initial_tapes(spec: MachineSpec, inp: tuple[str, ...], cert: tuple[str, ...]) -> list[dict[int, str]]:
    tapes: list[dict[int, str]] = [{} for _ in spec.tapes]
    for i, s in enumerate(inp):
        if s != spec.blank:
            tapes[spec.input_tape][i] = s
    for i, s in enumerate(cert):
        if s != spec.blank:
            tapes[spec.certificate_tape][i] = s
    return tapes


def run(
    spec: MachineSpec,
    input_syms: str | Sequence[str],
    certificate: str | Sequence[str] = "",
    fuel: int = 10**6,
) -> RunResult:
    """Clocked execution: at most `fuel` transitions, exact step count.

    Fuel exhaustion never reports acceptance.  A machine whose start state is
    already halting reports its verdict at 0 steps.
    """
    if fuel < 0:
        raise ValueError("fuel must be >= 0")
    inp, cert = encode_tapes(spec, input_syms, certificate)
    from . import _engine

    return _engine.run_fast(spec, inp, cert, fuel)


def run_reference(
    spec: MachineSpec,
    input_syms: str | Sequence[str],
    certificate: str | Sequence[str] = "",
    fuel: int = 10**6,
) -> RunResult:
    """Pure-Python twin of run(); used by trace() and differential tests."""
    if fuel < 0:
        raise ValueError("fuel must be >= 0")
    inp, cert = encode_tapes(spec, input_syms, certificate)
    result = None
    for result in _step_iter(spec, inp, cert, fuel, want_configs=False):
        pass
    assert isinstance(result, RunResult)
    return result


def trace(
    spec: MachineSpec,
    input_syms: str | Sequence[str],
    certificate: str | Sequence[str] = "",
    fuel: int = 10**6,
    limit: int = 64,
) -> list[Configuration]:
    """First `limit` configurations of the run (start configuration included)."""
    if fuel < 0:
        raise ValueError("fuel must be >= 0")
    inp, cert = encode_tapes(spec, input_syms, certificate)
    configs: list[Configuration] = []
    for item in _step_iter(spec, inp, cert, fuel, want_configs=True):
        if isinstance(item, Configuration):
            configs.append(item)
            if len(configs) >= limit:
                break
    return configs


def _step_iter(
    spec: MachineSpec,
    inp: tuple[str, ...],
    cert: tuple[str, ...],
    fuel: int,
    want_configs: bool,
) -> Iterator[Configuration | RunResult]:
    t = len(spec.tapes)
    blank = spec.blank
    tapes = _initial_tapes(spec, inp, cert)
    heads = [0] * t
    lo = [0] * t
    hi = [0] * t
    state = spec.start
    steps = 0
    rules = spec.rule_map()

    def snapshot() -> Configuration:
        return Configuration(state, tuple(dict(tp) for tp in tapes), tuple(heads), steps)

    while True:
        if want_configs:
            yield snapshot()
        if state == spec.accept:
            yield RunResult(ACCEPTED, steps, tuple(zip(lo, hi)), state)
            return
        if state == spec.reject:
            yield RunResult(REJECTED, steps, tuple(zip(lo, hi)), state)
            return
        if steps >= fuel:
            yield RunResult(FUEL_EXHAUSTED, steps, tuple(zip(lo, hi)), state)
            return
        reads = tuple(tapes[k].get(heads[k], blank) for k in range(t))
        rule = rules.get((state, reads))
        if rule is None:
            yield RunResult(STUCK, steps, tuple(zip(lo, hi)), state)
            return
        for k in range(t):
            w = rule.writes[k]
            if w == blank:
                tapes[k].pop(heads[k], None)
            else:
                tapes[k][heads[k]] = w
            mv = rule.moves[k]
            if mv == "L":
                heads[k] -= 1
                lo[k] = min(lo[k], heads[k])
            elif mv == "R":
                heads[k] += 1
                hi[k] = max(hi[k], heads[k])
        state = rule.next_state
        steps += 1
