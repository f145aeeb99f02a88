"""Line-oriented .tm machine files.

Layout:
    name: <id>
    tapes: input:ro certificate:ro work [work ...]
    alphabet: <sym> <sym> ...        # first symbol is the blank
    start: <state>
    accept: <state>
    reject: <state>
    <state> <r1>,<r2>,... -> <state'> <w1>,<w2>,... <m1>,<m2>,...

Lines whose first non-blank character is '#' are comments ('#' may still be
used as a tape symbol).  Symbols and state names must not contain whitespace
or commas.  Files violating MachineSpec invariants are rejected with line
numbers.
"""

from __future__ import annotations

from .machine import MachineSpec, Rule, TapeRole, Violation, validate_machine


class TmFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line


_ROLE_TOKENS = {
    "input:ro": TapeRole.INPUT,
    "certificate:ro": TapeRole.CERTIFICATE,
    "work": TapeRole.WORK,
}


def parse_tm(text: str, name_hint: str = "machine") -> MachineSpec:
    headers: dict[str, tuple[str, int]] = {}
    rules: list[Rule] = []
    rule_lines: list[int] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(":")
        if head in ("name", "tapes", "alphabet", "start", "accept", "reject") and _:
            if head in headers:
                raise TmFormatError(f"duplicate {head!r} header", lineno)
            headers[head] = (rest.strip(), lineno)
            continue
        parts = line.split()
        if len(parts) != 6 or parts[2] != "->":
            raise TmFormatError(
                "expected '<state> <reads> -> <state> <writes> <moves>'", lineno)
        state, reads_s, _, nxt, writes_s, moves_s = parts
        reads = tuple(reads_s.split(","))
        writes = tuple(writes_s.split(","))
        moves = tuple(moves_s.split(","))
        if "" in reads or "" in writes or "" in moves:
            raise TmFormatError("empty symbol in comma list", lineno)
        rules.append(Rule(state, reads, nxt, writes, moves))
        rule_lines.append(lineno)

    for required in ("tapes", "alphabet", "start", "accept", "reject"):
        if required not in headers:
            raise TmFormatError(f"missing {required!r} header")

    tape_tokens = headers["tapes"][0].split()
    tapes: list[TapeRole] = []
    for tok in tape_tokens:
        role = _ROLE_TOKENS.get(tok)
        if role is None:
            raise TmFormatError(f"unknown tape token {tok!r}", headers["tapes"][1])
        tapes.append(role)

    alphabet = tuple(headers["alphabet"][0].split())
    name = headers.get("name", (name_hint, 0))[0]
    start = headers["start"][0]
    accept = headers["accept"][0]
    reject = headers["reject"][0]

    states: list[str] = []
    for s in (start, accept, reject):
        if s not in states:
            states.append(s)
    for rule in rules:
        for s in (rule.state, rule.next_state):
            if s not in states:
                states.append(s)

    spec = MachineSpec(
        name=name,
        tapes=tuple(tapes),
        alphabet=alphabet,
        states=tuple(states),
        start=start,
        accept=accept,
        reject=reject,
        rules=tuple(rules),
    )
    violations = validate_machine(spec)
    if violations:
        located = [_locate(v, rules, rule_lines) for v in violations]
        raise TmFormatError("; ".join(str(v) for v in located))
    return spec


def _locate(v: Violation, rules: list[Rule], rule_lines: list[int]) -> Violation:
    if "[" not in v.message:
        return v
    key = v.message.split("[", 1)[1].split("]", 1)[0]
    pairs = zip(rules, rule_lines)
    if v.kind == "Nondeterministic":  # point at the duplicating line
        pairs = reversed(list(pairs))
    for rule, line in pairs:
        if f"{rule.state} {','.join(rule.reads)}" == key:
            return Violation(v.kind, v.message, line)
    return v


def load_tm(path: str) -> MachineSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_tm(fh.read(), name_hint=path)


_ROLE_OUT = {
    TapeRole.INPUT: "input:ro",
    TapeRole.CERTIFICATE: "certificate:ro",
    TapeRole.WORK: "work",
}


def format_tm(spec: MachineSpec) -> str:
    lines = [
        f"name: {spec.name}",
        "tapes: " + " ".join(_ROLE_OUT[r] for r in spec.tapes),
        "alphabet: " + " ".join(spec.alphabet),
        f"start: {spec.start}",
        f"accept: {spec.accept}",
        f"reject: {spec.reject}",
    ]
    for r in spec.rules:
        lines.append(
            f"{r.state} {','.join(r.reads)} -> {r.next_state} "
            f"{','.join(r.writes)} {','.join(r.moves)}"
        )
    return "\n".join(lines) + "\n"


def save_tm(spec: MachineSpec, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_tm(spec))
