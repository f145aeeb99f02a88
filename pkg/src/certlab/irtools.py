"""IR text files (.tmir) and a direct host-level interpreter for ProgramIR.

The interpreter executes primitives at their semantic level (no state
gadgets); assembled machines must agree with it verdict for verdict, which
is what the assembler soundness tests check.
"""

from __future__ import annotations

from .assembler import (
    BLANK,
    AssemblyError,
    Block,
    Branch,
    CompareLoop,
    CopyCell,
    CopyUntil,
    CounterDec,
    CounterInc,
    Goto,
    Halt,
    ModularScan,
    Move,
    Primitive,
    ProgramIR,
    Seek,
    TapeDecl,
    Target,
    Write,
)
from .machine import TapeRole

_ROLES = {"input": TapeRole.INPUT, "certificate": TapeRole.CERTIFICATE, "work": TapeRole.WORK}
_ROLE_NAMES = {v: k for k, v in _ROLES.items()}


class TmirFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line


def _parse_target(tok: str) -> Target:
    return None if tok == "." else tok


def _fmt_target(t: Target) -> str:
    return "." if t is None else t


def _parse_pairs(tok: str) -> tuple[tuple[str, Target], ...]:
    out = []
    for item in tok.split(","):
        sym, _, tgt = item.partition("=")
        if not _:
            raise ValueError(f"expected sym=target, got {item!r}")
        out.append((sym, _parse_target(tgt)))
    return tuple(out)


def _fmt_pairs(pairs: tuple[tuple[str, Target], ...]) -> str:
    return ",".join(f"{s}={_fmt_target(t)}" for s, t in pairs)


def parse_tmir(text: str, name_hint: str = "program") -> ProgramIR:
    name = name_hint
    tapes: list[TapeDecl] = []
    tape_syms: dict[str, tuple[str, ...]] = {}
    blocks: list[Block] = []
    pending_label: str | None = None
    in_body = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if not in_body:
                if parts[0] == "program":
                    name = parts[1]
                elif parts[0] == "tape":
                    tapes.append(TapeDecl(parts[1], _ROLES[parts[2]], ()))
                elif parts[0] == "symbols":
                    tape_syms[parts[1]] = tuple(parts[2:])
                elif parts[0] == "begin":
                    in_body = True
                else:
                    raise TmirFormatError(f"unexpected header {parts[0]!r}", lineno)
                continue
            if len(parts) == 1 and parts[0].endswith(":"):
                if pending_label is not None:
                    raise TmirFormatError("two labels without a primitive", lineno)
                pending_label = parts[0][:-1]
                continue
            prim = _parse_primitive(parts)
            blocks.append((pending_label, prim))
            pending_label = None
        except TmirFormatError:
            raise
        except Exception as exc:
            raise TmirFormatError(str(exc), lineno) from exc

    if pending_label is not None:
        raise TmirFormatError(f"trailing label {pending_label!r} without a primitive")
    decls = tuple(
        TapeDecl(d.name, d.role, tape_syms.get(d.name, ())) for d in tapes
    )
    return ProgramIR(name=name, tapes=decls, blocks=tuple(blocks))


def _parse_primitive(parts: list[str]) -> Primitive:
    kw = parts[0]
    if kw == "halt":
        return Halt(parts[1])
    if kw == "goto":
        return Goto(parts[1])
    if kw == "move":
        return Move(parts[1], parts[2], int(parts[3]))
    if kw == "seek":
        return Seek(parts[1], parts[2], _parse_pairs(parts[3]))
    if kw == "branch":
        otherwise: Target = None
        pairs = _parse_pairs(parts[2])
        for extra in parts[3:]:
            key, _, val = extra.partition("=")
            if key != "else" or not _:
                raise ValueError(f"unexpected token {extra!r}")
            otherwise = _parse_target(val)
        return Branch(parts[1], pairs, otherwise)
    if kw == "write":
        move = parts[3] if len(parts) > 3 else "S"
        return Write(parts[1], parts[2], move)
    if kw == "copy_cell":
        guard = _parse_pairs(parts[5]) if len(parts) > 5 else ()
        return CopyCell(parts[1], parts[2], parts[3], parts[4], guard)
    if kw == "copy_until":
        return CopyUntil(parts[1], parts[2], parts[3], _parse_pairs(parts[4]))
    if kw == "compare_loop":
        stops_a = stops_b = ()
        on_mismatch: Target | bool = False
        for extra in parts[5:]:
            key, _, val = extra.partition("=")
            if key.startswith("a:"):
                stops_a = _parse_pairs(extra[2:])
            elif key.startswith("b:"):
                stops_b = _parse_pairs(extra[2:])
            elif key == "mismatch" and _:
                on_mismatch = _parse_target(val)
            else:
                raise ValueError(f"unexpected token {extra!r}")
        return CompareLoop(parts[1], parts[2], parts[3], parts[4], stops_a, stops_b, on_mismatch)
    if kw == "counter_dec":
        key, _, val = parts[2].partition("=")
        if key != "zero":
            raise ValueError("counter_dec needs zero=target")
        return CounterDec(parts[1], _parse_target(val))
    if kw == "counter_inc":
        key, _, val = parts[2].partition("=")
        if key != "overflow":
            raise ValueError("counter_inc needs overflow=target")
        return CounterInc(parts[1], _parse_target(val))
    if kw == "modular_scan":
        kv = dict(item.partition("=")[::2] for item in parts[3:])
        return ModularScan(parts[1], parts[2],
                           _parse_target(kv["zero"]), _parse_target(kv["nonzero"]))
    raise ValueError(f"unknown primitive {kw!r}")


def format_tmir(p: ProgramIR) -> str:
    lines = [f"program {p.name}"]
    for d in p.tapes:
        lines.append(f"tape {d.name} {_ROLE_NAMES[d.role]}")
    for d in p.tapes:
        if d.symbols:
            lines.append(f"symbols {d.name} " + " ".join(d.symbols))
    lines.append("begin")
    for label, prim in p.blocks:
        if label:
            lines.append(f"{label}:")
        lines.append("  " + _fmt_primitive(prim))
    return "\n".join(lines) + "\n"


def _fmt_primitive(prim: Primitive) -> str:
    if isinstance(prim, Halt):
        return f"halt {prim.verdict}"
    if isinstance(prim, Goto):
        return f"goto {prim.label}"
    if isinstance(prim, Move):
        return f"move {prim.tape} {prim.direction} {prim.count}"
    if isinstance(prim, Seek):
        return f"seek {prim.tape} {prim.direction} {_fmt_pairs(prim.stops)}"
    if isinstance(prim, Branch):
        out = f"branch {prim.tape} {_fmt_pairs(prim.cases)}"
        if prim.otherwise is not None:
            out += f" else={prim.otherwise}"
        return out
    if isinstance(prim, Write):
        out = f"write {prim.tape} {prim.symbol}"
        if prim.move != "S":
            out += f" {prim.move}"
        return out
    if isinstance(prim, CopyCell):
        out = f"copy_cell {prim.src} {prim.dst} {prim.src_dir} {prim.dst_dir}"
        if prim.guard:
            out += f" {_fmt_pairs(prim.guard)}"
        return out
    if isinstance(prim, CopyUntil):
        return f"copy_until {prim.src} {prim.dst} {prim.direction} {_fmt_pairs(prim.stops)}"
    if isinstance(prim, CompareLoop):
        out = f"compare_loop {prim.tape_a} {prim.tape_b} {prim.dir_a} {prim.dir_b}"
        if prim.stops_a:
            out += f" a:{_fmt_pairs(prim.stops_a)}"
        if prim.stops_b:
            out += f" b:{_fmt_pairs(prim.stops_b)}"
        if prim.on_mismatch is not False:
            out += f" mismatch={_fmt_target(prim.on_mismatch)}"
        return out
    if isinstance(prim, CounterDec):
        return f"counter_dec {prim.counter} zero={_fmt_target(prim.on_zero)}"
    if isinstance(prim, CounterInc):
        return f"counter_inc {prim.counter} overflow={_fmt_target(prim.on_overflow)}"
    if isinstance(prim, ModularScan):
        return (f"modular_scan {prim.tape} {prim.counter} "
                f"zero={_fmt_target(prim.on_zero)} nonzero={_fmt_target(prim.on_nonzero)}")
    raise AssemblyError(f"unknown primitive {prim!r}")


class IrLoopLimit(RuntimeError):
    pass


def interpret_ir(
    p: ProgramIR,
    input_syms: str,
    certificate: str = "",
    max_ops: int = 10**7,
) -> str:
    """Run the IR directly on host tapes; returns 'accepted' or 'rejected'.

    Primitive semantics mirror the assembler's documented gadgets, but at
    whole-primitive granularity; only the verdict is comparable with run().
    """
    t = len(p.tapes)
    idx = {d.name: i for i, d in enumerate(p.tapes)}
    label_block = {lbl: i for i, (lbl, _) in enumerate(p.blocks) if lbl}
    tapes: list[dict[int, str]] = [{} for _ in range(t)]
    for i, d in enumerate(p.tapes):
        if d.role is TapeRole.INPUT:
            content = input_syms
        elif d.role is TapeRole.CERTIFICATE:
            content = certificate
        else:
            content = ""
        for j, s in enumerate(content):
            if s != BLANK:
                tapes[i][j] = s
    heads = [0] * t
    ops = 0

    def cell(k: int) -> str:
        return tapes[k].get(heads[k], BLANK)

    def put(k: int, sym: str) -> None:
        if sym == BLANK:
            tapes[k].pop(heads[k], None)
        else:
            tapes[k][heads[k]] = sym

    def tick(n: int = 1) -> None:
        nonlocal ops
        ops += n
        if ops > max_ops:
            raise IrLoopLimit(f"IR interpreter exceeded {max_ops} operations")

    def counter_extent(k: int) -> int:
        # counter = maximal 0/1 run ending at the head, extending left
        left = heads[k]
        while tapes[k].get(left - 1, BLANK) in ("0", "1"):
            left -= 1
            tick()
        return left

    def counter_value(k: int) -> tuple[int, int]:
        if cell(k) not in ("0", "1"):
            return 0, heads[k] + 1  # width-0 counter (head on blank)
        left = counter_extent(k)
        bits = "".join(tapes[k].get(i, BLANK) for i in range(left, heads[k] + 1))
        return int(bits, 2), left

    def counter_store(k: int, value: int, left: int) -> None:
        width = heads[k] - left + 1
        bits = format(value, f"0{width}b") if width > 0 else ""
        for off, b in enumerate(bits):
            pos = left + off
            if b == "0" and pos not in tapes[k]:
                continue
            tapes[k][pos] = b

    pc = 0
    while True:
        if pc >= len(p.blocks):
            raise AssemblyError("interpreter fell off the end of the program")
        _, prim = p.blocks[pc]
        tick()

        def jump(target: Target) -> int:
            if target == "accept" or target == "reject":
                return -1 if target == "accept" else -2
            if target is None:
                return pc + 1
            return label_block[target]

        if isinstance(prim, Halt):
            return "accepted" if prim.verdict == "accept" else "rejected"
        if isinstance(prim, Goto):
            nxt = jump(prim.label)
        elif isinstance(prim, Move):
            k = idx[prim.tape]
            heads[k] += (1 if prim.direction == "R" else -1) * prim.count
            tick(prim.count)
            nxt = pc + 1
        elif isinstance(prim, Seek):
            k = idx[prim.tape]
            stops = dict(prim.stops)
            step = 1 if prim.direction == "R" else -1
            while cell(k) not in stops:
                heads[k] += step
                tick()
            nxt = jump(stops[cell(k)])
        elif isinstance(prim, Branch):
            cases = dict(prim.cases)
            nxt = jump(cases.get(cell(idx[prim.tape]), prim.otherwise))
        elif isinstance(prim, Write):
            k = idx[prim.tape]
            put(k, prim.symbol)
            if prim.move != "S":
                heads[k] += 1 if prim.move == "R" else -1
            nxt = pc + 1
        elif isinstance(prim, CopyCell):
            s, d = idx[prim.src], idx[prim.dst]
            guard = dict(prim.guard)
            if cell(s) in guard:
                nxt = jump(guard[cell(s)])
            else:
                put(d, cell(s))
                heads[s] += 1 if prim.src_dir == "R" else -1
                heads[d] += 1 if prim.dst_dir == "R" else -1
                nxt = pc + 1
        elif isinstance(prim, CopyUntil):
            s, d = idx[prim.src], idx[prim.dst]
            stops = dict(prim.stops)
            step = 1 if prim.direction == "R" else -1
            while cell(s) not in stops:
                put(d, cell(s))
                heads[s] += step
                heads[d] += step
                tick()
            nxt = jump(stops[cell(s)])
        elif isinstance(prim, CompareLoop):
            a, b = idx[prim.tape_a], idx[prim.tape_b]
            stops_a, stops_b = dict(prim.stops_a), dict(prim.stops_b)
            step_a = 1 if prim.dir_a == "R" else -1
            step_b = 1 if prim.dir_b == "R" else -1
            while True:
                if cell(a) in stops_a:
                    nxt = jump(stops_a[cell(a)])
                    break
                if cell(b) in stops_b:
                    nxt = jump(stops_b[cell(b)])
                    break
                if prim.on_mismatch is not False and cell(a) != cell(b):
                    nxt = jump(prim.on_mismatch)  # type: ignore[arg-type]
                    break
                heads[a] += step_a
                heads[b] += step_b
                tick()
        elif isinstance(prim, CounterDec):
            k = idx[prim.counter]
            value, left = counter_value(k)
            if value == 0:
                nxt = jump(prim.on_zero)
            else:
                counter_store(k, value - 1, left)
                nxt = pc + 1
        elif isinstance(prim, CounterInc):
            k = idx[prim.counter]
            value, left = counter_value(k)
            width = heads[k] - left + 1
            if width <= 0 or value + 1 >= (1 << width):
                counter_store(k, 0, left)
                nxt = jump(prim.on_overflow)
            else:
                counter_store(k, value + 1, left)
                nxt = pc + 1
        elif isinstance(prim, ModularScan):
            a, c = idx[prim.tape], idx[prim.counter]
            while cell(a) != BLANK:
                if cell(c) == BLANK:
                    tick()  # guards against an empty unary counter spinning
                    while tapes[c].get(heads[c] - 1, BLANK) != BLANK:
                        heads[c] -= 1
                        tick()
                    continue
                heads[a] += 1
                heads[c] += 1
                tick()
            nxt = jump(prim.on_zero if cell(c) == BLANK else prim.on_nonzero)
        else:  # pragma: no cover
            raise AssemblyError(f"unknown primitive {prim!r}")

        if nxt == -1:
            return "accepted"
        if nxt == -2:
            return "rejected"
        pc = nxt
