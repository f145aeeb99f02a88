"""Assembles head-movement programs into multi-tape transition tables.

A ProgramIR is a straight-line sequence of labelled blocks, each one
primitive.  Every primitive expands to a fixed, documented state gadget, so
step counts are stable release to release:

    halt            0 states; jumping here enters accept/reject directly
    goto            1 step
    move            1 step per cell (COUNT chained states)
    seek            1 step per cell traversed, +1 reading the stop symbol
    branch          1 step
    write           1 step (write plus optional same-tape move)
    copy_cell       1 step (guard symbols jump without writing)
    copy_until      1 step per copied cell, +1 reading the stop symbol
    compare_loop    1 step per cell pair, +1 on the exit condition
    counter_dec     1 step if the low bit is set, else 2*(borrow run)+2;
                    a decrement of zero walks the width twice, restores the
                    zero counter and takes the zero exit
    counter_inc     mirror image of counter_dec (carry run, overflow exit)
    modular_scan    1 step per scanned cell plus one rewind of the unary
                    counter per completed cycle, +2 deciding the remainder

Binary counters store the most significant bit at cell 0 and park the head
on the least significant bit, so long dec/inc runs cost amortized O(1) bit
flips plus carry walks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

from .machine import MachineSpec, Rule, TapeRole, validate_machine

BLANK = "_"

# Jump targets: a label name, "accept"/"reject", or None for fall-through.
Target = Optional[str]


class AssemblyError(ValueError):
    pass


@dataclass(frozen=True)
class TapeDecl:
    name: str
    role: TapeRole
    symbols: tuple[str, ...]  # non-blank symbols usable on this tape


@dataclass(frozen=True)
class Halt:
    verdict: str  # accept | reject


@dataclass(frozen=True)
class Goto:
    label: str


@dataclass(frozen=True)
class Move:
    tape: str
    direction: str
    count: int = 1


@dataclass(frozen=True)
class Seek:
    tape: str
    direction: str
    stops: tuple[tuple[str, Target], ...]


@dataclass(frozen=True)
class Branch:
    tape: str
    cases: tuple[tuple[str, Target], ...]
    otherwise: Target = None


@dataclass(frozen=True)
class Write:
    tape: str
    symbol: str
    move: str = "S"


@dataclass(frozen=True)
class CopyCell:
    src: str
    dst: str
    src_dir: str = "R"
    dst_dir: str = "R"
    guard: tuple[tuple[str, Target], ...] = ()


@dataclass(frozen=True)
class CopyUntil:
    src: str
    dst: str
    direction: str
    stops: tuple[tuple[str, Target], ...]


@dataclass(frozen=True)
class CompareLoop:
    tape_a: str
    tape_b: str
    dir_a: str
    dir_b: str
    stops_a: tuple[tuple[str, Target], ...]
    stops_b: tuple[tuple[str, Target], ...]
    on_mismatch: Target | bool = False  # False disables comparison (lockstep walk)


@dataclass(frozen=True)
class CounterDec:
    counter: str
    on_zero: Target


@dataclass(frozen=True)
class CounterInc:
    counter: str
    on_overflow: Target


@dataclass(frozen=True)
class ModularScan:
    tape: str
    counter: str
    on_zero: Target
    on_nonzero: Target


Primitive = Union[
    Halt, Goto, Move, Seek, Branch, Write, CopyCell, CopyUntil,
    CompareLoop, CounterDec, CounterInc, ModularScan,
]

Block = tuple[Optional[str], Primitive]


@dataclass(frozen=True)
class ProgramIR:
    name: str
    tapes: tuple[TapeDecl, ...]
    blocks: tuple[Block, ...]

    def tape_index(self, name: str) -> int:
        for i, decl in enumerate(self.tapes):
            if decl.name == name:
                return i
        raise AssemblyError(f"unknown tape {name!r} in program {self.name!r}")


@dataclass(frozen=True)
class CompiledArtifact:
    machine: MachineSpec
    source_map: dict[str, str]  # state -> "block#/label/primitive"


def _validate_program(p: ProgramIR) -> None:
    names = [d.name for d in p.tapes]
    if len(set(names)) != len(names):
        raise AssemblyError("duplicate tape names")
    roles = [d.role for d in p.tapes]
    if roles.count(TapeRole.INPUT) != 1 or roles.count(TapeRole.CERTIFICATE) != 1:
        raise AssemblyError("program needs exactly one input and one certificate tape")
    for d in p.tapes:
        if BLANK in d.symbols:
            raise AssemblyError(f"tape {d.name!r} declares the blank explicitly")
        if len(d.symbols) + 1 > 254:
            raise AssemblyError(
                f"tape {d.name!r} alphabet overflows the 254-symbol engine limit")
    if not p.blocks:
        raise AssemblyError("empty program")

    labels = {lbl for lbl, _ in p.blocks if lbl}
    labels |= {"accept", "reject"}

    def check_target(t: Target, ctx: str) -> None:
        if t is not None and t not in labels:
            raise AssemblyError(f"unresolved label {t!r} in {ctx}")

    def tape_syms(name: str) -> set[str]:
        return set(p.tapes[p.tape_index(name)].symbols) | {BLANK}

    def require_work(name: str, ctx: str) -> None:
        if p.tapes[p.tape_index(name)].role is not TapeRole.WORK:
            raise AssemblyError(f"{ctx} writes read-only tape {name!r}")

    for bi, (lbl, prim) in enumerate(p.blocks):
        ctx = f"block {bi} ({type(prim).__name__})"
        if isinstance(prim, Halt):
            if prim.verdict not in ("accept", "reject"):
                raise AssemblyError(f"{ctx}: bad verdict {prim.verdict!r}")
        elif isinstance(prim, Goto):
            check_target(prim.label, ctx)
        elif isinstance(prim, Move):
            p.tape_index(prim.tape)
            if prim.direction not in ("L", "R") or prim.count < 1:
                raise AssemblyError(f"{ctx}: bad move")
        elif isinstance(prim, Seek):
            syms = tape_syms(prim.tape)
            for s, t in prim.stops:
                if s not in syms:
                    raise AssemblyError(f"{ctx}: stop symbol {s!r} undeclared")
                check_target(t, ctx)
            if prim.direction not in ("L", "R"):
                raise AssemblyError(f"{ctx}: bad direction")
        elif isinstance(prim, Branch):
            syms = tape_syms(prim.tape)
            for s, t in prim.cases:
                if s not in syms:
                    raise AssemblyError(f"{ctx}: case symbol {s!r} undeclared")
                check_target(t, ctx)
            check_target(prim.otherwise, ctx)
        elif isinstance(prim, Write):
            require_work(prim.tape, ctx)
            if prim.symbol not in tape_syms(prim.tape):
                raise AssemblyError(f"{ctx}: symbol {prim.symbol!r} undeclared")
        elif isinstance(prim, CopyCell):
            require_work(prim.dst, ctx)
            guards = {s for s, _ in prim.guard}
            for s, t in prim.guard:
                check_target(t, ctx)
            movable = tape_syms(prim.src) - guards
            if not movable <= tape_syms(prim.dst):
                raise AssemblyError(f"{ctx}: source symbols {movable - tape_syms(prim.dst)} undeclared on dst")
        elif isinstance(prim, CopyUntil):
            require_work(prim.dst, ctx)
            stops = {s for s, _ in prim.stops}
            for s, t in prim.stops:
                check_target(t, ctx)
            movable = tape_syms(prim.src) - stops
            if not movable <= tape_syms(prim.dst):
                raise AssemblyError(f"{ctx}: source symbols {movable - tape_syms(prim.dst)} undeclared on dst")
        elif isinstance(prim, CompareLoop):
            for s, t in prim.stops_a + prim.stops_b:
                check_target(t, ctx)
            if isinstance(prim.on_mismatch, str):
                check_target(prim.on_mismatch, ctx)
        elif isinstance(prim, (CounterDec, CounterInc)):
            require_work(prim.counter, ctx)
            target = prim.on_zero if isinstance(prim, CounterDec) else prim.on_overflow
            check_target(target, ctx)
            need = {"0", "1"}
            if not need <= tape_syms(prim.counter):
                raise AssemblyError(f"{ctx}: counter tape must declare 0 and 1")
        elif isinstance(prim, ModularScan):
            require_work(prim.counter, ctx)
            check_target(prim.on_zero, ctx)
            check_target(prim.on_nonzero, ctx)
        else:  # pragma: no cover
            raise AssemblyError(f"{ctx}: unknown primitive")


_PRIM_KEYWORD = {
    Halt: "halt", Goto: "goto", Move: "move", Seek: "seek", Branch: "branch",
    Write: "write", CopyCell: "copy_cell", CopyUntil: "copy_until",
    CompareLoop: "compare_loop", CounterDec: "counter_dec",
    CounterInc: "counter_inc", ModularScan: "modular_scan",
}


class _Emitter:
    def __init__(self, p: ProgramIR):
        self.p = p
        self.t = len(p.tapes)
        self.tape_idx = {d.name: i for i, d in enumerate(p.tapes)}
        self.syms = [(BLANK,) + d.symbols for d in p.tapes]
        self.rules: list[Rule] = []
        self.states: list[str] = []
        self.source_map: dict[str, str] = {}
        self.label_block = {lbl: i for i, (lbl, _) in enumerate(p.blocks) if lbl}
        self.entries: list[str] = []
        for i, (lbl, prim) in enumerate(p.blocks):
            if isinstance(prim, Halt):
                self.entries.append(prim.verdict)
            else:
                self.entries.append(f"s{i:03d}_{_PRIM_KEYWORD[type(prim)]}")

    def target(self, t: Target, block: int, ctx: str) -> str:
        if t is None:
            if block + 1 >= len(self.p.blocks):
                raise AssemblyError(f"{ctx}: falls off the end of the program")
            return self.entries[block + 1]
        if t in ("accept", "reject"):
            return t
        return self.entries[self.label_block[t]]

    def new_state(self, name: str, block: int, prim: Primitive) -> str:
        self.states.append(name)
        lbl = self.p.blocks[block][0] or ""
        self.source_map[name] = f"{block}/{lbl}/{_PRIM_KEYWORD[type(prim)]}"
        return name

    def stay(self) -> tuple[str, ...]:
        return ("S",) * self.t

    def mv(self, moves: Mapping[int, str]) -> tuple[str, ...]:
        return tuple(moves.get(k, "S") for k in range(self.t))

    def emit_state(self, state: str, fn: Callable) -> None:
        for vec in itertools.product(*self.syms):
            out = fn(vec)
            if out is None:
                continue
            nxt, writes, moves = out
            self.rules.append(Rule(state, vec, nxt, writes or vec, moves or self.stay()))


def assemble(p: ProgramIR) -> CompiledArtifact:
    """Emit a deterministic, read-only-safe MachineSpec equivalent to the IR."""
    _validate_program(p)
    em = _Emitter(p)

    for bi, (lbl, prim) in enumerate(p.blocks):
        entry = em.entries[bi]
        if isinstance(prim, Halt):
            continue

        def tgt(t: Target, _bi=bi, _prim=prim) -> str:
            return em.target(t, _bi, f"block {_bi} ({type(_prim).__name__})")

        if isinstance(prim, Goto):
            st = em.new_state(entry, bi, prim)
            dest = tgt(prim.label)
            em.emit_state(st, lambda vec: (dest, None, None))

        elif isinstance(prim, Move):
            k = em.tape_idx[prim.tape]
            move = em.mv({k: prim.direction})
            nxt_states = [entry] + [f"{entry}_{j}" for j in range(2, prim.count + 1)]
            for j, st in enumerate(nxt_states):
                em.new_state(st, bi, prim)
            chain = nxt_states[1:] + [tgt(None)]
            for st, dest in zip(nxt_states, chain):
                em.emit_state(st, lambda vec, _d=dest, _m=move: (_d, None, _m))

        elif isinstance(prim, Seek):
            k = em.tape_idx[prim.tape]
            stops = dict(prim.stops)
            move = em.mv({k: prim.direction})
            st = em.new_state(entry, bi, prim)

            def seek_fn(vec, _k=k, _stops=stops, _st=st, _move=move):
                if vec[_k] in _stops:
                    return (tgt(_stops[vec[_k]]), None, None)
                return (_st, None, _move)

            em.emit_state(st, seek_fn)

        elif isinstance(prim, Branch):
            k = em.tape_idx[prim.tape]
            cases = dict(prim.cases)
            st = em.new_state(entry, bi, prim)

            def branch_fn(vec, _k=k, _cases=cases, _other=prim.otherwise):
                dest = _cases.get(vec[_k], _other)
                return (tgt(dest), None, None)

            em.emit_state(st, branch_fn)

        elif isinstance(prim, Write):
            k = em.tape_idx[prim.tape]
            st = em.new_state(entry, bi, prim)
            move = em.mv({k: prim.move} if prim.move != "S" else {})

            def write_fn(vec, _k=k, _sym=prim.symbol, _move=move):
                writes = vec[:_k] + (_sym,) + vec[_k + 1:]
                return (tgt(None), writes, _move)

            em.emit_state(st, write_fn)

        elif isinstance(prim, CopyCell):
            s, d = em.tape_idx[prim.src], em.tape_idx[prim.dst]
            guard = dict(prim.guard)
            move = em.mv({s: prim.src_dir, d: prim.dst_dir})
            st = em.new_state(entry, bi, prim)

            def copycell_fn(vec, _s=s, _d=d, _g=guard, _move=move):
                if vec[_s] in _g:
                    return (tgt(_g[vec[_s]]), None, None)
                writes = vec[:_d] + (vec[_s],) + vec[_d + 1:]
                return (tgt(None), writes, _move)

            em.emit_state(st, copycell_fn)

        elif isinstance(prim, CopyUntil):
            s, d = em.tape_idx[prim.src], em.tape_idx[prim.dst]
            stops = dict(prim.stops)
            move = em.mv({s: prim.direction, d: prim.direction})
            st = em.new_state(entry, bi, prim)

            def copyuntil_fn(vec, _s=s, _d=d, _stops=stops, _st=st, _move=move):
                if vec[_s] in _stops:
                    return (tgt(_stops[vec[_s]]), None, None)
                writes = vec[:_d] + (vec[_s],) + vec[_d + 1:]
                return (_st, writes, _move)

            em.emit_state(st, copyuntil_fn)

        elif isinstance(prim, CompareLoop):
            a, b = em.tape_idx[prim.tape_a], em.tape_idx[prim.tape_b]
            stops_a, stops_b = dict(prim.stops_a), dict(prim.stops_b)
            move = em.mv({a: prim.dir_a, b: prim.dir_b})
            compare = prim.on_mismatch is not False
            st = em.new_state(entry, bi, prim)

            def cmp_fn(vec, _a=a, _b=b, _sa=stops_a, _sb=stops_b, _st=st, _move=move, _cmp=compare):
                if vec[_a] in _sa:
                    return (tgt(_sa[vec[_a]]), None, None)
                if vec[_b] in _sb:
                    return (tgt(_sb[vec[_b]]), None, None)
                if _cmp and vec[_a] != vec[_b]:
                    return (tgt(prim.on_mismatch), None, None)
                return (_st, None, _move)

            em.emit_state(st, cmp_fn)

        elif isinstance(prim, CounterDec):
            k = em.tape_idx[prim.counter]
            st = em.new_state(entry, bi, prim)
            borrow = em.new_state(f"{entry}_borrow", bi, prim)
            clean = em.new_state(f"{entry}_clean", bi, prim)
            ret = em.new_state(f"{entry}_ret", bi, prim)
            L, R = em.mv({k: "L"}), em.mv({k: "R"})

            def wr1(vec, sym, _k=k):
                return vec[:_k] + (sym,) + vec[_k + 1:]

            em.emit_state(st, lambda vec, _k=k: (
                (tgt(None), wr1(vec, "0"), None) if vec[_k] == "1"
                else (borrow, wr1(vec, "1"), L) if vec[_k] == "0"
                else (tgt(prim.on_zero), None, None) if vec[_k] == BLANK
                else None))
            em.emit_state(borrow, lambda vec, _k=k: (
                (borrow, wr1(vec, "1"), L) if vec[_k] == "0"
                else (ret, wr1(vec, "0"), R) if vec[_k] == "1"
                else (clean, None, R) if vec[_k] == BLANK
                else None))
            em.emit_state(clean, lambda vec, _k=k: (
                (clean, wr1(vec, "0"), R) if vec[_k] == "1"
                else (tgt(prim.on_zero), None, L) if vec[_k] == BLANK
                else None))
            em.emit_state(ret, lambda vec, _k=k: (
                (ret, None, R) if vec[_k] == "1"
                else (tgt(None), None, L) if vec[_k] == BLANK
                else None))

        elif isinstance(prim, CounterInc):
            k = em.tape_idx[prim.counter]
            st = em.new_state(entry, bi, prim)
            carry = em.new_state(f"{entry}_carry", bi, prim)
            wrap = em.new_state(f"{entry}_wrap", bi, prim)
            ret = em.new_state(f"{entry}_ret", bi, prim)
            L, R = em.mv({k: "L"}), em.mv({k: "R"})

            def wr1i(vec, sym, _k=k):
                return vec[:_k] + (sym,) + vec[_k + 1:]

            em.emit_state(st, lambda vec, _k=k: (
                (tgt(None), wr1i(vec, "1"), None) if vec[_k] == "0"
                else (carry, wr1i(vec, "0"), L) if vec[_k] == "1"
                else (tgt(prim.on_overflow), None, None) if vec[_k] == BLANK
                else None))
            em.emit_state(carry, lambda vec, _k=k: (
                (carry, wr1i(vec, "0"), L) if vec[_k] == "1"
                else (ret, wr1i(vec, "1"), R) if vec[_k] == "0"
                else (wrap, None, R) if vec[_k] == BLANK
                else None))
            em.emit_state(wrap, lambda vec, _k=k: (
                (wrap, None, R) if vec[_k] == "0"
                else (tgt(prim.on_overflow), None, L) if vec[_k] == BLANK
                else None))
            em.emit_state(ret, lambda vec, _k=k: (
                (ret, None, R) if vec[_k] == "0"
                else (tgt(None), None, L) if vec[_k] == BLANK
                else None))

        elif isinstance(prim, ModularScan):
            a = em.tape_idx[prim.tape]
            c = em.tape_idx[prim.counter]
            st = em.new_state(entry, bi, prim)
            chk = em.new_state(f"{entry}_chk", bi, prim)
            rw = em.new_state(f"{entry}_rw", bi, prim)
            both = em.mv({a: "R", c: "R"})

            em.emit_state(st, lambda vec, _a=a, _c=c, _st=st: (
                (chk, None, None) if vec[_a] == BLANK
                else (rw, None, em.mv({_c: "L"})) if vec[_c] == BLANK
                else (_st, None, both)))
            em.emit_state(chk, lambda vec, _c=c: (
                (tgt(prim.on_zero), None, None) if vec[_c] == BLANK
                else (tgt(prim.on_nonzero), None, None)))
            em.emit_state(rw, lambda vec, _c=c, _st=st: (
                (rw, None, em.mv({_c: "L"})) if vec[_c] != BLANK
                else (_st, None, em.mv({_c: "R"}))))

    alphabet: list[str] = [BLANK]
    for decl in p.tapes:
        for s in decl.symbols:
            if s not in alphabet:
                alphabet.append(s)

    states = em.states + ["accept", "reject"]
    spec = MachineSpec(
        name=p.name,
        tapes=tuple(d.role for d in p.tapes),
        alphabet=tuple(alphabet),
        states=tuple(states),
        start=em.entries[0],
        accept="accept",
        reject="reject",
        rules=tuple(em.rules),
    )
    violations = validate_machine(spec)
    if violations:
        raise AssemblyError(
            f"assembler emitted invalid machine: {'; '.join(str(v) for v in violations)}")
    em.source_map["accept"] = "halt/accept"
    em.source_map["reject"] = "halt/reject"
    return CompiledArtifact(machine=spec, source_map=em.source_map)
