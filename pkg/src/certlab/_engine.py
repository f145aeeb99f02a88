"""Dense-table execution engine for MachineSpec.

The transition map is flattened into per-state dense arrays indexed by a
mixed-radix symbol vector (one small per-tape alphabet per machine, derived
from the rules).  The stepping loop is JIT-compiled with numba when
available; set CERTLAB_NO_NUMBA=1 to force the pure-Python loop.  Both paths
are step-for-step identical and are differentially tested.
"""

from __future__ import annotations

import os
import weakref
from dataclasses import dataclass

import numpy as np

from .machine import (
    ACCEPTED,
    FUEL_EXHAUSTED,
    REJECTED,
    STUCK,
    MachineSpec,
    RunResult,
)

_MAX_TAPES = 6  # packed actions use 10 bits per tape in an int64

_HALT = 0
_FUEL = 1
_STUCK_CODE = 2
_GROW = 3


@dataclass
class Table:
    t: int
    combos: int
    sizes: tuple[int, ...]
    strides: np.ndarray  # int64[t]
    sym_index: tuple[dict[str, int], ...]
    sym_names: tuple[tuple[str, ...], ...]
    state_index: dict[str, int]
    state_names: tuple[str, ...]
    next_arr: np.ndarray  # int32[n_states * combos]
    act_arr: np.ndarray  # int64[n_states * combos]
    start: int
    accept: int
    reject: int


_TABLES: "weakref.WeakKeyDictionary[MachineSpec, Table]" = weakref.WeakKeyDictionary()


def build_table(spec: MachineSpec) -> Table:
    cached = _TABLES.get(spec)
    if cached is not None:
        return cached
    t = len(spec.tapes)
    if t > _MAX_TAPES:
        raise ValueError(f"engine supports at most {_MAX_TAPES} tapes, machine has {t}")

    per_tape: list[list[str]] = [[spec.blank] for _ in range(t)]
    for rule in spec.rules:
        for k in range(t):
            for sym in (rule.reads[k], rule.writes[k]):
                if sym not in per_tape[k]:
                    per_tape[k].append(sym)
    sym_index = tuple({s: i for i, s in enumerate(syms)} for syms in per_tape)
    # One extra "foreign symbol" slot per tape: no rule ever matches it.
    sizes = tuple(len(syms) + 1 for syms in per_tape)
    for size in sizes:
        if size > 255:
            raise ValueError("per-tape alphabet exceeds engine limit of 254 symbols")

    strides = np.empty(t, dtype=np.int64)
    acc = 1
    for k in range(t - 1, -1, -1):
        strides[k] = acc
        acc *= sizes[k]
    combos = acc

    state_names = tuple(spec.states)
    state_index = {s: i for i, s in enumerate(state_names)}
    n_states = len(state_names)

    next_arr = np.full(n_states * combos, -1, dtype=np.int32)
    act_arr = np.zeros(n_states * combos, dtype=np.int64)
    move_code = {"L": 0, "S": 1, "R": 2}
    for rule in spec.rules:
        idx = state_index[rule.state] * combos
        for k in range(t):
            idx += sym_index[k][rule.reads[k]] * strides[k]
        act = 0
        for k in range(t):
            act |= sym_index[k][rule.writes[k]] << (10 * k)
            act |= move_code[rule.moves[k]] << (10 * k + 8)
        next_arr[idx] = state_index[rule.next_state]
        act_arr[idx] = act

    table = Table(
        t=t,
        combos=combos,
        sizes=sizes,
        strides=strides,
        sym_index=sym_index,
        sym_names=tuple(tuple(syms) for syms in per_tape),
        state_index=state_index,
        state_names=state_names,
        next_arr=next_arr,
        act_arr=act_arr,
        start=state_index[spec.start],
        accept=state_index[spec.accept],
        reject=state_index[spec.reject],
    )
    _TABLES[spec] = table
    return table


def _loop_py(next_arr, act_arr, strides, combos, t, tape, heads, lo, hi, state, steps, fuel, accept_i, reject_i):
    length = tape.shape[1]
    while True:
        if state == accept_i or state == reject_i:
            return _HALT, state, steps
        if steps >= fuel:
            return _FUEL, state, steps
        idx = state * combos
        for k in range(t):
            idx += tape[k, heads[k]] * strides[k]
        nxt = next_arr[idx]
        if nxt < 0:
            return _STUCK_CODE, state, steps
        act = act_arr[idx]
        boundary = False
        for k in range(t):
            h = heads[k]
            tape[k, h] = (act >> (10 * k)) & 0xFF
            mv = (act >> (10 * k + 8)) & 0x3
            if mv == 0:
                h -= 1
                if h < lo[k]:
                    lo[k] = h
                if h == 0:
                    boundary = True
            elif mv == 2:
                h += 1
                if h > hi[k]:
                    hi[k] = h
                if h == length - 1:
                    boundary = True
            heads[k] = h
        steps += 1
        state = nxt
        if boundary:
            return _GROW, state, steps


_loop_jit = None


def _get_loop():
    global _loop_jit
    if os.environ.get("CERTLAB_NO_NUMBA"):
        return _loop_py
    if _loop_jit is None:
        try:
            from numba import njit

            _loop_jit = njit(cache=True, nogil=True)(_loop_py)
        except ImportError:  # pragma: no cover
            _loop_jit = _loop_py
    return _loop_jit


def run_fast(spec: MachineSpec, inp: tuple[str, ...], cert: tuple[str, ...], fuel: int) -> RunResult:
    table = build_table(spec)
    t = table.t
    content_len = max(len(inp), len(cert), 1)
    margin = 32
    length = content_len + 2 * margin
    tape = np.zeros((t, length), dtype=np.int16)
    input_k = spec.input_tape
    cert_k = spec.certificate_tape
    for i, s in enumerate(inp):
        tape[input_k, margin + i] = table.sym_index[input_k].get(s, table.sizes[input_k] - 1)
    for i, s in enumerate(cert):
        tape[cert_k, margin + i] = table.sym_index[cert_k].get(s, table.sizes[cert_k] - 1)

    origin = margin
    heads = np.full(t, origin, dtype=np.int64)
    lo = heads.copy()
    hi = heads.copy()
    state = table.start
    steps = 0
    loop = _get_loop()
    while True:
        code, state, steps = loop(
            table.next_arr, table.act_arr, table.strides, table.combos, t,
            tape, heads, lo, hi, state, steps, fuel, table.accept, table.reject,
        )
        if code != _GROW:
            break
        pad = tape.shape[1]
        tape = np.concatenate(
            [np.zeros((t, pad), dtype=np.int16), tape, np.zeros((t, pad), dtype=np.int16)], axis=1
        )
        heads += pad
        lo += pad
        hi += pad
        origin += pad

    status = {
        _HALT: ACCEPTED if state == table.accept else REJECTED,
        _FUEL: FUEL_EXHAUSTED,
        _STUCK_CODE: STUCK,
    }[code]
    excursion = tuple((int(lo[k] - origin), int(hi[k] - origin)) for k in range(t))
    return RunResult(status, int(steps), excursion, table.state_names[state])
