"""Shipped case-study problems and their machines, oracles and generators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from ..instances import Instance, int_to_bits, log2_width
from ..verifier import SolverRole, VerifierSpec
from . import periodic as _periodic
from . import rotation as _rotation
from . import sat3 as _sat3
from .periodic import (
    build_periodic_naive_solver,
    build_periodic_verifier,
    gen_periodic,
    gen_worst_aperiodic,
    periodic_oracle,
)
from .rotation import (
    build_rotation_naive_solver,
    build_rotation_verifier,
    gen_rotation,
    gen_worst_nonrotation,
    rotation_oracle,
)
from .sat3 import (
    CnfFormula,
    build_sat3_verifier,
    count_satisfying,
    count_satisfying_slow,
    find_satisfying,
    format_dimacs,
    gen_random_3sat,
    parse_dimacs,
    sat3_oracle,
)

__all__ = [
    "Problem",
    "PROBLEMS",
    "get_problem",
    "CnfFormula",
    "build_periodic_verifier",
    "build_periodic_naive_solver",
    "build_rotation_verifier",
    "build_rotation_naive_solver",
    "build_sat3_verifier",
    "periodic_oracle",
    "rotation_oracle",
    "sat3_oracle",
    "count_satisfying",
    "count_satisfying_slow",
    "find_satisfying",
    "gen_periodic",
    "gen_worst_aperiodic",
    "gen_rotation",
    "gen_worst_nonrotation",
    "gen_random_3sat",
    "parse_dimacs",
    "format_dimacs",
    "sat3_verifier_fuel",
]


def _string_verifier_fuel(n: int) -> int:
    return max(256, 64 * n * log2_width(n))


def _string_solver_fuel(n: int) -> int:
    return max(256, 16 * n * n)


def _periodic_accepting(n: int, seed: int) -> tuple[Instance, str]:
    if n < 4 or n % 4 != 0:
        raise ValueError("sweep instances use n divisible by 4")
    ell = n // 4
    inst = gen_periodic(n, ell, seed)
    return inst, int_to_bits(ell, log2_width(n))


def _rotation_accepting(n: int, seed: int) -> tuple[Instance, str]:
    if n < 3:
        raise ValueError("sweep instances need n >= 3")
    k = n // 3
    inst = gen_rotation(n, k, seed)
    return inst, int_to_bits(k, log2_width(n))


@dataclass(frozen=True)
class Problem:
    """Everything the bench and CLI need to drive one shipped problem."""

    name: str
    build_verifier: Callable[[], VerifierSpec]
    build_naive_solver: Optional[Callable[[], SolverRole]]
    cert_width: Callable[[int], int]
    verifier_fuel: Callable[[int], int]
    solver_fuel: Callable[[int], int]
    accepting_instance: Callable[[int, int], tuple[Instance, str]]
    worst_instance: Optional[Callable[[int], Instance]]


PROBLEMS: dict[str, Problem] = {
    "periodic": Problem(
        name="periodic",
        build_verifier=build_periodic_verifier,
        build_naive_solver=build_periodic_naive_solver,
        cert_width=_periodic.cert_width,
        verifier_fuel=_string_verifier_fuel,
        solver_fuel=_string_solver_fuel,
        accepting_instance=_periodic_accepting,
        worst_instance=gen_worst_aperiodic,
    ),
    "rotation": Problem(
        name="rotation",
        build_verifier=build_rotation_verifier,
        build_naive_solver=build_rotation_naive_solver,
        cert_width=_rotation.cert_width,
        verifier_fuel=_string_verifier_fuel,
        solver_fuel=_string_solver_fuel,
        accepting_instance=_rotation_accepting,
        worst_instance=gen_worst_nonrotation,
    ),
}


def sat3_verifier_fuel(formula: CnfFormula) -> int:
    """Formula-aware budget; the string-problem defaults undershoot 3-SAT."""
    n, m = formula.num_vars, formula.num_clauses
    w = _sat3.index_width(n)
    return 16 * (3 * m + 1) * (n + 2 * w + 16) + 256


def get_problem(name: str) -> Problem:
    try:
        return PROBLEMS[name]
    except KeyError:
        raise KeyError(
            f"unknown problem {name!r}; shipped problems: {', '.join(sorted(PROBLEMS))}"
        ) from None


def save_instance_file(inst: Instance, path: str) -> None:
    """Instance files: plain text for strings, two lines for pairs, DIMACS for CNF."""
    if inst.problem == "periodic":
        text = _periodic.decode(inst) + "\n"
    elif inst.problem == "rotation":
        a, b = _rotation.decode(inst)
        text = a + "\n" + b + "\n"
    elif inst.problem == "sat3":
        text = format_dimacs(_sat3.decode(inst))
    else:
        raise KeyError(f"unknown problem {inst.problem!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def load_instance_file(problem: str, path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if problem == "periodic":
        return _periodic.encode(text.rstrip("\n"))
    if problem == "rotation":
        lines = text.splitlines()
        if len(lines) != 2:
            raise ValueError(f"pair instance files hold exactly two lines, got {len(lines)}")
        return _rotation.encode((lines[0], lines[1]))
    if problem == "sat3":
        return _sat3.encode(parse_dimacs(text))
    raise KeyError(f"unknown problem {problem!r}")
