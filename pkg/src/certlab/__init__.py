"""certlab: a laboratory for certificate/verification-time trade-off experiments.

Builds step-exact multi-tape Turing machines for PERIODIC, STRING-ROTATION
and 3-SAT, wraps them as verifiers and enumeration solvers, and measures the
speedup bought per certificate bit.
"""

from .machine import (
    ACCEPTED,
    FUEL_EXHAUSTED,
    REJECTED,
    STUCK,
    Configuration,
    EncodingError,
    InvalidMachineError,
    MachineSpec,
    Rule,
    RunResult,
    TapeRole,
    Violation,
    run,
    run_reference,
    trace,
    validate_machine,
)

__version__ = "0.1.0"

__all__ = [
    "ACCEPTED",
    "REJECTED",
    "FUEL_EXHAUSTED",
    "STUCK",
    "Configuration",
    "EncodingError",
    "InvalidMachineError",
    "MachineSpec",
    "Rule",
    "RunResult",
    "TapeRole",
    "Violation",
    "run",
    "run_reference",
    "trace",
    "validate_machine",
    "__version__",
]
