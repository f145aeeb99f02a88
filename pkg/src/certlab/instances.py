"""Problem instances and certificate bit-string helpers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class Instance:
    """One encoded problem instance.

    payload is the problem-native object (string, pair, CNF formula); symbols
    is its input-tape encoding; n is the size parameter certificates are
    budgeted against (|x|, |A| or the variable count).
    """

    problem: str
    payload: Any
    n: int
    symbols: tuple[str, ...]


def int_to_bits(value: int, width: int) -> str:
    """Big-endian fixed-width encoding; width 0 gives the empty certificate."""
    if width < 0 or value < 0 or value >= (1 << width):
        raise ValueError(f"value {value} does not fit in {width} bits")
    return format(value, f"0{width}b") if width else ""


def bits_to_int(bits: str) -> int:
    return int(bits, 2) if bits else 0


def log2_width(n: int) -> int:
    """max(1, ceil(log2 n)): certificate width for the string problems."""
    if n <= 1:
        return 1
    return (n - 1).bit_length()
