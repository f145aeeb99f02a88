"""CSV schema detection for the bench exports.

Files are recognized purely by their header line; every cell is kept as the
string the producer wrote, so reports copy values instead of recomputing
them.
"""

from __future__ import annotations

from dataclasses import dataclass

FIG1 = "fig1"
RECORDS = "records"
RATIOS = "ratios"
BOUND = "bound"
ENTROPY = "entropy"

HEADERS = {
    "delta,g": FIG1,
    "problem,role,n,cert_bits,instance_id,seed,steps,verdict,fuel": RECORDS,
    "problem,role,n_from,n_to,ratio": RATIOS,
    "n,f_steps,g_steps,speedup,delta_bits,required_bits,slack,tolerance_bits,within": BOUND,
    "n,m,samples,mean_count,log2_mean,fitted_slope": ENTROPY,
}


@dataclass(frozen=True)
class Table:
    kind: str
    path: str
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]


class SchemaError(ValueError):
    pass


def load_table(path: str) -> Table:
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines:
        raise SchemaError(f"{path}: empty file")
    header = lines[0]
    kind = HEADERS.get(header)
    if kind is None:
        raise SchemaError(f"{path}: unrecognized header {header!r}")
    columns = tuple(header.split(","))
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        cells = tuple(line.split(","))
        if len(cells) != len(columns):
            raise SchemaError(f"{path}: line {i} has {len(cells)} cells, expected {len(columns)}")
        rows.append(cells)
    return Table(kind, path, columns, tuple(rows))
