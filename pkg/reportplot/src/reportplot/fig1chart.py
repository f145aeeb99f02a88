"""Log-scale trade-off chart: exponential bound curve plus achievable dots."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schemas import FIG1, SchemaError, Table


def plot_fig1(table: Table, out_path: str) -> str:
    if table.kind != FIG1:
        raise SchemaError(f"{table.path}: expected a fig1 CSV (delta,g)")
    if not table.rows:
        raise SchemaError(f"{table.path}: no data rows")
    deltas = [int(r[0]) for r in table.rows]
    gs = [int(r[1]) for r in table.rows]
    # the bound curve is anchored at the first row: f0 = g * 2^delta
    f0 = gs[0] * (1 << deltas[0])
    xs = np.linspace(min(deltas), max(deltas), 256)
    curve = f0 / np.power(2.0, xs)

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(xs, curve, color="tab:blue", linewidth=1.8, label="bound f0 / 2^delta")
    ax.plot(deltas, gs, "o", color="tab:red", markersize=5, label="achievable")
    ax.set_yscale("log", base=2)
    ax.set_xlabel("certificate bits delta")
    ax.set_ylabel("verification time g")
    ax.set_title(f"each extra certificate bit halves the work (f0 = {f0})")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=110, metadata={"Software": None})
    plt.close(fig)
    return out_path
