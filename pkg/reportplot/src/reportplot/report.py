"""Markdown report assembly.

Every number in the report is the exact string from the source CSV; this
module never recomputes statistics, so the CSVs stay the single source of
truth.  Sections appear in a fixed order and regeneration from identical
inputs is byte-identical.
"""

from __future__ import annotations

from .schemas import BOUND, ENTROPY, FIG1, RATIOS, RECORDS, Table

_SECTION_ORDER = (FIG1, RATIOS, BOUND, ENTROPY, RECORDS)

_TITLES = {
    FIG1: "Halving table (fixed input size)",
    RATIOS: "Doubling ratios",
    BOUND: "Trade-off bound report",
    ENTROPY: "Solution-entropy fit",
    RECORDS: "Sweep records",
}


def _md_table(columns: tuple[str, ...], rows: tuple[tuple[str, ...], ...]) -> list[str]:
    out = ["| " + " | ".join(columns) + " |",
           "|" + "|".join(" --- " for _ in columns) + "|"]
    for row in rows:
        out.append("| " + " | ".join(row) + " |")
    return out


def render_report(
    tables: list[Table],
    charts: dict[str, str] | None = None,
    unrecognized: list[str] | None = None,
) -> str:
    """Markdown text for a set of classified CSV tables.

    charts maps a fig1 table path to its rendered chart file; unrecognized
    paths are listed at the end but do not block the rest.
    """
    lines: list[str] = ["# Bench report", ""]
    charts = charts or {}
    for kind in _SECTION_ORDER:
        for table in tables:
            if table.kind != kind:
                continue
            lines.append(f"## {_TITLES[kind]}")
            lines.append("")
            lines.append(f"Source: `{table.path.split('/')[-1]}`")
            lines.append("")
            if table.path in charts:
                chart = charts[table.path].split("/")[-1]
                lines.append(f"![trade-off chart]({chart})")
                lines.append("")
            lines.extend(_md_table(table.columns, table.rows))
            lines.append("")
            badge = _badge_for(table)
            if badge:
                lines.append(badge)
                lines.append("")
    if unrecognized:
        lines.append("## Unrecognized inputs")
        lines.append("")
        for path in unrecognized:
            lines.append(f"- `{path}`")
        lines.append("")
    return "\n".join(lines)


def _badge_for(table: Table) -> str | None:
    if table.kind == BOUND and table.rows:
        tol = table.rows[0][table.columns.index("tolerance_bits")]
        within = table.columns.index("within")
        verdict = "PASS" if all(r[within] == "pass" for r in table.rows) else "FAIL"
        return f"**slack >= -{tol}: {verdict}**"
    if table.kind == ENTROPY and table.rows:
        slope = table.rows[0][table.columns.index("fitted_slope")]
        return f"**fitted slope: {slope}**"
    return None
