"""plot <csv...> --out <dir>: charts plus a markdown report."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from .fig1chart import plot_fig1
from .report import render_report
from .schemas import FIG1, SchemaError, load_table


@dataclass(frozen=True)
class ReportBundle:
    csv_paths: tuple[str, ...]
    out_dir: str
    charts: tuple[str, ...]
    report_path: str
    unrecognized: tuple[str, ...]


def build_report(csv_paths: list[str], out_dir: str) -> ReportBundle:
    """Classify the inputs, render charts and the markdown report.

    Regeneration from identical CSVs is content-identical; unrecognized
    inputs are listed in the report, not fatal unless nothing is usable.
    """
    os.makedirs(out_dir, exist_ok=True)
    tables = []
    unrecognized = []
    for path in csv_paths:
        try:
            tables.append(load_table(path))
        except (SchemaError, OSError) as exc:
            print(f"skipping: {exc}", file=sys.stderr)
            unrecognized.append(path)
    if not tables:
        raise SchemaError("no recognized CSV inputs")

    charts: dict[str, str] = {}
    for table in tables:
        if table.kind == FIG1:
            stem = os.path.splitext(os.path.basename(table.path))[0]
            charts[table.path] = plot_fig1(table, os.path.join(out_dir, f"{stem}.png"))

    report_path = os.path.join(out_dir, "report.md")
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(render_report(tables, charts, unrecognized))
    return ReportBundle(tuple(csv_paths), out_dir, tuple(charts.values()),
                        report_path, tuple(unrecognized))


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot", description="render bench CSVs into charts and a markdown report")
    parser.add_argument("csvs", nargs="+", metavar="CSV")
    parser.add_argument("--out", required=True, metavar="DIR")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    try:
        bundle = build_report(args.csvs, args.out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for chart in bundle.charts:
        print(f"wrote {chart}")
    print(f"wrote {bundle.report_path}")
    return 0


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
