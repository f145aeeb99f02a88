"""Plotter tests, including the golden-report acceptance check.

The golden CSVs were produced once by the bench CLI and frozen; the report's
numeric tables must reproduce them cell for cell.  This package never
imports the bench code, only its CSV files.
"""

import os
import re
import subprocess
import sys

import pytest

from reportplot.fig1chart import plot_fig1
from reportplot.report import render_report
from reportplot.schemas import FIG1, SchemaError, load_table

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def gpath(name: str) -> str:
    return os.path.join(GOLDEN, name)


ALL_GOLDEN = ["fig1.csv", "sweep.csv", "ratios.csv", "bound.csv", "entropy.csv"]


def test_schema_detection():
    kinds = {name: load_table(gpath(name)).kind for name in ALL_GOLDEN}
    assert kinds == {
        "fig1.csv": "fig1",
        "sweep.csv": "records",
        "ratios.csv": "ratios",
        "bound.csv": "bound",
        "entropy.csv": "entropy",
    }


def test_unrecognized_header_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("alpha,beta\n1,2\n")
    with pytest.raises(SchemaError, match="unrecognized header"):
        load_table(str(bad))
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("delta,g\n1\n")
    with pytest.raises(SchemaError, match="line 2"):
        load_table(str(ragged))


def test_plot_fig1_produces_chart(tmp_path):
    table = load_table(gpath("fig1.csv"))
    out = str(tmp_path / "fig1.png")
    plot_fig1(table, out)
    assert os.path.getsize(out) > 1000
    with open(out, "rb") as fh:
        assert fh.read(8) == b"\x89PNG\r\n\x1a\n"


def test_plot_fig1_single_row(tmp_path):
    single = tmp_path / "one.csv"
    single.write_text("delta,g\n3,128\n")
    out = str(tmp_path / "one.png")
    plot_fig1(load_table(str(single)), out)
    assert os.path.getsize(out) > 0


def test_plot_fig1_requires_fig1_schema():
    with pytest.raises(SchemaError):
        plot_fig1(load_table(gpath("sweep.csv")), "/tmp/nope.png")


def _extract_tables(markdown: str) -> list[list[list[str]]]:
    tables = []
    current: list[list[str]] = []
    for line in markdown.splitlines():
        if line.startswith("|"):
            cells = [c.strip() for c in line.strip("|").split("|")]
            if all(set(c) <= {"-"} for c in cells):
                continue  # separator row
            current.append(cells)
        elif current:
            tables.append(current)
            current = []
    if current:
        tables.append(current)
    return tables


def test_report_tables_copy_csv_values_exactly():
    tables = [load_table(gpath(n)) for n in ALL_GOLDEN]
    markdown = render_report(tables)
    rendered = _extract_tables(markdown)
    by_header = {tuple(t[0]): t[1:] for t in rendered}
    for table in tables:
        got = by_header[tuple(table.columns)]
        assert got == [list(r) for r in table.rows], table.path


def test_report_badges():
    markdown = render_report([load_table(gpath("bound.csv")),
                              load_table(gpath("entropy.csv"))])
    assert "**slack >= -2: PASS**" in markdown
    assert re.search(r"\*\*fitted slope: [0-9.]+\*\*", markdown)


def test_report_lists_unrecognized_inputs():
    markdown = render_report([load_table(gpath("fig1.csv"))], None, ["mystery.csv"])
    assert "## Unrecognized inputs" in markdown
    assert "`mystery.csv`" in markdown


def test_report_regeneration_is_identical(tmp_path):
    tables = [load_table(gpath(n)) for n in ALL_GOLDEN]
    a = render_report(tables)
    b = render_report(tables)
    assert a == b
    out1, out2 = str(tmp_path / "a.png"), str(tmp_path / "b.png")
    plot_fig1(load_table(gpath("fig1.csv")), out1)
    plot_fig1(load_table(gpath("fig1.csv")), out2)
    with open(out1, "rb") as f1, open(out2, "rb") as f2:
        assert f1.read() == f2.read()


def test_cli_end_to_end(tmp_path):
    outdir = str(tmp_path / "out")
    cmd = [sys.executable, "-m", "reportplot.cli",
           gpath("fig1.csv"), gpath("sweep.csv"), gpath("bound.csv"),
           "--out", outdir]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert os.path.exists(os.path.join(outdir, "report.md"))
    assert os.path.exists(os.path.join(outdir, "fig1.png"))


def test_cli_no_recognized_inputs_fails(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n1,2\n")
    proc = subprocess.run(
        [sys.executable, "-m", "reportplot.cli", str(bad), "--out", str(tmp_path / "o")],
        capture_output=True, text=True)
    assert proc.returncode == 2


def test_acceptance_criterion_10_golden(tmp_path):
    """Frozen fig1 + sweep CSVs -> exact tables and a chart file."""
    fig1 = load_table(gpath("fig1.csv"))
    sweep = load_table(gpath("sweep.csv"))
    chart = str(tmp_path / "fig1.png")
    plot_fig1(fig1, chart)
    markdown = render_report([fig1, sweep], {fig1.path: chart})

    rendered = {tuple(t[0]): t[1:] for t in _extract_tables(markdown)}
    fig1_ok = rendered[tuple(fig1.columns)] == [list(r) for r in fig1.rows]
    sweep_ok = rendered[tuple(sweep.columns)] == [list(r) for r in sweep.rows]
    chart_ok = os.path.getsize(chart) > 0
    ok = fig1_ok and sweep_ok and chart_ok
    print(f"ACCEPTANCE 10 plotter-golden: {'PASS' if ok else 'FAIL'} -- "
          f"fig1 table exact={fig1_ok}, sweep table exact={sweep_ok}, chart={chart_ok}")
    assert ok


def test_build_report_returns_bundle(tmp_path):
    from reportplot import ReportBundle, build_report

    outdir = str(tmp_path / "bundle")
    bundle = build_report([gpath("fig1.csv"), gpath("bound.csv")], outdir)
    assert isinstance(bundle, ReportBundle)
    assert bundle.out_dir == outdir
    assert len(bundle.charts) == 1 and bundle.charts[0].endswith("fig1.png")
    assert os.path.exists(bundle.report_path)
    assert bundle.unrecognized == ()
