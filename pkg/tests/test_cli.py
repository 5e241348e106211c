from __future__ import annotations

import csv
import json
import textwrap
from pathlib import Path

import pytest
import yaml
from click.testing import CliRunner

from fglab.cli import ReportRecorder, trace_rows
from fglab.cli.recorder import TRACE_HEADER
from fglab.core.interval import Interval
from fglab.core.maps import Affine, Branch, PiecewiseMap
from fglab.iteration import RunConfig, picard_iterate
from fglab.main import cli, main


def read_csv(path: Path) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.reader(f))


def write_unmet(root: Path) -> Path:
    path = root / "unmet.yaml"
    path.write_text(
        textwrap.dedent(
            """\
            schema_version: 1
            name: unmet
            domain:
              - {lo: 0, hi: 1}
            maps:
              - name: id
                identity: true
            checks:
              - name: wc
                kind: weakly_contractive
                maps: {t: id}
            expectations:
              - {item: wc, expected: pass}
            """
        ),
        encoding="utf-8",
    )
    return path


def test_list_shows_builtins():
    result = CliRunner().invoke(cli, ["list"])
    assert result.exit_code == 0
    assert "example-2.3" in result.output
    assert "example-1.9" in result.output


def test_version_flag():
    assert main(["--version"]) == 0


def test_example_writes_report_and_traces(tmp_path):
    assert main(["example", "example-2.3", "--out", str(tmp_path)]) == 0
    base = tmp_path / "example-2.3"
    report = yaml.safe_load((base / "report.yaml").read_text(encoding="utf-8"))
    assert report["ok"] is True
    assert report["schema_version"] == 1
    by_name = {item["name"]: item for item in report["items"]}
    assert by_name["fg-min"]["result"]["passed"] is True
    assert by_name["coincidence-from-0.9"]["result"]["status"]["kind"] == "converged"

    rows = read_csv(base / "traces" / "coincidence-from-0.9.csv")
    assert tuple(rows[0]) == TRACE_HEADER
    assert [r[1] for r in rows[1:4]] == ["even", "odd", "even"]
    assert rows[-1][1] == ""
    assert rows[-1][3:] == [""] * 6


def test_reports_are_byte_identical_across_runs(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(["run", "example-2.3", "mann-linear", "--out", str(first)]) == 0
    assert main(["run", "example-2.3", "mann-linear", "--out", str(second)]) == 0
    files = sorted(p.relative_to(first) for p in first.rglob("*") if p.is_file())
    assert Path("mann-linear/traces/mann-half.csv") in files
    for rel in files:
        assert (first / rel).read_bytes() == (second / rel).read_bytes(), rel


def test_check_subcommand_with_csv_format(tmp_path):
    code = main(["check", "example-2.5", "--out", str(tmp_path), "--format", "csv"])
    assert code == 0
    base = tmp_path / "example-2.5"
    assert not (base / "report.yaml").exists()
    assert not (base / "traces").exists()
    rows = read_csv(base / "checks.csv")
    assert rows[0][:3] == ["item", "kind", "passed"]
    verdicts = {r[0]: r[2] for r in rows[1:]}
    assert verdicts["fg-min"] == "false"
    assert verdicts["fg-max"] == "true"


def test_sidecar_carries_run_metadata(tmp_path):
    assert main(["iterate", "mann-linear", "--out", str(tmp_path), "--sidecar"]) == 0
    meta = json.loads((tmp_path / "mann-linear" / "run.meta.json").read_text(encoding="utf-8"))
    assert meta["scenario"] == "mann-linear"
    assert meta["ok"] is True
    assert meta["parts"] == ["iterations"]
    assert meta["wall_time_s"] >= 0
    assert "started_at" in meta


def test_directory_of_scenarios_and_unmet_exit_code(tmp_path):
    scenarios = tmp_path / "scenarios"
    scenarios.mkdir()
    write_unmet(scenarios)
    out = tmp_path / "out"
    assert main(["run", str(scenarios), "--out", str(out)]) == 1
    report = yaml.safe_load((out / "unmet" / "report.yaml").read_text(encoding="utf-8"))
    assert report["ok"] is False
    assert report["diagnostics"]["first_unmet_expectation"] == "wc"


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "no-such-scenario"],
        ["example", "no-such-scenario"],
        ["run"],
        ["run", "example-2.3", "--grid-n", "1"],
    ],
)
def test_error_exit_code(tmp_path, argv):
    assert main([*argv, "--out", str(tmp_path)]) == 2


def test_bad_settings_file(tmp_path):
    bad = tmp_path / "lab.yaml"
    bad.write_text("grid_n: lots\n", encoding="utf-8")
    assert main(["--config", str(bad), "list"]) == 2


def test_settings_file_sets_output_directory(tmp_path):
    out = tmp_path / "from-settings"
    settings = tmp_path / "lab.yaml"
    settings.write_text(f"out_dir: {out}\ngrid_n: 51\n", encoding="utf-8")
    assert main(["--config", str(settings), "approx", "identity-approx"]) == 0
    report = yaml.safe_load((out / "identity-approx" / "report.yaml").read_text(encoding="utf-8"))
    assert [i["part"] for i in report["items"]] == ["approximations"] * 3


def test_trace_rows_end_with_the_last_iterate():
    unit = Interval.closed(0, 1)
    t = PiecewiseMap("T", (Branch(unit, Affine(0.5)),))
    trace = picard_iterate(t, RunConfig(x0=1.0, max_iter=3))
    rows = trace_rows(trace)
    assert len(rows) == trace.steps + 1
    assert rows[0] == ["0", "", "1", "0.5", "", "", "0.5", "", ""]
    assert rows[-1] == ["3", "", "0.125", "", "", "", "", "", ""]


def test_recorder_rejects_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        ReportRecorder(tmp_path, "xml")
