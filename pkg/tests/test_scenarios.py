from __future__ import annotations

import itertools
import textwrap
from pathlib import Path

import pytest

from fglab.checks import InequalityKind, InequalityTag, MapBundle, check_inequality, evaluate_pairs
from fglab.checks.scanner import build_grid
from fglab.cli import run_scenario
from fglab.config import (
    CheckKind,
    ConfigError,
    LabSettings,
    ScenarioManager,
    ScenarioRoot,
    ScenarioScope,
    list_builtins,
)
from fglab.config.loader import discover_scenarios

MAPS = """\
    maps:
      - name: T
        branches:
          - subdomain: {lo: 0, hi: 1}
            kind: affine
            slope: "1/2"
      - name: id
        identity: true
"""

REQUIRED_BUILTINS = {
    "example-1.3",
    "example-1.9",
    "example-1.10",
    "example-2.3",
    "example-2.5",
    "mann-linear",
    "ishikawa-linear",
}


def write_scenario(root: Path, body: str, name: str = "tiny", filename: str = "") -> Path:
    root.mkdir(parents=True, exist_ok=True)
    header = f"schema_version: 1\nname: {name}\ndomain:\n  - {{lo: 0, hi: 1}}\n"
    path = root / (filename or f"{name}.yaml")
    path.write_text(header + textwrap.dedent(body), encoding="utf-8")
    return path


def load(path: Path, settings: LabSettings | None = None):
    return ScenarioManager(settings).load(str(path))


def test_builtins_cover_the_required_names():
    names = list_builtins()
    assert REQUIRED_BUILTINS <= set(names)
    assert len(names) == len(set(names))
    assert names == sorted(names)


@pytest.mark.parametrize("name", list_builtins())
def test_every_builtin_meets_its_expectations(name):
    outcome = run_scenario(ScenarioManager().load(name))
    assert outcome.errors == []
    assert outcome.first_unmet is None, outcome.first_unmet
    assert outcome.exit_code == 0


def test_min_form_is_dominated_by_max_form_on_builtins():
    manager = ScenarioManager()
    compared = 0
    for name in manager.list_builtins():
        sc = manager.load(name)
        for check in sc.checks:
            if check.kind is not CheckKind.FG_MIN:
                continue
            bundle = MapBundle(*(sc.map(check.maps[r]) for r in ("t", "f", "g")))
            xs = build_grid(bundle.maps(), sc.grid)[::7]
            pairs = list(itertools.product(xs.tolist(), repeat=2))
            lo = evaluate_pairs(InequalityKind(InequalityTag.FG_MIN), bundle, sc.psi, pairs)
            hi = evaluate_pairs(InequalityKind(InequalityTag.FG_MAX), bundle, sc.psi, pairs)
            assert all(a.rhs <= b.rhs for a, b in zip(lo, hi))
            min_rep = check_inequality(
                InequalityKind(InequalityTag.FG_MIN), bundle, sc.psi, sc.grid
            )
            if min_rep.passed:
                max_rep = check_inequality(
                    InequalityKind(InequalityTag.FG_MAX), bundle, sc.psi, sc.grid
                )
                assert max_rep.passed
            compared += 1
    assert compared > 0


def test_tiny_scenario_runs_clean(tmp_path):
    path = write_scenario(
        tmp_path,
        MAPS
        + """\
    checks:
      - name: wc
        kind: weakly_contractive
        maps: {t: T}
      - name: k
        kind: contraction
        k: "2/5"
        maps: {t: T}
    iterations:
      - name: picard
        scheme: picard
        maps: {t: T}
        x0: 1
    expectations:
      - {item: wc, expected: pass}
      - item: k
        expected: fail
        witness: {x: 0, y: 1, lhs: "1/2", rhs: "2/5"}
      - {item: picard, status: converged, limit: 0, tol: 1.0e-7}
    """,
    )
    outcome = run_scenario(load(path))
    assert outcome.ok
    assert outcome.exit_code == 0
    assert [i.name for i in outcome.items] == ["wc", "k", "picard"]
    report = outcome.to_report()
    assert report["ok"] is True
    assert "diagnostics" not in report


def test_empty_scenario_is_ok(tmp_path):
    sc = load(write_scenario(tmp_path, ""))
    assert sc.is_empty
    outcome = run_scenario(sc)
    assert outcome.items == []
    assert outcome.exit_code == 0


def test_unmet_expectation_exits_one(tmp_path):
    path = write_scenario(
        tmp_path,
        MAPS
        + """\
    checks:
      - name: wc
        kind: weakly_contractive
        maps: {t: T}
    expectations:
      - {item: wc, expected: fail}
    """,
    )
    outcome = run_scenario(load(path))
    assert outcome.exit_code == 1
    assert outcome.first_unmet.item == "wc"
    assert outcome.first_unmet.messages == ["expected fail, got pass"]
    assert outcome.to_report()["diagnostics"]["first_unmet_expectation"] == "wc"


def test_item_error_is_reported_and_exits_two(tmp_path):
    path = write_scenario(
        tmp_path,
        MAPS
        + """\
    iterations:
      - name: outside
        scheme: picard
        maps: {t: T}
        x0: 2
      - name: inside
        scheme: picard
        maps: {t: T}
        x0: 1
    expectations:
      - {item: outside, status: converged}
    """,
    )
    outcome = run_scenario(load(path))
    assert outcome.exit_code == 2
    bad = outcome.item("outside")
    assert bad.error.startswith("DomainError:")
    assert outcome.item("inside").trace.converged
    assert not outcome.expectations[0].met
    assert outcome.to_report()["diagnostics"]["errors"][0]["item"] == "outside"


def test_expectations_on_skipped_parts_are_ignored(tmp_path):
    path = write_scenario(
        tmp_path,
        MAPS
        + """\
    checks:
      - name: wc
        kind: weakly_contractive
        maps: {t: T}
    iterations:
      - name: picard
        scheme: picard
        maps: {t: T}
        x0: 1
    expectations:
      - {item: wc, expected: fail}
      - {item: picard, status: converged}
    """,
    )
    outcome = run_scenario(load(path), parts=("iterations",))
    assert [i.name for i in outcome.items] == ["picard"]
    assert outcome.ok


@pytest.mark.parametrize(
    "body",
    [
        # unknown map reference
        MAPS + "    checks:\n      - {name: c, kind: weakly_contractive, maps: {t: S}}\n",
        # duplicate map names
        MAPS + "      - name: id\n        identity: true\n",
        # a rational that does not parse
        "    maps:\n      - name: T\n        branches:\n"
        "          - subdomain: {lo: 0, hi: 1}\n            kind: affine\n"
        '            slope: "1/0"\n',
        # expectation on an item that is not declared
        MAPS + "    expectations:\n      - {item: ghost, expected: pass}\n",
        # unknown field
        "    colour: blue\n",
        # contraction without k
        MAPS + "    checks:\n      - {name: c, kind: contraction, maps: {t: T}}\n",
        # mann without alpha
        MAPS
        + "    iterations:\n"
        + "      - {name: m, scheme: mann, maps: {t: T, f: id, g: id}, x0: 0}\n",
    ],
)
def test_invalid_scenarios_raise_config_error(tmp_path, body):
    with pytest.raises(ConfigError):
        load(write_scenario(tmp_path, body))


def test_missing_schema_version(tmp_path):
    path = tmp_path / "bare.yaml"
    path.write_text("name: bare\ndomain:\n  - {lo: 0, hi: 1}\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="schema_version"):
        load(path)


def test_map_off_the_scenario_domain(tmp_path):
    body = """\
    maps:
      - name: short
        branches:
          - subdomain: {lo: 0, hi: "1/2"}
            kind: constant
            value: 0
    """
    with pytest.raises(ConfigError, match="scenario domain"):
        load(write_scenario(tmp_path, body))


def test_unknown_scenario_name():
    with pytest.raises(ConfigError, match="no scenario"):
        ScenarioManager().load("no-such-scenario")


def test_settings_resolution_order():
    s = LabSettings()
    assert s.resolve("tol") == 1e-12
    assert s.resolve("tol", 1e-6) == 1e-6
    assert LabSettings(tol="1/1000").resolve("tol", 1e-6) == 0.001
    merged = s.merged(grid_n=5, tol=None)
    assert merged.grid_n == 5
    assert merged.tol is None


def test_settings_file(tmp_path):
    good = tmp_path / "lab.yaml"
    good.write_text("grid_n: 9\ntol: 1/1000\n", encoding="utf-8")
    settings = ScenarioManager.load_settings(good)
    assert (settings.grid_n, settings.tol) == (9, 0.001)
    assert ScenarioManager.load_settings(None) == LabSettings()

    bad = tmp_path / "bad.yaml"
    bad.write_text("colour: red\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        ScenarioManager.load_settings(bad)
    listed = tmp_path / "list.yaml"
    listed.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="mapping"):
        ScenarioManager.load_settings(listed)


def test_grid_override_from_settings(tmp_path):
    path = write_scenario(tmp_path, "grid:\n  points_per_interval: 31\n")
    assert load(path).grid.points_per_interval == 31
    assert load(path, LabSettings(grid_n=7)).grid.points_per_interval == 7


def test_user_directory_discovery(tmp_path):
    user = tmp_path / "mine"
    write_scenario(user, "", name="mine")
    write_scenario(user, "", name="example-2.3", filename="shadow.yaml")
    (user / "broken.yaml").write_text("name: [unclosed\n", encoding="utf-8")
    (user / "nameless.yml").write_text("description: no name\n", encoding="utf-8")
    (user / "notes.txt").write_text("ignored\n", encoding="utf-8")

    outcome = ScenarioManager(scenario_dirs=[user]).discover()
    assert outcome.find("mine").scope is ScenarioScope.USER
    # built-ins come first, so a user file cannot shadow one
    assert outcome.find("example-2.3").scope is ScenarioScope.BUILTIN
    assert sorted(e.path.name for e in outcome.errors) == ["broken.yaml", "nameless.yml"]
    assert "mine" not in ScenarioManager(scenario_dirs=[user]).list_builtins()


def test_discovery_walks_nested_directories_and_checks_headers(tmp_path):
    root = tmp_path / "lab"
    write_scenario(root / "nested" / "deeper", "", name="deep")
    write_scenario(root / ".hidden", "", name="secret")
    (root / "long.yaml").write_text(f"name: long\ndescription: {'x' * 1025}\n", encoding="utf-8")
    (root / "spaced.yaml").write_text(
        "name: spaced\ndescription: |\n  two\n  lines\n", encoding="utf-8"
    )

    outcome = discover_scenarios([ScenarioRoot(root, ScenarioScope.USER)])
    assert outcome.names() == ["deep", "spaced"]
    assert outcome.find("spaced").description == "two lines"
    assert [e.path.name for e in outcome.errors] == ["long.yaml"]
    assert outcome.errors[0].message.startswith("description:")


def test_stated_min_form_counterexample_is_not_the_worst_pair():
    outcome = run_scenario(ScenarioManager().load("example-2.5"))
    rep = outcome.item("fg-min").result
    assert not rep.passed
    w = rep.witness
    # the scan finds the jump of T at 2/3, worse than the stated pair (3/4, 2/3)
    assert min(w.x, w.y) == pytest.approx(2 / 3, abs=1e-12)
    assert max(w.x, w.y) - 2 / 3 < 1e-5
    assert w.lhs == pytest.approx(1 / 6, abs=1e-6)
    assert w.rhs == pytest.approx(0.0, abs=1e-6)
    stated = rep.probe_at(0.75, 2 / 3, 1e-12)
    assert stated.violated
    assert stated.margin == pytest.approx(1 / 12, abs=1e-12)
    assert rep.max_margin > stated.margin
