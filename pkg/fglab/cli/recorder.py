"""Writes run artifacts: one report per scenario plus one CSV per iteration trace."""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from fglab import get_version
from fglab.core.report import CheckReport, plain
from fglab.iteration import IterationTrace

from .runner import ScenarioOutcome

REPORT = "report"
CSV = "csv"
FORMATS = (REPORT, CSV)

TRACE_HEADER = ("n", "parity", "x_n", "y_n", "z_n", "v_n", "residual", "alpha_n", "beta_n")
CHECK_HEADER = (
    "item",
    "kind",
    "passed",
    "max_margin",
    "witness_x",
    "witness_y",
    "witness_lhs",
    "witness_rhs",
)


def fmt(value: Optional[float]) -> str:
    """Full double precision, empty for a field the scheme does not use."""
    if value is None:
        return ""
    return format(float(value), ".17g")


def _at(values: Optional[tuple[float, ...]], n: int) -> Optional[float]:
    if values is None or n >= len(values):
        return None
    return values[n]


def trace_rows(trace: IterationTrace) -> List[List[str]]:
    """Row n holds x_n and what step n produced from it; the last row is x_N alone."""
    rows: List[List[str]] = []
    for n in range(trace.steps):
        rows.append(
            [
                str(n),
                trace.parities[n] or "",
                fmt(trace.iterates_x[n]),
                fmt(trace.outputs_y[n]),
                fmt(_at(trace.outputs_z, n)),
                fmt(_at(trace.aux_v, n)),
                fmt(trace.residuals[n]),
                fmt(_at(trace.alphas, n)),
                fmt(_at(trace.betas, n)),
            ]
        )
    last = trace.steps
    rows.append([str(last), "", fmt(trace.iterates_x[last]), "", "", "", "", "", ""])
    return rows


class ReportRecorder:
    """Files land under ``<out_dir>/<scenario>/``; nothing time-dependent goes into them."""

    def __init__(self, out_dir: str | Path, output_format: str = REPORT, sidecar: bool = False):
        if output_format not in FORMATS:
            raise ValueError(f"unknown output format '{output_format}' (expected one of {FORMATS})")
        self.out_dir = Path(out_dir)
        self.output_format = output_format
        self.sidecar = sidecar

    def scenario_dir(self, scenario: str) -> Path:
        return self.out_dir / scenario

    def save(self, outcome: ScenarioOutcome, meta: Optional[Dict[str, Any]] = None) -> List[Path]:
        base = self.scenario_dir(outcome.scenario)
        base.mkdir(parents=True, exist_ok=True)
        written: List[Path] = []
        if self.output_format == REPORT:
            written.append(self.save_report(outcome, base / "report.yaml"))
        else:
            written.append(self.save_checks_csv(outcome, base / "checks.csv"))
        for item in outcome.items:
            if item.trace is not None:
                written.append(self.save_trace(item.trace, base / "traces" / f"{item.name}.csv"))
        if self.sidecar:
            written.append(self.save_sidecar(outcome, base / "run.meta.json", meta or {}))
        return written

    @staticmethod
    def save_report(outcome: ScenarioOutcome, path: Path) -> Path:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            yaml.safe_dump(
                plain(outcome.to_report()),
                f,
                sort_keys=False,
                default_flow_style=False,
                allow_unicode=True,
            )
        return path

    @staticmethod
    def save_trace(trace: IterationTrace, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(TRACE_HEADER)
            writer.writerows(trace_rows(trace))
        return path

    @staticmethod
    def save_checks_csv(outcome: ScenarioOutcome, path: Path) -> Path:
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CHECK_HEADER)
            for item in outcome.items:
                rep = item.result
                if not isinstance(rep, CheckReport):
                    continue
                w = rep.witness
                writer.writerow(
                    [
                        item.name,
                        item.kind,
                        "true" if rep.passed else "false",
                        fmt(rep.max_margin),
                        *(fmt(getattr(w, k)) if w else "" for k in ("x", "y", "lhs", "rhs")),
                    ]
                )
        return path

    @staticmethod
    def save_sidecar(outcome: ScenarioOutcome, path: Path, meta: Dict[str, Any]) -> Path:
        data = {
            "fglab_version": get_version(),
            "scenario": outcome.scenario,
            "ok": outcome.ok,
            **plain(meta),
        }
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, ensure_ascii=False, sort_keys=True)
            f.write("\n")
        return path
