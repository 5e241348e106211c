"""Terminal output for the lab CLI."""
from __future__ import annotations

from typing import Iterable, Optional, Union

from rich.console import Console, RenderableType
from rich.table import Table
from rich.text import Text

from fglab.approx import ApproximationReport, BestApproxResult
from fglab.checks import RootScan
from fglab.config.models import ScenarioMetadata
from fglab.core.report import CheckReport

from .runner import ItemResult, ScenarioOutcome


def _verdict(item: ItemResult) -> Text:
    if item.error is not None:
        return Text("error", style="bold red")
    if item.trace is not None:
        status = item.trace.status
        style = "green" if item.trace.converged else "yellow"
        return Text(f"{status.kind.value} @ {status.at_iter}", style=style)
    passed = item.passed
    if passed is True:
        return Text("pass", style="green")
    if passed is False:
        return Text("fail", style="red")
    return Text("done", style="cyan")


def _detail(item: ItemResult) -> str:
    if item.error is not None:
        return item.error
    if item.trace is not None:
        limit = item.trace.status.limit
        return "" if limit is None else f"limit {limit:.12g}"
    res = item.result
    if isinstance(res, CheckReport):
        w = res.witness
        return "" if w is None else f"witness ({w.x:.6g}, {w.y:.6g}) margin {w.margin:.3g}"
    if isinstance(res, RootScan):
        if res.whole_domain:
            return f"every grid point ({len(res)})"
        return ", ".join(f"{p:.12g}" for p in res.points) or "none"
    if isinstance(res, BestApproxResult):
        return f"dist {res.dist:.12g} at " + ", ".join(f"{p:.12g}" for p in res.points)
    if isinstance(res, ApproximationReport):
        c = res.conclusion
        return f"z = {c.z:.12g}" if c.exists_z else "no common fixed point in P_M(x0)"
    return ""


class LabConsole:
    def __init__(self, console: Optional[Console] = None):
        self.console = console or Console(highlight=False, soft_wrap=True)

    def print_text(
        self, message: Union[str, Text, RenderableType], color: str = "", bold: bool = False
    ) -> None:
        if isinstance(message, str):
            style = f"bold {color}".strip() if bold else color
            self.console.print(Text(message, style=style) if style else Text(message))
            return
        self.console.print(message)

    def error(self, message: str) -> None:
        self.print_text(f"error: {message}", color="red", bold=True)

    def show_scenarios(self, scenarios: Iterable[ScenarioMetadata]) -> None:
        table = Table(title="scenarios", show_lines=False)
        table.add_column("name", style="bold")
        table.add_column("scope")
        table.add_column("description")
        for meta in scenarios:
            table.add_row(meta.name, meta.scope.value, meta.description)
        self.console.print(table)

    def show_outcome(self, outcome: ScenarioOutcome) -> None:
        table = Table(title=outcome.scenario)
        table.add_column("item", style="bold")
        table.add_column("kind")
        table.add_column("result")
        table.add_column("detail", overflow="fold")
        for item in outcome.items:
            table.add_row(item.name, item.kind, _verdict(item), _detail(item))
        self.console.print(table)
        for exp in outcome.expectations:
            if not exp.met:
                self.print_text(f"unmet expectation on '{exp.item}':", color="red")
                for msg in exp.messages:
                    self.print_text(f"  - {msg}", color="red")
        if outcome.ok:
            self.print_text(f"{outcome.scenario}: ok", color="green", bold=True)
        else:
            self.print_text(f"{outcome.scenario}: FAILED", color="red", bold=True)
