"""Command line entry point: ``fglab list | run | example | check | iterate | approx``."""
from __future__ import annotations

import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Iterable, List, Optional, Sequence

import click

from fglab import get_version
from fglab.cli.console import LabConsole
from fglab.cli.recorder import FORMATS, REPORT, ReportRecorder
from fglab.cli.runner import ALL_PARTS, APPROXIMATIONS, CHECKS, ITERATIONS, run_scenario
from fglab.config.loader import SCENARIO_SUFFIXES
from fglab.config.manager import ScenarioManager
from fglab.core.errors import FglabError
from fglab.utils.logging import setup_logging

EXIT_OK = 0
EXIT_UNMET = 1
EXIT_ERROR = 2


@dataclass
class LabContext:
    manager: ScenarioManager
    console: LabConsole


def run_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    """Flags shared by every command that executes scenarios."""
    options = [
        click.option("--grid-n", type=click.IntRange(min=2), help="Grid points per interval."),
        click.option("--inset", type=float, help="Absolute inset at open interval ends."),
        click.option("--tol", type=float, help="Comparison slack for inequality checks."),
        click.option("--max-iter", type=click.IntRange(min=1), help="Iteration cap."),
        click.option("--out", type=click.Path(file_okay=False), help="Output directory."),
        click.option(
            "--format", "output_format", type=click.Choice(FORMATS), default=REPORT,
            show_default=True, help="What to write next to the traces.",
        ),
        click.option("--sidecar", is_flag=True, help="Also write run.meta.json with timings."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _scenario_files(directory: Path) -> List[Path]:
    return sorted(p for p in directory.iterdir() if p.is_file() and p.suffix in SCENARIO_SUFFIXES)


def _expand_refs(refs: Iterable[str]) -> List[str]:
    out: List[str] = []
    for ref in refs:
        p = Path(ref)
        if p.is_dir():
            out.extend(str(f) for f in _scenario_files(p))
        else:
            out.append(ref)
    return out


def _execute(
    lab: LabContext,
    refs: Sequence[str],
    parts: Sequence[str],
    *,
    grid_n: Optional[int],
    inset: Optional[float],
    tol: Optional[float],
    max_iter: Optional[int],
    out: Optional[str],
    output_format: str,
    sidecar: bool,
) -> int:
    base = lab.manager
    settings = base.settings.merged(grid_n=grid_n, inset=inset, tol=tol, max_iter=max_iter)
    manager = ScenarioManager(settings, base.scenario_dirs)
    recorder = ReportRecorder(out or settings.resolve("out_dir"), output_format, sidecar)
    code = EXIT_OK
    for ref in refs:
        started_at = datetime.now(timezone.utc).isoformat()
        t0 = time.perf_counter()
        try:
            scenario = manager.load(ref)
        except FglabError as err:
            lab.console.error(str(err))
            code = max(code, EXIT_ERROR)
            continue
        outcome = run_scenario(scenario, parts)
        lab.console.show_outcome(outcome)
        meta = {
            "started_at": started_at,
            "wall_time_s": round(time.perf_counter() - t0, 6),
            "source": str(scenario.source) if scenario.source else None,
            "parts": list(parts),
        }
        recorder.save(outcome, meta)
        code = max(code, outcome.exit_code)
    return code


def _single(parts: Sequence[str]) -> Callable[..., Any]:
    """Body of the one-scenario commands; ``parts`` picks what runs."""

    @click.argument("scenario")
    @run_options
    @click.pass_context
    def command(ctx: click.Context, scenario: str, **opts: Any) -> None:
        ctx.exit(_execute(ctx.obj, [scenario], parts, **opts))

    return command


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(get_version(), prog_name="fglab")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="Settings YAML.")
@click.option("--log-level", type=str, help="Log level (overrides the settings file).")
@click.option("--log-file", type=click.Path(dir_okay=False), help="Also log at DEBUG to this file.")
@click.option(
    "--scenario-dir", multiple=True, type=click.Path(file_okay=False),
    help="Extra directory searched for scenario files; may repeat.",
)
@click.pass_context
def cli(
    ctx: click.Context,
    config_path: Optional[str],
    log_level: Optional[str],
    log_file: Optional[str],
    scenario_dir: tuple,
) -> None:
    """Check (f,g)-weak contractivity, run fixed point iterations and approximation batteries."""
    console = LabConsole()
    try:
        settings = ScenarioManager.load_settings(config_path)
        setup_logging(log_level or settings.resolve("log_level"), log_file)
    except (FglabError, ValueError) as err:
        console.error(str(err))
        ctx.exit(EXIT_ERROR)
    ctx.obj = LabContext(ScenarioManager(settings, scenario_dir), console)


@cli.command("list")
@click.pass_obj
def list_cmd(lab: LabContext) -> None:
    """List built-in and user scenarios."""
    outcome = lab.manager.discover()
    lab.console.show_scenarios(outcome.scenarios)
    for err in outcome.errors:
        lab.console.print_text(f"skipped {err.path}: {err.message}", color="yellow")


@cli.command("run")
@click.argument("paths", nargs=-1)
@click.option("--all-builtins", is_flag=True, help="Run every built-in scenario.")
@run_options
@click.pass_context
def run_cmd(ctx: click.Context, paths: tuple, all_builtins: bool, **opts: Any) -> None:
    """Run scenario files, directories of them, or scenario names."""
    lab: LabContext = ctx.obj
    refs = _expand_refs(paths)
    if all_builtins:
        refs.extend(lab.manager.list_builtins())
    if not refs:
        raise click.UsageError("give at least one scenario path or --all-builtins")
    ctx.exit(_execute(lab, refs, ALL_PARTS, **opts))


@cli.command("example")
@click.argument("name")
@run_options
@click.pass_context
def example_cmd(ctx: click.Context, name: str, **opts: Any) -> None:
    """Run one built-in scenario by name."""
    lab: LabContext = ctx.obj
    if name not in lab.manager.list_builtins():
        known = ", ".join(lab.manager.list_builtins())
        raise click.BadParameter(
            f"no built-in scenario '{name}' (known: {known})", param_hint="NAME"
        )
    ctx.exit(_execute(lab, [name], ALL_PARTS, **opts))


cli.command("check", help="Run only the checks of a scenario.")(_single((CHECKS,)))
cli.command("iterate", help="Run only the iterations of a scenario.")(_single((ITERATIONS,)))
cli.command("approx", help="Run only the approximations of a scenario.")(_single((APPROXIMATIONS,)))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Console-script entry; returns the exit status instead of raising SystemExit."""
    try:
        rv = cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="fglab",
            standalone_mode=False,
        )
    except click.ClickException as err:
        err.show()
        return err.exit_code
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_UNMET
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
