"""Rich console output for the storegate command."""

import logging
from typing import Optional

from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

console = Console()
err_console = Console(stderr=True)


def setup_logging(level: str = "WARNING") -> None:
    """Route the ``storegate`` loggers to a rich handler on standard error."""
    logger = logging.getLogger("storegate")
    for handler in list(logger.handlers):
        if isinstance(handler, RichHandler):
            logger.removeHandler(handler)
    logger.addHandler(RichHandler(console=err_console, show_path=False, markup=False))
    logger.setLevel(level.upper())
    logger.propagate = False


def print_pipeline_config(config: dict):
    """Print a pipeline configuration."""
    table = Table(title="Configuration", box=box.ROUNDED)
    table.add_column("Setting", style="cyan")
    table.add_column("Value", style="green")

    table.add_row("Mode", config["mode"])
    table.add_row("Events", "all" if config["events"] is None else str(config["events"]))
    if config.get("in"):
        table.add_row("Input", config["in"])
    if config.get("out"):
        table.add_row("Output", config["out"])
    table.add_row("Seed", str(config["seed"]))
    for alg in config["algorithms"]:
        params = " ".join(f"{k}={v}" for k, v in alg["params"].items())
        table.add_row(f"{alg['kind']}", f"{alg['name']} {params}".rstrip())

    console.print(table)
    console.print()


def print_run_report(report: dict):
    """Print per-event counters of a run."""
    table = Table(title=f"Run ({report['mode']})", box=box.ROUNDED)
    for column in ("Event", "Records", "Retrieves", "Faults", "Decodes", "Locked", "ms"):
        table.add_column(column, justify="right")
    table.add_column("Digest", style="dim")

    for event in report["events"]:
        table.add_row(
            str(event["event"]),
            str(event["records"]),
            str(event["retrieves"]),
            str(event["faults"]),
            str(event["decodes"]),
            str(event["locked_refusals"]),
            f"{event['elapsed_ms']:.2f}",
            event["digest"][:12],
        )

    console.print(table)
    totals = report["totals"]
    summary = (f"[cyan]{totals['events']}[/] event(s), [cyan]{totals['records']}[/] record(s), "
               f"[cyan]{totals['faults']}[/] fault(s) in {report['elapsed_ms']:.1f} ms")
    if report.get("output"):
        summary += f"\nwritten to [green]{report['output']}[/]"
    console.print(Panel(summary, title="Done", border_style="green"))


def print_records_table(rows: list[dict], event: Optional[int] = None):
    """Print store file records as a table."""
    title = "Records" if event is None else f"Records (event {event})"
    table = Table(title=title, box=box.ROUNDED)
    table.add_column("Event", justify="right")
    table.add_column("Class id", style="cyan", justify="right")
    table.add_column("Type", style="green")
    table.add_column("Key", style="yellow")
    table.add_column("Bytes", justify="right")
    table.add_column("Links", justify="right")
    for row in rows:
        table.add_row(str(row["event"]), str(row["class_id"]), row["type_name"], row["key"],
                      str(row["size"]), str(row["links"]))
    console.print(table)


def print_conflicts(report: dict, source: str):
    """Print a class id conflict report."""
    conflicts = report["duplicate_ids"] + report["duplicate_names"]
    if not conflicts:
        console.print(f"[green]OK[/] {source}: no conflicts")
        return

    table = Table(title=f"{len(conflicts)} conflict(s) in {source}", box=box.ROUNDED, border_style="red")
    table.add_column("Kind", style="red")
    table.add_column("First", style="cyan")
    table.add_column("Second", style="cyan")
    for c in conflicts:
        table.add_row(
            c["kind"],
            f"{c['first']['id']} {c['first']['type_name']}",
            f"{c['second']['id']} {c['second']['type_name']}",
        )
    console.print(table)


def print_bench(report: dict):
    table = Table(title=f"Retrieve benchmark ({report['flavor']})", box=box.ROUNDED)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("Objects", f"{report['objects']:,}")
    table.add_row("Retrieves", f"{report['retrieves']:,}")
    table.add_row("Median", f"{report['median_ns']:.0f} ns")
    table.add_row("p99", f"{report['p99_ns']:.0f} ns")
    table.add_row("Total", f"{report['total_s']:.3f} s")
    console.print(table)


def print_error(category: str, message: str):
    """One machine-parsable line on standard error."""
    err_console.print(f"error: {category}: {message}", markup=False, highlight=False, soft_wrap=True)


def print_warning(message: str):
    err_console.print(f"[bold yellow]Warning:[/] {message}")


def print_info(message: str):
    console.print(f"[dim]ℹ[/] {message}")
