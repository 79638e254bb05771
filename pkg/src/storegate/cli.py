"""StoreGate CLI - pipeline runs, store file inspection, class id tools, benchmark."""

import copy
import json
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

import typer

from . import __version__, ui
from .bench import run_bench
from .clid import ClidDatabase, TypeEntry, assign_id, load_db, register_runtime, save_db, verify
from .config import DEFAULT_CONFIG, load_config, save_config
from .errors import ConfigError, IoError, StoreGateError
from .persistence import parse_image
from .pipeline import load_pipeline_config, run_pipeline

app = typer.Typer(
    name="storegate",
    help="Blackboard transient data store: pipelines, store files and class ids",
    add_completion=False,
)
clid_app = typer.Typer(help="Manage class id databases", add_completion=False)
app.add_typer(clid_app, name="clid")

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@contextmanager
def _errors():
    """Turn StoreGate errors into one stderr line and the category's exit code."""
    try:
        yield
    except StoreGateError as e:
        ui.print_error(e.category, str(e))
        raise typer.Exit(e.exit_code)


def _settings(ctx: typer.Context) -> dict:
    return ctx.obj if isinstance(ctx.obj, dict) else load_config()


@app.callback()
def main_callback(
    ctx: typer.Context,
    log_level: Optional[str] = typer.Option(
        None,
        "--log-level",
        help="Logging level (DEBUG, INFO, WARNING, ERROR). Defaults to the settings file.",
    ),
    settings_file: Optional[Path] = typer.Option(
        None,
        "--settings",
        help="Path to a storegate.yaml / storegate.toml settings file",
    ),
):
    with _errors():
        settings = load_config(settings_file)
        level = (log_level or settings.get("log_level") or "WARNING").upper()
        if level not in LOG_LEVELS:
            raise ConfigError(f"unknown log level '{level}'")
    ui.setup_logging(level)
    ctx.obj = settings


@app.command()
def run(
    ctx: typer.Context,
    config_file: Path = typer.Option(
        ...,
        "--config", "-c",
        help="Pipeline configuration (line grammar, .yaml or .toml)",
    ),
    events: Optional[int] = typer.Option(
        None,
        "--events", "-n",
        min=0,
        help="Override the number of events",
    ),
    out: Optional[Path] = typer.Option(
        None,
        "--out", "-o",
        help="Override the output store file",
    ),
    as_json: bool = typer.Option(
        False,
        "--json",
        help="Print the run report as JSON",
    ),
):
    """
    Run a pipeline configuration.

    Example:
        storegate run --config configs/produce.sg
        storegate run -c configs/consume.sg --json
    """
    settings = _settings(ctx)
    with _errors():
        config = load_pipeline_config(config_file)
        if events is not None:
            config.events = events
        elif config.events is None and settings["pipeline"].get("events") is not None:
            config.events = int(settings["pipeline"]["events"])
        if out is not None:
            config.override_output(out)
        if config.clid_db is None and settings.get("clid_db"):
            config.clid_db = Path(settings["clid_db"])

        if not as_json:
            ui.print_pipeline_config(config.to_dict())
        report = run_pipeline(config)

    if as_json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        ui.print_run_report(report.to_dict())


@app.command()
def dump(
    input_path: Path = typer.Option(
        ...,
        "--in", "-i",
        help="Store file to list",
    ),
    event: Optional[int] = typer.Option(
        None,
        "--event", "-e",
        help="Only list this event",
    ),
    output_format: str = typer.Option(
        "text",
        "--format", "-f",
        help="Output format: text, table or json",
    ),
):
    """
    List the records of a store file (the file is only read).

    Example:
        storegate dump --in tracks.sg
        storegate dump --in tracks.sg --event 1 --format table
    """
    with _errors():
        if output_format not in ("text", "table", "json"):
            raise ConfigError(f"unknown format '{output_format}' (expected text, table or json)")
        try:
            data = input_path.read_bytes()
        except OSError as e:
            raise IoError(input_path, e) from e
        image = parse_image(data)
        events = [image.event(event)] if event is not None else image.events

    rows = [
        {
            "event": ev.number,
            "class_id": record.class_id,
            "type_name": record.type_name,
            "key": record.key,
            "size": len(record.payload),
            "links": len(record.links),
        }
        for ev in events
        for record in ev.records
    ]

    if output_format == "json":
        print(json.dumps(rows, indent=2))
    elif output_format == "table":
        ui.print_records_table(rows, event)
    else:
        print("event class_id type key bytes links")
        for row in rows:
            print(f"{row['event']} {row['class_id']} {row['type_name']} {row['key']} "
                  f"{row['size']} {row['links']}")


@clid_app.command("gen")
def clid_gen(
    name: str = typer.Option(..., "--name", help="Type name to assign a class id to"),
    db_path: Path = typer.Option(..., "--db", help="Class id database file (created if missing)"),
):
    """
    Assign a class id to a type name and add it to the database.

    Running it again for the same name changes nothing.
    """
    with _errors():
        db = load_db(db_path) if db_path.exists() else ClidDatabase(source_path=db_path)
        try:
            entry = TypeEntry(assign_id(name), name)
        except StoreGateError:
            raise
        except ValueError as e:
            raise ConfigError(str(e)) from e
        updated = register_runtime(db, entry)
        if updated is db:
            ui.print_info(f"{entry.id} {name} already present")
            return
        save_db(updated, db_path)
    print(f"{entry.id} {name}")


@clid_app.command("verify")
def clid_verify(
    db_path: Path = typer.Option(..., "--db", help="Class id database file"),
    as_json: bool = typer.Option(False, "--json", help="Print the conflict report as JSON"),
):
    """
    Check a database for ids or names bound twice. Exits 4 on conflicts.
    """
    with _errors():
        report = verify(load_db(db_path))

    if as_json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        ui.print_conflicts(report.to_dict(), str(db_path))

    if not report.is_clean():
        ui.print_error("conflict", f"{len(report)} conflict(s) in {db_path}")
        raise typer.Exit(4)


@app.command()
def bench(
    ctx: typer.Context,
    objects: Optional[int] = typer.Option(None, "--objects", "-k", min=1, help="Objects in the store"),
    retrieves: Optional[int] = typer.Option(None, "--retrieves", "-m", min=1, help="Retrieves to time"),
    keyed: bool = typer.Option(False, "--keyed", help="Retrieve by key (default flavor)"),
    default: bool = typer.Option(False, "--default", help="Retrieve without a key"),
    ranged: bool = typer.Option(False, "--range", help="Retrieve ranges over a type"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for the key order"),
    as_json: bool = typer.Option(False, "--json", help="Print the report as JSON"),
):
    """
    Time store retrieves.

    Example:
        storegate bench --objects 100000 --retrieves 1000000 --keyed --json
    """
    settings = _settings(ctx)["bench"]
    with _errors():
        chosen = [name for name, flag in (("keyed", keyed), ("default", default), ("range", ranged)) if flag]
        if len(chosen) > 1:
            raise ConfigError("choose at most one of --keyed, --default, --range")
        report = run_bench(
            objects if objects is not None else int(settings["objects"]),
            retrieves if retrieves is not None else int(settings["retrieves"]),
            flavor=chosen[0] if chosen else "keyed",
            seed=seed if seed is not None else int(settings["seed"]),
        )

    if as_json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        ui.print_bench(report.to_dict())


@app.command()
def init(
    path: Path = typer.Argument(
        Path("."),
        help="Directory to write the settings file into",
    ),
    force: bool = typer.Option(
        False,
        "--force", "-f",
        help="Overwrite an existing settings file",
    ),
):
    """
    Write a storegate.yaml settings file with the defaults.
    """
    config_path = path / "storegate.yaml"

    if config_path.exists() and not force:
        ui.print_warning(f"Settings already exist: {config_path}")
        ui.print_info("Use --force to overwrite")
        raise typer.Exit(1)

    with _errors():
        save_config(copy.deepcopy(DEFAULT_CONFIG), config_path)
    ui.print_info(f"Created settings: {config_path}")


@app.command()
def version():
    """Show version information."""
    ui.console.print(f"storegate v{__version__}")


def main():
    """Entry point."""
    app()


if __name__ == "__main__":
    main()
