"""Operator command line: import data, resolve pre-annotation, serve, report.

Exit codes are stable: 0 ok, 2 schema/validation error in an input file,
3 missing prerequisite, 4 unfinalized annotation sets.
"""

from __future__ import annotations

import copy
from pathlib import Path

import click

from .conditions import ConditionLabel, dump_annotations
from .errors import (
    DanglingRefError,
    DuplicateError,
    ImportConflictError,
    MissingDataError,
    SchemaError,
    SpanMismatchError,
    UnfinalizedASError,
    UnknownFrameError,
    WorkbenchError,
)
from .report import ReportFormat, TABLE_NAMES, emit_report
from .server import build_report_table, serve
from .store import Workbench

EXIT_SCHEMA = 2
EXIT_MISSING = 3
EXIT_UNFINALIZED = 4

_SCHEMA_ERRORS = (SchemaError, SpanMismatchError, DuplicateError, DanglingRefError,
                  UnknownFrameError, ImportConflictError)


def _fail(exc: WorkbenchError) -> SystemExit:
    click.echo(f"error: {exc}", err=True)
    if isinstance(exc, _SCHEMA_ERRORS):
        return SystemExit(EXIT_SCHEMA)
    if isinstance(exc, MissingDataError):
        return SystemExit(EXIT_MISSING)
    if isinstance(exc, UnfinalizedASError):
        return SystemExit(EXIT_UNFINALIZED)
    return SystemExit(1)


@click.group()
@click.option(
    "--data-dir",
    envvar="FW_DATA_DIR",
    default="fw_data",
    show_default=True,
    type=click.Path(path_type=Path),
    help="Workbench data directory (env: FW_DATA_DIR).",
)
@click.pass_context
def main(ctx: click.Context, data_dir: Path) -> None:
    """Workbench for reviewing machine pre-annotated frame-semantic text."""
    ctx.obj = data_dir


@main.command("import")
@click.argument("kind", type=click.Choice(["framebank", "corpus", "preannot", "annotations"]))
@click.argument("path", type=click.Path(exists=True, path_type=Path))
@click.option(
    "--condition",
    type=click.Choice([ConditionLabel.HUMAN.value]),
    default=None,
    help="Condition label for an annotations import (machine conditions come from resolve).",
)
@click.pass_obj
def cmd_import(data_dir: Path, kind: str, path: Path, condition: str | None) -> None:
    """Validate and import an input file into the data directory."""
    wb = Workbench(data_dir)
    label = ConditionLabel(condition) if condition else None
    if kind == "annotations" and label is None:
        click.echo("error: annotations import needs --condition", err=True)
        raise SystemExit(EXIT_MISSING)
    try:
        summary = wb.import_file(kind, path, condition=label)
    except WorkbenchError as exc:
        raise _fail(exc)
    state = "unchanged" if summary.pop("unchanged") else "imported"
    name = summary.pop("kind")
    counts = ", ".join(f"{k}: {v}" for k, v in summary.items())
    click.echo(f"{name} {state} ({counts})")


@main.command("resolve")
@click.pass_obj
def cmd_resolve(data_dir: Path) -> None:
    """Resolve imported parser hypotheses into the machine and editable
    machine-plus-human conditions."""
    wb = Workbench(data_dir)
    try:
        summary = wb.resolve_imports()
    except WorkbenchError as exc:
        raise _fail(exc)
    tally = ", ".join(f"{n} {code}" for code, n in summary["warnings"].items()) or "none"
    click.echo(f"created: {summary['created']}, warnings: {tally}")


@main.command("serve")
@click.option("--listen", default="127.0.0.1:8700", show_default=True, help="host:port to bind.")
@click.option(
    "--tokens-file",
    envvar="FW_TOKENS_FILE",
    type=click.Path(exists=True, path_type=Path),
    default=None,
    help="JSON file mapping auth token -> annotator id (env: FW_TOKENS_FILE).",
)
@click.option(
    "--webui-dir",
    envvar="FW_WEBUI_DIR",
    type=click.Path(path_type=Path),
    default=None,
    help="Static web UI bundle to serve at / (env: FW_WEBUI_DIR).",
)
@click.pass_obj
def cmd_serve(data_dir: Path, listen: str, tokens_file: Path | None, webui_dir: Path | None) -> None:
    """Run the annotation review API server."""
    try:
        serve(data_dir, listen=listen, tokens_file=tokens_file, webui_dir=webui_dir)
    except WorkbenchError as exc:
        raise _fail(exc)


@main.command("report")
@click.option("--tables", default="1,2,3,4,5", show_default=True,
              help="Comma-separated table numbers.")
@click.option("--conditions", default="human,machine,machine_human", show_default=True,
              help="Conditions to include in tables 1-3.")
@click.option("--format", "fmt", default="csv", show_default=True,
              type=click.Choice([f.value for f in ReportFormat]))
@click.option("--out", default="reports", show_default=True,
              type=click.Path(path_type=Path), help="Output directory.")
@click.option("--precision", default=None, type=int,
              help="Override decimal places for every table.")
@click.pass_obj
def cmd_report(
    data_dir: Path, tables: str, conditions: str, fmt: str, out: Path, precision: int | None
) -> None:
    """Write the evaluation report tables."""
    wanted: list[str] = []
    for part in tables.split(","):
        part = part.strip()
        matches = [n for n in TABLE_NAMES if n.startswith(f"table{part}")]
        if not matches:
            click.echo(f"error: unknown table {part!r}", err=True)
            raise SystemExit(EXIT_MISSING)
        wanted.extend(matches)
    labels = []
    for part in conditions.split(","):
        try:
            labels.append(ConditionLabel(part.strip()))
        except ValueError:
            click.echo(f"error: unknown condition {part!r}", err=True)
            raise SystemExit(EXIT_MISSING) from None

    wb = Workbench(data_dir)
    try:
        wb.load()
    except WorkbenchError as exc:
        raise _fail(exc)
    missing = [label.value for label in labels if label.value not in wb.conditions]
    if missing:
        click.echo(f"error: conditions not materialized: {', '.join(missing)}", err=True)
        raise SystemExit(EXIT_MISSING)

    selected = {label.value: wb.conditions[label.value] for label in labels}
    out.mkdir(parents=True, exist_ok=True)
    extension = {"csv": "csv", "json": "json", "markdown": "md"}[fmt]
    for name in wanted:
        try:
            table = build_report_table(_scoped(wb, selected), name)
        except WorkbenchError as exc:
            raise _fail(exc)
        if precision is not None:
            table.precision = precision
        path = out / f"{name}.{extension}"
        path.write_bytes(emit_report(table, ReportFormat(fmt)))
        click.echo(str(path))


def _scoped(wb: Workbench, selected: dict) -> Workbench:
    """A shallow view of the workbench restricted to the chosen conditions."""
    view = copy.copy(wb)
    view.conditions = selected
    return view


@main.command("export")
@click.option("--condition", required=True,
              type=click.Choice([label.value for label in ConditionLabel]))
@click.option("--out", required=True, type=click.Path(path_type=Path))
@click.pass_obj
def cmd_export(data_dir: Path, condition: str, out: Path) -> None:
    """Export one condition's annotation sets as JSONL."""
    wb = Workbench(data_dir)
    try:
        wb.load()
    except WorkbenchError as exc:
        raise _fail(exc)
    cond = wb.conditions.get(condition)
    if cond is None:
        click.echo(f"error: condition {condition} not materialized", err=True)
        raise SystemExit(EXIT_MISSING)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(dump_annotations(cond, wb.bank))
    n = sum(len(v) for v in cond.annotations.values())
    click.echo(f"{out} ({n} annotation sets)")


if __name__ == "__main__":
    main()
