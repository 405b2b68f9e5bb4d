"""Command-line entry point.

Subcommands wire the parser, the analysis pipeline, the schema generator
and the report renderers together:

    disreqc check FILE       validate and print findings
    disreqc schema FILE      emit star schemas (SQL, JSON, DOT)
    disreqc report FILE      render model documents
    disreqc catalog ...      list/show/order pattern sheets
    disreqc trace FILE ID    print an informational goal's lineage

Exit codes: 0 success (warnings allowed), 1 validation errors, 2 parse
errors, 3 usage, I/O or catalog errors.  Reports go to stdout unless
--out names a directory; diagnostics always go to stderr.  Every file
write is atomic (temp file + rename).
"""

from __future__ import annotations

import dataclasses
import json
import os
import sys
import tempfile
from pathlib import Path

import click

from disreqc import __version__, goal_model
from disreqc.analysis_pipeline import (
    PipelineResult,
    ValidationFinding,
    finding_to_json,
    finding_to_text,
    run_pipeline,
)
from disreqc.figures import save_star_figures
from disreqc.pattern_catalog import (
    Catalog,
    CatalogError,
    PatternCycleError,
    UnknownPatternError,
    builtin_catalog,
    load_catalog,
    resolve_order,
)
from disreqc.report_emitter import (
    render_assoc_st,
    render_assoc_ti,
    render_diagnosis,
    render_formalization,
    render_formalization_csv,
    render_pattern_sheet,
    render_usecase,
)
from disreqc.requirements_dsl import ParseDiagnostic, ParseResult, parse
from disreqc.schema_generator import build_star_schemas, emit_dot, emit_json, emit_sql

MODEL_IDS = ("diagnosis", "usecase", "assoc_st", "assoc_ti", "formalization")

_CATALOG_OPTION = click.option(
    "--catalog",
    "catalog_path",
    type=click.Path(path_type=Path),
    envvar="DISREQC_CATALOG",
    help="Catalog file to use instead of the built-in patterns.",
)


class ExitCodeGroup(click.Group):
    """Group that maps usage and catalog errors to exit code 3."""

    def main(self, *args, standalone_mode: bool = True, **kwargs):  # type: ignore[override]
        # In non-standalone mode click returns ctx.exit's code instead of
        # exiting, which lets usage errors be remapped from 2 to 3 here.
        try:
            rv = super().main(*args, standalone_mode=False, **kwargs)
            code = rv if isinstance(rv, int) else 0
        except click.ClickException as exc:
            exc.show()
            code = 3
        except click.Abort:
            click.echo("Aborted!", err=True)
            code = 3
        if standalone_mode:
            sys.exit(code)
        return code


@click.group(cls=ExitCodeGroup)
@click.version_option(__version__, prog_name="disreqc")
def cli() -> None:
    """Analyze requirements documents for decisional information systems."""


def _read_document(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise click.ClickException(f"cannot read {path}: {exc.strerror or exc}")


def _load_catalog(path: Path | None) -> Catalog:
    if path is None:
        return builtin_catalog()
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise click.ClickException(
            f"cannot read catalog {path}: {exc.strerror or exc}"
        )
    try:
        catalog = load_catalog(text)
    except CatalogError as exc:
        raise click.ClickException(str(exc))
    if not catalog.name:
        catalog = dataclasses.replace(catalog, name=path.stem)
    return catalog


def _print_parse_diagnostics(
    diagnostics: tuple[ParseDiagnostic, ...], file: Path, fmt: str
) -> None:
    for diag in diagnostics:
        if fmt == "jsonl":
            click.echo(
                json.dumps(
                    {
                        "severity": diag.severity,
                        "code": diag.code,
                        "subject": "",
                        "stage": "parse",
                        "message": diag.message,
                        "line": diag.line,
                        "column": diag.column,
                    },
                    ensure_ascii=False,
                ),
                err=True,
            )
        else:
            click.echo(
                f"{file}:{diag.line}:{diag.column}:"
                f" {diag.severity} {diag.code} [parse]: {diag.message}",
                err=True,
            )


def _print_findings(
    findings: tuple[ValidationFinding, ...], file: Path, fmt: str = "text"
) -> None:
    for finding in findings:
        if fmt == "jsonl":
            click.echo(finding_to_json(finding), err=True)
        else:
            click.echo(finding_to_text(finding, str(file)), err=True)


def _parse_file(ctx: click.Context, file: Path, fmt: str = "text") -> ParseResult:
    result = parse(_read_document(file), filename=str(file))
    if not result.ok:
        _print_parse_diagnostics(result.diagnostics, file, fmt)
        ctx.exit(2)
    return result


def _run(
    ctx: click.Context, file: Path, catalog_path: Path | None, fmt: str = "text"
) -> tuple[goal_model.RequirementsModel, PipelineResult]:
    catalog = _load_catalog(catalog_path)
    result = _parse_file(ctx, file, fmt)
    try:
        outcome = run_pipeline(result.model, catalog)
    except UnknownPatternError as exc:
        raise click.ClickException(
            f'catalog "{catalog.name}" does not define required pattern'
            f' "{exc.symbol}"'
        )
    _print_findings(outcome.findings, file, fmt)
    return result.model, outcome


def _write_atomic(path: Path, data: str | bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    handle = tempfile.NamedTemporaryFile(
        mode,
        dir=path.parent,
        prefix=f".{path.name}.",
        delete=False,
        **({} if isinstance(data, bytes) else {"encoding": "utf-8", "newline": ""}),
    )
    try:
        with handle as out:
            out.write(data)
        os.replace(handle.name, path)
    except BaseException:
        os.unlink(handle.name)
        raise


@cli.command()
@click.argument("file", type=click.Path(path_type=Path))
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "jsonl"]),
    default="text",
    show_default=True,
    help="Render findings as human-readable text or one JSON object per line.",
)
@_CATALOG_OPTION
@click.option(
    "--strict", is_flag=True, help="Treat warnings as errors for the exit code."
)
@click.pass_context
def check(
    ctx: click.Context, file: Path, fmt: str, catalog_path: Path | None, strict: bool
) -> None:
    """Validate FILE and print every finding."""
    _, outcome = _run(ctx, file, catalog_path, fmt)
    if outcome.errors() or (strict and outcome.warnings()):
        ctx.exit(1)


@cli.command()
@click.argument("file", type=click.Path(path_type=Path))
@click.option(
    "--emit",
    "emits",
    type=click.Choice(["sql", "json", "dot"]),
    multiple=True,
    required=True,
    help="Output format; may be repeated.",
)
@click.option(
    "--out",
    "out_dir",
    type=click.Path(path_type=Path, file_okay=False),
    help="Directory to write files into (default: print to stdout).",
)
@_CATALOG_OPTION
@click.pass_context
def schema(
    ctx: click.Context,
    file: Path,
    emits: tuple[str, ...],
    out_dir: Path | None,
    catalog_path: Path | None,
) -> None:
    """Generate star schemas from FILE."""
    model, outcome = _run(ctx, file, catalog_path)
    if outcome.errors():
        ctx.exit(1)
    schemas = build_star_schemas(model)
    emitters = {"sql": emit_sql, "json": emit_json, "dot": emit_dot}
    stem = file.stem or "schemas"
    for kind in dict.fromkeys(emits):
        rendered = emitters[kind](schemas)
        if out_dir is not None:
            _write_atomic(out_dir / f"{stem}.{kind}", rendered)
        else:
            click.echo(rendered, nl=False)


@cli.command()
@click.argument("file", type=click.Path(path_type=Path))
@click.option(
    "--model",
    "model_id",
    type=click.Choice(MODEL_IDS + ("all",)),
    required=True,
    help="Which model document to render.",
)
@click.option(
    "--out",
    "out_dir",
    type=click.Path(path_type=Path, file_okay=False),
    help="Directory to write files into (default: print to stdout).",
)
@click.option(
    "--csv",
    "with_csv",
    is_flag=True,
    help="Also export the formalization table as CSV.",
)
@click.option(
    "--figures",
    "with_figures",
    is_flag=True,
    help="Also render one PNG figure per star schema (requires --out).",
)
@_CATALOG_OPTION
@click.pass_context
def report(
    ctx: click.Context,
    file: Path,
    model_id: str,
    out_dir: Path | None,
    with_csv: bool,
    with_figures: bool,
    catalog_path: Path | None,
) -> None:
    """Render model documents from FILE.

    A document is rendered as long as the pipeline stage that builds it
    succeeded, even when a later stage failed.
    """
    if with_figures and out_dir is None:
        raise click.UsageError("--figures requires --out")
    model, outcome = _run(ctx, file, catalog_path)
    requested = list(MODEL_IDS) if model_id == "all" else [model_id]
    artifacts = {
        "diagnosis": outcome.diagnosis,
        "usecase": outcome.usecase,
        "assoc_st": outcome.assoc_st,
        "assoc_ti": outcome.assoc_ti,
        "formalization": outcome.formalization,
    }
    needed = set(requested)
    if with_csv or with_figures:
        needed.add("formalization")
    if any(artifacts[name] is None for name in needed):
        ctx.exit(1)
    renderers = {
        "diagnosis": render_diagnosis,
        "usecase": render_usecase,
        "assoc_st": render_assoc_st,
        "assoc_ti": render_assoc_ti,
        "formalization": render_formalization,
    }
    extensions = {"usecase": "dot"}
    for name in requested:
        rendered = renderers[name](artifacts[name])
        if out_dir is not None:
            _write_atomic(out_dir / f"{name}.{extensions.get(name, 'md')}", rendered)
        else:
            click.echo(rendered, nl=False)
    if with_csv:
        rendered = render_formalization_csv(artifacts["formalization"])
        if out_dir is not None:
            _write_atomic(out_dir / "formalization.csv", rendered)
        else:
            click.echo(rendered, nl=False)
    if with_figures:
        save_star_figures(build_star_schemas(model), out_dir)


@cli.group()
def catalog() -> None:
    """Inspect pattern catalogs."""


@catalog.command("list")
@_CATALOG_OPTION
def catalog_list(catalog_path: Path | None) -> None:
    """Print the symbol of every pattern in the catalog."""
    for symbol in _load_catalog(catalog_path).symbols():
        click.echo(symbol)


@catalog.command("show")
@click.argument("symbol")
@_CATALOG_OPTION
@click.pass_context
def catalog_show(ctx: click.Context, symbol: str, catalog_path: Path | None) -> None:
    """Print the full pattern sheet of SYMBOL."""
    pattern = _load_catalog(catalog_path).find(symbol)
    if pattern is None:
        click.echo(f'unknown pattern "{symbol}"', err=True)
        ctx.exit(3)
    click.echo(render_pattern_sheet(pattern), nl=False)


@catalog.command("order")
@click.argument("symbols", nargs=-1, required=True)
@_CATALOG_OPTION
@click.pass_context
def catalog_order(
    ctx: click.Context, symbols: tuple[str, ...], catalog_path: Path | None
) -> None:
    """Print the symbols' requires-closure in dependency order."""
    try:
        order = resolve_order(_load_catalog(catalog_path), list(symbols))
    except (UnknownPatternError, PatternCycleError) as exc:
        click.echo(str(exc), err=True)
        ctx.exit(3)
    for symbol in order:
        click.echo(symbol)


@cli.command()
@click.argument("file", type=click.Path(path_type=Path))
@click.argument("goal_id")
@_CATALOG_OPTION
@click.pass_context
def trace(
    ctx: click.Context, file: Path, goal_id: str, catalog_path: Path | None
) -> None:
    """Print GOAL_ID's lineage from informational goal up to the business."""
    model, outcome = _run(ctx, file, catalog_path)
    if outcome.assoc_ti is None:
        ctx.exit(1)
    try:
        chain = goal_model.trace(model, goal_id)
    except goal_model.UnknownGoalError as exc:
        click.echo(str(exc), err=True)
        ctx.exit(3)
    except (goal_model.WrongKindError, goal_model.BrokenChainError) as exc:
        click.echo(str(exc), err=True)
        ctx.exit(1)
    for line in chain.as_lines():
        click.echo(line)


main = cli

if __name__ == "__main__":
    main()
