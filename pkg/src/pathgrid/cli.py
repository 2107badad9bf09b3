"""Batch CLI over the query pipeline.

Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 result cap
exceeded. Machine-readable output goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import json
import sys

import click

from . import details, overview, report
from .graph import GraphError
from .ingest import IngestError, export_json, load_csv, load_flights, load_json
from .overview import ViewError, build_connectivity_matrix, build_intermediate_table, parse_metric
from .query import ParseError, QueryError, ResultCapExceeded, parse_query, enumerate_paths
from .server import ServerConfig, create_app


@click.group()
def cli():
    """Path connectivity analytics over multivariate directed graphs."""


@cli.command()
@click.option("--nodes", type=click.Path(exists=True), help="Typed-header node CSV.")
@click.option("--edges", type=click.Path(exists=True), help="Typed-header edge CSV.")
@click.option("--flights", type=click.Path(exists=True), help="BTS-style flight extract CSV.")
@click.option("--out", type=click.Path(), default="-", help="Output graph JSON (default stdout).")
def ingest(nodes, edges, flights, out):
    """Convert CSV inputs into the JSON graph format."""
    if flights:
        graph = load_flights(flights)
    elif nodes and edges:
        graph = load_csv(nodes, edges)
    else:
        raise click.UsageError("provide --flights or both --nodes and --edges")
    text = export_json(graph)
    if out == "-":
        click.echo(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        click.echo(f"wrote {out} ({len(graph.nodes)} nodes, {len(graph.edges)} edges)", err=True)


def _load_graph(path):
    return load_json(path)


def _read_dsl(dsl, dsl_file):
    if dsl and dsl_file:
        raise click.UsageError("use either --dsl or --dsl-file, not both")
    if dsl_file:
        with open(dsl_file, "r", encoding="utf-8") as fh:
            return fh.read()
    if dsl:
        return dsl
    raise click.UsageError("a query is required (--dsl or --dsl-file)")


def _run(graph_path, dsl, dsl_file, cap=None):
    graph = _load_graph(graph_path)
    text = _read_dsl(dsl, dsl_file)
    try:
        query = parse_query(text, graph)
    except ParseError as exc:
        _print_caret(text, exc)
        raise
    if cap is not None:
        from dataclasses import replace

        query = replace(query, result_cap=cap)
    return graph, enumerate_paths(graph, query)


def _print_caret(text: str, exc: ParseError):
    lines = text.splitlines() or [""]
    line = lines[min(exc.line, len(lines)) - 1]
    click.echo(line, err=True)
    click.echo(" " * (exc.column - 1) + "^", err=True)


_graph_opt = click.option("--graph", "graph_path", required=True, type=click.Path(exists=True),
                          help="Graph JSON file.")
_dsl_opts = [
    click.option("--dsl", help="Query text."),
    click.option("--dsl-file", type=click.Path(exists=True), help="File containing the query."),
]


def _with_dsl(f):
    for opt in reversed(_dsl_opts):
        f = opt(f)
    return _graph_opt(f)


@cli.command()
@_with_dsl
@click.option("--cap", type=int, default=None, help="Result cap override.")
def query(graph_path, dsl, dsl_file, cap):
    """Run a query and print summary counts."""
    _, result = _run(graph_path, dsl, dsl_file, cap)
    hist = result.length_histogram()
    click.echo(f"paths={len(result.paths)}")
    click.echo(f"start_nodes={len(result.n_start)}")
    click.echo(f"end_nodes={len(result.n_end)}")
    for length, count in hist.items():
        click.echo(f"length[{length}]={count}")


def _emit_view(view, metric_spec, fmt, aggregate_rows, aggregate_cols, out):
    metric = parse_metric(metric_spec, view.result.query.max_len)
    if aggregate_rows:
        view = overview.aggregate(view, "rows", aggregate_rows)
    if aggregate_cols:
        view = overview.aggregate(view, "cols", aggregate_cols)
    if fmt == "csv":
        text = overview.view_to_csv(view, metric)
    else:
        text = json.dumps(overview.view_to_dict(view, metric), indent=2)
    if out == "-":
        click.echo(text, nl=False)
        if not text.endswith("\n"):
            click.echo()
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


@cli.command()
@_with_dsl
@click.option("--metric", default="count", help="count | min_length | per_length_count | attr_fraction:a:op:v")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--aggregate-rows", default=None, help="Categorical attribute to group rows by.")
@click.option("--aggregate-cols", default=None, help="Categorical attribute to group columns by.")
@click.option("--out", type=click.Path(), default="-")
def matrix(graph_path, dsl, dsl_file, metric, fmt, aggregate_rows, aggregate_cols, out):
    """Emit the connectivity matrix as CSV or JSON."""
    graph, result = _run(graph_path, dsl, dsl_file)
    view = build_connectivity_matrix(graph, result)
    _emit_view(view, metric, fmt, aggregate_rows, aggregate_cols, out)


@cli.command()
@_with_dsl
@click.option("--metric", default="count")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--aggregate-rows", default=None)
@click.option("--out", type=click.Path(), default="-")
def table(graph_path, dsl, dsl_file, metric, fmt, aggregate_rows, out):
    """Emit the intermediate node table as CSV or JSON."""
    graph, result = _run(graph_path, dsl, dsl_file)
    view = build_intermediate_table(graph, result)
    _emit_view(view, metric, fmt, aggregate_rows, None, out)


@cli.command()
@_with_dsl
@click.option("--view", "view_name", type=click.Choice(["matrix", "table"]), default="matrix")
@click.option("--axis", type=click.Choice(["rows", "cols"]), default="rows")
@click.option("--strategy", type=click.Choice(["olo", "attribute"]), default="olo")
@click.option("--attribute", default=None, help="Attribute for attribute sort.")
@click.option("--direction", type=click.Choice(["asc", "desc"]), default="asc")
@click.option("--metric", default="count", help="Metric feeding the OLO distance vectors.")
def reorder(graph_path, dsl, dsl_file, view_name, axis, strategy, attribute, direction, metric):
    """Print a reordered permutation of row/column keys, one id per line."""
    graph, result = _run(graph_path, dsl, dsl_file)
    view = (
        build_connectivity_matrix(graph, result)
        if view_name == "matrix"
        else build_intermediate_table(graph, result)
    )
    if strategy == "attribute":
        if not attribute:
            raise click.UsageError("--strategy attribute needs --attribute")
        strat = ("attribute", attribute, direction)
    else:
        strat = ("olo",)
    m = parse_metric(metric, result.query.max_len)
    for key_id in overview.reorder(view, axis, strat, m):
        click.echo(key_id)


@cli.command()
@_with_dsl
@click.option("--row", required=True, help="Matrix row key (start node or group id).")
@click.option("--col", required=True, help="Matrix column key (end node or group id).")
@click.option("--group-by", default=None, help="Categorical display attribute for motif keys.")
def paths(graph_path, dsl, dsl_file, row, col, group_by):
    """List the motif hierarchy for one connectivity-matrix cell."""
    graph, result = _run(graph_path, dsl, dsl_file)
    view = build_connectivity_matrix(graph, result)
    selected = details.resolve_selection(view, [(row, col)])
    motifs = details.group_by_motif(graph, selected, group_by)
    click.echo(json.dumps(details.motifs_to_dict(graph, motifs), indent=2))


@cli.command("report")
@_with_dsl
@click.option("--metric", default="count")
@click.option("--out-dir", required=True, type=click.Path(), help="Report output directory.")
def report_cmd(graph_path, dsl, dsl_file, metric, out_dir):
    """Write matrix/table CSVs plus heatmap PNG figures to a directory."""
    graph, result = _run(graph_path, dsl, dsl_file)
    m = parse_metric(metric, result.query.max_len)
    written = report.write_report(
        build_connectivity_matrix(graph, result),
        build_intermediate_table(graph, result),
        out_dir,
        m,
    )
    for name in written:
        click.echo(name)


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--static-dir", type=click.Path(exists=True), default=None, help="Frontend bundle to serve at /.")
def serve(config_path, host, port, static_dir):
    """Run the HTTP JSON API server."""
    import uvicorn

    config = ServerConfig.from_file(config_path) if config_path else ServerConfig()
    if host:
        config.host = host
    if port:
        config.port = port
    if static_dir:
        config.static_dir = static_dir
    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")


def main():
    try:
        cli.main(standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(1)
    except ResultCapExceeded as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    except (ParseError, QueryError, ViewError, IngestError, GraphError, OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
