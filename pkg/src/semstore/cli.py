"""Command line entry points for the store engine."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import agents, capture, schema, serialize, service, snap
from .triples import Graph, Iri


def _load_config(config_path: str | None) -> service.ServiceConfig:
    if config_path:
        return service.ServiceConfig.from_file(config_path)
    return service.ServiceConfig()


def _load_graph(config_path: str | None, data_dir: str | None) -> Graph:
    """Snapshot from the data dir when present, otherwise a fresh seed."""
    config = _load_config(config_path)
    if data_dir:
        config.data_dir = Path(data_dir)
    snapshot_file = config.data_dir / service.SNAPSHOT_NAME
    if snapshot_file.exists():
        return service.load_snapshot(config.data_dir)
    return service.seed_store(config)


@click.group()
def main() -> None:
    """Semantic Auto Store: ontology-backed catalog, search, recommendations."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--port", type=int, default=None, help="Override the configured port.")
@click.option("--ui", "ui_dir", type=click.Path(exists=True, file_okay=False), default=None)
def serve(config_path: str | None, port: int | None, ui_dir: str | None) -> None:
    """Run the HTTP service."""
    config = _load_config(config_path)
    if port is not None:
        config.port = port
    if ui_dir is not None:
        config.ui_dir = Path(ui_dir)
    try:
        service.serve(config)
    except service.SeedError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)


@main.command(name="capture")
@click.option("--summary", type=click.Path(exists=True), required=True)
@click.option("--terms", type=click.Path(exists=True), required=True)
@click.option("--schematic", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--prefix", default="store:", show_default=True)
def capture_cmd(summary: str, terms: str, schematic: str, out: str, prefix: str) -> None:
    """Run the five-stage capture pipeline and write canonical triples."""
    graph, report = capture.run_capture_pipeline(
        Path(summary).read_text(encoding="utf-8"),
        Path(terms).read_text(encoding="utf-8"),
        Path(schematic).read_text(encoding="utf-8"),
        Iri(prefix),
    )
    for stage in report.stages:
        click.echo(f"{stage.name}: {stage.status.value}")
        for message in stage.messages:
            click.echo(f"  - {message}")
    if not report.ok:
        sys.exit(1)
    Path(out).write_text(serialize.emit_triples(graph), encoding="utf-8")
    click.echo(f"wrote {graph.size()} triples to {out}")


@main.command(name="import")
@click.option("--format", "fmt", type=click.Choice(["triples", "rdfxml", "flatxml"]), required=True)
@click.option("--in", "infile", type=click.Path(exists=True), required=True)
@click.option("--id-attr", default=None, help="Id attribute for flatxml records.")
@click.option("--prefix", default="store:", show_default=True)
@click.option("--data-dir", envvar="STORE_DATA_DIR", default="data", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def import_cmd(
    fmt: str, infile: str, id_attr: str | None, prefix: str, data_dir: str, config_path: str | None
) -> None:
    """Merge an external file into the stored snapshot."""
    graph = _load_graph(config_path, data_dir)
    text = Path(infile).read_text(encoding="utf-8")
    if fmt == "triples":
        incoming = serialize.parse_triples(text).triples()
    elif fmt == "rdfxml":
        incoming = serialize.parse_rdfxml_subset(text).triples()
    else:
        if not id_attr:
            raise click.UsageError("--id-attr is required for flatxml imports")
        incoming = serialize.parse_flat_xml(text, id_attr, Iri(prefix))
    inserted = sum(1 for t in sorted(incoming, key=serialize.render_line) if graph.insert(t))
    service.snapshot(graph, Path(data_dir))
    click.echo(f"inserted {inserted} new triples ({graph.size()} total)")


@main.command(name="export")
@click.option("--format", "fmt", type=click.Choice(["triples", "rdfxml"]), required=True)
@click.option("--out", type=click.Path(), default=None, help="Defaults to stdout.")
@click.option("--data-dir", envvar="STORE_DATA_DIR", default="data", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def export_cmd(fmt: str, out: str | None, data_dir: str, config_path: str | None) -> None:
    """Write the stored graph as canonical triples or RDF/XML."""
    graph = _load_graph(config_path, data_dir)
    text = serialize.emit_triples(graph) if fmt == "triples" else serialize.emit_rdfxml(graph)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--q", required=True, help="Search query.")
@click.option("--limit", type=int, default=10, show_default=True)
@click.option("--path", "path_expr", default=None, help="Path expression rooted at each hit.")
@click.option("--data-dir", envvar="STORE_DATA_DIR", default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def search(q: str, limit: int, path_expr: str | None, data_dir: str | None, config_path: str | None) -> None:
    """Taxonomy-aware keyword search; optionally follow a path from each hit."""
    from . import paths

    graph = _load_graph(config_path, data_dir)
    index = agents.index_labels(graph)
    try:
        results = agents.search(index, graph, q, limit)
    except agents.EmptyQueryError as exc:
        raise click.UsageError(str(exc)) from exc
    automaton = paths.compile_path(paths.parse_path(path_expr)) if path_expr else None
    for r in results:
        click.echo(f"{r.rank:2d}. {r.iri.value}  score={float(r.score):.3f}  via={r.matched_via.value}")
        if automaton is not None:
            for node in sorted(paths.eval_path(graph, automaton, r.iri), key=lambda i: i.value):
                click.echo(f"      -> {node.value}")


@main.command()
@click.option("--profile", "profile_file", type=click.Path(exists=True), required=True)
@click.option("--rules", "rules_file", type=click.Path(exists=True), required=True)
@click.option("--limit", type=int, default=10, show_default=True)
@click.option("--data-dir", envvar="STORE_DATA_DIR", default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def recommend(
    profile_file: str, rules_file: str, limit: int, data_dir: str | None, config_path: str | None
) -> None:
    """Derive needs from a profile JSON file and rank matching products.

    The profile file holds {"fluents": [{"category":..., "key":..., "value":...}]}.
    """
    graph = _load_graph(config_path, data_dir)
    rules = snap.parse_rules(Path(rules_file).read_text(encoding="utf-8"))
    raw = json.loads(Path(profile_file).read_text(encoding="utf-8"))
    situation = snap.Situation.initial("cli")
    for item in raw.get("fluents", []):
        situation = snap.assert_fluent(
            situation,
            snap.Fluent(snap.FluentCategory(item["category"]), item["key"], item["value"]),
        )
    for rec in agents.recommend(graph, situation, rules, limit):
        click.echo(
            f"{rec.product.value}  score={float(rec.score):.3f}  "
            f"need={rec.need.target.value} (rule {rec.need.source_rule})"
        )


@main.command()
@click.option("--data-dir", envvar="STORE_DATA_DIR", default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def validate(data_dir: str | None, config_path: str | None) -> None:
    """Run schema validation over the stored graph; exit 1 on errors."""
    graph = _load_graph(config_path, data_dir)
    report = schema.validate_schema(graph)
    for issue in report.errors:
        click.echo(f"error [{issue.code}] {issue.message}")
    for issue in report.warnings:
        click.echo(f"warning [{issue.code}] {issue.message}")
    click.echo(f"{len(report.errors)} errors, {len(report.warnings)} warnings")
    if not report.ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
