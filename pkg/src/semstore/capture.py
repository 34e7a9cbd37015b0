"""Ontology capture: schematic text, elaboration forms, five-stage pipeline.

The schematic language is line-oriented so catalogs are diffable and
self-contained; lowering turns it into plain class/property/instance triples.
The pipeline walks five fixed activities, stops at the first failure, and
always reports all five stages.
"""

from __future__ import annotations

import csv
import io
import re
import shlex
from dataclasses import dataclass, field
from enum import Enum

from . import ns, schema
from .triples import Graph, Iri, Literal, Triple

STAGE_NAMES = (
    "Organizing and Scoping",
    "Data Collection",
    "Data Analysis",
    "Initial Ontology Development",
    "Ontology Refinement and Validation",
)

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class SchematicSyntaxError(ValueError):
    """All problems found in a schematic file, each with its line number."""

    def __init__(self, errors: list[tuple[int, str]]) -> None:
        self.errors = errors
        super().__init__("; ".join(f"line {line}: {msg}" for line, msg in errors))


class FormError(ValueError):
    """Bad term-description or summary form input."""


@dataclass(slots=True)
class SchematicDoc:
    name: str = ""
    kinds: list[tuple[str, str | None]] = field(default_factory=list)
    subkinds: list[tuple[str, str]] = field(default_factory=list)
    individuals: list[tuple[str, str]] = field(default_factory=list)
    relations: list[tuple[str, str | None, str | None]] = field(default_factory=list)
    links: list[tuple[str, str, str]] = field(default_factory=list)
    attrs: list[tuple[str, str, str]] = field(default_factory=list)


@dataclass(frozen=True, slots=True)
class TermDescription:
    index: int
    term: str
    description: str


@dataclass(frozen=True, slots=True)
class DescriptionSummary:
    project: str
    purpose: str
    context: str
    viewpoint: str
    analyst: str = ""
    version: str = ""
    reviewer: str = ""


class StageStatus(str, Enum):
    OK = "ok"
    FAILED = "failed"
    NOT_RUN = "not run"


@dataclass(slots=True)
class StageResult:
    name: str
    status: StageStatus
    messages: list[str] = field(default_factory=list)


@dataclass(slots=True)
class CaptureReport:
    stages: list[StageResult]
    produced_triples: int = 0

    @property
    def ok(self) -> bool:
        return all(s.status is StageStatus.OK for s in self.stages)


def parse_schematic(text: str) -> SchematicDoc:
    """Parse the line-oriented schematic grammar; all-or-nothing."""
    doc = SchematicDoc()
    errors: list[tuple[int, str]] = []
    named = False
    kind_names: set[str] = set()
    pending_subkinds: list[tuple[int, str, str]] = []

    def ident(token: str, lineno: int, what: str) -> str | None:
        if not _IDENT_RE.match(token):
            errors.append((lineno, f"{what} {token!r} is not an identifier"))
            return None
        return token

    for lineno, raw in enumerate(text.split("\n"), start=1):
        try:
            tokens = shlex.split(raw, comments=True)
        except ValueError as exc:
            errors.append((lineno, f"unbalanced quoting: {exc}"))
            continue
        if not tokens:
            continue
        keyword, args = tokens[0], tokens[1:]
        if keyword == "ontology":
            if named:
                errors.append((lineno, "duplicate ontology statement"))
            elif len(args) != 1 or ident(args[0], lineno, "ontology name") is None:
                errors.append((lineno, "expected: ontology NAME"))
            else:
                doc.name = args[0]
                named = True
            continue
        if not named:
            errors.append((lineno, "statement precedes the ontology naming line"))
            continue
        if keyword == "kind":
            if len(args) == 1 and ident(args[0], lineno, "kind") is not None:
                doc.kinds.append((args[0], None))
                kind_names.add(args[0])
            elif len(args) == 2 and ident(args[0], lineno, "kind") is not None:
                doc.kinds.append((args[0], args[1]))
                kind_names.add(args[0])
            else:
                errors.append((lineno, 'expected: kind NAME ["label"]'))
        elif keyword == "subkind":
            if len(args) == 3 and args[1] == "of":
                child = ident(args[0], lineno, "subkind child")
                parent = ident(args[2], lineno, "subkind parent")
                if child and parent:
                    pending_subkinds.append((lineno, child, parent))
            else:
                errors.append((lineno, "expected: subkind CHILD of PARENT"))
        elif keyword == "individual":
            if len(args) == 3 and args[1] == ":":
                name = ident(args[0], lineno, "individual")
                kind = ident(args[2], lineno, "individual kind")
                if name and kind:
                    doc.individuals.append((name, kind))
            else:
                errors.append((lineno, "expected: individual NAME : KIND"))
        elif keyword == "relation":
            if len(args) == 1 and ident(args[0], lineno, "relation") is not None:
                doc.relations.append((args[0], None, None))
            elif (
                len(args) == 5
                and args[1] == "from"
                and args[3] == "to"
                and ident(args[0], lineno, "relation") is not None
                and ident(args[2], lineno, "relation domain") is not None
                and ident(args[4], lineno, "relation range") is not None
            ):
                doc.relations.append((args[0], args[2], args[4]))
            else:
                errors.append((lineno, "expected: relation NAME [from KIND to KIND]"))
        elif keyword == "rel":
            if len(args) == 3 and all(ident(a, lineno, "rel argument") is not None for a in args):
                doc.links.append((args[0], args[1], args[2]))
            else:
                errors.append((lineno, "expected: rel RELNAME A B"))
        elif keyword == "attr":
            if len(args) == 3 and ident(args[0], lineno, "attr entity") is not None and ident(
                args[1], lineno, "attr key"
            ) is not None:
                doc.attrs.append((args[0], args[1], args[2]))
            else:
                errors.append((lineno, 'expected: attr ENTITY KEY "value"'))
        else:
            errors.append((lineno, f"unknown keyword {keyword!r}"))

    for lineno, child, parent in pending_subkinds:
        if parent not in kind_names:
            errors.append((lineno, f"subkind parent {parent!r} is not a declared kind"))
        else:
            doc.subkinds.append((child, parent))

    if errors:
        raise SchematicSyntaxError(sorted(errors))
    return doc


def lower_schematic(doc: SchematicDoc, prefix: Iri) -> set[Triple]:
    """Lower a parsed schematic into triples under ``prefix``."""
    def res(name: str) -> Iri:
        return Iri(prefix.value + name)

    triples: set[Triple] = set()
    for name, label in doc.kinds:
        triples.add(Triple(res(name), ns.RDF_TYPE, ns.RDFS_CLASS))
        if label is not None:
            triples.add(Triple(res(name), ns.RDFS_LABEL, Literal(label)))
    for child, parent in doc.subkinds:
        triples.add(Triple(res(child), ns.RDFS_SUBCLASS_OF, res(parent)))
    for name, kind in doc.individuals:
        triples.add(Triple(res(name), ns.RDF_TYPE, res(kind)))
    for name, domain, range_ in doc.relations:
        triples.add(Triple(res(name), ns.RDF_TYPE, ns.RDF_PROPERTY))
        if domain is not None:
            triples.add(Triple(res(name), ns.RDFS_DOMAIN, res(domain)))
        if range_ is not None:
            triples.add(Triple(res(name), ns.RDFS_RANGE, res(range_)))
    for rel, a, b in doc.links:
        triples.add(Triple(res(a), res(rel), res(b)))
    for entity, key, value in doc.attrs:
        triples.add(Triple(res(entity), res(key), Literal(value)))
    return triples


def render_schematic(doc: SchematicDoc) -> str:
    """Canonical text for a document; parse(render(doc)) == doc."""
    lines = [f"ontology {doc.name}"]
    for name, label in doc.kinds:
        lines.append(f'kind {name} "{label}"' if label is not None else f"kind {name}")
    for child, parent in doc.subkinds:
        lines.append(f"subkind {child} of {parent}")
    for name, kind in doc.individuals:
        lines.append(f"individual {name} : {kind}")
    for name, domain, range_ in doc.relations:
        if domain is not None and range_ is not None:
            lines.append(f"relation {name} from {domain} to {range_}")
        else:
            lines.append(f"relation {name}")
    for rel, a, b in doc.links:
        lines.append(f"rel {rel} {a} {b}")
    for entity, key, value in doc.attrs:
        lines.append(f'attr {entity} {key} "{value}"')
    return "\n".join(lines) + "\n"


def parse_term_form(text: str) -> list[TermDescription]:
    """Rows of ``index, term, description``; tab or comma separated."""
    rows: list[TermDescription] = []
    seen: set[int] = set()
    sample = text.lstrip("\n")
    delimiter = "\t" if "\t" in sample.split("\n", 1)[0] else ","
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    for rownum, cells in enumerate(reader, start=1):
        if not cells or not "".join(cells).strip():
            continue
        cells = [c.strip() for c in cells]
        if len(cells) < 3:
            raise FormError(f"row {rownum}: expected index, term, description")
        first = cells[0]
        if rownum == 1 and not first.lstrip("-").isdigit():
            continue  # header row
        if not first.lstrip("-").isdigit():
            raise FormError(f"row {rownum}: index {first!r} is not an integer")
        index = int(first)
        if index in seen:
            raise FormError(f"row {rownum}: duplicate index {index}")
        seen.add(index)
        rows.append(TermDescription(index, cells[1], delimiter.join(cells[2:])))
    return rows


_SUMMARY_KEYS = {
    "Project": "project",
    "Analyst": "analyst",
    "Reviewer": "reviewer",
    "Version": "version",
    "Purpose": "purpose",
    "Context": "context",
    "Viewpoint": "viewpoint",
}
_REQUIRED_KEYS = ("Project", "Purpose", "Context", "Viewpoint")


def parse_summary_form(text: str) -> tuple[DescriptionSummary, list[str]]:
    """Parse ``Key: value`` lines; returns the record plus unknown-key warnings."""
    values: dict[str, str] = {}
    warnings: list[str] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise FormError(f"line {lineno}: expected 'Key: value'")
        key, _, value = line.partition(":")
        key = key.strip()
        if key not in _SUMMARY_KEYS:
            warnings.append(f"line {lineno}: unknown key {key!r} ignored")
            continue
        values[_SUMMARY_KEYS[key]] = value.strip()
    for key in _REQUIRED_KEYS:
        if not values.get(_SUMMARY_KEYS[key]):
            raise FormError(f"missing key {key}")
    return DescriptionSummary(**values), warnings


def _normalize_term(text: str) -> str:
    """Comparison key for coverage checks: lowercase word sequence."""
    return " ".join(re.split(r"[^a-z0-9]+", text.lower().replace("_", " "))).strip()


def run_capture_pipeline(
    summary: str, terms: str, schematic: str, prefix: Iri
) -> tuple[Graph, CaptureReport]:
    """Run the five capture activities; stops at the first failed stage."""
    stages = [StageResult(name, StageStatus.NOT_RUN) for name in STAGE_NAMES]
    report = CaptureReport(stages=stages)
    graph = Graph()

    def fail(i: int, message: str) -> tuple[Graph, CaptureReport]:
        stages[i].status = StageStatus.FAILED
        stages[i].messages.append(message)
        return graph, report

    try:
        _, summary_warnings = parse_summary_form(summary)
    except FormError as exc:
        return fail(0, str(exc))
    stages[0].status = StageStatus.OK
    stages[0].messages.extend(summary_warnings)

    try:
        term_rows = parse_term_form(terms)
        doc = parse_schematic(schematic)
    except (FormError, SchematicSyntaxError) as exc:
        return fail(1, str(exc))
    stages[1].status = StageStatus.OK
    stages[1].messages.append(f"{len(term_rows)} terms, {len(doc.kinds)} kinds")

    covered: set[str] = set()
    for name, label in doc.kinds:
        covered.add(_normalize_term(name))
        if label:
            covered.add(_normalize_term(label))
    for name, _ in doc.individuals:
        covered.add(_normalize_term(name))
    stages[2].status = StageStatus.OK
    for row in term_rows:
        if _normalize_term(row.term) not in covered:
            stages[2].messages.append(f"term not covered by schematic: {row.term}")

    lowered = lower_schematic(doc, prefix)
    stages[3].status = StageStatus.OK
    stages[3].messages.append(f"{len(lowered)} triples lowered")
    graph = Graph(sorted(lowered, key=lambda t: (t.subject.value, t.predicate.value)))

    validation = schema.validate_schema(graph)
    if not validation.ok:
        return fail(4, "; ".join(f"{i.code}: {i.message}" for i in validation.errors))
    entailed = schema.infer_types(graph)
    for t in sorted(entailed, key=lambda t: (t.subject.value, t.predicate.value)):
        graph.insert(t)
    stages[4].status = StageStatus.OK
    stages[4].messages.append(
        f"{len(validation.warnings)} warnings, {len(entailed)} entailed type assertions"
    )
    report.produced_triples = graph.size()
    return graph, report
