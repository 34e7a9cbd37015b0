"""External formats: canonical triple lines, an RDF/XML subset, flat-XML records.

Canonical text writes each IRI value verbatim inside angle brackets (CURIEs
included), which makes emit/parse an exact round trip for any graph. The
RDF/XML writer expands CURIEs through the fixed prefix table and the subset
parser compacts them back, so graphs must use canonical compact IRIs to
round-trip through XML; everything this package produces does.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from xml.sax.saxutils import escape, quoteattr

from . import ns
from .triples import Graph, Iri, Literal, Term, Triple, triple_key


class TripleParseError(ValueError):
    """Malformed canonical triple line; carries the 1-based line number."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnsupportedConstructError(ValueError):
    """RDF/XML construct outside the supported subset."""


class FlatXmlError(ValueError):
    """Flat-XML record violates the subject/leaf-children contract."""


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape_lexical(text: str) -> str:
    out = []
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _unescape_lexical(text: str, line: int) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(text):
            raise TripleParseError(line, "dangling escape in literal")
        nxt = text[i + 1]
        simple = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}
        if nxt in simple:
            out.append(simple[nxt])
            i += 2
        elif nxt == "u" and i + 6 <= len(text):
            out.append(chr(int(text[i + 2 : i + 6], 16)))
            i += 6
        elif nxt == "U" and i + 10 <= len(text):
            out.append(chr(int(text[i + 2 : i + 10], 16)))
            i += 10
        else:
            raise TripleParseError(line, f"unknown escape \\{nxt}")
    return "".join(out)


def _render_term(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{term.value}>"
    rendered = f'"{_escape_lexical(term.lexical)}"'
    if term.datatype is not None:
        rendered += f"^^<{term.datatype.value}>"
    return rendered


def render_line(t: Triple) -> str:
    return f"<{t.subject.value}> <{t.predicate.value}> {_render_term(t.object)} ."


def emit_triples(graph: Graph) -> str:
    """Canonical text: one sorted line per triple, deterministic byte-for-byte."""
    lines = sorted(render_line(t) for t in graph.triples())
    if not lines:
        return ""
    return "\n".join(lines) + "\n"


_IRI_RE = re.compile(r"<([^<>\s]+)>")
_LITERAL_RE = re.compile(r'"((?:[^"\\]|\\.)*)"(?:\^\^<([^<>\s]+)>)?')


def _parse_line(line: str, lineno: int) -> Triple:
    pos = 0

    def take_iri() -> Iri:
        nonlocal pos
        m = _IRI_RE.match(line, pos)
        if not m:
            raise TripleParseError(lineno, f"expected <iri> at column {pos + 1}")
        pos = m.end()
        return Iri(m.group(1))

    def take_space() -> None:
        nonlocal pos
        if pos >= len(line) or line[pos] != " ":
            raise TripleParseError(lineno, f"expected single space at column {pos + 1}")
        pos += 1

    subject = take_iri()
    take_space()
    predicate = take_iri()
    take_space()
    obj: Term
    if pos < len(line) and line[pos] == "<":
        obj = take_iri()
    elif pos < len(line) and line[pos] == '"':
        m = _LITERAL_RE.match(line, pos)
        if not m:
            raise TripleParseError(lineno, "malformed literal")
        lexical = _unescape_lexical(m.group(1), lineno)
        datatype = Iri(m.group(2)) if m.group(2) else None
        obj = Literal(lexical, datatype)
        pos = m.end()
    else:
        raise TripleParseError(lineno, f"expected object term at column {pos + 1}")
    if line[pos:] != " .":
        raise TripleParseError(lineno, "line must end with ' .'")
    return Triple(subject, predicate, obj)


def parse_triples(text: str) -> Graph:
    """Parse canonical (or unsorted) triple lines into a fresh graph."""
    graph = Graph()
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        try:
            graph.insert(_parse_line(line, lineno))
        except TripleParseError:
            raise
        except ValueError as exc:
            raise TripleParseError(lineno, str(exc)) from exc
    return graph


# --- RDF/XML subset ---------------------------------------------------------

_RDF_NS = ns.PREFIXES["rdf"]
_STORE_PREFIX = "store:"


def _qname(pred: Iri) -> str:
    """Predicate as prefix:local; only the fixed table is representable."""
    value = ns.compact(ns.expand(pred)).value
    parts = ns.split_curie(value)
    if parts is None:
        raise UnsupportedConstructError(
            f"predicate {pred.value!r} is outside the fixed prefix table"
        )
    return f"{parts[0]}:{parts[1]}"


def _resource_ref(obj: Iri) -> str:
    """rdf:resource value: '#local' for store terms, absolute otherwise."""
    compacted = ns.compact(ns.expand(obj))
    if compacted.value.startswith(_STORE_PREFIX):
        return "#" + compacted.value[len(_STORE_PREFIX):]
    return ns.expand(obj)


def _xml_text(lexical: str) -> str:
    """Escape literal text; XML 1.0 cannot carry most C0 controls at all."""
    for ch in lexical:
        if ord(ch) < 0x20 and ch not in "\t\n\r":
            raise UnsupportedConstructError(
                f"literal contains U+{ord(ch):04X}, not representable in XML 1.0"
            )
    # \r must be a character reference or the parser folds it into \n
    return escape(lexical, {"\r": "&#13;"})


def emit_rdfxml(graph: Graph) -> str:
    """One rdf:Description per subject, sorted, with resource references."""
    by_subject: dict[Iri, list[Triple]] = {}
    for t in graph.triples():
        by_subject.setdefault(t.subject, []).append(t)

    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    attrs = " ".join(f'xmlns:{p}="{uri}"' for p, uri in sorted(ns.PREFIXES.items()))
    out.append(f'<rdf:RDF {attrs} xml:base="{ns.XML_BASE}">')
    for subject in sorted(by_subject, key=lambda s: s.value):
        compacted = ns.compact(ns.expand(subject))
        if compacted.value.startswith(_STORE_PREFIX):
            local = compacted.value[len(_STORE_PREFIX):]
            out.append(f"  <rdf:Description rdf:ID={quoteattr(local)}>")
        else:
            out.append(f"  <rdf:Description rdf:about={quoteattr(ns.expand(subject))}>")
        for t in sorted(by_subject[subject], key=triple_key):
            qname = _qname(t.predicate)
            if isinstance(t.object, Iri):
                out.append(f"    <{qname} rdf:resource={quoteattr(_resource_ref(t.object))}/>")
            elif t.object.datatype is not None:
                dt = quoteattr(ns.expand(t.object.datatype))
                out.append(f"    <{qname} rdf:datatype={dt}>{_xml_text(t.object.lexical)}</{qname}>")
            else:
                out.append(f"    <{qname}>{_xml_text(t.object.lexical)}</{qname}>")
        out.append("  </rdf:Description>")
    out.append("</rdf:RDF>")
    return "\n".join(out) + "\n"


def _split_tag(tag: str) -> tuple[str, str]:
    if not tag.startswith("{"):
        raise UnsupportedConstructError(f"element {tag!r} has no namespace")
    uri, _, local = tag[1:].partition("}")
    return uri, local


def _compact_tag(tag: str) -> Iri:
    uri, local = _split_tag(tag)
    for prefix, base in ns.PREFIXES.items():
        if uri == base:
            return Iri(f"{prefix}:{local}")
    raise UnsupportedConstructError(f"element namespace {uri!r} is outside the prefix table")


def _resolve_resource(ref: str) -> Iri:
    if ref.startswith("#"):
        return Iri(_STORE_PREFIX + ref[1:])
    return ns.compact(ref)


def parse_rdfxml_subset(text: str) -> Graph:
    """Parse exactly the constructs :func:`emit_rdfxml` produces."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise UnsupportedConstructError(f"not well-formed XML: {exc}") from exc
    if root.tag != f"{{{_RDF_NS}}}RDF":
        raise UnsupportedConstructError(f"root element must be rdf:RDF, got {root.tag!r}")

    graph = Graph()
    for desc in root:
        if desc.tag != f"{{{_RDF_NS}}}Description":
            raise UnsupportedConstructError(f"unsupported top-level element {desc.tag!r}")
        rdf_id = desc.get(f"{{{_RDF_NS}}}ID")
        rdf_about = desc.get(f"{{{_RDF_NS}}}about")
        if (rdf_id is None) == (rdf_about is None):
            raise UnsupportedConstructError(
                "rdf:Description needs exactly one of rdf:ID or rdf:about"
            )
        subject = Iri(_STORE_PREFIX + rdf_id) if rdf_id is not None else ns.compact(rdf_about)
        for prop in desc:
            if len(prop) > 0:
                raise UnsupportedConstructError(
                    f"nested elements under {prop.tag!r} are outside the subset"
                )
            predicate = _compact_tag(prop.tag)
            resource = prop.get(f"{{{_RDF_NS}}}resource")
            if resource is not None:
                if (prop.text or "").strip():
                    raise UnsupportedConstructError(
                        f"{prop.tag!r} mixes rdf:resource with text content"
                    )
                graph.insert(Triple(subject, predicate, _resolve_resource(resource)))
            else:
                datatype_ref = prop.get(f"{{{_RDF_NS}}}datatype")
                datatype = ns.compact(datatype_ref) if datatype_ref else None
                graph.insert(Triple(subject, predicate, Literal(prop.text or "", datatype)))
    return graph


# --- flat XML records -------------------------------------------------------


def parse_flat_xml(text: str, id_attribute: str, prefix: Iri) -> set[Triple]:
    """Lower a flat record element into triples keyed by its id attribute.

    Subject is ``prefix + id``; each leaf child becomes one triple with
    predicate ``prefix + tag`` and the trimmed text as a plain literal.
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise FlatXmlError(f"not well-formed XML: {exc}") from exc
    record_id = root.get(id_attribute)
    if record_id is None:
        raise FlatXmlError(f"root element lacks the id attribute {id_attribute!r}")
    subject = Iri(prefix.value + record_id)
    triples: set[Triple] = set()
    for child in root:
        if len(child) > 0:
            raise FlatXmlError(f"child element {child.tag!r} is not a leaf")
        predicate = Iri(prefix.value + child.tag)
        value = (child.text or "").strip()
        triples.add(Triple(subject, predicate, Literal(value)))
    return triples
