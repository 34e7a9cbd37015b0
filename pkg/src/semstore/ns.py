"""Fixed namespace table and CURIE helpers shared by every text format.

The prefix table is fixed for the whole store: unknown prefixes are a
parse-time error wherever CURIEs are accepted, never a silent expansion.
"""

from __future__ import annotations

from .triples import Iri

PREFIXES: dict[str, str] = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "store": "http://autostore.example/ns#",
}

# Base used by the RDF/XML writer; rdf:ID="X" resolves to <base>#X.
XML_BASE = "http://autostore.example/ns"

RDF_TYPE = Iri("rdf:type")
RDF_PROPERTY = Iri("rdf:Property")
RDFS_CLASS = Iri("rdfs:Class")
RDFS_SUBCLASS_OF = Iri("rdfs:subClassOf")
RDFS_LABEL = Iri("rdfs:label")
RDFS_DOMAIN = Iri("rdfs:domain")
RDFS_RANGE = Iri("rdfs:range")
STORE_SYNONYM = Iri("store:synonym")
STORE_DESCRIPTION = Iri("store:description")


class UnknownPrefixError(ValueError):
    """A CURIE used a prefix outside the fixed table."""


def split_curie(value: str) -> tuple[str, str] | None:
    """Return (prefix, local) when ``value`` is a CURIE over the fixed table."""
    if ":" not in value:
        return None
    prefix, local = value.split(":", 1)
    if prefix in PREFIXES:
        return prefix, local
    return None


def expand(iri: Iri) -> str:
    """Absolute form of ``iri``; CURIEs over the table expand, others pass through."""
    parts = split_curie(iri.value)
    if parts is None:
        return iri.value
    prefix, local = parts
    return PREFIXES[prefix] + local


def compact(uri: str) -> Iri:
    """Canonical compact form: longest table namespace wins, else verbatim."""
    best: tuple[str, str] | None = None
    for prefix, base in PREFIXES.items():
        if uri.startswith(base) and len(uri) > len(base):
            if best is None or len(base) > len(PREFIXES[best[0]]):
                best = (prefix, uri[len(base):])
    if best is None:
        return Iri(uri)
    return Iri(f"{best[0]}:{best[1]}")


def parse_name(text: str) -> Iri:
    """Parse a user-supplied resource name: ``<absolute>`` or CURIE or bare token.

    A bare token containing a colon must use a known prefix; absolute IRIs
    are written in angle brackets to keep ``/`` free for other grammars.
    """
    text = text.strip()
    if not text:
        raise UnknownPrefixError("empty resource name")
    if text.startswith("<") and text.endswith(">"):
        return Iri(text[1:-1])
    if ":" in text:
        prefix = text.split(":", 1)[0]
        if prefix not in PREFIXES:
            raise UnknownPrefixError(
                f"unknown prefix {prefix!r} (known: {', '.join(sorted(PREFIXES))})"
            )
    return Iri(text)
