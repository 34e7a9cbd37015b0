"""Search and ontology agents over one graph snapshot.

Search is taxonomy-aware keyword retrieval: token postings over labels and
synonyms, plus score flow from class-typed hits down to their descendants
and instances. All scores are exact rationals so ranking is deterministic
and independent of accumulation order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from . import ns, schema, serialize, snap
from .triples import Graph, Iri, Literal, Triple, TriplePattern, term_key

_TOKEN_RE = re.compile(r"[^0-9a-z]+")

# Predicates feeding the label index, by field name.
_INDEX_FIELDS = (
    (ns.RDFS_LABEL, "label"),
    (ns.STORE_SYNONYM, "synonym"),
    (ns.STORE_DESCRIPTION, "description"),
)

# How many hits the RDF answer endpoint collects before building the subgraph.
ANSWER_LIMIT = 1000


class EmptyQueryError(ValueError):
    """Query had no tokens left after normalization."""


class NotFoundError(LookupError):
    """IRI does not occur anywhere in the graph."""


class MatchedVia(str, Enum):
    EXACT_LABEL = "exact_label"
    TOKEN_LABEL = "token_label"
    SYNONYM = "synonym"
    TAXONOMY_EXPANSION = "taxonomy_expansion"


# Display precedence: direct evidence beats score flowed down the taxonomy.
_VIA_ORDER = (
    MatchedVia.EXACT_LABEL,
    MatchedVia.TOKEN_LABEL,
    MatchedVia.SYNONYM,
    MatchedVia.TAXONOMY_EXPANSION,
)


@dataclass(frozen=True, slots=True)
class ScoringWeights:
    exact_label: int = 100
    token_label: int = 10
    token_synonym: int = 5


DEFAULT_WEIGHTS = ScoringWeights()


def tokenize(text: str) -> list[str]:
    return [tok for tok in _TOKEN_RE.split(text.lower()) if tok]


def normalize_label(text: str) -> str:
    return " ".join(tokenize(text))


@dataclass(slots=True)
class LabelIndex:
    """Token postings plus whole-label lookup, keyed to one graph version."""

    version: int
    postings: dict[str, set[tuple[Iri, str]]] = field(default_factory=dict)
    exact_labels: dict[str, set[Iri]] = field(default_factory=dict)


@dataclass(frozen=True, slots=True)
class SearchResult:
    iri: Iri
    score: Fraction
    matched_via: MatchedVia
    rank: int


@dataclass(frozen=True, slots=True)
class Recommendation:
    product: Iri
    need: snap.Need
    score: Fraction


def index_labels(graph: Graph) -> LabelIndex:
    index = LabelIndex(version=graph.version)
    for predicate, fieldname in _INDEX_FIELDS:
        for t in graph.match(TriplePattern(predicate=predicate)):
            if not isinstance(t.object, Literal):
                continue
            for token in tokenize(t.object.lexical):
                index.postings.setdefault(token, set()).add((t.subject, fieldname))
            if fieldname == "label":
                index.exact_labels.setdefault(
                    normalize_label(t.object.lexical), set()
                ).add(t.subject)
    return index


def _expansion_targets(graph: Graph, hit: Iri) -> dict[Iri, int]:
    """Proper descendants and instances of a class hit, with step distances.

    Subclass edges and the final typing edge each count one step, so an
    instance of the hit class itself sits at distance 1.
    """
    distances = schema.subclass_distances(graph, hit)
    targets: dict[Iri, int] = {}
    for cls, d in distances.items():
        if cls != hit:
            targets[cls] = min(targets.get(cls, d), d)
        for t in graph.match(TriplePattern(predicate=ns.RDF_TYPE, object=cls)):
            inst_d = d + 1
            prev = targets.get(t.subject)
            if prev is None or inst_d < prev:
                targets[t.subject] = inst_d
    return targets


def search(
    index: LabelIndex,
    graph: Graph,
    query: str,
    limit: int,
    weights: ScoringWeights = DEFAULT_WEIGHTS,
) -> list[SearchResult]:
    """Ranked retrieval; ties break by ascending IRI, ranks are consecutive."""
    tokens = tokenize(query)
    if not tokens:
        raise EmptyQueryError("query is empty after tokenization")
    if limit < 1:
        raise ValueError("limit must be positive")

    direct: dict[Iri, Fraction] = {}
    via: dict[Iri, set[MatchedVia]] = {}

    def add(iri: Iri, amount: Fraction, kind: MatchedVia) -> None:
        direct[iri] = direct.get(iri, Fraction(0)) + amount
        via.setdefault(iri, set()).add(kind)

    for iri in index.exact_labels.get(" ".join(tokens), ()):
        add(iri, Fraction(weights.exact_label), MatchedVia.EXACT_LABEL)
    for token in tokens:
        for iri, fieldname in index.postings.get(token, ()):
            if fieldname == "label":
                add(iri, Fraction(weights.token_label), MatchedVia.TOKEN_LABEL)
            elif fieldname == "synonym":
                add(iri, Fraction(weights.token_synonym), MatchedVia.SYNONYM)
            # description postings exist for display, not scoring

    scores = dict(direct)
    classes = schema.declared_classes(graph)
    for hit, parent_score in direct.items():
        if hit not in classes:
            continue
        for target, distance in _expansion_targets(graph, hit).items():
            scores[target] = scores.get(target, Fraction(0)) + parent_score / (1 + distance)
            via.setdefault(target, set()).add(MatchedVia.TAXONOMY_EXPANSION)

    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0].value))[:limit]
    results = []
    for rank, (iri, score) in enumerate(ranked, start=1):
        matched = next(v for v in _VIA_ORDER if v in via[iri])
        results.append(SearchResult(iri=iri, score=score, matched_via=matched, rank=rank))
    return results


@dataclass(slots=True)
class Description:
    iri: Iri
    label: str | None
    types: list[Iri]
    superclasses: list[Iri]
    subclasses: list[Iri]
    instances: list[Iri]
    relations: list[tuple[Iri, Iri]]
    attributes: list[tuple[Iri, Literal]]


_STRUCTURAL = frozenset({ns.RDF_TYPE, ns.RDFS_SUBCLASS_OF, ns.RDFS_LABEL})


def describe(graph: Graph, term: Iri) -> Description:
    """Structural view of one term: taxonomy context, relations, attributes."""
    known = (
        graph.match(TriplePattern(subject=term))
        or graph.match(TriplePattern(object=term))
        or graph.match(TriplePattern(predicate=term))
    )
    if not known:
        raise NotFoundError(f"unknown resource {term.value}")

    labels = sorted(
        t.object.lexical
        for t in graph.match(TriplePattern(subject=term, predicate=ns.RDFS_LABEL))
        if isinstance(t.object, Literal)
    )
    types = sorted(
        (t.object for t in graph.match(TriplePattern(subject=term, predicate=ns.RDF_TYPE))
         if isinstance(t.object, Iri)),
        key=lambda i: i.value,
    )
    superclasses = sorted(
        (c for c in schema.superclass_closure(graph, term) if c != term),
        key=lambda i: i.value,
    )
    subclasses = sorted(
        {t.subject for t in graph.match(TriplePattern(predicate=ns.RDFS_SUBCLASS_OF, object=term))},
        key=lambda i: i.value,
    )
    is_class = Triple(term, ns.RDF_TYPE, ns.RDFS_CLASS) in graph
    instances = sorted(schema.instances_of(graph, term), key=lambda i: i.value) if is_class else []
    relations = []
    attributes = []
    for t in sorted(graph.match(TriplePattern(subject=term)), key=lambda t: (t.predicate.value, term_key(t.object))):
        if t.predicate in _STRUCTURAL:
            continue
        if isinstance(t.object, Iri):
            relations.append((t.predicate, t.object))
        else:
            attributes.append((t.predicate, t.object))
    return Description(
        iri=term,
        label=labels[0] if labels else None,
        types=types,
        superclasses=superclasses,
        subclasses=subclasses,
        instances=instances,
        relations=relations,
        attributes=attributes,
    )


def answer_as_rdf(graph: Graph, query: str, index: LabelIndex | None = None) -> str:
    """RDF/XML for the subgraph rooted at the search hits for ``query``."""
    if index is None or index.version != graph.version:
        index = index_labels(graph)
    results = search(index, graph, query, limit=ANSWER_LIMIT)
    subjects = {r.iri for r in results}
    subgraph = Graph(
        t for s in sorted(subjects, key=lambda i: i.value)
        for t in sorted(graph.match(TriplePattern(subject=s)), key=lambda t: t.predicate.value)
    )
    return serialize.emit_rdfxml(subgraph)


def recommend(
    graph: Graph,
    situation: snap.Situation,
    rules: list[snap.NeedRule],
    limit: int,
) -> list[Recommendation]:
    """One entry per (fired rule, entailed instance); closer types score higher."""
    if limit < 1:
        raise ValueError("limit must be positive")
    recs: list[Recommendation] = []
    for need in snap.derive_needs(situation, rules):
        distances = schema.subclass_distances(graph, need.target)
        for product in schema.instances_of(graph, need.target):
            type_distances = [
                distances[t.object]
                for t in graph.match(TriplePattern(subject=product, predicate=ns.RDF_TYPE))
                if isinstance(t.object, Iri) and t.object in distances
            ]
            score = Fraction(need.priority + 1, 1 + min(type_distances))
            recs.append(Recommendation(product=product, need=need, score=score))
    recs.sort(key=lambda r: (-r.score, r.product.value, r.need.source_rule, r.need.target.value))
    return recs[:limit]
