"""Ontology-driven storefront engine.

Layers, bottom up: an indexed triple store (:mod:`semstore.triples`), RDFS
closures and entailment (:mod:`semstore.schema`), regular path queries
(:mod:`semstore.paths`), the consumer situation model (:mod:`semstore.snap`),
ontology capture (:mod:`semstore.capture`), serializers
(:mod:`semstore.serialize`), the search/ontology agents
(:mod:`semstore.agents`), and the HTTP service (:mod:`semstore.service`).
"""

from .triples import Graph, Iri, Literal, Triple, TriplePattern

__all__ = ["Graph", "Iri", "Literal", "Triple", "TriplePattern"]
