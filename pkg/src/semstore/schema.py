"""RDFS-style class and property layer: closures, entailment, validation.

All functions are pure reads over a graph snapshot. ``infer_types`` returns a
delta instead of mutating so callers decide when entailments materialize.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from . import ns
from .triples import Graph, Iri, Triple, TriplePattern

# A class-position IRI; kept as a plain Iri since classes carry no extra state.
ClassRef = Iri

# Vocabulary predicates that data may use without an explicit declaration.
BUILTIN_PREDICATES = frozenset(
    {ns.RDF_TYPE, ns.RDFS_SUBCLASS_OF, ns.RDFS_LABEL, ns.RDFS_DOMAIN, ns.RDFS_RANGE}
)


@dataclass(frozen=True, slots=True)
class ValidationIssue:
    code: str
    subject: Iri
    message: str


@dataclass(slots=True)
class ValidationReport:
    errors: list[ValidationIssue] = field(default_factory=list)
    warnings: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def declared_classes(graph: Graph) -> set[ClassRef]:
    return {
        t.subject
        for t in graph.match(TriplePattern(predicate=ns.RDF_TYPE, object=ns.RDFS_CLASS))
    }


def _children(graph: Graph, c: ClassRef) -> set[ClassRef]:
    return {
        t.subject
        for t in graph.match(TriplePattern(predicate=ns.RDFS_SUBCLASS_OF, object=c))
    }


def _parents(graph: Graph, c: ClassRef) -> set[ClassRef]:
    return {
        t.object
        for t in graph.match(TriplePattern(subject=c, predicate=ns.RDFS_SUBCLASS_OF))
        if isinstance(t.object, Iri)
    }


def _closure(start: ClassRef, step) -> set[ClassRef]:
    seen = {start}
    queue = deque([start])
    while queue:
        for nxt in step(queue.popleft()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def subclass_closure(graph: Graph, c: ClassRef) -> set[ClassRef]:
    """Reflexive-transitive closure downward: ``c`` plus all its descendants."""
    return _closure(c, lambda x: _children(graph, x))


def superclass_closure(graph: Graph, c: ClassRef) -> set[ClassRef]:
    """Reflexive-transitive closure upward: ``c`` plus all its ancestors."""
    return _closure(c, lambda x: _parents(graph, x))


def subclass_distances(graph: Graph, root: ClassRef) -> dict[ClassRef, int]:
    """Minimum subclass-edge distance from ``root`` down to each descendant."""
    dist = {root: 0}
    queue = deque([root])
    while queue:
        current = queue.popleft()
        for child in _children(graph, current):
            if child not in dist:
                dist[child] = dist[current] + 1
                queue.append(child)
    return dist


def instances_of(graph: Graph, c: ClassRef) -> set[Iri]:
    """All individuals typed at ``c`` or any of its descendants."""
    out: set[Iri] = set()
    for d in subclass_closure(graph, c):
        out.update(
            t.subject
            for t in graph.match(TriplePattern(predicate=ns.RDF_TYPE, object=d))
        )
    return out


def infer_types(graph: Graph) -> set[Triple]:
    """Domain/range type entailment, iterated to fixpoint; returns new triples only.

    For (s, p, o) with (p, rdfs:domain, C) emit (s, rdf:type, C); with
    (p, rdfs:range, D) and o a node emit (o, rdf:type, D). The loop re-runs
    until stable so metamodel declarations over rdf:type itself resolve.
    """
    domains: dict[Iri, set[Iri]] = {}
    ranges: dict[Iri, set[Iri]] = {}
    for t in graph.match(TriplePattern(predicate=ns.RDFS_DOMAIN)):
        if isinstance(t.object, Iri):
            domains.setdefault(t.subject, set()).add(t.object)
    for t in graph.match(TriplePattern(predicate=ns.RDFS_RANGE)):
        if isinstance(t.object, Iri):
            ranges.setdefault(t.subject, set()).add(t.object)

    existing = set(graph.triples())
    new: set[Triple] = set()
    changed = True
    while changed:
        changed = False
        for t in list(existing | new):
            for cls in domains.get(t.predicate, ()):
                candidate = Triple(t.subject, ns.RDF_TYPE, cls)
                if candidate not in existing and candidate not in new:
                    new.add(candidate)
                    changed = True
            if isinstance(t.object, Iri):
                for cls in ranges.get(t.predicate, ()):
                    candidate = Triple(t.object, ns.RDF_TYPE, cls)
                    if candidate not in existing and candidate not in new:
                        new.add(candidate)
                        changed = True
    return new


def _subclass_cycles(graph: Graph) -> list[list[ClassRef]]:
    """Strongly connected components of the subclass graph with a cycle."""
    edges: dict[Iri, set[Iri]] = {}
    nodes: set[Iri] = set()
    for t in graph.match(TriplePattern(predicate=ns.RDFS_SUBCLASS_OF)):
        if isinstance(t.object, Iri):
            edges.setdefault(t.subject, set()).add(t.object)
            nodes.update((t.subject, t.object))

    # Iterative Tarjan; class graphs are small but recursion limits are rude.
    index: dict[Iri, int] = {}
    low: dict[Iri, int] = {}
    on_stack: set[Iri] = set()
    stack: list[Iri] = []
    counter = 0
    sccs: list[list[Iri]] = []

    for root in sorted(nodes, key=lambda n: n.value):
        if root in index:
            continue
        work: list[tuple[Iri, list[Iri]]] = [(root, sorted(edges.get(root, ()), key=lambda n: n.value))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, pending = work[-1]
            if pending:
                nxt = pending.pop(0)
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, sorted(edges.get(nxt, ()), key=lambda n: n.value)))
                elif nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[node])
                if low[node] == index[node]:
                    component = []
                    while True:
                        member = stack.pop()
                        on_stack.discard(member)
                        component.append(member)
                        if member == node:
                            break
                    if len(component) > 1 or node in edges.get(node, ()):
                        sccs.append(sorted(component, key=lambda n: n.value))
    return sccs


def validate_schema(graph: Graph) -> ValidationReport:
    """Structural checks; problems become report entries, never exceptions.

    Errors: subclass edges touching undeclared classes, data predicates with
    no declaration. Warnings: subclass cycles, declared classes without a
    label.
    """
    report = ValidationReport()
    classes = declared_classes(graph)

    for t in sorted(graph.match(TriplePattern(predicate=ns.RDFS_SUBCLASS_OF)), key=lambda t: t.subject.value):
        for end in (t.subject, t.object):
            if isinstance(end, Iri) and end not in classes:
                report.errors.append(
                    ValidationIssue(
                        "undeclared_class",
                        end,
                        f"subClassOf edge references undeclared class {end.value}",
                    )
                )

    declared_props = {
        t.subject
        for t in graph.match(TriplePattern(predicate=ns.RDF_TYPE, object=ns.RDF_PROPERTY))
    }
    declared_props.update(t.subject for t in graph.match(TriplePattern(predicate=ns.RDFS_DOMAIN)))
    declared_props.update(t.subject for t in graph.match(TriplePattern(predicate=ns.RDFS_RANGE)))

    seen_undeclared: set[Iri] = set()
    for t in graph.triples():
        p = t.predicate
        if p in BUILTIN_PREDICATES or p in declared_props or p in seen_undeclared:
            continue
        seen_undeclared.add(p)
    for p in sorted(seen_undeclared, key=lambda i: i.value):
        report.errors.append(
            ValidationIssue("undeclared_property", p, f"property {p.value} used without declaration")
        )

    for component in _subclass_cycles(graph):
        names = ", ".join(c.value for c in component)
        report.warnings.append(
            ValidationIssue("subclass_cycle", component[0], f"subclass cycle through {{{names}}}")
        )

    for c in sorted(classes, key=lambda i: i.value):
        if not graph.match(TriplePattern(subject=c, predicate=ns.RDFS_LABEL)):
            report.warnings.append(
                ValidationIssue("missing_label", c, f"class {c.value} has no rdfs:label")
            )
    return report
