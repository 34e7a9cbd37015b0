"""Independent reference implementations used to check the engine.

Every function here recomputes a result by the most direct method available
(full scans, boolean closure matrices, word-level recursion) and never calls
the code path it is checking.
"""

from __future__ import annotations

import re
from fractions import Fraction

from semstore import paths
from semstore.triples import Iri, Literal, Triple

RDF_TYPE = "rdf:type"
RDFS_SUBCLASS = "rdfs:subClassOf"
RDFS_CLASS = "rdfs:Class"
RDFS_LABEL = "rdfs:label"
RDFS_DOMAIN = "rdfs:domain"
RDFS_RANGE = "rdfs:range"
SYNONYM = "store:synonym"


def naive_match(triples, subject=None, predicate=None, obj=None):
    """Full-scan pattern matching."""
    return {
        t
        for t in triples
        if (subject is None or t.subject == subject)
        and (predicate is None or t.predicate == predicate)
        and (obj is None or t.object == obj)
    }


def _subclass_edges(triples):
    return {
        (t.subject, t.object)
        for t in triples
        if t.predicate.value == RDFS_SUBCLASS and isinstance(t.object, Iri)
    }


def warshall_reach(edges, nodes):
    """Boolean transitive closure; returns reach[a][b] as a set of pairs."""
    nodes = list(nodes)
    reach = {(a, b) for (a, b) in edges}
    for k in nodes:
        for a in nodes:
            if (a, k) in reach:
                for b in nodes:
                    if (k, b) in reach:
                        reach.add((a, b))
    return reach


def subclass_closure_down(triples, c):
    """c plus all descendants, by Warshall over the subclass edges."""
    edges = _subclass_edges(triples)
    nodes = {n for e in edges for n in e} | {c}
    reach = warshall_reach(edges, nodes)
    return {d for d in nodes if (d, c) in reach} | {c}


def superclass_closure_up(triples, c):
    edges = _subclass_edges(triples)
    nodes = {n for e in edges for n in e} | {c}
    reach = warshall_reach(edges, nodes)
    return {d for d in nodes if (c, d) in reach} | {c}


def instances_of(triples, c):
    closure = subclass_closure_down(triples, c)
    return {
        t.subject
        for t in triples
        if t.predicate.value == RDF_TYPE and t.object in closure
    }


def infer_types_fixpoint(triples):
    """Repeated full rescan until no new domain/range type triples appear."""
    domains: dict[Iri, set[Iri]] = {}
    ranges: dict[Iri, set[Iri]] = {}
    for t in triples:
        if t.predicate.value == RDFS_DOMAIN and isinstance(t.object, Iri):
            domains.setdefault(t.subject, set()).add(t.object)
        if t.predicate.value == RDFS_RANGE and isinstance(t.object, Iri):
            ranges.setdefault(t.subject, set()).add(t.object)
    known = set(triples)
    added = set()
    rdf_type = Iri(RDF_TYPE)
    while True:
        fresh = set()
        for t in known | added:
            for cls in domains.get(t.predicate, ()):
                cand = Triple(t.subject, rdf_type, cls)
                if cand not in known and cand not in added:
                    fresh.add(cand)
            if isinstance(t.object, Iri):
                for cls in ranges.get(t.predicate, ()):
                    cand = Triple(t.object, rdf_type, cls)
                    if cand not in known and cand not in added:
                        fresh.add(cand)
        if not fresh:
            return added
        added |= fresh


# --- regular path language oracles -----------------------------------------

Symbol = tuple[Iri, bool]  # predicate plus inverse flag
Word = tuple[Symbol, ...]


def word_matches(expr, word: Word) -> bool:
    """Word membership by structural recursion over the expression."""
    if isinstance(expr, paths.Base):
        return word == ((expr.predicate, False),)
    if isinstance(expr, paths.Inverse):
        flipped = tuple((p, not d) for (p, d) in reversed(word))
        return word_matches(expr.inner, flipped)
    if isinstance(expr, paths.Seq):
        return any(
            word_matches(expr.left, word[:i]) and word_matches(expr.right, word[i:])
            for i in range(len(word) + 1)
        )
    if isinstance(expr, paths.Alt):
        return word_matches(expr.left, word) or word_matches(expr.right, word)
    if isinstance(expr, paths.Star):
        if not word:
            return True
        # any word of e* splits into non-empty chunks each matching e
        return any(
            word_matches(expr.inner, word[:i]) and word_matches(expr, word[i:])
            for i in range(1, len(word) + 1)
        )
    if isinstance(expr, paths.Plus):
        return any(
            word_matches(expr.inner, word[:i]) and word_matches(paths.Star(expr.inner), word[i:])
            for i in range(len(word) + 1)
        )
    if isinstance(expr, paths.Opt):
        return not word or word_matches(expr.inner, word)
    raise TypeError(expr)


def nfa_accepts(automaton: paths.PathAutomaton, word: Word) -> bool:
    """Plain subset simulation of the automaton over one word."""
    eps: dict[int, list[int]] = {}
    labeled: dict[tuple[int, Symbol], list[int]] = {}
    for a, label, b in automaton.transitions:
        if label is None:
            eps.setdefault(a, []).append(b)
        else:
            labeled.setdefault((a, label), []).append(b)

    def closure(states):
        out = set(states)
        stack = list(states)
        while stack:
            for nxt in eps.get(stack.pop(), ()):
                if nxt not in out:
                    out.add(nxt)
                    stack.append(nxt)
        return out

    states = closure({automaton.start})
    for symbol in word:
        states = closure(
            {r for q in states for r in labeled.get((q, symbol), ())}
        )
        if not states:
            return False
    return bool(states & automaton.accepts)


def _relation(triples, expr, universe) -> set[tuple[Iri, Iri]]:
    """Relation-algebra semantics: the node pairs connected by the expression."""
    identity = {(n, n) for n in universe}

    def compose(r1, r2):
        by_first: dict[Iri, set[Iri]] = {}
        for a, b in r2:
            by_first.setdefault(a, set()).add(b)
        return {(a, c) for (a, b) in r1 for c in by_first.get(b, ())}

    def transitive(rel):
        result = set(rel)
        while True:
            step = compose(result, rel)
            if step <= result:
                return result
            result |= step

    if isinstance(expr, paths.Base):
        return {
            (t.subject, t.object)
            for t in triples
            if t.predicate == expr.predicate and isinstance(t.object, Iri)
        }
    if isinstance(expr, paths.Inverse):
        return {(b, a) for (a, b) in _relation(triples, expr.inner, universe)}
    if isinstance(expr, paths.Seq):
        return compose(
            _relation(triples, expr.left, universe),
            _relation(triples, expr.right, universe),
        )
    if isinstance(expr, paths.Alt):
        return _relation(triples, expr.left, universe) | _relation(triples, expr.right, universe)
    if isinstance(expr, paths.Star):
        return identity | transitive(_relation(triples, expr.inner, universe))
    if isinstance(expr, paths.Plus):
        return transitive(_relation(triples, expr.inner, universe))
    if isinstance(expr, paths.Opt):
        return identity | _relation(triples, expr.inner, universe)
    raise TypeError(expr)


def eval_path_oracle(triples, expr, start: Iri) -> set[Iri]:
    """Nodes reachable from ``start``; the dedup-closed form of enumerating
    every language word up to the pumping bound and checking path existence."""
    universe = {start}
    for t in triples:
        universe.add(t.subject)
        if isinstance(t.object, Iri):
            universe.add(t.object)
    rel = _relation(triples, expr, universe)
    return {b for (a, b) in rel if a == start}


# --- search and recommendation oracles --------------------------------------

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")


def _tokens(text: str) -> list[str]:
    return [tok for tok in _TOKEN_SPLIT.split(text.lower()) if tok]


def _down_distances(triples, root):
    """BFS levels over subclass edges, child <- parent, scanned from triples."""
    children: dict[Iri, set[Iri]] = {}
    for child, parent in _subclass_edges(triples):
        children.setdefault(parent, set()).add(child)
    dist = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for node in frontier:
            for child in children.get(node, ()):
                if child not in dist:
                    dist[child] = dist[node] + 1
                    nxt.append(child)
        frontier = nxt
    return dist


def search_scores(triples, query, exact_w=100, label_w=10, synonym_w=5):
    """Recompute per-IRI search scores straight from the triples."""
    tokens = _tokens(query)
    norm_query = " ".join(tokens)
    direct: dict[Iri, Fraction] = {}

    def bump(iri, amount):
        direct[iri] = direct.get(iri, Fraction(0)) + amount

    exact_hit: set[Iri] = set()
    for t in triples:
        if not isinstance(t.object, Literal):
            continue
        if t.predicate.value == RDFS_LABEL and " ".join(_tokens(t.object.lexical)) == norm_query:
            exact_hit.add(t.subject)
    for iri in exact_hit:
        bump(iri, Fraction(exact_w))

    # token hits dedupe across multiple labels of one iri: collect token sets first
    label_tokens: dict[Iri, set[str]] = {}
    synonym_tokens: dict[Iri, set[str]] = {}
    for t in triples:
        if not isinstance(t.object, Literal):
            continue
        if t.predicate.value == RDFS_LABEL:
            label_tokens.setdefault(t.subject, set()).update(_tokens(t.object.lexical))
        elif t.predicate.value == SYNONYM:
            synonym_tokens.setdefault(t.subject, set()).update(_tokens(t.object.lexical))
    for token in tokens:
        for iri, toks in label_tokens.items():
            if token in toks:
                bump(iri, Fraction(label_w))
        for iri, toks in synonym_tokens.items():
            if token in toks:
                bump(iri, Fraction(synonym_w))

    classes = {
        t.subject
        for t in triples
        if t.predicate.value == RDF_TYPE
        and isinstance(t.object, Iri)
        and t.object.value == RDFS_CLASS
    }
    typed: dict[Iri, set[Iri]] = {}
    for t in triples:
        if t.predicate.value == RDF_TYPE and isinstance(t.object, Iri):
            typed.setdefault(t.object, set()).add(t.subject)

    scores = dict(direct)
    for hit, base in direct.items():
        if hit not in classes:
            continue
        dist = _down_distances(triples, hit)
        target_dist: dict[Iri, int] = {}
        for cls, d in dist.items():
            if cls != hit:
                target_dist[cls] = min(target_dist.get(cls, d), d)
            for inst in typed.get(cls, ()):
                cand = d + 1
                if inst not in target_dist or cand < target_dist[inst]:
                    target_dist[inst] = cand
        for target, d in target_dist.items():
            scores[target] = scores.get(target, Fraction(0)) + base / (1 + d)
    return scores


def ranked(scores: dict[Iri, Fraction], limit: int) -> list[tuple[Iri, Fraction]]:
    return sorted(scores.items(), key=lambda kv: (-kv[1], kv[0].value))[:limit]


def derive_needs_scan(fluents: dict, rules) -> list[tuple[str, str, int]]:
    """(rule name, target, priority) per fired rule, sorted like the engine.

    ``fluents`` maps (category, key) -> value.
    """
    fired = []
    for rule in rules:
        ok = True
        for cond in rule.conditions:
            value = fluents.get((cond.category, cond.key))
            if value is None:
                ok = False
            elif cond.operator == "=" and value != cond.value:
                ok = False
            elif cond.operator == "!=" and value == cond.value:
                ok = False
            if not ok:
                break
        if ok:
            fired.append((rule.name, rule.need_target.value, rule.priority))
    fired.sort(key=lambda item: (-item[2], item[0]))
    return fired


def recommend_pairs(triples, fluents, rules, limit):
    """Brute-force (fired rule x entailed instance) enumeration with scoring."""
    recs = []
    for name, target_value, priority in derive_needs_scan(fluents, rules):
        target = Iri(target_value)
        dist = _down_distances(triples, target)
        for product in instances_of(triples, target):
            ds = [
                dist[t.object]
                for t in triples
                if t.subject == product
                and t.predicate.value == RDF_TYPE
                and isinstance(t.object, Iri)
                and t.object in dist
            ]
            score = Fraction(priority + 1, 1 + min(ds))
            recs.append((score, product.value, name, target_value))
    recs.sort(key=lambda r: (-r[0], r[1], r[2], r[3]))
    return recs[:limit]
