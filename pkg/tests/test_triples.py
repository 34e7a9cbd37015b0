import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from semstore.triples import Graph, Iri, Literal, TermError, Triple, TriplePattern

X = Iri("store:x")
P = Iri("store:p")
Y = Iri("store:y")


def _iris():
    return st.from_regex(r"[a-z][a-z0-9]{0,5}", fullmatch=True).map(lambda s: Iri("store:" + s))


def _terms():
    return st.one_of(_iris(), st.text(max_size=6).map(Literal))


def _triples():
    return st.builds(Triple, _iris(), _iris(), _terms())


def _graphs(max_size=200):
    return st.lists(_triples(), max_size=max_size).map(Graph)


class TestTerms:
    def test_iri_rejects_whitespace(self):
        with pytest.raises(TermError):
            Iri("store:a b")

    def test_iri_rejects_empty(self):
        with pytest.raises(TermError):
            Iri("")

    def test_iri_rejects_angle_brackets(self):
        with pytest.raises(TermError):
            Iri("<store:a>")

    def test_literal_may_be_empty(self):
        assert Literal("").lexical == ""

    def test_triple_positions_checked(self):
        with pytest.raises(TermError):
            Triple(Literal("x"), P, Y)
        with pytest.raises(TermError):
            Triple(X, Literal("p"), Y)
        with pytest.raises(TermError):
            Triple(X, P, "y")


class TestInsert:
    def test_insert_into_empty(self):
        g = Graph()
        assert g.insert(Triple(X, P, Y)) is True
        assert g.size() == 1

    def test_duplicate_insert_is_noop(self):
        g = Graph()
        t = Triple(X, P, Y)
        assert g.insert(t) is True
        version = g.version
        assert g.insert(t) is False
        assert g.size() == 1
        assert g.version == version

    def test_class_declaration_matches_by_subject(self):
        g = Graph()
        t = Triple(Iri("store:faculty"), Iri("rdf:type"), Iri("rdfs:Class"))
        g.insert(t)
        assert g.match(TriplePattern(subject=Iri("store:faculty"))) == {t}


class TestRemove:
    def test_remove_from_empty(self):
        assert Graph().remove() == 0

    def test_remove_by_predicate(self):
        g = Graph()
        for i in range(3):
            g.insert(Triple(Iri(f"store:s{i}"), P, Y))
        assert g.remove(TriplePattern(predicate=P)) == 3
        assert g.size() == 0

    def test_remove_all_wildcard_counts_by_scan(self):
        rng = random.Random(1405)
        triples = set()
        while len(triples) < 50:
            triples.add(
                Triple(
                    Iri(f"store:s{rng.randrange(20)}"),
                    Iri(f"store:p{rng.randrange(5)}"),
                    Iri(f"store:o{rng.randrange(20)}"),
                )
            )
        g = Graph(triples)
        expected = len(oracles.naive_match(g.triples()))
        assert expected == 50
        assert g.remove() == expected
        assert g.size() == 0


class TestMatch:
    def test_match_empty(self):
        assert Graph().match() == set()

    def test_subclass_edge_by_predicate(self):
        g = Graph()
        edge = Triple(Iri("store:AssociateProfessor"), Iri("rdfs:subClassOf"), Iri("store:faculty"))
        g.insert(Triple(Iri("store:faculty"), Iri("rdf:type"), Iri("rdfs:Class")))
        g.insert(Triple(Iri("store:AssociateProfessor"), Iri("rdf:type"), Iri("rdfs:Class")))
        g.insert(edge)
        assert g.match(TriplePattern(predicate=Iri("rdfs:subClassOf"))) == {edge}

    def test_union_over_subjects_covers_store(self):
        rng = random.Random(7)
        g = Graph(
            Triple(
                Iri(f"store:s{rng.randrange(8)}"),
                Iri(f"store:p{rng.randrange(3)}"),
                Iri(f"store:o{rng.randrange(8)}"),
            )
            for _ in range(60)
        )
        union = set()
        for s in {t.subject for t in g.triples()}:
            union |= g.match(TriplePattern(subject=s))
        assert union == g.triples()


class TestSize:
    def test_empty(self):
        assert Graph().size() == 0

    def test_n_distinct_inserts(self):
        g = Graph()
        for i in range(17):
            g.insert(Triple(Iri(f"store:s{i}"), P, Y))
        assert g.size() == 17

    def test_duplicate_inserts_collapse(self):
        g = Graph()
        for _ in range(5):
            g.insert(Triple(X, P, Y))
        assert g.size() == 1


@settings(max_examples=60, deadline=None)
@given(_graphs(), _iris(), _iris(), _terms())
def test_index_coherence(g, s, p, o):
    """Every pattern answered by index equals the naive full scan."""
    pool = list(g.triples())
    subject = pool[0].subject if pool else s
    for pat in (
        TriplePattern(),
        TriplePattern(subject=subject),
        TriplePattern(predicate=p),
        TriplePattern(object=o),
        TriplePattern(subject=s, predicate=p),
        TriplePattern(subject=s, predicate=p, object=o),
    ):
        assert g.match(pat) == oracles.naive_match(
            g.triples(), pat.subject, pat.predicate, pat.object
        )


@settings(max_examples=60, deadline=None)
@given(_graphs(max_size=40), _triples())
def test_insert_remove_round_trip(g, t):
    before = g.triples()
    inserted = g.insert(t)
    g.remove(TriplePattern(subject=t.subject, predicate=t.predicate, object=t.object))
    if inserted:
        assert g.triples() == before - {t}


@settings(max_examples=60, deadline=None)
@given(_graphs(max_size=60), _iris(), _iris())
def test_match_monotonicity(g, s, p):
    loose = g.match(TriplePattern(predicate=p))
    tight = g.match(TriplePattern(subject=s, predicate=p))
    assert tight <= loose


@settings(max_examples=40, deadline=None)
@given(st.lists(_triples(), min_size=1, max_size=40))
def test_version_strictly_increases(triples):
    g = Graph()
    seen_versions = [g.version]
    for t in triples:
        changed = g.insert(t)
        if changed:
            assert g.version > seen_versions[-1]
            seen_versions.append(g.version)
        else:
            assert g.version == seen_versions[-1]
    if g.size():
        v = g.version
        assert g.remove() > 0
        assert g.version > v


def test_copy_is_independent():
    g = Graph([Triple(X, P, Y)])
    clone = g.copy()
    assert clone == g
    g.insert(Triple(Y, P, X))
    assert clone != g
    assert clone.size() == 1
