import random
import re
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semstore import serialize
from semstore.serialize import FlatXmlError, TripleParseError, UnsupportedConstructError
from semstore.triples import Graph, Iri, Literal, Triple

GOLDEN = Path(__file__).parent / "golden"

CONTACT_XML = """\
<Contact contact_id="033220">
<first_name> Arun</first_name>
<last_name> Kumar </last_name>
<college> Jawaharlal Nehru Technological University
</college>
<state> Andhra Pradesh </state>
<country> India </country>
<email> akanbiadeyinka@hotmail.com </email>
<phone> 91***** </phone>
</Contact>
"""


def _faculty_graph():
    return Graph(
        [
            Triple(Iri("store:faculty"), Iri("rdf:type"), Iri("rdfs:Class")),
            Triple(Iri("store:AssociateProfessor"), Iri("rdf:type"), Iri("rdfs:Class")),
            Triple(Iri("store:AssociateProfessor"), Iri("rdfs:subClassOf"), Iri("store:faculty")),
        ]
    )


def _normalize_ws(text: str) -> str:
    return re.sub(r"\s+", " ", re.sub(r">\s+<", "><", text.strip()))


def _curie_iris():
    return st.from_regex(r"[a-z][a-zA-Z0-9_]{0,6}", fullmatch=True).map(
        lambda s: Iri("store:" + s)
    )


def _literals(xml_safe: bool = False):
    # XML 1.0 cannot carry C0 controls other than tab/newline/car-return
    text = (
        st.text(
            alphabet=st.characters(exclude_categories=("Cs", "Cc"), include_characters="\t\n\r"),
            max_size=8,
        )
        if xml_safe
        else st.text(max_size=8)
    )
    return st.builds(Literal, text, st.one_of(st.none(), st.just(Iri("store:decimal"))))


def _graphs(xml_safe: bool = False):
    triples = st.builds(
        Triple, _curie_iris(), _curie_iris(), st.one_of(_curie_iris(), _literals(xml_safe))
    )
    return st.lists(triples, max_size=30).map(Graph)


class TestCanonicalText:
    def test_empty_graph(self):
        assert serialize.emit_triples(Graph()) == ""

    def test_single_triple_single_line(self):
        g = Graph([Triple(Iri("store:a"), Iri("store:p"), Iri("store:b"))])
        assert serialize.emit_triples(g) == "<store:a> <store:p> <store:b> .\n"

    def test_parse_empty(self):
        assert serialize.parse_triples("") == Graph()

    def test_missing_terminator_reports_line(self):
        text = "<store:a> <store:p> <store:b> .\n<store:a> <store:p> <store:c>\n"
        with pytest.raises(TripleParseError) as err:
            serialize.parse_triples(text)
        assert err.value.line == 2

    def test_random_round_trip_is_byte_stable(self):
        rng = random.Random(321)
        for _ in range(100):
            triples = set()
            for _ in range(rng.randint(0, 30)):
                obj = (
                    Iri(f"store:o{rng.randrange(9)}")
                    if rng.random() < 0.5
                    else Literal(f"v{rng.randrange(9)}")
                )
                triples.add(
                    Triple(Iri(f"store:s{rng.randrange(9)}"), Iri(f"store:p{rng.randrange(4)}"), obj)
                )
            g = Graph(triples)
            emitted = serialize.emit_triples(g)
            assert serialize.parse_triples(emitted) == g
            assert serialize.emit_triples(serialize.parse_triples(emitted)) == emitted

    @settings(max_examples=80, deadline=None)
    @given(_graphs())
    def test_property_round_trip(self, g):
        emitted = serialize.emit_triples(g)
        assert serialize.parse_triples(emitted) == g
        assert serialize.emit_triples(serialize.parse_triples(emitted)) == emitted

    @settings(max_examples=40, deadline=None)
    @given(st.text(max_size=12))
    def test_literal_escaping_round_trips(self, text):
        g = Graph([Triple(Iri("store:s"), Iri("store:p"), Literal(text))])
        assert serialize.parse_triples(serialize.emit_triples(g)) == g

    def test_emit_independent_of_insertion_order(self):
        triples = [
            Triple(Iri(f"store:s{i}"), Iri("store:p"), Iri(f"store:o{i}")) for i in range(10)
        ]
        forward = Graph(triples)
        backward = Graph(reversed(triples))
        assert serialize.emit_triples(forward) == serialize.emit_triples(backward)


class TestRdfXml:
    def test_golden_structure(self):
        emitted = serialize.emit_rdfxml(_faculty_graph())
        golden = (GOLDEN / "faculty.rdf").read_text(encoding="utf-8")
        assert _normalize_ws(emitted) == _normalize_ws(golden)

    def test_empty_graph_is_empty_root(self):
        text = serialize.emit_rdfxml(Graph())
        assert serialize.parse_rdfxml_subset(text) == Graph()
        assert "<rdf:Description" not in text

    def test_parse_faculty_shape(self):
        graph = serialize.parse_rdfxml_subset((GOLDEN / "faculty.rdf").read_text(encoding="utf-8"))
        assert Triple(Iri("store:AssociateProfessor"), Iri("rdfs:subClassOf"), Iri("store:faculty")) in graph
        types = {
            t.subject
            for t in graph.match()
            if t.predicate == Iri("rdf:type") and t.object == Iri("rdfs:Class")
        }
        assert types == {Iri("store:faculty"), Iri("store:AssociateProfessor")}

    def test_nested_description_rejected(self):
        text = (
            '<?xml version="1.0"?>'
            '<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#" '
            'xmlns:store="http://autostore.example/ns#">'
            '<rdf:Description rdf:about="http://autostore.example/ns#a">'
            "<store:p><rdf:Description rdf:ID=\"b\"/></store:p>"
            "</rdf:Description></rdf:RDF>"
        )
        with pytest.raises(UnsupportedConstructError):
            serialize.parse_rdfxml_subset(text)

    def test_unknown_namespace_rejected(self):
        text = (
            '<?xml version="1.0"?>'
            '<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#" '
            'xmlns:x="http://elsewhere.example/">'
            '<rdf:Description rdf:ID="a"><x:p>v</x:p></rdf:Description></rdf:RDF>'
        )
        with pytest.raises(UnsupportedConstructError):
            serialize.parse_rdfxml_subset(text)

    def test_predicate_outside_table_cannot_emit(self):
        g = Graph([Triple(Iri("store:a"), Iri("http://elsewhere.example/p"), Iri("store:b"))])
        with pytest.raises(UnsupportedConstructError):
            serialize.emit_rdfxml(g)

    @settings(max_examples=80, deadline=None)
    @given(_graphs(xml_safe=True))
    def test_round_trip_within_subset(self, g):
        assert serialize.parse_rdfxml_subset(serialize.emit_rdfxml(g)) == g

    def test_control_characters_are_outside_subset(self):
        g = Graph([Triple(Iri("store:a"), Iri("store:p"), Literal("\x00"))])
        with pytest.raises(UnsupportedConstructError):
            serialize.emit_rdfxml(g)

    def test_datatyped_literal_round_trips(self):
        g = Graph([Triple(Iri("store:a"), Iri("store:p"), Literal("4.5", Iri("store:decimal")))])
        assert serialize.parse_rdfxml_subset(serialize.emit_rdfxml(g)) == g


class TestFlatXml:
    def test_contact_record(self):
        triples = serialize.parse_flat_xml(CONTACT_XML, "contact_id", Iri("store:"))
        assert len(triples) == 7
        subjects = {t.subject for t in triples}
        assert subjects == {Iri("store:033220")}
        assert Triple(Iri("store:033220"), Iri("store:first_name"), Literal("Arun")) in triples

    def test_childless_record(self):
        assert serialize.parse_flat_xml('<Contact contact_id="1"/>', "contact_id", Iri("store:")) == set()

    def test_nested_child_rejected(self):
        text = '<Contact contact_id="1"><name><first>A</first></name></Contact>'
        with pytest.raises(FlatXmlError):
            serialize.parse_flat_xml(text, "contact_id", Iri("store:"))

    def test_missing_id_attribute(self):
        with pytest.raises(FlatXmlError):
            serialize.parse_flat_xml("<Contact><a>1</a></Contact>", "contact_id", Iri("store:"))

    def test_triple_count_equals_leaf_count(self):
        rng = random.Random(12)
        for _ in range(20):
            n = rng.randint(0, 8)
            children = "".join(f"<f{i}>v{i}</f{i}>" for i in range(n))
            text = f'<R id="r1">{children}</R>'
            assert len(serialize.parse_flat_xml(text, "id", Iri("store:"))) == n
