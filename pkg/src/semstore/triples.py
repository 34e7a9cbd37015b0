"""Indexed in-memory store of subject-predicate-object assertions.

Every other layer reads and writes through :class:`Graph`. The store keeps
set semantics, three access-path indexes (subject, predicate, object) and a
version counter that strictly increases on every successful mutation, so
callers can key caches off a graph snapshot.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterable, Iterator, Union


class TermError(ValueError):
    """Raised for malformed IRIs, literals, or triples."""


@dataclass(frozen=True, slots=True)
class Iri:
    """A named resource, absolute (``http://...``) or CURIE-style (``store:Rims``).

    Comparison is exact byte equality; no normalization happens here.
    """

    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise TermError("IRI must be non-empty")
        if any(c.isspace() for c in self.value):
            raise TermError(f"IRI may not contain whitespace: {self.value!r}")
        if self.value.startswith("<") or self.value.endswith(">"):
            raise TermError(f"IRI is stored without angle brackets: {self.value!r}")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class Literal:
    """A literal value; absent datatype means plain string."""

    lexical: str
    datatype: Iri | None = None

    def __str__(self) -> str:
        if self.datatype is None:
            return f'"{self.lexical}"'
        return f'"{self.lexical}"^^{self.datatype}'


# Object position of a triple: either a node reference or a literal.
Term = Union[Iri, Literal]


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term

    def __post_init__(self) -> None:
        if not isinstance(self.subject, Iri):
            raise TermError(f"triple subject must be an Iri, got {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise TermError(f"triple predicate must be an Iri, got {self.predicate!r}")
        if not isinstance(self.object, (Iri, Literal)):
            raise TermError(f"triple object must be an Iri or Literal, got {self.object!r}")


@dataclass(frozen=True, slots=True)
class TriplePattern:
    """Match template; ``None`` in a position means wildcard."""

    subject: Iri | None = None
    predicate: Iri | None = None
    object: Term | None = None

    def matches(self, t: Triple) -> bool:
        return (
            (self.subject is None or t.subject == self.subject)
            and (self.predicate is None or t.predicate == self.predicate)
            and (self.object is None or t.object == self.object)
        )


def term_key(term: Term) -> tuple:
    """Total order over terms: nodes before literals, then lexicographic."""
    if isinstance(term, Iri):
        return (0, term.value, "")
    return (1, term.lexical, term.datatype.value if term.datatype else "")


def triple_key(t: Triple) -> tuple:
    return (t.subject.value, t.predicate.value, term_key(t.object))


class _RWLock:
    """Many concurrent readers or a single writer.

    Writers wait for in-flight readers to drain; no fairness guarantee, which
    is fine for a single-process store with short critical sections.
    """

    def __init__(self) -> None:
        self._cond = threading.Condition()
        self._readers = 0
        self._writing = False

    @contextmanager
    def read(self) -> Iterator[None]:
        with self._cond:
            while self._writing:
                self._cond.wait()
            self._readers += 1
        try:
            yield
        finally:
            with self._cond:
                self._readers -= 1
                if self._readers == 0:
                    self._cond.notify_all()

    @contextmanager
    def write(self) -> Iterator[None]:
        with self._cond:
            while self._writing or self._readers:
                self._cond.wait()
            self._writing = True
        try:
            yield
        finally:
            with self._cond:
                self._writing = False
                self._cond.notify_all()


class Graph:
    """Triple set with subject/predicate/object indexes.

    Reads materialize their results under a read lock and writes hold the
    write lock for the whole index update, so a mutation is never observable
    half-applied and the three indexes always agree with the triple set.
    """

    def __init__(self, triples: Iterable[Triple] = ()) -> None:
        self._triples: set[Triple] = set()
        self._by_s: dict[Iri, set[Triple]] = {}
        self._by_p: dict[Iri, set[Triple]] = {}
        self._by_o: dict[Term, set[Triple]] = {}
        self._version = 0
        self._lock = _RWLock()
        for t in triples:
            self.insert(t)

    @property
    def version(self) -> int:
        with self._lock.read():
            return self._version

    def insert(self, t: Triple) -> bool:
        """Add ``t``; returns True iff it was absent. Duplicate insert is a no-op."""
        if not isinstance(t, Triple):
            raise TermError(f"expected a Triple, got {t!r}")
        with self._lock.write():
            if t in self._triples:
                return False
            self._triples.add(t)
            self._by_s.setdefault(t.subject, set()).add(t)
            self._by_p.setdefault(t.predicate, set()).add(t)
            self._by_o.setdefault(t.object, set()).add(t)
            self._version += 1
            return True

    def remove(self, pat: TriplePattern | None = None) -> int:
        """Delete every triple matching ``pat`` (all-wildcard when None)."""
        pat = pat or TriplePattern()
        with self._lock.write():
            victims = list(self._match_locked(pat))
            for t in victims:
                self._triples.discard(t)
                for index, key in (
                    (self._by_s, t.subject),
                    (self._by_p, t.predicate),
                    (self._by_o, t.object),
                ):
                    bucket = index.get(key)
                    if bucket is not None:
                        bucket.discard(t)
                        if not bucket:
                            del index[key]
            if victims:
                self._version += 1
            return len(victims)

    def match(self, pat: TriplePattern | None = None) -> set[Triple]:
        """Triples satisfying every bound position, via the most selective index."""
        pat = pat or TriplePattern()
        with self._lock.read():
            return set(self._match_locked(pat))

    def _match_locked(self, pat: TriplePattern) -> Iterable[Triple]:
        buckets: list[set[Triple]] = []
        if pat.subject is not None:
            buckets.append(self._by_s.get(pat.subject, set()))
        if pat.predicate is not None:
            buckets.append(self._by_p.get(pat.predicate, set()))
        if pat.object is not None:
            buckets.append(self._by_o.get(pat.object, set()))
        if not buckets:
            return set(self._triples)
        base = min(buckets, key=len)
        return {t for t in base if pat.matches(t)}

    def size(self) -> int:
        with self._lock.read():
            return len(self._triples)

    def triples(self) -> frozenset[Triple]:
        with self._lock.read():
            return frozenset(self._triples)

    def copy(self) -> "Graph":
        """Independent snapshot carrying the same triples and version."""
        new = Graph()
        with self._lock.read():
            new._triples = set(self._triples)
            new._by_s = {k: set(v) for k, v in self._by_s.items()}
            new._by_p = {k: set(v) for k, v in self._by_p.items()}
            new._by_o = {k: set(v) for k, v in self._by_o.items()}
            new._version = self._version
        return new

    def __contains__(self, t: Triple) -> bool:
        with self._lock.read():
            return t in self._triples

    def __len__(self) -> int:
        return self.size()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.triples() == other.triples()

    def __repr__(self) -> str:
        return f"<Graph {self.size()} triples v{self.version}>"
