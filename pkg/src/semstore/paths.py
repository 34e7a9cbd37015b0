"""Derived relations over the graph: expressions, automata, path evaluation.

Expressions compose declared predicates with the regular operators
``/`` (sequence), ``|`` (alternation), ``*``, ``+``, ``?`` and ``^``
(inverse). Evaluation is existential: it answers which nodes are reachable,
not which paths witness it. Unknown predicate names act as empty relations
so expressions can be written before the data exists.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Union

from . import ns
from .triples import Graph, Iri, TriplePattern


@dataclass(frozen=True, slots=True)
class Base:
    predicate: Iri


@dataclass(frozen=True, slots=True)
class Inverse:
    inner: "PathExpr"


@dataclass(frozen=True, slots=True)
class Seq:
    left: "PathExpr"
    right: "PathExpr"


@dataclass(frozen=True, slots=True)
class Alt:
    left: "PathExpr"
    right: "PathExpr"


@dataclass(frozen=True, slots=True)
class Star:
    inner: "PathExpr"


@dataclass(frozen=True, slots=True)
class Plus:
    inner: "PathExpr"


@dataclass(frozen=True, slots=True)
class Opt:
    inner: "PathExpr"


PathExpr = Union[Base, Inverse, Seq, Alt, Star, Plus, Opt]

# Transition label: None is epsilon, otherwise (predicate, traverse_inverse).
Label = Union[None, tuple[Iri, bool]]


class PathSyntaxError(ValueError):
    """Malformed path expression; carries the byte offset of the problem."""

    def __init__(self, offset: int, message: str) -> None:
        super().__init__(f"at byte {offset}: {message}")
        self.offset = offset


@dataclass(frozen=True)
class PathAutomaton:
    n_states: int
    start: int
    accepts: frozenset[int]
    transitions: tuple[tuple[int, Label, int], ...]


_NAME_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-")


class _Parser:
    """Recursive-descent parser for the path grammar.

    alt := seq ('|' seq)* ; seq := factor ('/' factor)* ;
    factor := atom ('*'|'+'|'?')* ; atom := NAME | '^' atom | '(' alt ')'
    """

    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def _offset(self) -> int:
        return len(self.text[: self.pos].encode("utf-8"))

    def _error(self, message: str) -> PathSyntaxError:
        return PathSyntaxError(self._offset(), message)

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def _peek(self) -> str | None:
        self._skip_ws()
        if self.pos < len(self.text):
            return self.text[self.pos]
        return None

    def parse(self) -> PathExpr:
        if not self.text.strip():
            raise PathSyntaxError(0, "empty path expression")
        expr = self._alt()
        self._skip_ws()
        if self.pos < len(self.text):
            raise self._error(f"unexpected {self.text[self.pos]!r}")
        return expr

    def _alt(self) -> PathExpr:
        expr = self._seq()
        while self._peek() == "|":
            self.pos += 1
            expr = Alt(expr, self._seq())
        return expr

    def _seq(self) -> PathExpr:
        expr = self._factor()
        while self._peek() == "/":
            self.pos += 1
            expr = Seq(expr, self._factor())
        return expr

    def _factor(self) -> PathExpr:
        expr = self._atom()
        while True:
            ch = self._peek()
            if ch == "*":
                expr = Star(expr)
            elif ch == "+":
                expr = Plus(expr)
            elif ch == "?":
                expr = Opt(expr)
            else:
                return expr
            self.pos += 1

    def _atom(self) -> PathExpr:
        ch = self._peek()
        if ch is None:
            raise self._error("expected a predicate name, '^' or '('")
        if ch == "^":
            self.pos += 1
            return Inverse(self._atom())
        if ch == "(":
            self.pos += 1
            expr = self._alt()
            if self._peek() != ")":
                raise self._error("expected ')'")
            self.pos += 1
            return expr
        return Base(self._name())

    def _name(self) -> Iri:
        self._skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "<":
            end = self.text.find(">", self.pos + 1)
            if end < 0:
                raise self._error("unterminated '<'")
            value = self.text[self.pos + 1 : end]
            self.pos = end + 1
            if not value:
                raise PathSyntaxError(len(self.text[:start].encode("utf-8")), "empty IRI")
            return Iri(value)
        while self.pos < len(self.text) and (
            self.text[self.pos] in _NAME_CHARS or self.text[self.pos] == ":"
        ):
            self.pos += 1
        token = self.text[start : self.pos]
        if not token:
            raise self._error("expected a predicate name, '^' or '('")
        try:
            return ns.parse_name(token)
        except (ns.UnknownPrefixError, ValueError) as exc:
            raise PathSyntaxError(len(self.text[:start].encode("utf-8")), str(exc)) from exc


def parse_path(text: str) -> PathExpr:
    return _Parser(text).parse()


def _push_inverse(expr: PathExpr, inverted: bool = False) -> PathExpr:
    """Rewrite to a form where Inverse wraps only Base leaves.

    Converse distributes over union and closure but reverses composition:
    ^(a/b) == ^b/^a.
    """
    if isinstance(expr, Base):
        return Inverse(expr) if inverted else expr
    if isinstance(expr, Inverse):
        return _push_inverse(expr.inner, not inverted)
    if isinstance(expr, Seq):
        left = _push_inverse(expr.left, inverted)
        right = _push_inverse(expr.right, inverted)
        return Seq(right, left) if inverted else Seq(left, right)
    if isinstance(expr, Alt):
        return Alt(_push_inverse(expr.left, inverted), _push_inverse(expr.right, inverted))
    if isinstance(expr, Star):
        return Star(_push_inverse(expr.inner, inverted))
    if isinstance(expr, Plus):
        return Plus(_push_inverse(expr.inner, inverted))
    if isinstance(expr, Opt):
        return Opt(_push_inverse(expr.inner, inverted))
    raise TypeError(f"not a path expression: {expr!r}")


class _Builder:
    def __init__(self) -> None:
        self.n = 0
        self.transitions: list[tuple[int, Label, int]] = []

    def fresh(self) -> int:
        self.n += 1
        return self.n - 1

    def edge(self, a: int, label: Label, b: int) -> None:
        self.transitions.append((a, label, b))

    def build(self, expr: PathExpr) -> tuple[int, int]:
        """Thompson construction; returns (start, accept) for the fragment."""
        if isinstance(expr, Base):
            s, a = self.fresh(), self.fresh()
            self.edge(s, (expr.predicate, False), a)
            return s, a
        if isinstance(expr, Inverse):
            # Normalization leaves Inverse only around Base.
            assert isinstance(expr.inner, Base)
            s, a = self.fresh(), self.fresh()
            self.edge(s, (expr.inner.predicate, True), a)
            return s, a
        if isinstance(expr, Seq):
            ls, la = self.build(expr.left)
            rs, ra = self.build(expr.right)
            self.edge(la, None, rs)
            return ls, ra
        if isinstance(expr, Alt):
            s, a = self.fresh(), self.fresh()
            ls, la = self.build(expr.left)
            rs, ra = self.build(expr.right)
            self.edge(s, None, ls)
            self.edge(s, None, rs)
            self.edge(la, None, a)
            self.edge(ra, None, a)
            return s, a
        if isinstance(expr, Star):
            s, a = self.fresh(), self.fresh()
            is_, ia = self.build(expr.inner)
            self.edge(s, None, is_)
            self.edge(s, None, a)
            self.edge(ia, None, a)
            self.edge(ia, None, is_)
            return s, a
        if isinstance(expr, Plus):
            s, a = self.fresh(), self.fresh()
            is_, ia = self.build(expr.inner)
            self.edge(s, None, is_)
            self.edge(ia, None, a)
            self.edge(ia, None, is_)
            return s, a
        if isinstance(expr, Opt):
            s, a = self.fresh(), self.fresh()
            is_, ia = self.build(expr.inner)
            self.edge(s, None, is_)
            self.edge(s, None, a)
            self.edge(ia, None, a)
            return s, a
        raise TypeError(f"not a path expression: {expr!r}")


def compile_path(expr: PathExpr) -> PathAutomaton:
    builder = _Builder()
    start, accept = builder.build(_push_inverse(expr))
    return PathAutomaton(
        n_states=builder.n,
        start=start,
        accepts=frozenset({accept}),
        transitions=tuple(builder.transitions),
    )


def _product_bfs(graph: Graph, automaton: PathAutomaton, start: Iri) -> tuple[set[Iri], int]:
    """BFS over (graph node, automaton state); returns (result, pairs visited)."""
    eps: dict[int, list[int]] = defaultdict(list)
    labeled: dict[int, list[tuple[Iri, bool, int]]] = defaultdict(list)
    for a, label, b in automaton.transitions:
        if label is None:
            eps[a].append(b)
        else:
            labeled[a].append((label[0], label[1], b))

    seen: set[tuple[Iri, int]] = {(start, automaton.start)}
    queue: deque[tuple[Iri, int]] = deque(seen)
    result: set[Iri] = set()
    while queue:
        node, state = queue.popleft()
        if state in automaton.accepts:
            result.add(node)
        for nxt in eps[state]:
            pair = (node, nxt)
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
        for predicate, inverse, nxt in labeled[state]:
            if inverse:
                neighbours = (
                    t.subject
                    for t in graph.match(TriplePattern(predicate=predicate, object=node))
                )
            else:
                neighbours = (
                    t.object
                    for t in graph.match(TriplePattern(subject=node, predicate=predicate))
                    if isinstance(t.object, Iri)
                )
            for nb in neighbours:
                pair = (nb, nxt)
                if pair not in seen:
                    seen.add(pair)
                    queue.append(pair)
    return result, len(seen)


def eval_path(graph: Graph, automaton: PathAutomaton, start: Iri) -> set[Iri]:
    """All nodes reachable from ``start`` along some word of the automaton."""
    result, _ = _product_bfs(graph, automaton, start)
    return result


def holds_path(graph: Graph, expr: PathExpr, a: Iri, b: Iri) -> bool:
    return b in eval_path(graph, compile_path(expr), a)
