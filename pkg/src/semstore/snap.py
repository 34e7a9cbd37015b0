"""Consumer model: situations of fluents, need rules, and the event log.

Situations are immutable time slices on a logical integer clock; asserting a
fluent derives a new situation rather than editing the old one. Needs come
from conjunctive rules over fluents and never chain into further rules.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from . import ns
from .triples import Iri


class FluentCategory(str, Enum):
    LIFE_STAGE = "LifeStage"
    DEMOGRAPHIC = "Demographic"
    LIFE_STYLE = "LifeStyle"
    OBLIGATION = "Obligation"


class EventKind(str, Enum):
    ACTION = "action"
    BEHAVIOR = "behavior"


class RuleSyntaxError(ValueError):
    """Bad rule file; carries the 1-based line number."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class EventOrderError(ValueError):
    """Event timestamp regressed behind the log tail."""


@dataclass(frozen=True, slots=True)
class Fluent:
    category: FluentCategory
    key: str
    value: str

    def __post_init__(self) -> None:
        if not self.key:
            raise ValueError("fluent key must be non-empty")


@dataclass(frozen=True, slots=True)
class Situation:
    """Snapshot of the fluents holding at one logical instant."""

    id: str
    timestamp: int = 0
    fluents: tuple[Fluent, ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.fluents, key=lambda f: (f.category.value, f.key)))
        keys = [(f.category, f.key) for f in ordered]
        if len(set(keys)) != len(keys):
            raise ValueError("at most one value per (category, key)")
        object.__setattr__(self, "fluents", ordered)

    @classmethod
    def initial(cls, id: str) -> "Situation":
        return cls(id=id, timestamp=0, fluents=())


def holds(s: Situation, category: FluentCategory, key: str) -> str | None:
    """The value stored under (category, key), or None when absent."""
    for f in s.fluents:
        if f.category == category and f.key == key:
            return f.value
    return None


def assert_fluent(s: Situation, f: Fluent) -> Situation:
    """New situation with ``f`` upserted and a strictly later timestamp."""
    kept = tuple(x for x in s.fluents if (x.category, x.key) != (f.category, f.key))
    return Situation(id=s.id, timestamp=s.timestamp + 1, fluents=kept + (f,))


@dataclass(frozen=True, slots=True)
class Condition:
    category: FluentCategory
    key: str
    operator: str  # '=' or '!='
    value: str


@dataclass(frozen=True, slots=True)
class NeedRule:
    name: str
    conditions: tuple[Condition, ...]
    need_target: Iri
    priority: int = 0


@dataclass(frozen=True, slots=True)
class Need:
    target: Iri
    priority: int
    source_rule: str


@dataclass(frozen=True, slots=True)
class Event:
    kind: EventKind
    name: str
    timestamp: int
    payload: tuple[tuple[str, str], ...] = ()


_RULE_RE = re.compile(
    r"^rule\s+(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*:\s*"
    r"when\s+(?P<conds>.+?)\s+then\s+need\s+(?P<target>\S+)"
    r"(?:\s+priority\s+(?P<priority>\d+))?\s*$"
)
_COND_RE = re.compile(
    r"^(?P<cat>[A-Za-z]+)\.(?P<key>[A-Za-z_][A-Za-z0-9_]*)\s*(?P<op>!?=)\s*\"(?P<value>[^\"]*)\"$"
)


def parse_rules(text: str) -> list[NeedRule]:
    """Parse one rule per line; '#' comments and blank lines are skipped."""
    rules: list[NeedRule] = []
    names: set[str] = set()
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _RULE_RE.match(line)
        if not m:
            raise RuleSyntaxError(lineno, f"malformed rule: {line!r}")
        name = m.group("name")
        if name in names:
            raise RuleSyntaxError(lineno, f"duplicate rule name {name!r}")
        names.add(name)
        conditions = []
        for part in re.split(r"\s+and\s+", m.group("conds")):
            cm = _COND_RE.match(part.strip())
            if not cm:
                raise RuleSyntaxError(lineno, f"malformed condition: {part.strip()!r}")
            try:
                category = FluentCategory(cm.group("cat"))
            except ValueError:
                raise RuleSyntaxError(
                    lineno,
                    f"unknown category {cm.group('cat')!r} "
                    f"(expected one of {', '.join(c.value for c in FluentCategory)})",
                ) from None
            conditions.append(
                Condition(category, cm.group("key"), cm.group("op"), cm.group("value"))
            )
        try:
            target = ns.parse_name(m.group("target"))
        except (ns.UnknownPrefixError, ValueError) as exc:
            raise RuleSyntaxError(lineno, str(exc)) from exc
        priority = int(m.group("priority") or 0)
        rules.append(NeedRule(name, tuple(conditions), target, priority))
    return rules


def _condition_met(s: Situation, cond: Condition) -> bool:
    value = holds(s, cond.category, cond.key)
    if value is None:
        return False  # absent fluent fails both '=' and '!='
    if cond.operator == "=":
        return value == cond.value
    return value != cond.value


def derive_needs(s: Situation, rules: list[NeedRule]) -> list[Need]:
    """One need per fired rule, ordered by (descending priority, rule name)."""
    fired = [
        Need(rule.need_target, rule.priority, rule.name)
        for rule in rules
        if all(_condition_met(s, c) for c in rule.conditions)
    ]
    fired.sort(key=lambda n: (-n.priority, n.source_rule))
    return fired


def record_event(log: list[Event], e: Event) -> list[Event]:
    """Append-only: returns an extended copy, rejecting timestamp regressions."""
    if log and e.timestamp < log[-1].timestamp:
        raise EventOrderError(
            f"event timestamp {e.timestamp} precedes log tail {log[-1].timestamp}"
        )
    return [*log, e]
