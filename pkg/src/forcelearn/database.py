"""Ground fact databases, extended instances and determinate lookup."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import DeterminacyViolation
from .logic import Literal, Var, canonical_facts


class Database:
    """An immutable set of ground facts with lazily built argument indexes.

    Indexes are keyed by ``(pred, arity, bound positions)`` and map the
    tuple of values at those positions to the matching facts.
    """

    __slots__ = ("facts", "_by_sig", "_index", "_constants")

    def __init__(self, facts: Iterable[Literal] = ()):
        facts = frozenset(facts)
        for f in facts:
            if not f.is_ground():
                raise ValueError(f"non-ground fact {f}")
        self.facts = facts
        self._by_sig: dict[tuple[str, int], list[Literal]] | None = None
        self._index: dict[tuple, dict[tuple, list[Literal]]] = {}
        self._constants: frozenset[str] | None = None

    def __contains__(self, f: Literal) -> bool:
        return f in self.facts

    def __len__(self):
        return len(self.facts)

    def __iter__(self) -> Iterator[Literal]:
        return iter(canonical_facts(self.facts))

    def __eq__(self, other):
        return isinstance(other, Database) and self.facts == other.facts

    def __hash__(self):
        return hash(self.facts)

    def __repr__(self):
        return f"Database({len(self.facts)} facts)"

    def union(self, extra: Iterable[Literal]) -> "Database":
        extra = frozenset(extra)
        if extra <= self.facts:
            return self
        return Database(self.facts | extra)

    __or__ = union

    @property
    def constants(self) -> frozenset[str]:
        if self._constants is None:
            self._constants = frozenset(a for f in self.facts for a in f.args)
        return self._constants

    def predicates(self) -> set[tuple[str, int]]:
        return set(self._signatures())

    def _signatures(self) -> dict[tuple[str, int], list[Literal]]:
        if self._by_sig is None:
            by_sig: dict[tuple[str, int], list[Literal]] = {}
            for f in canonical_facts(self.facts):
                by_sig.setdefault(f.signature, []).append(f)
            self._by_sig = by_sig
        return self._by_sig

    def facts_of(self, pred: str, arity: int) -> list[Literal]:
        return self._signatures().get((pred, arity), [])

    def lookup(self, pred: str, arity: int, bound: Mapping[int, str]) -> list[Literal]:
        """Facts of ``pred/arity`` whose argument ``i`` equals ``bound[i]``."""
        if not bound:
            return self.facts_of(pred, arity)
        positions = tuple(sorted(bound))
        if len(positions) == arity:
            f = Literal(pred, (bound[i] for i in range(arity)))
            return [f] if f in self.facts else []
        key = (pred, arity, positions)
        index = self._index.get(key)
        if index is None:
            index = {}
            for f in self.facts_of(pred, arity):
                index.setdefault(tuple(f.args[i] for i in positions), []).append(f)
            self._index[key] = index
        return index.get(tuple(bound[i] for i in positions), [])

    def scan(self, pred: str, arity: int, bound: Mapping[int, str]) -> list[Literal]:
        """Linear-scan twin of :meth:`lookup`, kept as a test oracle."""
        return [
            f
            for f in canonical_facts(self.facts)
            if f.pred == pred and f.arity == arity and all(f.args[i] == v for i, v in bound.items())
        ]


@dataclass(frozen=True)
class ExtendedInstance:
    """An instance fact plus its private description facts."""

    fact: Literal
    description: frozenset = field(default=frozenset())
    label: bool | None = None

    def __post_init__(self):
        object.__setattr__(self, "description", frozenset(self.description))
        if not self.fact.is_ground():
            raise ValueError(f"instance fact {self.fact} is not ground")
        for f in self.description:
            if not f.is_ground():
                raise ValueError(f"description fact {f} is not ground")

    @property
    def size(self) -> int:
        return len(self.description)

    def with_label(self, label: bool | None) -> "ExtendedInstance":
        return ExtendedInstance(self.fact, self.description, label)

    def context(self, db: Database) -> Database:
        """The database ``DB ∪ D`` the instance is judged against."""
        return db.union(self.description)

    def sort_key(self):
        return (self.size, self.fact.sort_key(), tuple(f.sort_key() for f in canonical_facts(self.description)))


def matches(literal: Literal, sigma: Mapping, db: Database) -> list[dict]:
    """All distinct bindings of ``literal``'s unbound variables making it a fact of ``db``."""
    bound: dict[int, str] = {}
    free: list[tuple[int, Var]] = []
    for i, a in enumerate(literal.args):
        if isinstance(a, Var):
            v = sigma.get(a)
            if v is None:
                free.append((i, a))
            else:
                bound[i] = v
        else:
            bound[i] = a
    candidates = db.lookup(literal.pred, literal.arity, bound)
    if not free:
        return [{}] if candidates else []
    out: list[dict] = []
    for f in candidates:
        theta: dict = {}
        for i, v in free:
            prev = theta.get(v)
            if prev is None:
                theta[v] = f.args[i]
            elif prev != f.args[i]:
                break
        else:
            if theta not in out:
                out.append(theta)
    return out


def lookup_mgs(literal: Literal, sigma: Mapping, db: Database) -> dict | None:
    """The unique most general ``sigma'`` with ``literal·sigma·sigma'`` in ``db``.

    Returns ``None`` when no fact matches and raises
    :class:`DeterminacyViolation` when several distinct bindings exist.
    """
    found = matches(literal, sigma, db)
    if not found:
        return None
    if len(found) > 1:
        raise DeterminacyViolation(
            f"{literal.substitute(sigma)} has {len(found)} solutions, e.g. {found[0]} and {found[1]}"
        )
    return found[0]
