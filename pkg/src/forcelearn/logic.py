"""Function-free terms, literals, clauses and substitutions.

Constants are plain ``str`` values; variables are :class:`Var` instances.
A *fact* is simply a ground :class:`Literal`.  Substitutions are ordinary
dicts mapping :class:`Var` to constants (or to other variables, when used
as renamings).
"""

from __future__ import annotations

from typing import Iterable, Mapping, Union

from .errors import ForceLearnError


class Var:
    """A logic variable, identified by name."""

    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("?var", name))

    def __eq__(self, other):
        return isinstance(other, Var) and other.name == self.name

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.name < other.name

    def __repr__(self):
        return f"Var({self.name!r})"

    def __str__(self):
        return self.name


Term = Union[Var, str]
Substitution = dict


def is_var(term) -> bool:
    return isinstance(term, Var)


class Literal:
    """An atom ``pred(t1, ..., tn)``; immutable by convention."""

    __slots__ = ("pred", "args", "_hash")

    def __init__(self, pred: str, args: Iterable[Term] = ()):
        self.pred = pred
        self.args = tuple(args)
        self._hash = hash((pred, self.args))

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def signature(self) -> tuple[str, int]:
        return self.pred, len(self.args)

    def is_ground(self) -> bool:
        return not any(isinstance(a, Var) for a in self.args)

    def variables(self) -> list[Var]:
        """Distinct variables in argument order."""
        seen = []
        for a in self.args:
            if isinstance(a, Var) and a not in seen:
                seen.append(a)
        return seen

    def substitute(self, theta: Mapping) -> "Literal":
        if not theta:
            return self
        return Literal(self.pred, (theta.get(a, a) if isinstance(a, Var) else a for a in self.args))

    def sort_key(self):
        return (self.pred, len(self.args), tuple((isinstance(a, Var), str(a)) for a in self.args))

    def __eq__(self, other):
        return (
            isinstance(other, Literal)
            and self._hash == other._hash
            and self.pred == other.pred
            and self.args == other.args
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"Literal({str(self)!r})"

    def __str__(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(str(a) for a in self.args)})"


Fact = Literal


def fact(pred: str, *args: str) -> Literal:
    """Build a ground literal, rejecting variables."""
    lit = Literal(pred, args)
    if not lit.is_ground():
        raise ForceLearnError(f"fact {lit} contains variables")
    return lit


class Clause:
    """A definite clause ``head <- body``; the body order is significant."""

    __slots__ = ("head", "body", "_hash")

    def __init__(self, head: Literal, body: Iterable[Literal] = ()):
        self.head = head
        self.body = tuple(body)
        self._hash = hash((head, self.body))

    def __eq__(self, other):
        return (
            isinstance(other, Clause)
            and self._hash == other._hash
            and self.head == other.head
            and self.body == other.body
        )

    def __hash__(self):
        return self._hash

    def __len__(self):
        # size measure: number of body literals
        return len(self.body)

    def __repr__(self):
        return f"Clause({str(self)!r})"

    def __str__(self):
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(b) for b in self.body)}."

    def variables(self) -> list[Var]:
        """Distinct variables in order of first appearance, head first."""
        seen: dict[Var, None] = {}
        for lit in (self.head, *self.body):
            for a in lit.args:
                if isinstance(a, Var):
                    seen.setdefault(a, None)
        return list(seen)

    def substitute(self, theta: Mapping) -> "Clause":
        return Clause(self.head.substitute(theta), (b.substitute(theta) for b in self.body))

    def with_body(self, body: Iterable[Literal]) -> "Clause":
        return Clause(self.head, body)

    def is_recursive_literal(self, lit: Literal) -> bool:
        return lit.pred == self.head.pred and lit.arity == self.head.arity

    def recursive_literals(self) -> list[Literal]:
        return [b for b in self.body if self.is_recursive_literal(b)]

    def nonrecursive_body(self) -> list[Literal]:
        return [b for b in self.body if not self.is_recursive_literal(b)]

    def is_recursive(self) -> bool:
        return any(self.is_recursive_literal(b) for b in self.body)


def match(pattern: Literal, ground: Literal, theta: Mapping | None = None) -> dict | None:
    """One-way unification of ``pattern`` onto a ground literal.

    Returns the extension of ``theta`` or ``None`` if they do not unify.
    """
    if pattern.pred != ground.pred or len(pattern.args) != len(ground.args):
        return None
    out = dict(theta) if theta else {}
    for p, g in zip(pattern.args, ground.args):
        if isinstance(p, Var):
            bound = out.get(p)
            if bound is None:
                out[p] = g
            elif bound != g:
                return None
        elif p != g:
            return None
    return out


def compose(sigma: Mapping, sigma2: Mapping) -> dict:
    """Union of two substitutions with disjoint domains."""
    overlap = set(sigma) & set(sigma2)
    if overlap:
        raise ForceLearnError(f"cannot compose substitutions sharing {sorted(map(str, overlap))}")
    out = dict(sigma)
    out.update(sigma2)
    return out


def is_subclause(c1: Clause, c2: Clause) -> bool:
    """Same head and ``c1``'s body is an order-preserving subsequence of ``c2``'s."""
    if c1.head != c2.head:
        return False
    it = iter(c2.body)
    return all(any(lit == other for other in it) for lit in c1.body)


def variant_renaming(c1: Clause, c2: Clause) -> dict | None:
    """A variable bijection mapping ``c1`` onto ``c2`` literal by literal, or None."""
    if len(c1.body) != len(c2.body):
        return None
    fwd: dict[Var, Var] = {}
    back: dict[Var, Var] = {}
    for l1, l2 in zip((c1.head, *c1.body), (c2.head, *c2.body)):
        if l1.pred != l2.pred or l1.arity != l2.arity:
            return None
        for a, b in zip(l1.args, l2.args):
            if isinstance(a, Var) != isinstance(b, Var):
                return None
            if not isinstance(a, Var):
                if a != b:
                    return None
                continue
            if fwd.setdefault(a, b) != b or back.setdefault(b, a) != a:
                return None
    return fwd


def is_variant(c1: Clause, c2: Clause) -> bool:
    return variant_renaming(c1, c2) is not None


def canonical_facts(facts: Iterable[Literal]) -> list[Literal]:
    return sorted(set(facts), key=Literal.sort_key)


def constants_of(literals: Iterable[Literal]) -> set[str]:
    return {a for lit in literals for a in lit.args if not isinstance(a, Var)}
