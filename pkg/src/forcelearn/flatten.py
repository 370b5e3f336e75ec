"""Turn list-valued examples into function-free extended instances.

Every distinct non-empty list becomes a constant and contributes one
``components(list, head, tail)`` fact to the description; the empty list
is the constant ``nil`` and contributes nothing (``null(nil)`` belongs in
the background database).  Lists are Python tuples, atoms are strings and
any other function application is a :class:`Compound`, which is rejected.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable, Iterable

from .database import ExtendedInstance
from .errors import NonListFunctor
from .logic import Literal

NIL = "nil"
COMPONENTS = "components"


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple


@dataclass(frozen=True)
class TermExample:
    pred: str
    args: tuple

    def __str__(self):
        return f"{self.pred}({','.join(render(a) for a in self.args)})" if self.args else self.pred


def render(term) -> str:
    if isinstance(term, tuple):
        return "[" + ",".join(render(t) for t in term) + "]"
    if isinstance(term, Compound):
        return f"{term.functor}({','.join(render(a) for a in term.args)})"
    return str(term)


class Flattener:
    """Names lists by content so equal sublists share one constant."""

    def __init__(self):
        self.names: dict[tuple, str] = {}
        self.facts: set[Literal] = set()

    def constant(self, term) -> str:
        if isinstance(term, Compound):
            raise NonListFunctor(f"cannot flatten function symbol {term.functor}/{len(term.args)}")
        if not isinstance(term, tuple):
            return str(term)
        if not term:
            return NIL
        name = self.names.get(term)
        if name is None:
            heads = [self.constant(t) for t in term]
            name = list_name(term, heads)
            self.names[term] = name
            tail = self.constant(term[1:])
            self.facts.add(Literal(COMPONENTS, (name, heads[0], tail)))
        return name

    def literal(self, example: TermExample) -> Literal:
        return Literal(example.pred, (self.constant(a) for a in example.args))


def list_name(term: tuple, element_names: list[str]) -> str:
    """``l`` plus the elements when each is one alphanumeric character, else a digest."""
    if all(len(e) == 1 and e.isalnum() for e in element_names):
        return "l" + "".join(element_names)
    digest = hashlib.sha1(render(term).encode()).hexdigest()[:12]
    return f"l_{digest}"


def flatten(
    example: TermExample,
    extras: Iterable[TermExample] = (),
    label: bool | None = None,
    base_facts: Callable[[TermExample], Iterable[TermExample]] | None = None,
) -> ExtendedInstance:
    """Flatten one example.

    ``extras`` are additional term-level facts placed in the description
    (for instance the base case a single recursive clause relies on).
    ``base_facts`` computes such extras from the example itself.
    """
    fl = Flattener()
    fact = fl.literal(example)
    extra_facts = [fl.literal(e) for e in extras]
    if base_facts is not None:
        extra_facts += [fl.literal(e) for e in base_facts(example)]
    return ExtendedInstance(fact, fl.facts | set(extra_facts), label)


def append_base_case(example: TermExample) -> list[TermExample]:
    """The ``append([], Ys, Ys)`` fact an append example's recursion ends on."""
    if len(example.args) != 3:
        return []
    return [TermExample(example.pred, ((), example.args[1], example.args[1]))]
