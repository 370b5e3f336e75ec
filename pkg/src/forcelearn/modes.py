"""Mode strings, declarations and the syntactic checks built on them."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ParseError
from .logic import Clause, Literal, Var

EQUAL = "equal"


@dataclass(frozen=True, order=True)
class Mode:
    """A predicate symbol plus one ``+``/``-`` marker per argument."""

    pred: str
    signs: str

    def __post_init__(self):
        if set(self.signs) - {"+", "-"}:
            raise ValueError(f"bad mode signs {self.signs!r}")

    @property
    def arity(self) -> int:
        return len(self.signs)

    @property
    def input_positions(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.signs) if s == "+")

    @property
    def output_positions(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.signs) if s == "-")

    @property
    def has_outputs(self) -> bool:
        return "-" in self.signs

    def inputs(self, fact: Literal) -> tuple:
        return tuple(fact.args[i] for i in self.input_positions)

    def outputs(self, fact: Literal) -> tuple:
        return tuple(fact.args[i] for i in self.output_positions)

    @property
    def compact(self) -> str:
        """Compact notation, e.g. ``components+--``."""
        return self.pred + self.signs

    def __str__(self):
        return f"{self.pred}({','.join(self.signs)})"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        """Accept ``components(+,-,-)`` or ``components+--``."""
        text = text.strip().rstrip(".").strip()
        m = re.fullmatch(r"([a-z][A-Za-z0-9_]*)\s*\(([^)]*)\)", text)
        if m:
            signs = "".join(s.strip() for s in m.group(2).split(",") if s.strip())
            signs = signs.replace("−", "-")
            return cls(m.group(1), signs)
        m = re.fullmatch(r"([a-z][A-Za-z0-9_]*?)\s*([+\-−\s]*)", text)
        if m:
            return cls(m.group(1), re.sub(r"\s", "", m.group(2)).replace("−", "-"))
        raise ParseError(f"cannot parse mode {text!r}")


@dataclass(frozen=True)
class Declaration:
    """The bias ``(p, a', R)``: head predicate, head arity, allowed body modes."""

    pred: str
    arity: int
    modes: tuple[Mode, ...] = field(default=())

    def __post_init__(self):
        # dedupe while preserving order; the order drives bottom-clause layout
        object.__setattr__(self, "modes", tuple(dict.fromkeys(self.modes)))

    @property
    def mode_set(self) -> frozenset[Mode]:
        return frozenset(self.modes)

    @property
    def unique_mode(self) -> bool:
        preds = [(m.pred, m.arity) for m in self.modes]
        return len(preds) == len(set(preds))

    @property
    def has_equality_mode(self) -> bool:
        return Mode(EQUAL, "++") in self.modes

    @property
    def max_arity(self) -> int:
        """The constant ``a``: longest mode string (head excluded)."""
        return max((m.arity for m in self.modes), default=0)

    def __len__(self):
        return len(self.modes)

    def with_modes(self, modes: Iterable[Mode]) -> "Declaration":
        return Declaration(self.pred, self.arity, tuple(modes))

    def modes_for(self, pred: str) -> list[Mode]:
        return [m for m in self.modes if m.pred == pred]

    def body_modes(self) -> list[Mode]:
        """Modes usable for nonrecursive body literals."""
        return [m for m in self.modes if not (m.pred == self.pred and m.arity == self.arity)]


def body_modes(clause: Clause) -> list[Mode]:
    """Mode of every body literal, computed in one left-to-right pass.

    Constants count as inputs; so does any variable seen in the head or an
    earlier body literal.
    """
    seen = set(clause.head.variables())
    out = []
    for lit in clause.body:
        signs = "".join("+" if not isinstance(a, Var) or a in seen else "-" for a in lit.args)
        out.append(Mode(lit.pred, signs))
        seen.update(lit.variables())
    return out


def literal_mode(clause: Clause, index: int) -> Mode:
    if not 0 <= index < len(clause.body):
        raise IndexError(index)
    seen = set(clause.head.variables())
    for lit in clause.body[:index]:
        seen.update(lit.variables())
    lit = clause.body[index]
    return Mode(lit.pred, "".join("+" if not isinstance(a, Var) or a in seen else "-" for a in lit.args))


def input_variables(clause: Clause, index: int) -> list[Var]:
    mode = literal_mode(clause, index)
    lit = clause.body[index]
    return list(dict.fromkeys(lit.args[i] for i in mode.input_positions if isinstance(lit.args[i], Var)))


def output_variables(clause: Clause, index: int) -> list[Var]:
    mode = literal_mode(clause, index)
    lit = clause.body[index]
    return list(dict.fromkeys(lit.args[i] for i in mode.output_positions))


def variable_depths(clause: Clause) -> tuple[dict[Var, int], int]:
    """Depth of each variable and of the clause.

    Head variables are at depth 0; a new variable is one deeper than the
    deepest input variable of the literal introducing it.  A literal with no
    input variables gives its outputs depth 1.
    """
    depth = {v: 0 for v in clause.head.variables()}
    for lit in clause.body:
        ins = [a for a in lit.args if isinstance(a, Var) and a in depth]
        base = max((depth[v] for v in ins), default=0)
        for a in lit.args:
            if isinstance(a, Var) and a not in depth:
                depth[a] = base + 1
    return depth, max(depth.values(), default=0)


def satisfies_declaration(clause: Clause, dec: Declaration) -> bool:
    if clause.head.pred != dec.pred or clause.head.arity != dec.arity:
        return False
    allowed = dec.mode_set
    return all(m in allowed for m in body_modes(clause))


def is_determinate_mode(mode: Mode, universe: Iterable[Literal]) -> bool:
    """True iff the inputs of ``mode`` functionally determine its outputs over ``universe``."""
    seen: dict[tuple, tuple] = {}
    for f in universe:
        if f.pred != mode.pred or f.arity != mode.arity:
            continue
        key, val = mode.inputs(f), mode.outputs(f)
        if seen.setdefault(key, val) != val:
            return False
    return True


def is_determinate_declaration(dec: Declaration, universe: Iterable[Literal]) -> bool:
    facts = list(universe)
    return all(is_determinate_mode(m, facts) for m in dec.modes)


def support_closure(clause: Clause, index: int) -> set[int]:
    """Body positions supported, directly or transitively, by literal ``index``."""
    if not 0 <= index < len(clause.body):
        raise IndexError(index)
    outputs = _output_sets(clause)
    result: set[int] = set()
    frontier = [index]
    while frontier:
        i = frontier.pop()
        outs = outputs[i]
        if not outs:
            continue
        for j in range(i + 1, len(clause.body)):
            if j not in result and any(isinstance(a, Var) and a in outs for a in clause.body[j].args):
                result.add(j)
                frontier.append(j)
    return result


def _output_sets(clause: Clause) -> list[set[Var]]:
    seen = set(clause.head.variables())
    out = []
    for lit in clause.body:
        vs = set(lit.variables())
        out.append(vs - seen)
        seen |= vs
    return out
