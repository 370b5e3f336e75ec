"""Rewrites that let the unique-mode, equality-assuming learners run on any
determinate declaration.

``augment_equality`` adds ``equal(c, c)`` facts and the ``equal(+,+)`` mode.
``split_modes`` gives every predicate with several modes one private copy
per mode (``mother_io``, ``mother_ii``, ...), so each copy has a single
mode.  ``unsplit_clause`` maps a learned clause back: ``equal`` literals
are resolved away by merging variables and split names are restored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .database import Database, ExtendedInstance
from .errors import PredicateCollision
from .logic import Clause, Literal, Var, constants_of
from .modes import EQUAL, Declaration, Mode

EQUAL_MODE = Mode(EQUAL, "++")


def equality_facts(constants: Iterable[str]) -> set[Literal]:
    return {Literal(EQUAL, (c, c)) for c in constants}


def _check_equal_facts(facts: Iterable[Literal]) -> None:
    for f in facts:
        if f.pred != EQUAL:
            continue
        if f.arity != 2 or f.args[0] != f.args[1]:
            raise PredicateCollision(f"{f} clashes with the reserved equality predicate")


def augment_equality(db: Database, dec: Declaration) -> tuple[Database, Declaration]:
    """Add ``equal(c, c)`` for every constant of ``db`` and the ``equal(+,+)`` mode."""
    _check_equal_facts(db)
    for m in dec.modes:
        if m.pred == EQUAL and m != EQUAL_MODE:
            raise PredicateCollision(f"declaration already uses {m}")
    if dec.pred == EQUAL:
        raise PredicateCollision("the head predicate may not be named equal")
    new_db = db.union(equality_facts(db.constants))
    new_dec = dec if dec.has_equality_mode else dec.with_modes((*dec.modes, EQUAL_MODE))
    return new_db, new_dec


def augment_instance_equality(instance: ExtendedInstance) -> ExtendedInstance:
    """Add ``equal(c, c)`` to the description for every constant of ``f`` and ``D``."""
    _check_equal_facts(instance.description)
    consts = constants_of((instance.fact, *instance.description))
    return ExtendedInstance(instance.fact, instance.description | equality_facts(consts), instance.label)


def _sign_code(mode: Mode) -> str:
    return mode.signs.replace("+", "i").replace("-", "o")


@dataclass(frozen=True)
class RenameTable:
    """Split predicate name -> (original name, mode)."""

    entries: dict = field(default_factory=dict)

    def original(self, pred: str) -> str:
        entry = self.entries.get(pred)
        return entry[0] if entry else pred

    def copies(self, pred: str, arity: int) -> list[str]:
        return [name for name, (orig, mode) in self.entries.items() if orig == pred and mode.arity == arity]

    def is_identity(self) -> bool:
        return all(name == orig for name, (orig, _) in self.entries.items())

    def __len__(self):
        return len(self.entries)


def split_modes(db: Database, dec: Declaration) -> tuple[Database, Declaration, RenameTable]:
    """Give each multi-mode body predicate one renamed copy per mode.

    Facts of a split predicate are duplicated under every copy's name.  A
    predicate with a single mode keeps its name, as does the head predicate.
    """
    table = _build_table(dec)
    new_dec = dec.with_modes(Mode(name, mode.signs) for name, (orig, mode) in table.entries.items())
    return Database(_split_facts(db, table)), new_dec, table


def _build_table(dec: Declaration) -> RenameTable:
    entries: dict[str, tuple[str, Mode]] = {}
    by_pred: dict[tuple[str, int], list[Mode]] = {}
    for m in dec.body_modes():
        by_pred.setdefault((m.pred, m.arity), []).append(m)
    taken = {p for p, _ in by_pred} | {dec.pred}
    for (pred, _), modes in by_pred.items():
        if len(modes) == 1:
            entries[pred] = (pred, modes[0])
            continue
        for m in modes:
            name = f"{pred}_{_sign_code(m)}"
            if name in taken or name in entries:
                raise PredicateCollision(f"split name {name} is already in use")
            entries[name] = (pred, m)
    return RenameTable(entries)


def _split_facts(facts: Iterable[Literal], table: RenameTable) -> set[Literal]:
    out = set()
    for f in facts:
        names = table.copies(f.pred, f.arity)
        if not names:
            out.add(f)
        for name in names:
            out.add(Literal(name, f.args))
    return out


def split_instance(instance: ExtendedInstance, table: RenameTable) -> ExtendedInstance:
    return ExtendedInstance(instance.fact, _split_facts(instance.description, table), instance.label)


def unsplit_clause(clause: Clause, table: RenameTable | None = None) -> Clause:
    """Resolve away ``equal`` literals and restore original predicate names.

    ``equal(V, W)`` merges ``V`` and ``W`` into whichever appears first in
    the clause.  Literals that become duplicates after merging are kept
    once, at their first position.
    """
    order = {v: i for i, v in enumerate(clause.variables())}
    parent: dict[Var, Var] = {}

    def find(v):
        while parent.get(v, v) != v:
            v = parent[v]
        return v

    rest = []
    for lit in clause.body:
        if lit.pred == EQUAL and lit.arity == 2:
            a, b = lit.args
            if isinstance(a, Var) and isinstance(b, Var):
                ra, rb = find(a), find(b)
                if ra != rb:
                    if order[rb] < order[ra]:
                        ra, rb = rb, ra
                    parent[rb] = ra
                continue
            if a == b:
                continue
        rest.append(lit)
    theta = {v: find(v) for v in order if find(v) != v}
    body = []
    for lit in rest:
        lit = lit.substitute(theta)
        if table is not None:
            lit = Literal(table.original(lit.pred), lit.args)
        body.append(lit)
    return Clause(clause.head.substitute(theta), dict.fromkeys(body))


@dataclass
class Transformation:
    """The full rewrite for one (db, declaration) pair, applied consistently."""

    db: Database
    dec: Declaration
    table: RenameTable
    equality: bool = True

    @classmethod
    def build(cls, db: Database, dec: Declaration, equality: bool = True) -> "Transformation":
        new_db, new_dec, table = split_modes(db, dec)
        if equality:
            new_db, new_dec = augment_equality(new_db, new_dec)
        return cls(new_db, new_dec, table, equality)

    def instance(self, instance: ExtendedInstance) -> ExtendedInstance:
        out = split_instance(instance, self.table)
        if self.equality:
            out = augment_instance_equality(out)
        return out

    def restore(self, clause: Clause) -> Clause:
        return unsplit_clause(clause, self.table)


class TransformedTeacher:
    """Wraps a teacher that speaks the original vocabulary.

    Hypotheses are restored before each query; counterexamples come back
    rewritten into the split, equality-augmented vocabulary.
    """

    def __init__(self, teacher, transformation: Transformation):
        self.teacher = teacher
        self.transformation = transformation

    @property
    def queries(self) -> int:
        return getattr(self.teacher, "queries", 0)

    def equivalence_query(self, hypothesis):
        restore = self.transformation.restore
        if isinstance(hypothesis, Clause):
            restored = restore(hypothesis)
        else:
            restored = tuple(restore(c) for c in hypothesis)
        cex = self.teacher.equivalence_query(restored)
        if cex is None:
            return None
        return type(cex)(self.transformation.instance(cex.instance), cex.positive)

    def basecase_query(self, instance: ExtendedInstance) -> bool:
        # descriptions handed back may be rewritten; the teacher wants originals
        return self.teacher.basecase_query(_unsplit_instance(instance, self.transformation))


def _unsplit_instance(instance: ExtendedInstance, tr: Transformation) -> ExtendedInstance:
    facts = set()
    for f in instance.description:
        if f.pred == EQUAL and tr.equality:
            continue
        facts.add(Literal(tr.table.original(f.pred), f.args))
    return ExtendedInstance(instance.fact, facts, instance.label)
