"""Most-specific clause construction and recursive-literal enumeration.

``deepen`` adds one literal for every usable mode with at least one output
and every tuple of existing variables that fills its input positions;
``constrain`` adds every output-free literal over existing variables;
``bottom_star(d, dec)`` applies ``deepen`` ``d`` times to the bare head and
finishes with ``constrain``.

Literal layout inside a pass is ``(number of inputs, input-variable
indices, position of the mode in the declaration)``, which reproduces the
familiar mother/father layout of hand-written bottom clauses.  Fresh
variables are named ``V<round>_<counter>``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .errors import EmbeddingFailure
from .logic import Clause, Literal, Var
from .modes import EQUAL, Declaration, Mode, body_modes

_FRESH = re.compile(r"V(\d+)_(\d+)$")


@dataclass(frozen=True)
class LedgerEntry:
    """Where a bottom-clause literal came from."""

    origin: str  # "deepen" or "constrain"
    round: int  # deepen round; 0 for constrain
    mode: Mode
    inputs: tuple[Var, ...]


@dataclass(frozen=True)
class BottomClause:
    clause: Clause
    ledger: tuple[LedgerEntry, ...] = field(default=())
    depth: int = 0
    fresh_count: int = 0

    @property
    def head(self) -> Literal:
        return self.clause.head

    @property
    def body(self) -> tuple[Literal, ...]:
        return self.clause.body

    def __len__(self):
        return len(self.clause.body)

    def variables(self) -> list[Var]:
        return self.clause.variables()

    def with_literals(self, literals) -> Clause:
        return Clause(self.clause.head, (*self.clause.body, *literals))


def head_clause(dec: Declaration) -> Clause:
    """``p(X1, ..., Xa') <-`` with distinct head variables."""
    return Clause(Literal(dec.pred, (Var(f"X{i + 1}") for i in range(dec.arity))))


def _fresh_state(clause: Clause) -> tuple[int, int]:
    """Highest fresh round and counter already used in ``clause``."""
    rounds, count = 0, 0
    for v in clause.variables():
        m = _FRESH.match(v.name)
        if m:
            rounds = max(rounds, int(m.group(1)))
            count = max(count, int(m.group(2)))
    return rounds, count


def _tuple_key(tup, index):
    return tuple(index[v] for v in tup)


def _deepen(clause: Clause, dec: Declaration, round_no: int, counter: int):
    variables = clause.variables()
    index = {v: i for i, v in enumerate(variables)}
    existing = set()
    for lit, mode in zip(clause.body, body_modes(clause)):
        if mode.has_outputs:
            existing.add((mode, tuple(lit.args[i] for i in mode.input_positions)))
    order = {m: i for i, m in enumerate(dec.modes)}
    planned = []
    for mode in dec.body_modes():
        if not mode.has_outputs:
            continue
        for tup in itertools.product(variables, repeat=len(mode.input_positions)):
            if (mode, tup) in existing:
                continue
            planned.append(((len(tup), _tuple_key(tup, index), order[mode]), mode, tup))
    planned.sort(key=lambda item: item[0])
    new_literals, entries = [], []
    for _, mode, tup in planned:
        args: list = [None] * mode.arity
        for pos, v in zip(mode.input_positions, tup):
            args[pos] = v
        for pos in mode.output_positions:
            counter += 1
            args[pos] = Var(f"V{round_no}_{counter}")
        new_literals.append(Literal(mode.pred, args))
        entries.append(LedgerEntry("deepen", round_no, mode, tup))
    return new_literals, entries, counter


def _constrain(clause: Clause, dec: Declaration):
    variables = clause.variables()
    index = {v: i for i, v in enumerate(variables)}
    present = set(clause.body)
    order = {m: i for i, m in enumerate(dec.modes)}
    planned = []
    for mode in dec.body_modes():
        if mode.has_outputs:
            continue
        for tup in itertools.product(variables, repeat=mode.arity):
            lit = Literal(mode.pred, tup)
            if lit in present:
                continue
            planned.append(((len(tup), _tuple_key(tup, index), order[mode]), mode, tup, lit))
    planned.sort(key=lambda item: item[0])
    return [p[3] for p in planned], [LedgerEntry("constrain", 0, p[1], p[2]) for p in planned]


def deepen(clause: Clause, dec: Declaration) -> Clause:
    """One DEEPEN pass; modes of the head predicate are never used."""
    rounds, counter = _fresh_state(clause)
    lits, _, _ = _deepen(clause, dec, rounds + 1, counter)
    return Clause(clause.head, (*clause.body, *lits))


def constrain(clause: Clause, dec: Declaration) -> Clause:
    lits, _ = _constrain(clause, dec)
    return Clause(clause.head, (*clause.body, *lits))


def bottom_star(d: int, dec: Declaration) -> BottomClause:
    if d < 0:
        raise ValueError("depth must be non-negative")
    clause = head_clause(dec)
    ledger: list[LedgerEntry] = []
    counter = 0
    for r in range(1, d + 1):
        lits, entries, counter = _deepen(clause, dec, r, counter)
        clause = Clause(clause.head, (*clause.body, *lits))
        ledger.extend(entries)
    lits, entries = _constrain(clause, dec)
    ledger.extend(entries)
    return BottomClause(Clause(clause.head, (*clause.body, *lits)), tuple(ledger), d, counter)


def deepen_size_bound(n: int, a: int, n_r: int) -> int:
    """Right-hand side of ``||DEEPEN(C)|| <= n + (a n)^(a-1) n_r``."""
    return n + (a * n) ** (a - 1) * n_r


def constrain_size_bound(n: int, a: int, n_r: int) -> int:
    """Right-hand side of ``||CONSTRAIN(C)|| <= n + (a n)^a n_r``."""
    return n + (a * n) ** a * n_r


def enumerate_recursive_literals(
    bottom: BottomClause | Clause,
    dec: Declaration,
    k: int = 1,
    exclude_head: bool = True,
) -> list[tuple[Literal, ...]]:
    """All k-tuples of closed recursive literals over the bottom clause's variables.

    Tuples are multisets (combinations with replacement) in lexicographic
    order of the single-literal enumeration, which itself walks
    ``variables ** a'`` in variable order.  The literal identical to the
    head is skipped unless ``exclude_head`` is false.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    clause = bottom.clause if isinstance(bottom, BottomClause) else bottom
    singles = []
    for tup in itertools.product(clause.variables(), repeat=dec.arity):
        lit = Literal(dec.pred, tup)
        if exclude_head and lit == clause.head:
            continue
        singles.append(lit)
    return list(itertools.combinations_with_replacement(singles, k))


def recursive_candidate_bound(bottom: BottomClause | Clause, dec: Declaration) -> int:
    """``p = (a ||BOTTOM||)^a'``."""
    clause = bottom.clause if isinstance(bottom, BottomClause) else bottom
    return (max(dec.max_arity, 1) * len(clause.body)) ** dec.arity


def normalize_duplicates(clause: Clause) -> Clause:
    """Merge literals sharing mode, predicate and input variables.

    For determinate clauses the outputs of such literals are forced equal,
    so their output variables are identified and the later copy dropped.
    Repeats until no such pair remains.
    """
    while True:
        modes = body_modes(clause)
        seen: dict[tuple, int] = {}
        merge = None
        for i, (lit, mode) in enumerate(zip(clause.body, modes)):
            key = (mode, tuple(lit.args[p] for p in mode.input_positions))
            if key in seen:
                merge = (seen[key], i, mode)
                break
            seen[key] = i
        if merge is None:
            return clause
        i, j, mode = merge
        keep, drop = clause.body[i], clause.body[j]
        theta = {}
        for p in mode.output_positions:
            theta[drop.args[p]] = keep.args[p]
        body = [b for n, b in enumerate(clause.body) if n != j]
        clause = Clause(clause.head, body).substitute(_resolve(theta))
        clause = _dedupe_body(clause)


def _resolve(theta: dict) -> dict:
    out = {}
    for v in theta:
        t = theta[v]
        while t in theta and theta[t] != t:
            t = theta[t]
        if t != v:
            out[v] = t
    return out


def _dedupe_body(clause: Clause) -> Clause:
    return Clause(clause.head, dict.fromkeys(clause.body))


def embed_subclause(c: Clause, dec: Declaration, bottom: BottomClause | Clause) -> Clause:
    """Map a determinate clause onto an equivalent subclause of the bottom clause.

    Builds the variable map from bottom variables to ``c``'s variables by
    walking ``c`` left to right, then keeps every bottom literal whose image
    is a literal of ``c``, plus ``equal(U, W)`` wherever ``U`` and ``W``
    share an image.
    """
    bclause = bottom.clause if isinstance(bottom, BottomClause) else bottom
    if c.head.pred != bclause.head.pred or c.head.arity != bclause.head.arity:
        raise EmbeddingFailure("head predicates differ")
    for lit in (c.head, *c.body):
        if not all(isinstance(a, Var) for a in lit.args):
            raise EmbeddingFailure(f"{lit} contains a constant")
    c = normalize_duplicates(c)
    theta: dict[Var, Var] = dict(zip(bclause.head.args, c.head.args))

    bmodes = body_modes(bclause)
    by_key: dict[tuple, list[int]] = {}
    for idx, (lit, mode) in enumerate(zip(bclause.body, bmodes)):
        by_key.setdefault((mode.pred, mode.signs), []).append(idx)

    for lit, mode in zip(c.body, body_modes(c)):
        if not mode.has_outputs:
            continue
        ins = tuple(lit.args[p] for p in mode.input_positions)
        hits = 0
        for idx in by_key.get((mode.pred, mode.signs), []):
            star = bclause.body[idx]
            if all(theta.get(star.args[p]) == v for p, v in zip(mode.input_positions, ins)):
                hits += 1
                for p in mode.output_positions:
                    theta[star.args[p]] = lit.args[p]
        if not hits:
            raise EmbeddingFailure(f"no image for {lit}; clause deeper than the bottom clause?")

    targets = set(c.body)
    keep = []
    for star in bclause.body:
        if not all(v in theta for v in star.args):
            continue
        image = star.substitute(theta)
        if image in targets:
            keep.append(star)
        elif star.pred == EQUAL and star.arity == 2 and theta[star.args[0]] == theta[star.args[1]]:
            keep.append(star)
    missing = targets - {star.substitute(theta) for star in keep}
    if missing:
        raise EmbeddingFailure(f"literals without a bottom image: {sorted(map(str, missing))}")
    return Clause(bclause.head, keep)
