"""Top-down proof search for function-free programs over ground databases.

Two policies are supported.  ``depth`` is a plain depth-bounded SLD
interpreter (with an ancestor check, which never changes the answer
under a depth bound since a shortest proof never repeats a goal on a
branch).  ``visited`` additionally remembers every subgoal already
proved and every subgoal whose failure did not depend on a loop or budget
cut, so the work is polynomial in the number of distinct ground subgoals.

A database lookup is a proof of depth 0; applying a clause whose
program-defined subgoals have proofs of depth at most ``h - 1`` gives a
proof of depth ``h``, so clause application needs ``h >= 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .database import Database, ExtendedInstance, matches
from .logic import Clause, Literal, Var, match

DEFAULT_CEILING = 2**31 - 1
DEPTH_ONLY = "depth"
VISITED_MEMO = "visited"


def saturating_power(base: int, exponent: int, ceiling: int = DEFAULT_CEILING) -> int:
    """``min(base ** exponent, ceiling)`` without building huge integers."""
    if base <= 1 or exponent == 0:
        return min(base**exponent, ceiling)
    result = 1
    for _ in range(exponent):
        result *= base
        if result >= ceiling:
            return ceiling
    return result


def depth_bound(a: int, n_description: int, n_db: int, head_arity: int, ceiling: int = DEFAULT_CEILING) -> int:
    """``(a·|D| + a·|DB|) ** a'`` saturated at ``ceiling``, and at least 1.

    The floor matters only when ``D`` and ``DB`` are both empty: the bound
    is then 0, yet a bodiless clause still needs one application.
    """
    return max(1, saturating_power(a * n_description + a * n_db, head_arity, ceiling))


@dataclass(frozen=True)
class ProofBudget:
    depth: int = DEFAULT_CEILING
    memo: str = VISITED_MEMO
    ceiling: int = DEFAULT_CEILING

    def __post_init__(self):
        if self.memo not in (DEPTH_ONLY, VISITED_MEMO):
            raise ValueError(f"unknown memo policy {self.memo!r}")
        object.__setattr__(self, "depth", min(self.depth, self.ceiling))

    @classmethod
    def auto(
        cls,
        db: Database,
        instance: ExtendedInstance,
        head_arity: int,
        a: int | None = None,
        memo: str = VISITED_MEMO,
        ceiling: int = DEFAULT_CEILING,
    ) -> "ProofBudget":
        if a is None:
            a = max_arity(db.facts, instance.description, (instance.fact,))
        return cls(depth_bound(a, instance.size, len(db), head_arity, ceiling), memo, ceiling)


def max_arity(*fact_sets: Iterable[Literal]) -> int:
    return max((f.arity for facts in fact_sets for f in facts), default=0)


@dataclass
class ProofResult:
    """Outcome of a proof attempt plus diagnostics."""

    proved: bool
    budget_exceeded: bool = False
    loop_detected: bool = False
    nodes: int = 0
    # (goal, failing body literal, substitution at the failure point)
    failures: list[tuple[Literal, Literal, dict]] = field(default_factory=list)

    def __bool__(self):
        return self.proved

    def first_lookup_failure(self):
        return self.failures[0] if self.failures else None


class Prover:
    """Proves ground goals from a program and a ground database."""

    def __init__(self, program: Sequence[Clause], db: Database, budget: ProofBudget | None = None):
        self.program = tuple(program)
        self.db = db
        self.budget = budget or ProofBudget()
        self.idb = {c.head.signature for c in self.program}
        self._proved: set[Literal] = set()
        self._visited: set[Literal] = set()
        self._ancestors: set[Literal] = set()
        self._goal_constants: set[str] = set()
        self.result = ProofResult(False)

    @property
    def memo(self) -> bool:
        return self.budget.memo == VISITED_MEMO

    def prove(self, goal: Literal) -> ProofResult:
        self.result = ProofResult(False)
        self._goal_constants = set(goal.args)
        if not self.memo:
            self.result.proved = self._prove(goal, self.budget.depth)
            return self.result
        # Each pass expands a goal at most once; a revisit answers with what is
        # known so far.  Passes repeat until the goal is proved or a pass proves
        # nothing new, so the work is polynomial in the number of distinct goals.
        while True:
            known = len(self._proved)
            self._visited: set[Literal] = set()
            if self._prove(goal, self.budget.depth) or len(self._proved) == known:
                break
        self.result.proved = goal in self._proved or goal in self.db
        return self.result

    def _prove(self, goal: Literal, depth: int) -> bool:
        res = self.result
        res.nodes += 1
        if goal in self.db:
            return True
        if depth < 1:
            # only a lookup fits in a depth-0 budget
            res.budget_exceeded = True
            return False
        if goal in self._ancestors:
            res.loop_detected = True
            return False
        if self.memo:
            if goal in self._proved:
                return True
            if goal in self._visited:
                return False
            self._visited.add(goal)
        self._ancestors.add(goal)
        try:
            ok = any(self._apply(clause, goal, depth) for clause in self.program)
        finally:
            self._ancestors.discard(goal)
        if ok and self.memo:
            self._proved.add(goal)
        return ok

    def _apply(self, clause: Clause, goal: Literal, depth: int) -> bool:
        sigma = match(clause.head, goal)
        if sigma is None:
            return False
        body = clause.body
        stack = [iter((sigma,))]
        while stack:
            level = len(stack) - 1
            theta = next(stack[-1], None)
            if theta is None:
                stack.pop()
                continue
            if level == len(body):
                return True
            lit = body[level]
            stack.append(self._solutions(goal, lit, theta, depth))
        return False

    def _solutions(self, goal: Literal, lit: Literal, theta: dict, depth: int):
        if lit.signature in self.idb:
            return self._idb_solutions(goal, lit, theta, depth)
        found = matches(lit, theta, self.db)
        if not found:
            self.result.failures.append((goal, lit, dict(theta)))
        return ({**theta, **b} if b else theta for b in found)

    def _idb_solutions(self, goal, lit, theta, depth):
        inst = lit.substitute(theta)
        if inst.is_ground():
            if self._prove(inst, depth - 1):
                yield theta
            else:
                self.result.failures.append((goal, lit, dict(theta)))
            return
        # non-ground program literal: ground the free variables over the universe
        free = inst.variables()
        universe = sorted(self.db.constants | _program_constants(self.program) | self._goal_constants)
        for values in itertools.product(universe, repeat=len(free)):
            binding = dict(zip(free, values))
            if self._prove(inst.substitute(binding), depth - 1):
                yield {**theta, **binding}


def _program_constants(program: Sequence[Clause]) -> set[str]:
    return {a for c in program for lit in (c.head, *c.body) for a in lit.args if not isinstance(a, Var)}


def prove(program: Sequence[Clause], db: Database, goal: Literal, budget: ProofBudget | None = None) -> ProofResult:
    return Prover(program, db, budget).prove(goal)


def covers(
    program: Sequence[Clause] | Clause,
    db: Database,
    instance: ExtendedInstance,
    budget: ProofBudget | None = None,
) -> bool:
    """Whether ``program ∧ DB ∧ D ⊢ f`` within the budget.

    A missing budget means the automatic bound computed from the instance
    with the visited-memo policy.
    """
    return explain(program, db, instance, budget).proved


def explain(
    program: Sequence[Clause] | Clause,
    db: Database,
    instance: ExtendedInstance,
    budget: ProofBudget | None = None,
) -> ProofResult:
    """Like :func:`covers` but returns the full diagnostics."""
    if isinstance(program, Clause):
        program = (program,)
    context = instance.context(db)
    if budget is None:
        head_arity = max((c.head.arity for c in program), default=instance.fact.arity)
        a = max_arity(context.facts, (instance.fact,), (l for c in program for l in c.body))
        budget = ProofBudget.auto(db, instance, head_arity, a=a)
    return Prover(program, context, budget).prove(instance.fact)
