"""Forced simulation: generalize a clause just enough to cover one fact.

Each routine walks a clause the way a top-down interpreter would, but when
a nonrecursive body literal has no matching fact it is deleted together
with every literal it supports instead of failing.  The recursive variants
re-run the walk on each recursive subgoal so the clause also succeeds all
the way down the proof.

Every routine returns a :class:`SimOutcome`.  On success its ``clause`` is
a subclause of the input (for the two-clause version, a pair of
subclauses); on failure ``clause`` is ``None`` and ``reason`` says why.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

from .database import Database, lookup_mgs
from .errors import BasecaseOracleError
from .interpreter import VISITED_MEMO, ProofBudget
from .logic import Clause, Literal, match
from .modes import Declaration, support_closure


@dataclass(frozen=True)
class TraceStep:
    """What happened while simulating one (sub)goal."""

    goal: Literal
    level: int
    note: str  # "generalized", "in-db", "memo", "basecase", or a failure reason
    failed: tuple[int, ...] = ()  # body positions whose lookup found nothing
    deleted: tuple[int, ...] = ()  # failed positions plus their support closures
    deleted_literals: tuple[Literal, ...] = ()
    substitution: tuple = ()  # sorted (variable name, constant) pairs

    def bindings(self) -> dict[str, str]:
        return dict(self.substitution)


@dataclass
class SimOutcome:
    clause: Clause | tuple[Clause, Clause] | None
    trace: list[TraceStep] = field(default_factory=list)
    reason: str | None = None
    budget_exceeded: bool = False

    @property
    def ok(self) -> bool:
        return self.clause is not None

    def __bool__(self):
        return self.ok

    def deleted_literals(self) -> list[Literal]:
        return [lit for step in self.trace for lit in step.deleted_literals]


def _frozen(sigma: dict) -> tuple:
    return tuple(sorted((v.name, c) for v, c in sigma.items()))


def _generalize_step(head: Literal, body: list[Literal], goal: Literal, db: Database, level: int, extra=None):
    """One forced pass over ``body`` for ``goal``.

    Returns ``(kept body, substitution, trace step)`` or ``None`` when the
    head does not unify with the goal.  ``extra`` optionally decides
    literals that should not be looked up in ``db``.
    """
    sigma = match(head, goal)
    if sigma is None:
        return None
    clause = Clause(head, body)
    dropped: set[int] = set()
    failed = []
    for i, lit in enumerate(body):
        if i in dropped:
            continue
        if extra is not None and extra.handles(lit):
            found = {} if extra.holds(lit, sigma) else None
        else:
            found = lookup_mgs(lit, sigma, db)
        if found is None:
            failed.append(i)
            dropped.add(i)
            dropped |= support_closure(clause, i)
        elif found:
            sigma = {**sigma, **found}
    kept = [lit for i, lit in enumerate(body) if i not in dropped]
    pos = tuple(sorted(dropped))
    step = TraceStep(
        goal,
        level,
        "generalized",
        tuple(failed),
        pos,
        tuple(body[i] for i in pos),
        _frozen(sigma),
    )
    return kept, sigma, step


class _RecursiveOracle:
    """Adapter letting a membership oracle decide recursive literals."""

    def __init__(self, head: Literal, oracle: Callable[[Literal], bool]):
        self.signature = head.signature
        self.oracle = oracle

    def handles(self, lit: Literal) -> bool:
        return lit.signature == self.signature

    def holds(self, lit: Literal, sigma: dict) -> bool:
        inst = lit.substitute(sigma)
        return inst.is_ground() and bool(self.oracle(inst))


def force_sim_nr(
    h: Clause,
    f: Literal,
    dec: Declaration,
    db: Database,
    recursive_oracle: Callable[[Literal], bool] | None = None,
) -> SimOutcome:
    """Largest subclause of ``h`` covering ``f`` in a single step from ``db``.

    Every body literal, recursive or not, is checked against ``db`` unless a
    ``recursive_oracle`` is given, in which case literals of the head
    predicate are asked of it instead (the membership-query shortcut whose
    pitfall the recursive simulator avoids).
    """
    if f in db:
        return SimOutcome(h, [TraceStep(f, 0, "in-db")])
    extra = _RecursiveOracle(h.head, recursive_oracle) if recursive_oracle else None
    res = _generalize_step(h.head, list(h.body), f, db, 0, extra)
    if res is None:
        return SimOutcome(None, [TraceStep(f, 0, "no-unify")], "head does not unify with the fact")
    kept, _, step = res
    return SimOutcome(Clause(h.head, kept), [step])


class _Simulator:
    def __init__(self, head, recursive, db, budget, dec):
        self.head = head
        self.recursive = recursive
        self.db = db
        self.memo = budget.memo == VISITED_MEMO
        self.dec = dec
        self.proved: set[Literal] = set()
        self.ancestors: set[Literal] = set()
        self.trace: list[TraceStep] = []
        self.budget_exceeded = False
        self.reason: str | None = None

    def fail(self, goal, level, reason):
        self.reason = reason
        self.trace.append(TraceStep(goal, level, reason))
        return None

    def expand(self, body, goal, level):
        """Forced pass on ``goal``; returns (body, subgoals) or None."""
        res = _generalize_step(self.head, body, goal, self.db, level)
        if res is None:
            return self.fail(goal, level, "head does not unify with the goal")
        kept, sigma, step = res
        self.trace.append(step)
        subgoals = [lr.substitute(sigma) for lr in self.recursive]
        if not all(sg.is_ground() for sg in subgoals):
            return self.fail(goal, level, "recursive subgoal is not ground")
        return kept, subgoals

    def sim(self, body, goal, depth, level):
        if depth < 0:
            self.budget_exceeded = True
            return self.fail(goal, level, "depth budget exhausted")
        if goal in self.db:
            self.trace.append(TraceStep(goal, level, "in-db"))
            return body
        if self.memo and goal in self.proved:
            self.trace.append(TraceStep(goal, level, "memo"))
            return body
        if goal in self.ancestors:
            # the same goal repeats below itself: no finite proof exists
            return self.fail(goal, level, "loop: goal is its own ancestor")
        out = self.expand(body, goal, level)
        if out is None:
            return None
        body, subgoals = out
        self.ancestors.add(goal)
        try:
            for sg in subgoals:
                body = self.sim(body, sg, depth - 1, level + 1)
                if body is None:
                    return None
        finally:
            self.ancestors.discard(goal)
        self.proved.add(goal)
        return body


def _split(h: Clause):
    recursive = h.recursive_literals()
    return [b for b in h.body if not h.is_recursive_literal(b)], recursive


def force_sim(
    h: Clause,
    f: Literal,
    dec: Declaration,
    db: Database,
    budget: ProofBudget | int | None = None,
) -> SimOutcome:
    """Generalize a closed recursive clause so that ``h ∧ db ⊢ f``.

    ``h`` may carry any number of recursive literals; each is simulated
    left to right.  Under the visited-memo policy a subgoal already proved
    during this simulation is skipped.  A goal that reappears below itself
    fails, which cannot change the outcome: the clause only shrinks along
    a branch, so the same subgoal chain would repeat until the budget ran
    out.  Recursive literals are placed after the nonrecursive body in the
    result.
    """
    if budget is None:
        budget = ProofBudget()
    elif isinstance(budget, int):
        budget = ProofBudget(budget)
    body, recursive = _split(h)
    sim = _Simulator(h.head, recursive, db, budget, dec)
    kept = sim.sim(body, f, budget.depth, 0)
    if kept is None:
        return SimOutcome(None, sim.trace, sim.reason, sim.budget_exceeded)
    return SimOutcome(Clause(h.head, (*kept, *recursive)), sim.trace)


class _PairSimulator(_Simulator):
    def __init__(self, head, recursive, base: Clause, db, budget, dec, basecase):
        super().__init__(head, recursive, db, budget, dec)
        self.base = base
        self.basecase = basecase

    def ask(self, goal) -> bool:
        try:
            answer = self.basecase(goal)
        except Exception as exc:  # the oracle is user code
            raise BasecaseOracleError(f"basecase oracle failed on {goal}: {exc}") from exc
        if not isinstance(answer, bool):
            raise BasecaseOracleError(f"basecase oracle returned {answer!r} for {goal}")
        return answer

    def sim(self, body, goal, depth, level):
        if depth < 1:
            self.budget_exceeded = True
            return self.fail(goal, level, "depth budget exhausted")
        if self.memo and goal in self.proved:
            self.trace.append(TraceStep(goal, level, "memo"))
            return body
        if goal in self.ancestors:
            return self.fail(goal, level, "loop: goal is its own ancestor")
        if self.ask(goal):
            out = force_sim_nr(self.base, goal, self.dec, self.db)
            for step in out.trace:
                self.trace.append(replace(step, level=level, note="basecase" if out.ok else step.note))
            if not out.ok:
                self.reason = "base clause cannot cover the goal"
                return None
            self.base = out.clause
            self.proved.add(goal)
            return body
        out = self.expand(body, goal, level)
        if out is None:
            return None
        body, subgoals = out
        self.ancestors.add(goal)
        try:
            for sg in subgoals:
                body = self.sim(body, sg, depth - 1, level + 1)
                if body is None:
                    return None
        finally:
            self.ancestors.discard(goal)
        self.proved.add(goal)
        return body


def force_sim2(
    hr: Clause,
    hb: Clause,
    f: Literal,
    dec: Declaration,
    db: Database,
    budget: ProofBudget | int | None,
    basecase: Callable[[Literal], bool],
) -> SimOutcome:
    """Generalize a (recursive clause, base clause) pair to cover ``f``.

    Goals the ``basecase`` oracle accepts are handed to the base clause via
    :func:`force_sim_nr`; the rest go through the recursive clause.  Note
    there is no database shortcut here: a goal already in ``db`` still
    needs a yes from the oracle (the base clause then covers it trivially).
    """
    if budget is None:
        budget = ProofBudget()
    elif isinstance(budget, int):
        budget = ProofBudget(budget)
    body, recursive = _split(hr)
    sim = _PairSimulator(hr.head, recursive, hb, db, budget, dec, basecase)
    kept = sim.sim(body, f, budget.depth, 0)
    if kept is None:
        return SimOutcome(None, sim.trace, sim.reason, sim.budget_exceeded)
    return SimOutcome((Clause(hr.head, (*kept, *recursive)), sim.base), sim.trace)
