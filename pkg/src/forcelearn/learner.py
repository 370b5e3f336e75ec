"""Exact identification from equivalence queries.

``force1_nr`` shrinks the bottom clause on each positive counterexample.
``force1`` does the same for ``bottom ∪ {recursive literals}``, trying
candidate recursive-literal tuples in enumeration order and discarding a
candidate on a negative counterexample or a failed simulation.
``force2`` learns a (recursive, base) pair with help from a basecase
oracle, and ``force2_with_rules`` swaps the oracle for a list of
decision rules.  ``s_set`` builds the most specific consistent clauses
for a fixed example set.

Counterexamples already seen are replayed against every fresh candidate
before it is shown to the teacher.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .bottom import bottom_star, enumerate_recursive_literals
from .database import Database, ExtendedInstance
from .errors import InvariantBreach
from .forcesim import force_sim, force_sim2, force_sim_nr
from .interpreter import DEFAULT_CEILING, VISITED_MEMO, ProofBudget, covers, depth_bound, max_arity
from .logic import Clause, Literal
from .modes import Declaration
from .teacher import Counterexample

IDENTIFIED = "identified"
NO_CONSISTENT = "no consistent hypothesis"


@dataclass
class LearnResult:
    outcome: str
    hypothesis: Clause | tuple[Clause, Clause] | None = None
    queries: int = 0
    candidates_tried: int = 0
    candidate_count: int = 0
    bottom_size: int = 0
    query_cap: int = 0
    counterexamples: list[Counterexample] = field(default_factory=list)
    # (candidate index, hypothesis shown to the teacher) for every query
    trajectory: list[tuple[int, object]] = field(default_factory=list)
    marked: list[int] = field(default_factory=list)
    wall_time: float = 0.0
    reason: str | None = None
    rule: object = None

    @property
    def identified(self) -> bool:
        return self.outcome == IDENTIFIED

    def summary(self) -> str:
        lines = [
            f"outcome: {self.outcome}",
            f"queries: {self.queries} (cap {self.query_cap})",
            f"candidates tried: {self.candidates_tried} of {self.candidate_count}",
            f"counterexamples: {len(self.counterexamples)}",
            f"wall time: {self.wall_time:.3f}s",
        ]
        if self.reason:
            lines.append(f"reason: {self.reason}")
        return "\n".join(lines)


def query_cap(candidate_count: int, bottom_size: int) -> int:
    """``(p + 1) * (||BOTTOM|| + 2)``."""
    return (candidate_count + 1) * (bottom_size + 2)


def arity_constant(dec: Declaration, db: Database, instance: ExtendedInstance) -> int:
    return max(dec.max_arity, dec.arity, max_arity(db.facts, instance.description))


def simulation_budget(dec, db, instance, memo=VISITED_MEMO, ceiling=DEFAULT_CEILING) -> ProofBudget:
    """Depth bound ``(a|D| + a|DB|)^a'`` for one counterexample."""
    a = arity_constant(dec, db, instance)
    return ProofBudget(depth_bound(a, instance.size, len(db), dec.arity, ceiling), memo, ceiling)


class _Session:
    """Shared candidate loop: query, generalize on positives, mark on failure."""

    def __init__(self, teacher, result: LearnResult, simulate, hyp_covers, guard: int):
        self.teacher = teacher
        self.result = result
        self.simulate = simulate
        self.hyp_covers = hyp_covers
        self.guard = guard
        self.log: list[Counterexample] = []

    def replay(self, hyp):
        for cex in self.log:
            if cex.positive:
                hyp = self.simulate(hyp, cex.instance)
                if hyp is None:
                    return None
        for cex in self.log:
            if not cex.positive and self.hyp_covers(hyp, cex.instance):
                return None
        return hyp

    def run(self, candidates: Sequence, start: Callable) -> LearnResult:
        res = self.result
        t0 = time.perf_counter()
        try:
            for idx, cand in enumerate(candidates):
                res.candidates_tried += 1
                hyp = self.replay(start(cand))
                while hyp is not None:
                    if res.queries >= self.guard:
                        raise InvariantBreach(f"query count passed the bound {self.guard}")
                    cex = self.teacher.equivalence_query(hyp)
                    res.queries += 1
                    res.trajectory.append((idx, hyp))
                    if cex is None:
                        res.outcome, res.hypothesis = IDENTIFIED, hyp
                        return res
                    self.log.append(cex)
                    res.counterexamples.append(cex)
                    if not cex.positive:
                        break
                    new = self.simulate(hyp, cex.instance)
                    if new == hyp:
                        # the simulator thinks hyp already covers what the teacher says it misses
                        res.reason = "simulation made no progress on a positive counterexample"
                        break
                    hyp = new
                res.marked.append(idx)
            res.outcome = NO_CONSISTENT
            return res
        finally:
            res.wall_time = time.perf_counter() - t0


def force1_nr(d: int, dec: Declaration, db: Database, teacher) -> LearnResult:
    """Identify a nonrecursive depth-``d`` determinate clause."""
    bottom = bottom_star(d, dec)

    def simulate(hyp, inst):
        return force_sim_nr(hyp, inst.fact, dec, inst.context(db)).clause

    res = LearnResult(NO_CONSISTENT, candidate_count=1, bottom_size=len(bottom))
    res.query_cap = query_cap(0, len(bottom))
    session = _Session(teacher, res, simulate, lambda h, i: covers(h, db, i), res.query_cap)
    return session.run([()], lambda _: bottom.clause)


def force1(
    d: int,
    dec: Declaration,
    db: Database,
    teacher,
    k: int = 1,
    memo: str = VISITED_MEMO,
    ceiling: int = DEFAULT_CEILING,
    exclude_head: bool = True,
    candidates: Sequence[tuple[Literal, ...]] | None = None,
) -> LearnResult:
    """Identify a closed ``k``-ary recursive depth-``d`` determinate clause."""
    bottom = bottom_star(d, dec)
    if candidates is None:
        candidates = enumerate_recursive_literals(bottom, dec, k, exclude_head)

    def simulate(hyp, inst):
        budget = simulation_budget(dec, db, inst, memo, ceiling)
        return force_sim(hyp, inst.fact, dec, inst.context(db), budget).clause

    res = LearnResult(NO_CONSISTENT, candidate_count=len(candidates), bottom_size=len(bottom))
    res.query_cap = query_cap(len(candidates), len(bottom))
    session = _Session(teacher, res, simulate, lambda h, i: covers(h, db, i), res.query_cap)
    return session.run(candidates, lambda cand: bottom.with_literals(cand))


def force2(
    d: int,
    dec: Declaration,
    db: Database,
    teacher,
    basecase: Callable[[ExtendedInstance], bool] | None = None,
    k: int = 1,
    memo: str = VISITED_MEMO,
    ceiling: int = DEFAULT_CEILING,
    exclude_head: bool = True,
) -> LearnResult:
    """Identify a (recursive clause, base clause) pair.

    ``basecase`` defaults to the teacher's ``basecase_query``.  Subgoals
    met during simulation are asked about with the counterexample's
    description attached.
    """
    oracle = basecase if basecase is not None else teacher.basecase_query
    bottom = bottom_star(d, dec)
    candidates = enumerate_recursive_literals(bottom, dec, k, exclude_head)

    def simulate(pair, inst):
        hr, hb = pair
        budget = simulation_budget(dec, db, inst, memo, ceiling)
        ask = lambda goal: oracle(ExtendedInstance(goal, inst.description))  # noqa: E731
        return force_sim2(hr, hb, inst.fact, dec, inst.context(db), budget, ask).clause

    res = LearnResult(NO_CONSISTENT, candidate_count=len(candidates), bottom_size=len(bottom))
    res.query_cap = query_cap(len(candidates), len(bottom))
    # two clauses shrink independently, so a candidate may use up to 2||BOTTOM|| + 2 queries
    guard = (len(candidates) + 1) * (2 * len(bottom) + 2)
    session = _Session(teacher, res, simulate, lambda h, i: covers(h, db, i), guard)
    return session.run(candidates, lambda cand: (bottom.with_literals(cand), bottom.clause))


class NullListRule:
    """Basecase rule: no chosen argument is a non-empty list.

    An argument counts as a non-empty list when some ``components`` fact
    has it as its first argument.  ``positions=None`` checks every
    argument; ``positions=(0,)`` checks only the first.
    """

    def __init__(self, positions: Sequence[int] | None = None, list_pred: str = "components"):
        self.positions = None if positions is None else tuple(positions)
        self.list_pred = list_pred

    def __call__(self, instance: ExtendedInstance, db: Database) -> bool:
        context = instance.context(db)
        heads = {f.args[0] for f in context.facts_of(self.list_pred, 3)}
        args = instance.fact.args
        picked = args if self.positions is None else [args[i] for i in self.positions if i < len(args)]
        return not any(a in heads for a in picked)

    def __repr__(self):
        return f"NullListRule(positions={self.positions})"


class ClauseRule:
    """Basecase rule: a fixed clause covers the instance on its own."""

    def __init__(self, clause: Clause):
        self.clause = clause

    def __call__(self, instance: ExtendedInstance, db: Database) -> bool:
        return covers((self.clause,), db, instance)

    def __repr__(self):
        return f"ClauseRule({self.clause})"


def force2_with_rules(
    d: int,
    dec: Declaration,
    db: Database,
    teacher,
    rules: Iterable[Callable[[ExtendedInstance, Database], bool]],
    **kwargs,
) -> LearnResult:
    """Run :func:`force2` with each rule as the basecase oracle until one succeeds."""
    total = 0
    last = None
    t0 = time.perf_counter()
    for rule in rules:
        res = force2(d, dec, db, teacher, lambda inst, r=rule: bool(r(inst, db)), **kwargs)
        total += res.queries
        res.rule = rule
        last = res
        if res.identified:
            break
    if last is None:
        return LearnResult(NO_CONSISTENT, reason="no basecase rules given")
    last.queries = total
    last.wall_time = time.perf_counter() - t0
    return last


def s_set(
    d: int,
    dec: Declaration,
    db: Database,
    positives: Sequence[ExtendedInstance],
    negatives: Sequence[ExtendedInstance],
    k: int = 1,
    memo: str = VISITED_MEMO,
    exclude_head: bool = True,
) -> list[Clause]:
    """Most specific recursive clauses consistent with the examples.

    Each candidate ``bottom ∪ Lr`` is generalized over the positives in
    turn; candidates that fail or then cover a negative are dropped.
    Duplicates are removed, keeping candidate order.
    """
    bottom = bottom_star(d, dec)
    out: dict[Clause, None] = {}
    for cand in enumerate_recursive_literals(bottom, dec, k, exclude_head):
        hyp = bottom.with_literals(cand)
        for inst in positives:
            out_sim = force_sim(hyp, inst.fact, dec, inst.context(db), simulation_budget(dec, db, inst, memo))
            hyp = out_sim.clause
            if hyp is None:
                break
        if hyp is None:
            continue
        if any(covers(hyp, db, neg) for neg in negatives):
            continue
        out.setdefault(hyp, None)
    return list(out)
