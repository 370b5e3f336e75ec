import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forcelearn.database import Database, ExtendedInstance
from forcelearn.interpreter import (
    DEFAULT_CEILING,
    DEPTH_ONLY,
    VISITED_MEMO,
    ProofBudget,
    covers,
    depth_bound,
    explain,
    prove,
    saturating_power,
)
from forcelearn.logic import Clause, Literal, fact
from forcelearn.syntax import parse_clause, parse_program
from forcelearn.worlds import append_db, fib_db, fib_instance, fib_world, less_than_world

import oracles

APPEND_P = parse_program(
    """
    append(Xs,Ys,Ys) :- null(Xs).
    append(Xs,Ys,Zs) :- components(Xs,X,Xs1), components(Zs,X,Zs1), append(Xs1,Ys,Zs1).
    """
)
RUNNING_INSTANCE = ExtendedInstance(
    fact("append", "list12", "list3", "list123"),
    [
        fact("components", "list12", "1", "list2"),
        fact("components", "list2", "2", "nil"),
        fact("components", "list123", "1", "list23"),
        fact("components", "list23", "2", "list3"),
        fact("components", "list3", "3", "nil"),
    ],
)


def test_saturating_power():
    assert saturating_power(3, 2) == 9
    assert saturating_power(10, 50) == DEFAULT_CEILING
    assert saturating_power(10, 50, ceiling=1000) == 1000
    assert saturating_power(0, 0) == 1
    assert depth_bound(2, 3, 4, 2) == (2 * 3 + 2 * 4) ** 2
    assert depth_bound(2, 0, 0, 1) == 1


def test_budget_is_clamped_and_validated():
    assert ProofBudget(10**12).depth == DEFAULT_CEILING
    with pytest.raises(ValueError):
        ProofBudget(3, "sometimes")


def test_append_program_covers_the_flattened_example():
    db = Database([fact("null", "nil")])
    assert covers(APPEND_P, db, RUNNING_INSTANCE)
    wrong = ExtendedInstance(fact("append", "list12", "list3", "list23"), RUNNING_INSTANCE.description)
    assert not covers(APPEND_P, db, wrong)


def test_pure_loop_fails_under_both_policies():
    loop = parse_clause("p(X) :- p(X).")
    inst = ExtendedInstance(fact("p", "c"))
    for memo in (DEPTH_ONLY, VISITED_MEMO):
        res = explain(loop, Database(), inst, ProofBudget(50, memo))
        assert not res.proved and res.loop_detected


def test_lookup_is_a_depth_zero_proof():
    c = parse_clause("p(X) :- q(X).")
    db = Database([fact("q", "a"), fact("p", "b")])
    assert prove([c], db, fact("p", "b"), ProofBudget(0)).proved
    res = prove([c], db, fact("p", "a"), ProofBudget(0))
    assert not res.proved and res.budget_exceeded
    assert prove([c], db, fact("p", "a"), ProofBudget(1)).proved


def test_depth_bound_counts_recursive_steps():
    world = less_than_world()
    inst = ExtendedInstance(fact("less_than", "0", "5"))
    # 0<1 .. 4<5 is in the database, so four clause applications are needed
    assert not covers(world.target, world.db, inst, ProofBudget(3, DEPTH_ONLY))
    assert covers(world.target, world.db, inst, ProofBudget(4, DEPTH_ONLY))


def test_failures_report_the_first_failing_lookup():
    c = parse_clause("p(X) :- q(X,Y), r(Y).")
    db = Database([fact("q", "a", "b")])
    res = explain(c, db, ExtendedInstance(fact("p", "a")))
    goal, lit, theta = res.first_lookup_failure()
    assert goal == fact("p", "a") and lit.pred == "r"
    assert {str(k): v for k, v in theta.items()} == {"X": "a", "Y": "b"}


def test_nonground_program_literals_are_grounded_over_the_universe():
    c = parse_clause("p(X) :- q(Y), r(X,Y).")
    helper = parse_clause("q(Y) :- s(Y).")
    db = Database([fact("s", "b"), fact("r", "a", "b")])
    assert covers([c, helper], db, ExtendedInstance(fact("p", "a")))


def test_memo_handles_a_wide_recursion_quickly():
    db = fib_db(30)
    res = explain(fib_world().target, db, fib_instance(30), ProofBudget(100, VISITED_MEMO))
    assert res.proved and res.nodes < 200


def test_tree_size_oracle_matches_the_plain_prover():
    db = fib_db(12)
    for n in range(13):
        res = explain(fib_world().target, db, fib_instance(n), ProofBudget(100, DEPTH_ONLY))
        assert res.proved and res.nodes == oracles.naive_fib_tree_size(n)


def _random_program(rng, head_arity=None):
    dec, bottom = oracles.small_bottom(rng, max_body=8, head_arity=head_arity)
    clause = bottom.clause
    keep = sorted(rng.sample(range(len(clause.body)), rng.randint(0, len(clause.body))))
    consts = [f"c{i}" for i in range(4)]
    body = [clause.body[i] for i in keep]
    if rng.random() < 0.7:
        vars_ = clause.variables()
        body.append(Literal("p", [rng.choice(vars_) for _ in range(dec.arity)]))
    program = Clause(clause.head, body)
    # random subsets may orphan variables, which exercises non-ground subgoals
    facts = oracles.random_db(rng, dec, 4)
    facts |= {Literal("p", [rng.choice(consts) for _ in range(dec.arity)]) for _ in range(2)}
    return dec, program, Database(facts), consts


@settings(max_examples=150)
@given(st.integers(0, 10**9), st.integers(0, 4))
def test_depth_bounded_prover_matches_bottom_up_oracle(seed, depth):
    rng = random.Random(seed)
    dec, program, db, consts = _random_program(rng)
    for goal in oracles.all_head_facts(dec, consts):
        model = oracles.bottom_up([program], db.facts, depth, db.constants | set(goal.args))
        got = covers([program], db, ExtendedInstance(goal), ProofBudget(depth, DEPTH_ONLY))
        assert got == (goal in model), (program, goal)


@settings(max_examples=150)
@given(st.integers(0, 10**9))
def test_memo_agrees_with_depth_only_and_fixpoint(seed):
    rng = random.Random(seed)
    # unary heads keep the exhaustive depth-only search small
    dec, program, db, consts = _random_program(rng, head_arity=1)
    for goal in oracles.all_head_facts(dec, consts):
        model = oracles.bottom_up([program], db.facts, None, db.constants | set(goal.args))
        inst = ExtendedInstance(goal)
        memo = covers([program], db, inst, ProofBudget.auto(db, inst, dec.arity, memo=VISITED_MEMO))
        assert memo == (goal in model)
        plain = covers([program], db, inst, ProofBudget.auto(db, inst, dec.arity, memo=DEPTH_ONLY))
        assert memo == plain == (goal in model)


@settings(max_examples=300)
@given(st.integers(0, 10**9))
def test_memo_prover_matches_the_fixpoint_on_binary_heads(seed):
    rng = random.Random(seed)
    dec, program, db, consts = _random_program(rng, head_arity=2)
    for goal in oracles.all_head_facts(dec, consts):
        model = oracles.bottom_up([program], db.facts, None, db.constants | set(goal.args))
        inst = ExtendedInstance(goal)
        assert covers([program], db, inst, ProofBudget(DEFAULT_CEILING, VISITED_MEMO)) == (goal in model)


@settings(max_examples=100)
@given(st.integers(0, 10**9))
def test_dropping_body_literals_never_loses_coverage(seed):
    rng = random.Random(seed)
    dec, program, db, consts = _random_program(rng)
    nonrec = [i for i, b in enumerate(program.body) if not program.is_recursive_literal(b)]
    for kept in oracles.subclauses(program, tuple(i for i in range(len(program.body)) if i not in nonrec)):
        sub = Clause(program.head, [program.body[i] for i in kept])
        for goal in oracles.all_head_facts(dec, consts):
            inst = ExtendedInstance(goal)
            if covers(program, db, inst):
                assert covers(sub, db, inst)
        break  # one random subclause per example keeps this quick


def test_append_db_has_no_odd_two():
    assert fact("odd", "2") not in append_db()
