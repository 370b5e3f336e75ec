import pytest
from hypothesis import given
from hypothesis import strategies as st

from forcelearn.database import Database, ExtendedInstance, lookup_mgs, matches
from forcelearn.errors import DeterminacyViolation
from forcelearn.logic import Literal, Var, fact
from forcelearn.worlds import append_db, walkthrough_append_instance

X, Y = Var("X"), Var("Y")

facts_strategy = st.sets(
    st.builds(
        lambda p, args: Literal(p, args),
        st.sampled_from(["q", "r"]),
        st.tuples(st.sampled_from("abc"), st.sampled_from("abc")),
    ),
    max_size=9,
)


@given(facts_strategy, st.sampled_from(["q", "r"]), st.dictionaries(st.sampled_from([0, 1]), st.sampled_from("abc")))
def test_index_agrees_with_scan(facts, pred, bound):
    db = Database(facts)
    assert sorted(db.lookup(pred, 2, bound)) == sorted(db.scan(pred, 2, bound))


def test_database_basics():
    db = Database([fact("q", "a", "b"), fact("q", "a", "b"), fact("r", "c")])
    assert len(db) == 2
    assert fact("r", "c") in db
    assert db.constants == {"a", "b", "c"}
    assert db.predicates() == {("q", 2), ("r", 1)}
    assert list(db) == [fact("q", "a", "b"), fact("r", "c")]
    assert Database() == Database([])
    with pytest.raises(ValueError):
        Database([Literal("q", (X,))])


def test_union_returns_self_when_nothing_new():
    db = Database([fact("q", "a")])
    assert db.union([fact("q", "a")]) is db
    assert len(db | [fact("q", "b")]) == 2


def test_extended_instance():
    inst = walkthrough_append_instance()
    assert inst.fact == fact("append", "l12", "l3", "l123")
    assert inst.size == 6
    assert inst.with_label(False).label is False
    ctx = inst.context(append_db())
    assert fact("null", "nil") in ctx and fact("components", "l12", "1", "l2") in ctx
    with pytest.raises(ValueError):
        ExtendedInstance(Literal("p", (X,)))
    with pytest.raises(ValueError):
        ExtendedInstance(fact("p", "a"), [Literal("q", (X,))])


def test_lookup_mgs_examples():
    inst = walkthrough_append_instance()
    d = Database(inst.description)
    comp = Literal("components", (Var("Xs"), Var("X"), Var("Xs1")))
    assert lookup_mgs(comp, {Var("Xs"): "l12"}, d) == {Var("X"): "1", Var("Xs1"): "l2"}
    ctx = inst.context(append_db())
    assert lookup_mgs(Literal("odd", (Var("X1"),)), {Var("X1"): "2"}, ctx) is None
    assert lookup_mgs(fact("null", "nil"), {}, ctx) == {}


def test_lookup_mgs_rejects_nondeterminate_lookups():
    db = Database([fact("q", "a", "b"), fact("q", "a", "c")])
    with pytest.raises(DeterminacyViolation):
        lookup_mgs(Literal("q", (X, Y)), {X: "a"}, db)


def test_matches_handles_repeated_variables():
    db = Database([fact("q", "a", "a"), fact("q", "a", "b")])
    assert matches(Literal("q", (X, X)), {}, db) == [{X: "a"}]
    assert matches(Literal("q", (X, Y)), {X: "a"}, db) == [{Y: "a"}, {Y: "b"}]
    assert matches(Literal("q", ("b", Y)), {}, db) == []


@given(facts_strategy)
def test_determinate_lookups_never_raise(facts):
    # keep one fact per first argument so q(+,-) is functional
    functional = {}
    for f in sorted(facts):
        functional.setdefault((f.pred, f.args[0]), f)
    db = Database(functional.values())
    for c in "abc":
        lookup_mgs(Literal("q", (X, Y)), {X: c}, db)
