import pytest

from forcelearn.database import Database, ExtendedInstance
from forcelearn.errors import PredicateCollision
from forcelearn.logic import Literal, fact, is_variant
from forcelearn.modes import Declaration, Mode
from forcelearn.syntax import parse_clause
from forcelearn.transform import (
    EQUAL_MODE,
    Transformation,
    augment_equality,
    augment_instance_equality,
    split_instance,
    split_modes,
    unsplit_clause,
)
from forcelearn.worlds import MULTI_MODE_DEC, walkthrough_append_instance

C1 = parse_clause("p(X,Y) :- mother(X,M), father(X,F), mother(Y,M), father(Y,F), male(X).")
D1 = parse_clause(
    "p(X,Y) :- mother(X,XM), father(X,XF), mother(Y,YM), father(Y,YF), male(X), equal(XM,YM), equal(XF,YF)."
)
C2 = parse_clause("p(X,Y) :- father(X,Y), female(X).")
D2 = parse_clause("p(X,Y) :- father(X,XF), female(X), equal(XF,Y).")


def test_augment_adds_one_fact_per_constant():
    db, dec = augment_equality(Database([fact("q", "a", "b")]), Declaration("p", 1, (Mode("q", "+-"),)))
    assert {f for f in db if f.pred == "equal"} == {fact("equal", "a", "a"), fact("equal", "b", "b")}
    assert EQUAL_MODE in dec.modes


def test_augment_of_an_empty_database_only_adds_the_mode():
    db, dec = augment_equality(Database(), Declaration("p", 1, ()))
    assert len(db) == 0 and dec.modes == (EQUAL_MODE,)


def test_augment_counts_constants_of_the_flattened_example():
    inst = ExtendedInstance(
        fact("append", "list12", "list3", "list123"),
        [
            fact("components", "list12", "1", "list2"),
            fact("components", "list2", "2", "nil"),
            fact("components", "list123", "1", "list23"),
            fact("components", "list23", "2", "list3"),
            fact("components", "list3", "3", "nil"),
        ],
    )
    db, _ = augment_equality(Database(inst.description | {fact("null", "nil")}), Declaration("append", 3, ()))
    assert len([f for f in db if f.pred == "equal"]) == 9
    assert len([f for f in augment_instance_equality(inst).description if f.pred == "equal"]) == 9


def test_equality_collisions():
    dec = Declaration("p", 1, ())
    with pytest.raises(PredicateCollision):
        augment_equality(Database([fact("equal", "a", "b")]), dec)
    with pytest.raises(PredicateCollision):
        augment_equality(Database(), Declaration("p", 1, (Mode("equal", "+-"),)))
    with pytest.raises(PredicateCollision):
        augment_equality(Database(), Declaration("equal", 2, ()))
    with pytest.raises(PredicateCollision):
        augment_instance_equality(ExtendedInstance(fact("p", "a"), [fact("equal", "a", "b")]))


def test_split_duplicates_facts_per_mode():
    dec = Declaration("p", 1, (Mode("q", "+-"), Mode("q", "++")))
    db, new_dec, table = split_modes(Database([fact("q", "a", "b")]), dec)
    assert set(db) == {fact("q_io", "a", "b"), fact("q_ii", "a", "b")}
    assert {m.compact for m in new_dec.modes} == {"q_io+-", "q_ii++"}
    assert table.original("q_io") == "q"
    assert split_instance(ExtendedInstance(fact("p", "a"), [fact("q", "a", "c")]), table).description == {
        fact("q_io", "a", "c"),
        fact("q_ii", "a", "c"),
    }


def test_single_mode_predicates_keep_their_names():
    dec = Declaration("p", 1, (Mode("q", "+-"), Mode("r", "+")))
    db = Database([fact("q", "a", "b"), fact("r", "a")])
    new_db, new_dec, table = split_modes(db, dec)
    assert new_db == db and new_dec.modes == dec.modes
    assert table.is_identity() and len(table) == 2


def test_split_name_collisions_are_reported():
    dec = Declaration("p", 1, (Mode("q", "+-"), Mode("q", "++"), Mode("q_io", "+")))
    with pytest.raises(PredicateCollision):
        split_modes(Database(), dec)


def test_unsplit_recovers_the_original_pairs():
    assert is_variant(unsplit_clause(D1), C1)
    assert is_variant(unsplit_clause(D2), C2)
    plain = parse_clause("p(X) :- q(X,Y), r(Y).")
    assert unsplit_clause(plain) == plain


def test_unsplit_restores_names_and_drops_ground_equalities():
    _, _, table = split_modes(Database(), MULTI_MODE_DEC)
    clause = parse_clause("p(X,Y) :- mother_io(X,M), mother_ii(Y,M), equal(a,a).")
    assert unsplit_clause(clause, table) == parse_clause("p(X,Y) :- mother(X,M), mother(Y,M).")


def test_transformation_round_trip():
    tr = Transformation.build(Database([fact("mother", "ann", "sue")]), MULTI_MODE_DEC)
    assert fact("mother_io", "ann", "sue") in tr.db and fact("equal", "sue", "sue") in tr.db
    inst = tr.instance(ExtendedInstance(fact("p", "ann", "bob"), [fact("male", "bob")]))
    assert fact("equal", "bob", "bob") in inst.description
    restored = tr.restore(parse_clause("p(X,Y) :- mother_io(X,M), equal(M,Y)."))
    assert restored == parse_clause("p(X,Y) :- mother(X,Y).")


def test_running_instance_is_closed_under_its_equalities():
    inst = augment_instance_equality(walkthrough_append_instance())
    consts = {a for f in (inst.fact, *inst.description) for a in f.args}
    assert {Literal("equal", (c, c)) for c in consts} <= inst.description
