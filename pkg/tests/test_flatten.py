import itertools

import pytest

from forcelearn.database import Database
from forcelearn.errors import NonListFunctor
from forcelearn.flatten import Compound, Flattener, TermExample, append_base_case, flatten, list_name
from forcelearn.interpreter import covers
from forcelearn.logic import fact
from forcelearn.syntax import parse_program

APPEND_P = parse_program(
    """
    append(Xs,Ys,Ys) :- null(Xs).
    append(Xs,Ys,Zs) :- components(Xs,X,Xs1), components(Zs,X,Zs1), append(Xs1,Ys,Zs1).
    """
)
DB = Database([fact("null", "nil")])


def test_the_running_example():
    inst = flatten(TermExample("append", (("1", "2"), ("3",), ("1", "2", "3"))))
    assert inst.fact == fact("append", "l12", "l3", "l123")
    assert inst.description == {
        fact("components", "l12", "1", "l2"),
        fact("components", "l2", "2", "nil"),
        fact("components", "l123", "1", "l23"),
        fact("components", "l23", "2", "l3"),
        fact("components", "l3", "3", "nil"),
    }
    assert covers(APPEND_P, DB, inst)


def test_empty_lists():
    inst = flatten(TermExample("append", ((), ("3",), ("3",))))
    assert inst.fact == fact("append", "nil", "l3", "l3")
    assert inst.description == {fact("components", "l3", "3", "nil")}
    empty = flatten(TermExample("append", ((), (), ())))
    assert empty.fact == fact("append", "nil", "nil", "nil") and not empty.description


def test_base_case_extra():
    inst = flatten(TermExample("append", (("1",), ("3",), ("1", "3"))), base_facts=append_base_case)
    assert fact("append", "nil", "l3", "l3") in inst.description
    assert append_base_case(TermExample("p", ())) == []


def test_non_list_functions_are_rejected():
    with pytest.raises(NonListFunctor):
        flatten(TermExample("p", (Compound("f", ("a",)),)))


def test_names():
    assert list_name(("1", "2"), ["1", "2"]) == "l12"
    long = list_name(("10", "2"), ["10", "2"])
    assert long.startswith("l_") and len(long) == 14
    assert long == list_name(("10", "2"), ["10", "2"])
    fl = Flattener()
    # nested lists get their own constants
    outer = fl.constant((("1",), "2"))
    assert outer.startswith("l_") and fl.constant(("1",)) == "l1"


def _lists(max_len, elements=("1", "2")):
    for n in range(max_len + 1):
        yield from itertools.product(elements, repeat=n)


def test_flattening_is_faithful_for_short_lists():
    lists = list(_lists(4))
    checked = 0
    for xs in lists:
        for ys in lists:
            for zs in lists:
                if len(zs) > 4:
                    continue
                inst = flatten(TermExample("append", (xs, ys, zs)))
                assert covers(APPEND_P, DB, inst) == (xs + ys == zs), (xs, ys, zs)
                checked += 1
    assert checked == len(lists) ** 3
