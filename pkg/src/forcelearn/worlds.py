"""Small ready-made learning problems.

Each builder returns a :class:`World`: a declaration, a background
database, a labelled pool and the target program that produced the
labels.  They are used by the demos, the test suite and ``write_world``
(which dumps a world in the command-line file formats).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from pathlib import Path

from .database import Database, ExtendedInstance
from .flatten import TermExample, append_base_case, flatten
from .interpreter import covers
from .logic import Clause, fact
from .modes import Declaration, Mode
from .syntax import format_declaration, format_facts, format_instances, format_program, parse_clause
from .teacher import TargetSpec
from .transform import augment_instance_equality, equality_facts


@dataclass
class World:
    name: str
    dec: Declaration
    db: Database
    pool: list[ExtendedInstance]
    target: tuple[Clause, ...]
    depth: int = 1
    k: int = 1
    notes: dict = field(default_factory=dict)

    def spec(self, budget=None) -> TargetSpec:
        return TargetSpec(self.target, self.db, self.pool, budget)

    @property
    def positives(self):
        return [i for i in self.pool if i.label]

    @property
    def negatives(self):
        return [i for i in self.pool if not i.label]


def _modes(*texts: str) -> tuple[Mode, ...]:
    return tuple(Mode.parse(t) for t in texts)


def _labelled(target, db, pool) -> list[ExtendedInstance]:
    return list(TargetSpec(target, db, pool).pool)


# family relations

PARENTS = {
    # child: (mother, father)
    "bob": ("pam", "tom"),
    "liz": ("pam", "tom"),
    "ann": ("eve", "jim"),
    "joe": ("eve", "jim"),
    "pat": ("ann", "bob"),
    "sue": ("ann", "bob"),
    "kim": ("ann", "bob"),
    "ray": ("liz", "joe"),
}
MALE = ("tom", "jim", "bob", "joe", "pat", "kim", "ray")
FEMALE = ("pam", "eve", "liz", "ann", "sue")

FAMILY_DEC = Declaration("p", 2, _modes("mother(+,-)", "father(+,-)", "male(+)", "female(+)", "equal(+,+)"))
BROTHER = parse_clause("p(A,B) :- mother(A,C), father(A,D), mother(B,C), father(B,D), male(A).")
DAUGHTER = parse_clause("p(A,B) :- father(A,B), female(A).")


def family_db(equality: bool = True) -> Database:
    facts = set()
    for child, (mum, dad) in PARENTS.items():
        facts.add(fact("mother", child, mum))
        facts.add(fact("father", child, dad))
    facts |= {fact("male", m) for m in MALE}
    facts |= {fact("female", f) for f in FEMALE}
    if equality:
        facts |= equality_facts(MALE + FEMALE)
    return Database(facts)


def family_pool() -> list[ExtendedInstance]:
    people = sorted(MALE + FEMALE)
    return [ExtendedInstance(fact("p", a, b)) for a in people for b in people]


def family_world(target: Clause = BROTHER) -> World:
    db = family_db()
    return World("family", FAMILY_DEC, db, _labelled(target, db, family_pool()), (target,))


MULTI_MODE_DEC = Declaration(
    "p",
    2,
    _modes("mother(+,-)", "mother(+,+)", "father(+,-)", "father(+,+)", "male(+)", "female(+)"),
)


def multi_mode_family_world(target: Clause = BROTHER) -> World:
    """The family problem under an equality-free declaration with two modes per parent relation."""
    db = family_db(equality=False)
    return World("family-multimode", MULTI_MODE_DEC, db, _labelled(target, db, family_pool()), (target,))


# append over flattened lists

APPEND_DEC = Declaration(
    "append", 3, _modes("components(+,-,-)", "null(+)", "equal(+,+)", "odd(+)", "append(+,+,+)")
)
APPEND_RECURSIVE = parse_clause(
    "append(Xs,Ys,Zs) :- components(Xs,X,Xs1), components(Zs,Z,Zs1), equal(X,Z), append(Xs1,Ys,Zs1)."
)
APPEND_BASE = parse_clause("append(Xs,Ys,Zs) :- null(Xs), equal(Ys,Zs).")
APPEND_ELEMENTS = ("1", "2", "3")


def append_db() -> Database:
    facts = {fact("null", "nil"), fact("odd", "1"), fact("odd", "3")}
    return Database(facts | equality_facts(("nil",) + APPEND_ELEMENTS))


def _lists(max_len: int):
    for n in range(max_len + 1):
        yield from itertools.product(APPEND_ELEMENTS, repeat=n)


def _perturb(zs: tuple, rng: random.Random) -> tuple:
    choices = []
    if zs:
        i = rng.randrange(len(zs))
        other = rng.choice([e for e in APPEND_ELEMENTS if e != zs[i]])
        choices.append(zs[:i] + (other,) + zs[i + 1:])
        choices.append(zs[:-1])
    if len(zs) > 1 and zs != zs[::-1]:
        choices.append(zs[::-1])
    choices.append(zs + (rng.choice(APPEND_ELEMENTS),))
    return rng.choice(choices)


def append_examples(n_pos: int = 30, n_neg: int = 30, seed: int = 0, max_len: int = 2):
    """Term-level (label, example) pairs: correct triples and perturbed ones."""
    rng = random.Random(seed)
    pairs = [(xs, ys) for xs in _lists(max_len) for ys in _lists(max_len)]
    rng.shuffle(pairs)
    # make sure the recursion is exercised
    pairs.sort(key=lambda p: len(p[0]) == 0)
    out = []
    for xs, ys in pairs[:n_pos]:
        out.append((True, TermExample("append", (xs, ys, xs + ys))))
    for xs, ys in pairs[n_pos:n_pos + n_neg]:
        out.append((False, TermExample("append", (xs, ys, _perturb(xs + ys, rng)))))
    return out


def append_world(
    two_clause: bool = False, n_pos: int = 30, n_neg: int = 30, seed: int = 0, max_len: int = 2
) -> World:
    """Flattened append.

    The single-clause version carries ``append([], Ys, Ys)`` in each
    description; the two-clause version leaves the base case to the
    target's second clause.
    """
    db = append_db()
    base = None if two_clause else append_base_case
    target = (APPEND_RECURSIVE, APPEND_BASE) if two_clause else (APPEND_RECURSIVE,)
    pool = []
    for label, example in append_examples(n_pos, n_neg, seed, max_len):
        inst = augment_instance_equality(flatten(example, base_facts=base))
        pool.append(inst.with_label(label))
    name = "append2" if two_clause else "append"
    return World(name, APPEND_DEC, db, _labelled(target, db, pool), target)


def walkthrough_append_instance() -> ExtendedInstance:
    """``append([1,2],[3],[1,2,3])`` flattened, with its base case in the description."""
    example = TermExample("append", (("1", "2"), ("3",), ("1", "2", "3")))
    return flatten(example, base_facts=append_base_case, label=True)


# less_than over successor

LESS_THAN_DEC = Declaration("less_than", 2, _modes("successor(+,-)", "even(+)", "equal(+,+)", "less_than(+,+)"))
LESS_THAN_RECURSIVE = parse_clause("less_than(A,B) :- successor(A,C), less_than(C,B).")
LESS_THAN_BASE = parse_clause("less_than(A,B) :- successor(A,B).")


def less_than_world(top: int = 9) -> World:
    """Numbers ``0..top``; the base facts ``less_than(i, i+1)`` live in the database."""
    nums = [str(i) for i in range(top + 1)]
    facts = {fact("successor", nums[i], nums[i + 1]) for i in range(top)}
    facts |= {fact("less_than", nums[i], nums[i + 1]) for i in range(top)}
    facts |= {fact("even", n) for n in nums if int(n) % 2 == 0}
    facts |= equality_facts(nums)
    db = Database(facts)
    pool = [ExtendedInstance(fact("less_than", a, b)) for a in nums for b in nums]
    return World("less_than", LESS_THAN_DEC, db, _labelled((LESS_THAN_RECURSIVE,), db, pool), (LESS_THAN_RECURSIVE,))


# a two-way recursion in the style of fibonacci

FIB_DEC = Declaration("p", 1, _modes("prev(+,-)", "prev2(+,-)", "odd(+)", "equal(+,+)", "p(+)"))
FIB_RECURSIVE = parse_clause("p(X) :- prev(X,Y), prev2(X,Z), p(Y), p(Z).")


def fib_db(top: int) -> Database:
    nums = [str(i) for i in range(top + 1)]
    facts = {fact("prev", nums[i], nums[i - 1]) for i in range(1, top + 1)}
    facts |= {fact("prev2", nums[i], nums[i - 2]) for i in range(2, top + 1)}
    facts |= {fact("odd", n) for n in nums if int(n) % 2}
    facts |= equality_facts(nums)
    return Database(facts)


BASE_SETS = {
    "both": (fact("p", "0"), fact("p", "1")),
    "zero": (fact("p", "0"),),
    "one": (fact("p", "1"),),
}


def fib_instance(n: int, base: str = "both") -> ExtendedInstance:
    return ExtendedInstance(fact("p", str(n)), BASE_SETS[base])


def fib_world(top: int = 12) -> World:
    """``p(n)`` with descriptions that hold both, one or the other base fact."""
    db = fib_db(top)
    pool = [fib_instance(n, b) for b in BASE_SETS for n in range(top + 1)]
    return World("fib", FIB_DEC, db, _labelled((FIB_RECURSIVE,), db, pool), (FIB_RECURSIVE,), k=2)


WORLDS = {
    "family": family_world,
    "family-multimode": multi_mode_family_world,
    "append": append_world,
    "append2": lambda: append_world(two_clause=True),
    "less_than": less_than_world,
    "fib": fib_world,
}


def write_world(world: World, directory: str | Path) -> dict[str, Path]:
    """Write ``dec``, ``db``, ``pool`` and ``target`` files for the CLI."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = {
        "dec": (directory / f"{world.name}.dec", format_declaration(world.dec)),
        "db": (directory / f"{world.name}.db", format_facts(world.db.facts)),
        "pool": (directory / f"{world.name}.pool", format_instances(world.pool)),
        "target": (directory / f"{world.name}.target", format_program(world.target)),
    }
    for path, text in files.values():
        path.write_text(text)
    return {key: path for key, (path, _) in files.items()}


def pool_agrees(program, world: World, budget=None) -> bool:
    """Whether ``program`` labels every pool instance like the target."""
    return all(covers(program, world.db, inst, budget) == inst.label for inst in world.pool)


__all__ = [
    "World",
    "family_world",
    "multi_mode_family_world",
    "append_world",
    "less_than_world",
    "fib_world",
    "walkthrough_append_instance",
    "write_world",
    "pool_agrees",
    "WORLDS",
]
