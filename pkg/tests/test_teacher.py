import io
import math

import pytest

from forcelearn.bottom import bottom_star
from forcelearn.database import Database, ExtendedInstance
from forcelearn.errors import InvariantBreach, NoBaseClause, PoolLabelMismatch, TeacherError
from forcelearn.interpreter import covers
from forcelearn.logic import Literal, Var, fact
from forcelearn.syntax import format_instance, parse_clause, parse_instance
from forcelearn.teacher import RemoteTeacher, TargetSpec, Teacher, TeacherPolicy, read_request, serve
from forcelearn.transform import augment_instance_equality
from forcelearn.worlds import (
    APPEND_BASE,
    APPEND_DEC,
    APPEND_RECURSIVE,
    append_db,
    append_world,
    walkthrough_append_instance,
    write_world,
)

APPEND_LR = Literal("append", (Var("V1_2"), Var("X2"), Var("V1_6")))
COVER_ALL = parse_clause("append(A,B,C).")


@pytest.fixture(scope="module")
def world():
    return append_world()


@pytest.fixture(scope="module")
def world2():
    return append_world(two_clause=True)


def _walkthrough_description():
    return augment_instance_equality(walkthrough_append_instance()).description


def test_policy_parsing():
    assert TeacherPolicy.parse("exhaustive") == TeacherPolicy()
    assert TeacherPolicy.parse("random:7") == TeacherPolicy("random", 7)
    assert TeacherPolicy.parse("pac:50:3") == TeacherPolicy("pac", 3, 50)
    assert str(TeacherPolicy.parse("pac:50:3")) == "pac:50:3"
    for bad in ("sometimes", "random", "pac:0:1", "random:x"):
        with pytest.raises(ValueError):
            TeacherPolicy.parse(bad)


def test_target_is_accepted(world):
    assert Teacher(world.spec()).equivalence_query(world.target) is None


def test_smallest_positive_counterexample_comes_first(world):
    hyp = bottom_star(1, APPEND_DEC).with_literals([APPEND_LR])
    cex = Teacher(world.spec()).equivalence_query(hyp)
    ordered = sorted(world.pool, key=lambda i: (len(i.description), format_instance(i.with_label(None))))
    expected = next(i for i in ordered if covers(hyp, world.db, i) != i.label)
    assert cex.instance == expected and cex.positive and cex.sign == "+"


def test_overly_general_hypothesis_gets_a_negative(world):
    cex = Teacher(world.spec()).equivalence_query(COVER_ALL)
    assert not cex.positive and cex.instance.label is False


def test_exhaustive_policy_is_deterministic(world):
    hyps = [COVER_ALL, bottom_star(1, APPEND_DEC).clause, world.target]
    runs = [[Teacher(world.spec()).equivalence_query(h) for h in hyps] for _ in range(2)]
    assert runs[0] == runs[1]


def test_random_policy_is_reproducible(world):
    a = Teacher(world.spec(), TeacherPolicy("random", 5))
    b = Teacher(world.spec(), TeacherPolicy("random", 5))
    seq_a = [a.equivalence_query(COVER_ALL) for _ in range(5)]
    seq_b = [b.equivalence_query(COVER_ALL) for _ in range(5)]
    assert seq_a == seq_b
    assert all(not c.positive for c in seq_a)
    assert len({c.instance for c in seq_a}) > 1


def test_membership_queries(world):
    t = Teacher(world.spec())
    desc = _walkthrough_description()
    assert t.membership_query(fact("append", "l2", "l3", "l23"), desc)
    assert not t.membership_query(fact("append", "l2", "l3", "l3"), desc)
    assert t.membership_query(fact("append", "nil", "l3", "l3"), desc)  # in D already
    assert t.membership_queries == 3


def test_basecase_queries(world, world2):
    t = Teacher(world2.spec())
    desc = _walkthrough_description()
    assert t.basecase_query(ExtendedInstance(fact("append", "nil", "l3", "l3"), desc - {fact("append", "nil", "l3", "l3")}))
    assert not t.basecase_query(ExtendedInstance(fact("append", "l12", "l3", "l123"), desc))
    with pytest.raises(NoBaseClause):
        Teacher(world.spec()).basecase_query(ExtendedInstance(fact("append", "nil", "l3", "l3")))


def test_pool_labels_are_checked(world):
    inst = world.positives[0].with_label(False)
    with pytest.raises(PoolLabelMismatch):
        TargetSpec(world.target, world.db, [inst])
    with pytest.raises(PoolLabelMismatch):
        TargetSpec(None, world.db, [inst.with_label(None)])


def test_label_only_targets(world):
    spec = TargetSpec(None, world.db, world.pool)
    t = Teacher(spec)
    assert t.equivalence_query(world.target) is None
    with pytest.raises(TeacherError):
        t.membership_query(fact("append", "nil", "nil", "nil"))


def test_dishonest_pool_is_caught(world):
    t = Teacher(world.spec())
    bad = world.positives[0].with_label(False)
    t.order = [bad]
    with pytest.raises(InvariantBreach):
        t.equivalence_query(COVER_ALL)


def test_universe_is_db_plus_descriptions(world):
    spec = world.spec()
    universe = spec.universe()
    assert set(world.db.facts) <= universe
    assert all(inst.description <= universe for inst in spec.pool)


def test_pac_yes_rate_matches_the_sampling_bound():
    # 100 positives, the hypothesis misses 10 of them
    pool = [ExtendedInstance(fact("p", f"c{i}"), label=True) for i in range(100)]
    db = Database([fact("r", f"c{i}") for i in range(90)])
    spec = TargetSpec(None, db, pool)
    hyp = parse_clause("p(X) :- r(X).")
    m, trials, eps = 20, 400, 0.1
    yes = sum(Teacher(spec, TeacherPolicy("pac", seed, m)).equivalence_query(hyp) is None for seed in range(trials))
    expected = trials * (1 - eps) ** m
    sd = math.sqrt(trials * (1 - eps) ** m * (1 - (1 - eps) ** m))
    assert abs(yes - expected) < 4 * sd
    # a perfect hypothesis is always accepted
    assert Teacher(spec, TeacherPolicy("pac", 0, m)).equivalence_query(parse_clause("p(X).")) is None


# line protocol


def _serve(world, text):
    out = io.StringIO()
    code = serve(Teacher(world.spec()), io.StringIO(text), out)
    return code, out.getvalue()


def test_protocol_requests(world, world2):
    desc_lines = "\n".join(format_instance(ExtendedInstance(fact("x", "a"), _walkthrough_description())).splitlines()[1:])
    text = (
        "EQ\nappend(Xs,Ys,Zs) :- components(Xs,X,Xs1), components(Zs,Z,Zs1), equal(X,Z), append(Xs1,Ys,Zs1).\n.\n"
        "EQ append(A,B,C) .\n"
        f"MEMBER\nfact: append(l2,l3,l23).\n{desc_lines}\n.\n"
        "MEMBER append(nil,nil,nil) .\n"
        "% comment lines are skipped\n"
        "FROB x .\n"
        "QUIT\n"
    )
    code, out = _serve(world, text)
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "YES"
    assert lines[1] == "CEX -"
    end = lines.index(".", 2)
    cex = parse_instance("\n".join(lines[2:end]))
    assert cex.label is None and cex.fact.pred == "append"
    assert lines[end + 1:] == ["YES", "NO", "ERR unknown request 'FROB'", "BYE"]
    code, out = _serve(world2, "BASECASE append(nil,nil,nil) .\nBASECASE append(l1,nil,l1) .\n")
    assert (code, out) == (0, "YES\nNO\n")


def test_protocol_errors(world):
    code, out = _serve(world, "EQ\nappend(A,B,C) :-\n")
    assert code == 2 and out.startswith("ERR unterminated")
    code, out = _serve(world, "EQ ( .\n")
    assert code == 0 and out.startswith("ERR")
    assert read_request(iter([])) is None


def test_remote_teacher_matches_the_local_one(world, tmp_path):
    files = write_world(world, tmp_path)
    args = ["--target", str(files["target"]), "--db", str(files["db"]), "--pool", str(files["pool"])]
    local = Teacher(world.spec())
    hyp = bottom_star(1, APPEND_DEC).with_literals([APPEND_LR])
    with RemoteTeacher(args) as remote:
        for h in (hyp, COVER_ALL, world.target):
            assert remote.equivalence_query(h) == local.equivalence_query(h)
        desc = _walkthrough_description()
        assert remote.membership_query(fact("append", "l2", "l3", "l23"), desc)
        assert not remote.membership_query(fact("append", "l2", "l3", "l3"), desc)
        with pytest.raises(TeacherError):
            remote.basecase_query(ExtendedInstance(fact("append", "nil", "nil", "nil")))
    assert remote.proc.returncode == 0


def test_two_clause_target_base_clause(world2):
    assert world2.spec().base_clause == APPEND_BASE
    spec = TargetSpec((APPEND_RECURSIVE, APPEND_RECURSIVE), append_db(), [])
    with pytest.raises(NoBaseClause):
        spec.base_clause
