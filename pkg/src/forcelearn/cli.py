"""Command-line front end.

Exit codes: 0 success (or identified), 1 no consistent hypothesis,
2 bad input, 3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import syntax
from .bottom import bottom_star
from .database import Database, ExtendedInstance
from .errors import ForceLearnError, InvariantBreach, ParseError
from .flatten import append_base_case, flatten
from .forcesim import force_sim, force_sim_nr
from .interpreter import DEFAULT_CEILING, DEPTH_ONLY, VISITED_MEMO, ProofBudget, explain
from .learner import ClauseRule, NullListRule, force1, force1_nr, force2, force2_with_rules, s_set, simulation_budget
from .logic import Clause
from .modes import Mode
from .teacher import TargetSpec, Teacher, TeacherPolicy, serve
from .transform import (
    RenameTable,
    Transformation,
    TransformedTeacher,
    augment_equality,
    split_modes,
    unsplit_clause,
)

EXIT_OK, EXIT_NO_HYPOTHESIS, EXIT_INPUT, EXIT_BREACH = 0, 1, 2, 3


class InputError(ForceLearnError):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _located(path: str, fn, *args):
    try:
        return fn(_read(path), *args)
    except ParseError as exc:
        raise InputError(f"{path}:{exc}") from None


def load_db(path: str | None) -> Database:
    return Database() if path is None else _located(path, syntax.parse_facts)


def load_dec(path: str):
    return _located(path, syntax.parse_declaration)


def load_program(path: str) -> list[Clause]:
    program = _located(path, syntax.parse_program)
    if not program:
        raise InputError(f"{path}: no clauses")
    return program


def load_pool(path: str) -> list[ExtendedInstance]:
    return _located(path, syntax.parse_instances)


def _emit(text: str, out):
    out.write(text if text.endswith("\n") else text + "\n")


def cmd_bottom(args, out):
    bottom = bottom_star(args.depth, load_dec(args.dec))
    _emit(syntax.format_clause(bottom.clause, multiline=args.multiline), out)
    return EXIT_OK


def _budget(args, dec, db, inst):
    if args.budget is not None:
        return ProofBudget(args.budget, args.memo, args.budget_ceiling)
    return simulation_budget(dec, db, inst, args.memo, args.budget_ceiling)


def cmd_forcesim(args, out):
    dec, db = load_dec(args.dec), load_db(args.db)
    program = load_program(args.clause)
    if len(program) != 1:
        raise InputError("forcesim expects exactly one clause")
    clause = program[0]
    inst = _located(args.instance, syntax.parse_instance)
    ctx = inst.context(db)
    if clause.is_recursive():
        outcome = force_sim(clause, inst.fact, dec, ctx, _budget(args, dec, db, inst))
    else:
        outcome = force_sim_nr(clause, inst.fact, dec, ctx)
    if outcome.ok:
        _emit(syntax.format_clause(outcome.clause, multiline=args.multiline), out)
    else:
        _emit(f"FAILURE: {outcome.reason}", out)
    out.write("% trace\n")
    for step in outcome.trace:
        deleted = ", ".join(syntax.format_literal(lit) for lit in step.deleted_literals)
        out.write(f"% level {step.level} {syntax.format_literal(step.goal)} [{step.note}]")
        out.write(f" deleted: {deleted}\n" if deleted else "\n")
    return EXIT_OK if outcome.ok else EXIT_NO_HYPOTHESIS


def _teacher(args, db, pool, program=None):
    target = TargetSpec(program, db, pool)
    policy = TeacherPolicy.parse(args.policy)
    if policy.kind != "exhaustive" and policy.seed is None:
        policy = TeacherPolicy(policy.kind, args.seed, policy.sample_size)
    return Teacher(target, policy)


def _basecase_rule(spec: str):
    if spec == "nulllist":
        return NullListRule()
    if spec.startswith("nulllist:"):
        try:
            positions = tuple(int(p) for p in spec.split(":", 1)[1].split(","))
        except ValueError:
            raise InputError(f"bad rule {spec!r}") from None
        return NullListRule(positions)
    program = load_program(spec)
    return ClauseRule(program[0])


def _format_hypothesis(hyp, restore=None) -> str:
    clauses = (hyp,) if isinstance(hyp, Clause) else tuple(hyp)
    if restore is not None:
        clauses = tuple(restore(c) for c in clauses)
    return syntax.format_program(clauses)


def cmd_learn(args, out):
    dec, db = load_dec(args.dec), load_db(args.db)
    pool = load_pool(args.pool)
    program = load_program(args.target) if args.target else None
    teacher = _teacher(args, db, pool, program)
    restore = None
    if args.transform:
        tr = Transformation.build(db, dec)
        teacher = TransformedTeacher(teacher, tr)
        dec, db, restore = tr.dec, tr.db, tr.restore
    common = dict(memo=args.memo, ceiling=args.budget_ceiling)
    if args.algo == "force1nr":
        res = force1_nr(args.depth, dec, db, teacher)
    elif args.algo in ("force1", "forcek"):
        k = args.k if args.algo == "forcek" else 1
        res = force1(args.depth, dec, db, teacher, k=k, **common)
    else:
        if args.basecase_rule:
            rules = [_basecase_rule(r) for r in args.basecase_rule]
            res = force2_with_rules(args.depth, dec, db, teacher, rules, k=args.k, **common)
        elif program is not None:
            res = force2(args.depth, dec, db, teacher, k=args.k, **common)
        else:
            raise InputError("force2 needs --target (for basecase queries) or --basecase-rule")
    if res.identified:
        _emit(_format_hypothesis(res.hypothesis, restore), out)
    _emit(res.summary(), out)
    return EXIT_OK if res.identified else EXIT_NO_HYPOTHESIS


def cmd_sset(args, out):
    dec, db = load_dec(args.dec), load_db(args.db)
    pool = load_pool(args.pool)
    if any(i.label is None for i in pool):
        raise InputError("sset needs a labelled pool")
    clauses = s_set(
        args.depth,
        dec,
        db,
        [i for i in pool if i.label],
        [i for i in pool if not i.label],
        k=args.k,
        memo=args.memo,
    )
    for c in clauses:
        _emit(syntax.format_clause(c), out)
    out.write(f"% {len(clauses)} clause(s)\n")
    return EXIT_OK


def cmd_teach(args, out):
    db = load_db(args.db)
    teacher = _teacher(args, db, load_pool(args.pool), load_program(args.target))
    return serve(teacher, sys.stdin, out)


def cmd_eval(args, out):
    program, db = load_program(args.program), load_db(args.db)
    if args.instance:
        instances = [_located(args.instance, syntax.parse_instance)]
    elif args.pool:
        instances = load_pool(args.pool)
    else:
        raise InputError("eval needs --instance or --pool")
    wrong = 0
    for inst in instances:
        budget = None
        if args.budget is not None:
            budget = ProofBudget(args.budget, args.memo, args.budget_ceiling)
        res = explain(program, db, inst, budget)
        mark = "+" if res.proved else "-"
        note = ""
        if inst.label is not None and inst.label != res.proved:
            wrong += 1
            note = "  % disagrees with label"
        out.write(f"{mark} {syntax.format_literal(inst.fact)}{note}\n")
        if not res.proved and args.explain and res.first_lookup_failure():
            goal, lit, theta = res.first_lookup_failure()
            binds = ", ".join(f"{v}={c}" for v, c in sorted(theta.items(), key=lambda kv: kv[0].name))
            out.write(f"%   first failure: {syntax.format_literal(lit)} in {syntax.format_literal(goal)} with {binds}\n")
    if wrong:
        out.write(f"% {wrong} label disagreement(s)\n")
    return EXIT_OK


def cmd_flatten(args, out):
    examples = _located(args.examples, syntax.parse_term_examples)
    base = append_base_case if args.append_base else None
    instances = [flatten(ex, extras, label, base) for label, ex, extras in examples]
    out.write(syntax.format_instances(instances))
    return EXIT_OK


def format_renames(table: RenameTable) -> str:
    return "".join(f"rename: {name} = {Mode(orig, m.signs)}\n" for name, (orig, m) in table.entries.items())


def parse_renames(text: str) -> RenameTable:
    entries = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if not line.startswith("rename:") or "=" not in line:
            raise ParseError("expected 'rename: new = pred(modes)'", n, 1)
        name, _, mode_text = line[len("rename:"):].partition("=")
        mode = Mode.parse(mode_text)
        entries[name.strip()] = (mode.pred, mode)
    return RenameTable(entries)


def cmd_transform(args, out):
    if args.action == "unsplit":
        if not args.clause:
            raise InputError("unsplit needs --clause")
        table = _located(args.renames, parse_renames) if args.renames else None
        for c in load_program(args.clause):
            _emit(syntax.format_clause(unsplit_clause(c, table)), out)
        return EXIT_OK
    dec, db = load_dec(args.dec), load_db(args.db)
    table = None
    if args.action == "split":
        db, dec, table = split_modes(db, dec)
    if args.action == "augment" or args.equality:
        db, dec = augment_equality(db, dec)
    parts = {"dec": syntax.format_declaration(dec), "facts": syntax.format_facts(db)}
    if table is not None:
        parts["renames"] = format_renames(table)
    if args.out_dir:
        target = Path(args.out_dir)
        target.mkdir(parents=True, exist_ok=True)
        for name, text in parts.items():
            (target / f"{name}.txt").write_text(text)
        out.write(f"% wrote {', '.join(sorted(parts))} to {target}\n")
    else:
        for name, text in parts.items():
            out.write(f"% --- {name}\n{text}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forcelearn", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized teacher policies")
    parser.add_argument("--budget-ceiling", type=int, default=DEFAULT_CEILING, help="saturation ceiling for depth bounds")
    sub = parser.add_subparsers(dest="command", required=True)

    def memo_flag(p):
        p.add_argument("--memo", choices=[VISITED_MEMO, DEPTH_ONLY], default=VISITED_MEMO)

    p = sub.add_parser("bottom", help="print the bottom clause for a declaration")
    p.add_argument("--dec", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--multiline", action="store_true")
    p.set_defaults(func=cmd_bottom)

    p = sub.add_parser("forcesim", help="forcibly simulate a clause on one instance")
    for flag in ("--clause", "--instance", "--dec", "--db"):
        p.add_argument(flag, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--budget", type=int)
    group.add_argument("--auto-budget", action="store_true", help="use the per-instance bound (default)")
    p.add_argument("--multiline", action="store_true")
    memo_flag(p)
    p.set_defaults(func=cmd_forcesim)

    p = sub.add_parser("learn", help="identify a target from a teacher")
    p.add_argument("--algo", choices=["force1nr", "force1", "force2", "forcek"], required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    for flag in ("--dec", "--db", "--pool"):
        p.add_argument(flag, required=True)
    p.add_argument("--target", help="target program; without it pool labels are ground truth")
    p.add_argument("--policy", default="exhaustive")
    p.add_argument("--basecase-rule", action="append", help="nulllist, nulllist:POS,... or a clause FILE")
    p.add_argument("--transform", action="store_true", help="split modes and add equality first")
    memo_flag(p)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("sset", help="most specific consistent recursive clauses")
    for flag in ("--dec", "--db", "--pool"):
        p.add_argument(flag, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    memo_flag(p)
    p.set_defaults(func=cmd_sset)

    p = sub.add_parser("teach", help="serve a teacher over stdin/stdout")
    for flag in ("--target", "--db", "--pool"):
        p.add_argument(flag, required=True)
    p.add_argument("--policy", default="exhaustive")
    p.set_defaults(func=cmd_teach)

    p = sub.add_parser("eval", help="check coverage of instances by a program")
    p.add_argument("--program", required=True)
    p.add_argument("--db")
    p.add_argument("--instance")
    p.add_argument("--pool")
    p.add_argument("--budget", type=int)
    p.add_argument("--explain", action="store_true", help="show the first failing lookup")
    memo_flag(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("flatten", help="flatten list examples into extended instances")
    p.add_argument("--examples", required=True)
    p.add_argument("--append-base", action="store_true", help="add append([],Ys,Ys) for each example's Ys")
    p.set_defaults(func=cmd_flatten)

    p = sub.add_parser("transform", help="split modes, add equality, or undo both on a clause")
    p.add_argument("action", choices=["split", "augment", "unsplit"])
    p.add_argument("--db")
    p.add_argument("--dec")
    p.add_argument("--equality", action="store_true", help="with split: also add equality")
    p.add_argument("--clause")
    p.add_argument("--renames")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_transform)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command == "transform" and args.action != "unsplit" and not args.dec:
        print("forcelearn: error: transform split/augment needs --dec", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args, out)
    except InvariantBreach as exc:
        print(f"forcelearn: invariant breach: {exc}", file=sys.stderr)
        return EXIT_BREACH
    except (ForceLearnError, ValueError) as exc:
        print(f"forcelearn: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
