"""Simulated teachers answering equivalence, membership and basecase queries.

A :class:`Teacher` knows a target program and a pool of extended
instances.  The pool is the universe of discourse: a hypothesis is
accepted when it classifies every pool instance (or every sampled one)
like the target.  :func:`serve` exposes a teacher over a line protocol and
:class:`RemoteTeacher` is the matching client.
"""

from __future__ import annotations

import random
import subprocess
import sys
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Sequence

from .database import Database, ExtendedInstance
from .errors import (
    ForceLearnError,
    InvariantBreach,
    NoBaseClause,
    ParseError,
    PoolLabelMismatch,
    TeacherError,
)
from .interpreter import ProofBudget, covers
from .logic import Clause, Literal
from .syntax import format_clause, format_instance, parse_fact, parse_instance, parse_program

EXHAUSTIVE, RANDOM, PAC = "exhaustive", "random", "pac"


@dataclass(frozen=True)
class TeacherPolicy:
    kind: str = EXHAUSTIVE
    seed: int | None = None
    sample_size: int | None = None

    def __post_init__(self):
        if self.kind not in (EXHAUSTIVE, RANDOM, PAC):
            raise ValueError(f"unknown teacher policy {self.kind!r}")
        if self.kind == PAC and (self.sample_size is None or self.sample_size < 1):
            raise ValueError("pac policy needs a positive sample size")

    @classmethod
    def parse(cls, text: str) -> "TeacherPolicy":
        """``exhaustive``, ``random:SEED`` or ``pac:M:SEED``."""
        parts = text.strip().split(":")
        try:
            if parts == [EXHAUSTIVE]:
                return cls()
            if parts[0] == RANDOM and len(parts) == 2:
                return cls(RANDOM, int(parts[1]))
            if parts[0] == PAC and len(parts) == 3:
                return cls(PAC, int(parts[2]), int(parts[1]))
        except ValueError as exc:
            raise ValueError(f"bad teacher policy {text!r}: {exc}") from None
        raise ValueError(f"bad teacher policy {text!r}")

    def __str__(self):
        if self.kind == RANDOM:
            return f"random:{self.seed}"
        if self.kind == PAC:
            return f"pac:{self.sample_size}:{self.seed}"
        return EXHAUSTIVE


@dataclass(frozen=True)
class Counterexample:
    instance: ExtendedInstance
    positive: bool

    @property
    def sign(self) -> str:
        return "+" if self.positive else "-"


def as_program(hypothesis) -> tuple[Clause, ...]:
    if isinstance(hypothesis, Clause):
        return (hypothesis,)
    return tuple(hypothesis)


class TargetSpec:
    """A target program, its database and a labelled pool.

    Supplied labels are checked against the program at construction; a
    missing label is filled in.  With ``program=None`` the pool labels are
    taken as ground truth (membership and basecase queries are then
    unavailable).
    """

    def __init__(
        self,
        program: Sequence[Clause] | Clause | None,
        db: Database,
        pool: Iterable[ExtendedInstance],
        budget: ProofBudget | None = None,
    ):
        self.program = None if program is None else as_program(program)
        self.db = db
        self.budget = budget
        labelled = []
        for inst in pool:
            if self.program is None:
                if inst.label is None:
                    raise PoolLabelMismatch(f"unlabelled instance {inst.fact} and no target program")
                labelled.append(inst)
                continue
            truth = covers(self.program, db, inst, budget)
            if inst.label is not None and inst.label != truth:
                raise PoolLabelMismatch(
                    f"{inst.fact} is labelled {'+' if inst.label else '-'} but the target says {'+' if truth else '-'}"
                )
            labelled.append(inst.with_label(truth))
        self.pool = tuple(labelled)

    @property
    def positives(self) -> list[ExtendedInstance]:
        return [i for i in self.pool if i.label]

    @property
    def negatives(self) -> list[ExtendedInstance]:
        return [i for i in self.pool if not i.label]

    def universe(self) -> set[Literal]:
        """The fixed fact set over which determinacy is judged: db plus every description."""
        facts = set(self.db.facts)
        for inst in self.pool:
            facts |= inst.description
        return facts

    @property
    def base_clause(self) -> Clause:
        if self.program is None or len(self.program) < 2:
            raise NoBaseClause("the target has no separate base clause")
        base = [c for c in self.program if not c.is_recursive()]
        if len(base) != 1:
            raise NoBaseClause("the target must have exactly one nonrecursive clause")
        return base[0]


class Teacher:
    """Answers queries about a :class:`TargetSpec` under a policy."""

    def __init__(self, target: TargetSpec, policy: TeacherPolicy | None = None, budget: ProofBudget | None = None):
        self.target = target
        self.policy = policy or TeacherPolicy()
        self.budget = budget
        self._rng = random.Random(self.policy.seed)
        self.order = sorted(target.pool, key=lambda i: (i.size, format_instance(i.with_label(None))))
        self.queries = 0
        self.membership_queries = 0
        self.basecase_queries = 0

    def _hyp_covers(self, program, inst) -> bool:
        return covers(program, self.target.db, inst, self.budget)

    def _disagrees(self, program, inst) -> bool:
        return self._hyp_covers(program, inst) != inst.label

    def equivalence_query(self, hypothesis) -> Counterexample | None:
        """``None`` for yes, otherwise a counterexample signed by the target's label."""
        self.queries += 1
        program = as_program(hypothesis)
        kind = self.policy.kind
        if kind == EXHAUSTIVE:
            chosen = next((i for i in self.order if self._disagrees(program, i)), None)
        elif kind == RANDOM:
            wrong = [i for i in self.order if self._disagrees(program, i)]
            chosen = self._rng.choice(wrong) if wrong else None
        else:
            chosen = None
            for _ in range(self.policy.sample_size):
                inst = self._rng.choice(self.order)
                if self._disagrees(program, inst):
                    chosen = inst
                    break
        if chosen is None:
            return None
        self._check_honest(program, chosen)
        return Counterexample(chosen, bool(chosen.label))

    def _check_honest(self, program, inst):
        if self.target.program is not None:
            truth = covers(self.target.program, self.target.db, inst, self.target.budget)
            if truth != inst.label:
                raise InvariantBreach(f"pool label of {inst.fact} drifted from the target")
        if self._hyp_covers(program, inst) == inst.label:
            raise InvariantBreach(f"{inst.fact} is not in the symmetric difference")

    def membership_query(self, fact: Literal, description: Iterable[Literal] = ()) -> bool:
        self.membership_queries += 1
        if self.target.program is None:
            raise TeacherError("membership queries need a target program")
        return covers(self.target.program, self.target.db, ExtendedInstance(fact, description), self.budget)

    def basecase_query(self, instance: ExtendedInstance) -> bool:
        """Whether the base clause alone covers the instance."""
        self.basecase_queries += 1
        base = self.target.base_clause
        return covers((base,), self.target.db, instance, self.budget)


# line protocol

KEYWORDS = ("EQ", "BASECASE", "MEMBER", "QUIT")


def read_request(lines: Iterator[str]) -> tuple[str, str] | None:
    """Next ``(keyword, payload)`` from a line stream, or ``None`` at EOF.

    A request is a keyword line, payload lines and a line holding only
    ``.``; a one-line form ``KEYWORD payload .`` is also accepted.
    """
    for line in lines:
        text = line.strip()
        if not text or text.startswith("%"):
            continue
        keyword, _, rest = text.partition(" ")
        keyword = keyword.upper()
        rest = rest.strip()
        if keyword == "QUIT":
            return keyword, ""
        if rest == ".":
            return keyword, ""
        if rest.endswith(" .") or rest.endswith("\t."):
            return keyword, rest[:-1].strip()
        payload = [rest] if rest else []
        for more in lines:
            if more.strip() == ".":
                return keyword, "\n".join(payload)
            payload.append(more.rstrip("\n"))
        raise TeacherError(f"unterminated {keyword} request")
    return None


def _instance_payload(payload: str) -> ExtendedInstance:
    if payload.lstrip().startswith("fact:"):
        return parse_instance(payload)
    return ExtendedInstance(parse_fact(payload))


def handle_request(teacher: Teacher, keyword: str, payload: str) -> str:
    """Protocol response text (without trailing newline) for one request."""
    if keyword == "EQ":
        if payload.strip() and not payload.rstrip().endswith("."):
            # one-line form where the request terminator doubles as the clause's
            payload += "."
        program = parse_program(payload)
        if not program:
            raise ParseError("EQ needs at least one clause")
        cex = teacher.equivalence_query(program)
        if cex is None:
            return "YES"
        body = format_instance(cex.instance.with_label(None)).rstrip("\n")
        return f"CEX {cex.sign}\n{body}\n."
    if keyword == "BASECASE":
        return "YES" if teacher.basecase_query(_instance_payload(payload)) else "NO"
    if keyword == "MEMBER":
        inst = _instance_payload(payload)
        return "YES" if teacher.membership_query(inst.fact, inst.description) else "NO"
    raise TeacherError(f"unknown request {keyword!r}")


def serve(teacher: Teacher, instream: IO[str], outstream: IO[str]) -> int:
    lines = iter(instream.readline, "")
    while True:
        try:
            req = read_request(lines)
        except TeacherError as exc:
            outstream.write(f"ERR {exc}\n")
            outstream.flush()
            return 2
        if req is None:
            return 0
        keyword, payload = req
        if keyword == "QUIT":
            outstream.write("BYE\n")
            outstream.flush()
            return 0
        try:
            reply = handle_request(teacher, keyword, payload)
        except (ForceLearnError, ValueError) as exc:
            reply = "ERR " + str(exc).replace("\n", " ")
        outstream.write(reply + "\n")
        outstream.flush()


class RemoteTeacher:
    """Client for a ``teach`` subprocess."""

    def __init__(self, teach_args: Sequence[str], python: str = sys.executable, cwd=None):
        self.proc = subprocess.Popen(
            [python, "-m", "forcelearn", "teach", *teach_args],
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
            bufsize=1,
            cwd=cwd,
        )
        self.queries = 0

    def _line(self) -> str:
        line = self.proc.stdout.readline()
        if not line:
            err = self.proc.stderr.read() if self.proc.poll() is not None else ""
            raise TeacherError(f"teacher closed the connection {err.strip()}".strip())
        return line.rstrip("\n")

    def _request(self, keyword: str, payload: str) -> str:
        if self.proc.poll() is not None:
            raise TeacherError("teacher process has exited")
        self.proc.stdin.write(f"{keyword}\n{payload.rstrip()}\n.\n")
        self.proc.stdin.flush()
        head = self._line()
        if head.startswith("ERR"):
            raise TeacherError(head[3:].strip())
        return head

    def _yes_no(self, head: str) -> bool:
        if head not in ("YES", "NO"):
            raise TeacherError(f"unexpected reply {head!r}")
        return head == "YES"

    def equivalence_query(self, hypothesis) -> Counterexample | None:
        self.queries += 1
        text = "\n".join(format_clause(c) for c in as_program(hypothesis))
        head = self._request("EQ", text)
        if head == "YES":
            return None
        if not head.startswith("CEX ") or head[4:].strip() not in ("+", "-"):
            raise TeacherError(f"unexpected reply {head!r}")
        positive = head[4:].strip() == "+"
        body = []
        while True:
            line = self._line()
            if line.strip() == ".":
                break
            body.append(line)
        inst = parse_instance("\n".join(body))
        return Counterexample(inst.with_label(positive), positive)

    def membership_query(self, fact: Literal, description: Iterable[Literal] = ()) -> bool:
        text = format_instance(ExtendedInstance(fact, description))
        return self._yes_no(self._request("MEMBER", text))

    def basecase_query(self, instance: ExtendedInstance) -> bool:
        return self._yes_no(self._request("BASECASE", format_instance(instance.with_label(None))))

    def close(self):
        if self.proc.poll() is None:
            try:
                self.proc.stdin.write("QUIT\n")
                self.proc.stdin.flush()
                self.proc.wait(timeout=5)
            except (BrokenPipeError, subprocess.TimeoutExpired):
                self.proc.kill()
        for stream in (self.proc.stdin, self.proc.stdout, self.proc.stderr):
            if stream:
                stream.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
