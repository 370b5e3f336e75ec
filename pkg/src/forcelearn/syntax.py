"""Readers and writers for the text formats.

Facts: ``pred(c1,c2).`` one or more per line.  Clauses: ``h(X) :- b(X,Y), c(Y).``
(``<-`` and ``←`` are accepted for ``:-``).  Declarations: a ``head: p/3`` line
and ``mode: q(+,-)`` lines.  Instances: ``fact:``, ``desc:`` and ``label:``
lines; a pool is several instances in one file.  Term examples (for the
flattener) may contain lists: ``+ append([1,2],[3],[1,2,3]) with append([],[3],[3]).``

Variables start with an uppercase letter or ``_``; anything else is a
constant.  ``%`` starts a comment.  Errors carry a line and column.
"""

from __future__ import annotations

import itertools
import re
from typing import Iterable

from .database import Database, ExtendedInstance
from .errors import ParseError
from .flatten import Compound, TermExample
from .logic import Clause, Literal, Var, canonical_facts
from .modes import Declaration, Mode

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<neck>:-|<-|←)
  | (?P<quoted>'(?:[^'\\]|\\.)*')
  | (?P<name>[A-Za-z0-9_][A-Za-z0-9_]*)
  | (?P<punct>[(),.\[\]|∧])
    """,
    re.VERBOSE,
)
_PLAIN_CONSTANT = re.compile(r"[a-z0-9][A-Za-z0-9_]*\Z")
_anon = itertools.count()


def _strip_comment(line: str) -> str:
    out, quoted = [], False
    for ch in line:
        if ch == "'":
            quoted = not quoted
        if ch == "%" and not quoted:
            break
        out.append(ch)
    return "".join(out)


class _Tokens:
    def __init__(self, text: str, line: int = 1, column: int = 1):
        self.items: list[tuple[str, str, int, int]] = []
        self.end = (line, column)
        row, col = line, column
        for raw_line in text.split("\n"):
            src = _strip_comment(raw_line)
            pos = 0
            while pos < len(src):
                m = _TOKEN.match(src, pos)
                if m is None:
                    raise ParseError(f"unexpected character {src[pos]!r}", row, col + pos)
                kind = m.lastgroup
                if kind != "ws":
                    self.items.append((kind, m.group(), row, col + pos))
                pos = m.end()
            self.end = (row, col + len(src))
            row, col = row + 1, 1
        self.i = 0

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else None

    def at_end(self) -> bool:
        return self.i >= len(self.items)

    def next(self, what: str = "token"):
        tok = self.peek()
        if tok is None:
            raise ParseError(f"expected {what}, found end of input", *self.end)
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok[1] == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        tok = self.next(repr(text))
        if tok[1] != text:
            raise ParseError(f"expected {text!r}, found {tok[1]!r}", tok[2], tok[3])
        return tok

    def error(self, message: str):
        tok = self.peek()
        where = (tok[2], tok[3]) if tok else self.end
        return ParseError(message, *where)


def _unquote(text: str) -> str:
    return re.sub(r"\\(.)", r"\1", text[1:-1])


def _atom(tok) -> str | Var:
    kind, text, _, _ = tok
    if kind == "quoted":
        return _unquote(text)
    if text == "_":
        return Var(f"_G{next(_anon)}")
    if text[0].isupper() or text[0] == "_":
        return Var(text)
    return text


def _literal(tokens: _Tokens) -> Literal:
    tok = tokens.next("a literal")
    if tok[0] != "name" or not (tok[1][0].islower()):
        raise ParseError(f"expected a predicate name, found {tok[1]!r}", tok[2], tok[3])
    args = []
    if tokens.accept("("):
        while True:
            arg = tokens.next("an argument")
            if arg[0] not in ("name", "quoted"):
                raise ParseError(f"expected an argument, found {arg[1]!r}", arg[2], arg[3])
            args.append(_atom(arg))
            if tokens.accept(")"):
                break
            tokens.expect(",")
    return Literal(tok[1], args)


def _clause(tokens: _Tokens) -> Clause:
    head = _literal(tokens)
    body = []
    if tokens.peek() is not None and tokens.peek()[0] == "neck":
        tokens.next()
        while True:
            body.append(_literal(tokens))
            if tokens.accept(",") or tokens.accept("∧"):
                continue
            break
    tokens.expect(".")
    return Clause(head, body)


def parse_clause(text: str, line: int = 1) -> Clause:
    tokens = _Tokens(text, line)
    clause = _clause(tokens)
    if not tokens.at_end():
        raise tokens.error("trailing text after clause")
    return clause


def parse_program(text: str, line: int = 1) -> list[Clause]:
    tokens = _Tokens(text, line)
    out = []
    while not tokens.at_end():
        out.append(_clause(tokens))
    return out


def _ground(lit: Literal, tokens: _Tokens, where) -> Literal:
    if not lit.is_ground():
        raise ParseError(f"fact {lit} contains variables", *where)
    return lit


def parse_facts_list(text: str, line: int = 1) -> list[Literal]:
    tokens = _Tokens(text, line)
    out = []
    while not tokens.at_end():
        where = tokens.peek()[2:]
        lit = _literal(tokens)
        tokens.expect(".")
        out.append(_ground(lit, tokens, where))
    return out


def parse_facts(text: str) -> Database:
    return Database(parse_facts_list(text))


def parse_fact(text: str) -> Literal:
    text = text.strip()
    if not text.endswith("."):
        text += "."
    facts = parse_facts_list(text)
    if len(facts) != 1:
        raise ParseError(f"expected one fact, found {len(facts)}")
    return facts[0]


def parse_declaration(text: str) -> Declaration:
    head = None
    modes: list[Mode] = []
    for n, raw in enumerate(text.split("\n"), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if sep and key.strip() == "head":
            m = re.fullmatch(r"\s*([a-z][A-Za-z0-9_]*)\s*/\s*(\d+)\s*\.?\s*", rest)
            if not m:
                raise ParseError("expected 'head: name/arity'", n, raw.index(":") + 2)
            if head is not None:
                raise ParseError("duplicate head line", n, 1)
            head = (m.group(1), int(m.group(2)))
            continue
        body = rest if sep and key.strip() == "mode" else line
        try:
            modes.append(Mode.parse(body))
        except (ParseError, ValueError) as exc:
            raise ParseError(f"bad mode: {exc}", n, 1) from None
    if head is None:
        raise ParseError("declaration has no 'head:' line", 1, 1)
    return Declaration(head[0], head[1], tuple(modes))


def _sections(text: str):
    """Yield (line number, keyword or None, rest of line) for non-blank lines."""
    for n, raw in enumerate(text.split("\n"), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = re.match(r"\s*(fact|desc|label)\s*:", line)
        if m:
            yield n, m.group(1), line[m.end():], m.end() + 1
        else:
            yield n, None, line, 1


def parse_instances(text: str) -> list[ExtendedInstance]:
    out: list[ExtendedInstance] = []
    current: dict | None = None

    def flush():
        if current is not None:
            out.append(ExtendedInstance(current["fact"], current["desc"], current["label"]))

    for n, key, rest, col in _sections(text):
        if key == "fact":
            flush()
            tokens = _Tokens(rest, n, col)
            where = tokens.peek()[2:] if tokens.peek() else (n, col)
            lit = _literal(tokens)
            tokens.accept(".")
            if not tokens.at_end():
                raise tokens.error("trailing text after instance fact")
            current = {"fact": _ground(lit, tokens, where), "desc": [], "label": None, "in_desc": False}
            continue
        if current is None:
            raise ParseError("expected 'fact:' to start an instance", n, col)
        if key == "label":
            value = rest.strip().rstrip(".").strip()
            if value not in ("+", "-", "−"):
                raise ParseError(f"label must be + or -, found {value!r}", n, col)
            current["label"] = value == "+"
            current["in_desc"] = False
        elif key == "desc":
            current["in_desc"] = True
            if rest.strip():
                current["desc"].extend(parse_facts_list(rest, n))
        elif current["in_desc"]:
            current["desc"].extend(parse_facts_list(rest, n))
        else:
            raise ParseError("unexpected line outside a 'desc:' block", n, col)
    flush()
    return out


def parse_instance(text: str) -> ExtendedInstance:
    found = parse_instances(text)
    if len(found) != 1:
        raise ParseError(f"expected one instance, found {len(found)}")
    return found[0]


# term examples for the flattener


def _term(tokens: _Tokens):
    tok = tokens.next("a term")
    if tok[1] == "[":
        items = []
        if tokens.accept("]"):
            return ()
        while True:
            items.append(_term(tokens))
            if tokens.accept(","):
                continue
            if tokens.accept("|"):
                tail = _term(tokens)
                if not isinstance(tail, tuple):
                    raise ParseError("only proper lists are supported", tok[2], tok[3])
                items.extend(tail)
            tokens.expect("]")
            return tuple(items)
    if tok[0] not in ("name", "quoted"):
        raise ParseError(f"expected a term, found {tok[1]!r}", tok[2], tok[3])
    value = _atom(tok)
    if isinstance(value, Var):
        raise ParseError(f"term examples must be ground, found variable {value}", tok[2], tok[3])
    if tokens.accept("("):
        args = [_term(tokens)]
        while tokens.accept(","):
            args.append(_term(tokens))
        tokens.expect(")")
        return Compound(value, tuple(args))
    return value


def _term_example(tokens: _Tokens) -> TermExample:
    t = _term(tokens)
    if isinstance(t, Compound):
        return TermExample(t.functor, t.args)
    if isinstance(t, str):
        return TermExample(t, ())
    raise tokens.error("an example must be a predicate applied to terms")


def parse_term_examples(text: str) -> list[tuple[bool | None, TermExample, list[TermExample]]]:
    """Each example: optional ``+``/``-`` label, a term, optional ``with`` extras, ``.``."""
    out = []
    for n, raw in enumerate(text.split("\n"), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        stripped = line.lstrip()
        label = None
        col = len(line) - len(stripped) + 1
        if stripped[:1] in "+-":
            label = stripped[0] == "+"
            stripped = stripped[1:]
            col += 1
        tokens = _Tokens(stripped, n, col)
        example = _term_example(tokens)
        extras = []
        if tokens.accept("with"):
            extras.append(_term_example(tokens))
            while tokens.accept(","):
                extras.append(_term_example(tokens))
        tokens.expect(".")
        if not tokens.at_end():
            raise tokens.error("one example per line")
        out.append((label, example, extras))
    return out


# writers


def format_constant(c) -> str:
    if isinstance(c, Var):
        return c.name
    if _PLAIN_CONSTANT.match(c):
        return c
    return "'" + c.replace("\\", "\\\\").replace("'", "\\'") + "'"


def format_literal(lit: Literal) -> str:
    if not lit.args:
        return lit.pred
    return f"{lit.pred}({','.join(format_constant(a) for a in lit.args)})"


def format_fact(lit: Literal) -> str:
    return format_literal(lit) + "."


def format_facts(facts: Iterable[Literal]) -> str:
    return "".join(format_fact(f) + "\n" for f in canonical_facts(facts))


def format_clause(clause: Clause, multiline: bool = False) -> str:
    head = format_literal(clause.head)
    if not clause.body:
        return head + "."
    if multiline:
        return head + " :-\n" + ",\n".join("    " + format_literal(b) for b in clause.body) + "."
    return head + " :- " + ", ".join(format_literal(b) for b in clause.body) + "."


def format_program(program: Iterable[Clause], multiline: bool = False) -> str:
    return "".join(format_clause(c, multiline) + "\n" for c in program)


def format_declaration(dec: Declaration) -> str:
    lines = [f"head: {dec.pred}/{dec.arity}"]
    lines += [f"mode: {m}" for m in dec.modes]
    return "\n".join(lines) + "\n"


def format_instance(instance: ExtendedInstance) -> str:
    lines = [f"fact: {format_fact(instance.fact)}"]
    if instance.description:
        lines.append("desc:")
        lines += [format_fact(f) for f in canonical_facts(instance.description)]
    if instance.label is not None:
        lines.append(f"label: {'+' if instance.label else '-'}")
    return "\n".join(lines) + "\n"


def format_instances(instances: Iterable[ExtendedInstance]) -> str:
    return "\n".join(format_instance(i) for i in instances)
