"""Line-oriented text format for EL terminologies and answer tables.

TBox files::

    # comment
    concept GPr            # declares a concept name
    role hAPr              # declares a role name
    E SubClassOf (some hAPr IPr)
    (C and CVD) SubClassOf PPh

Concept grammar: ``Top``, a NAME, ``(c and c)`` (n-ary ``and`` accepted),
or ``(some role c)``.  NAME is ``[A-Za-z_][A-Za-z0-9_-]*``.  Names using
the reserved infixes ``-AND-`` / ``-SOME-`` parse fine but produce a
warning, since generated definitional names use that scheme.

Answer-table (oracle) files::

    default: false
    closure: reflexive
    closure: constructors
    true: GPr SubClassOf NPr
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .model import (
    TOP,
    And,
    Atom,
    Axiom,
    Concept,
    NAME_PATTERN,
    RESERVED_INFIXES,
    Some,
    TBox,
    concept_names_in,
    render_axiom,
    render_concept,
    role_names_in,
)


class ParseError(ValueError):
    """Input text is not well-formed; carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


# ---------------------------------------------------------------------------
# Tokenizing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[A-Za-z_][A-Za-z0-9_-]*")


@dataclass
class _Token:
    text: str
    column: int


def _tokenize(text: str, line_no: int) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    for m in _TOKEN.finditer(text):
        gap = text[pos:m.start()]
        if gap.strip():
            raise ParseError(f"unexpected character {gap.strip()[0]!r}", line_no, pos + 1)
        tokens.append(_Token(m.group(), m.start() + 1))
        pos = m.end()
    if text[pos:].strip():
        raise ParseError(f"unexpected character {text[pos:].strip()[0]!r}", line_no, pos + 1)
    return tokens


class _TokenStream:
    def __init__(self, tokens: list[_Token], line_no: int, line_len: int) -> None:
        self._tokens = tokens
        self._i = 0
        self._line = line_no
        self._eol_col = line_len + 1

    def peek(self) -> _Token | None:
        return self._tokens[self._i] if self._i < len(self._tokens) else None

    def next(self, expect: str | None = None) -> _Token:
        tok = self.peek()
        if tok is None:
            raise ParseError(
                f"unexpected end of line (expected {expect or 'more input'})",
                self._line, self._eol_col)
        self._i += 1
        return tok

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        col = tok.column if tok is not None else self._eol_col
        return ParseError(message, self._line, col)


# ---------------------------------------------------------------------------
# Concept / axiom parsing
# ---------------------------------------------------------------------------

_KEYWORDS = {"and", "some", "SubClassOf", "Top"}


def _parse_concept(ts: _TokenStream) -> Concept:
    tok = ts.next("a concept")
    if tok.text == "Top":
        return TOP
    if tok.text == "(":
        return _parse_parenthesized(ts, tok)
    if tok.text == ")":
        raise ts.error("unexpected ')'", tok)
    if tok.text in _KEYWORDS:
        raise ts.error(f"keyword {tok.text!r} cannot start a concept", tok)
    return Atom(tok.text)


def _parse_parenthesized(ts: _TokenStream, open_tok: _Token) -> Concept:
    tok = ts.peek()
    if tok is None:
        raise ts.error("unterminated '('")
    if tok.text == "some":
        ts.next()
        role = ts.next("a role name")
        if role.text in _KEYWORDS or role.text in ("(", ")"):
            raise ts.error("expected a role name", role)
        filler = _parse_concept(ts)
        close = ts.next("')'")
        if close.text != ")":
            raise ts.error("expected ')'", close)
        return Some(role.text, filler)
    # conjunction: concept ("and" concept)+
    parts = [_parse_concept(ts)]
    while True:
        tok = ts.next("'and' or ')'")
        if tok.text == ")":
            break
        if tok.text != "and":
            raise ts.error("expected 'and' or ')'", tok)
        parts.append(_parse_concept(ts))
    if len(parts) < 2:
        raise ts.error("parenthesized concept needs 'and' or 'some'", open_tok)
    parts.sort(key=render_concept)
    acc = parts[0]
    for p in parts[1:]:
        acc = And(acc, p)
    return acc


def parse_concept(text: str, line_no: int = 1) -> Concept:
    ts = _TokenStream(_tokenize(text, line_no), line_no, len(text))
    c = _parse_concept(ts)
    extra = ts.peek()
    if extra is not None:
        raise ts.error(f"trailing input {extra.text!r}", extra)
    return c


def parse_axiom(text: str, line_no: int = 1) -> Axiom:
    ts = _TokenStream(_tokenize(text, line_no), line_no, len(text))
    lhs = _parse_concept(ts)
    kw = ts.next("'SubClassOf'")
    if kw.text != "SubClassOf":
        raise ts.error("expected 'SubClassOf'", kw)
    rhs = _parse_concept(ts)
    extra = ts.peek()
    if extra is not None:
        raise ts.error(f"trailing input {extra.text!r}", extra)
    return Axiom(lhs, rhs)


# ---------------------------------------------------------------------------
# TBox files
# ---------------------------------------------------------------------------


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _check_reserved(name: str, line_no: int, warnings: list[str]) -> None:
    if any(infix in name for infix in RESERVED_INFIXES):
        warnings.append(
            f"line {line_no}: name {name!r} uses a reserved infix "
            "(-AND-/-SOME- are used for generated definitional names)")


_DECL = re.compile(r"(concept|role)\s+(\S+)\s*\Z")


def parse_tbox(text: str) -> tuple[TBox, list[str]]:
    """Parse a TBox file; returns the TBox and a list of warning strings."""
    warnings: list[str] = []
    concept_decls: list[str] = []
    role_decls: list[str] = []
    axioms: list[Axiom] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _DECL.match(line.strip())
        if m:
            kind, name = m.group(1), m.group(2)
            if not NAME_PATTERN.match(name):
                raise ParseError(f"invalid {kind} name {name!r}", line_no,
                                 raw.find(name) + 1)
            _check_reserved(name, line_no, warnings)
            (concept_decls if kind == "concept" else role_decls).append(name)
            continue
        ax = parse_axiom(line, line_no)
        seen: set[str] = set()
        for side in (ax.lhs, ax.rhs):
            for n in list(concept_names_in(side)) + list(role_names_in(side)):
                if n not in seen:
                    seen.add(n)
                    _check_reserved(n, line_no, warnings)
        axioms.append(ax)
    return TBox(axioms, concept_names=concept_decls, role_names=role_decls), warnings


def serialize_tbox(t: TBox) -> str:
    """Text form of a TBox; ``parse_tbox(serialize_tbox(t))[0] == t``."""
    lines = [f"concept {n}" for n in t.concept_names]
    lines += [f"role {n}" for n in t.role_names]
    lines += [render_axiom(ax) for ax in t.axioms]
    return "\n".join(lines) + "\n"


def parse_axiom_lines(text: str) -> tuple[tuple[Axiom, ...], list[str]]:
    """Parse a file that is just axiom lines (e.g. the known-wrong set)."""
    t, warnings = parse_tbox(text)
    return t.axioms, warnings


# ---------------------------------------------------------------------------
# Answer-table (oracle) files
# ---------------------------------------------------------------------------


@dataclass
class OracleSpec:
    """Parsed oracle file: default answer, closure flags, the true set."""

    default: bool = False
    reflexive: bool = False
    constructors: bool = False
    transitive: bool = False
    true_axioms: tuple[Axiom, ...] = ()
    warnings: list[str] = field(default_factory=list)


def parse_oracle(text: str) -> OracleSpec:
    spec = OracleSpec()
    trues: list[Axiom] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError("expected 'key: value'", line_no, 1)
        key = key.strip()
        value = value.strip()
        if key == "default":
            if value not in ("true", "false"):
                raise ParseError(f"default must be true or false, got {value!r}",
                                 line_no, raw.find(value) + 1 if value else 1)
            spec.default = value == "true"
        elif key == "closure":
            if value == "reflexive":
                spec.reflexive = True
            elif value == "constructors":
                spec.constructors = True
            elif value == "transitive":
                spec.transitive = True
            else:
                raise ParseError(f"unknown closure flag {value!r}", line_no,
                                 raw.find(value) + 1 if value else 1)
        elif key == "true":
            trues.append(parse_axiom(value, line_no))
        else:
            raise ParseError(f"unknown key {key!r}", line_no, 1)
    spec.true_axioms = tuple(trues)
    return spec


def serialize_oracle(spec: OracleSpec) -> str:
    lines = [f"default: {'true' if spec.default else 'false'}"]
    for flag, name in ((spec.reflexive, "reflexive"),
                       (spec.constructors, "constructors"),
                       (spec.transitive, "transitive")):
        if flag:
            lines.append(f"closure: {name}")
    lines += [f"true: {render_axiom(ax)}" for ax in spec.true_axioms]
    return "\n".join(lines) + "\n"
