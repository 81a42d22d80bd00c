"""Formula languages: ASTs, parsers, printers, and the translation between them.

Two propositional languages live here.  The lattice language has negation
``~``, meet ``&``, join ``|`` and three derived connectives ``->0``, ``->3``
and ``==``.  The modal language is classical: ``!``, ``[]``, ``<>``, ``&``,
``|``, ``->``, ``<->`` plus the constants ``true`` and ``false``.

The translation maps ``~`` to ``![]`` (or, equivalently, to ``<>!``) and
meet to classical conjunction, after joins have been rewritten away by
De Morgan.  On join-free inputs the output has at most twice as many nodes
as the input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


# --------------------------------------------------------------------------
# AST nodes


@dataclass(frozen=True)
class SourceSpan:
    """Byte offsets [start, end) into the source text."""

    start: int
    end: int


@dataclass(frozen=True)
class Atom:
    name: str
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class QNeg:
    child: "QLFormula"
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class QMeet:
    left: "QLFormula"
    right: "QLFormula"
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class QJoin:
    left: "QLFormula"
    right: "QLFormula"
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Impl0:
    left: "QLFormula"
    right: "QLFormula"
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Impl3:
    left: "QLFormula"
    right: "QLFormula"
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Equiv:
    left: "QLFormula"
    right: "QLFormula"
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Top:
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Bot:
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Neg:
    child: "BQFormula"
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Box:
    child: "BQFormula"
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Diamond:
    child: "BQFormula"
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class And:
    left: "BQFormula"
    right: "BQFormula"
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Or:
    left: "BQFormula"
    right: "BQFormula"
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Imp:
    left: "BQFormula"
    right: "BQFormula"
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Iff:
    left: "BQFormula"
    right: "BQFormula"
    span: SourceSpan | None = field(default=None, compare=False)


QLFormula = Atom | QNeg | QMeet | QJoin | Impl0 | Impl3 | Equiv
BQFormula = Atom | Top | Bot | Neg | Box | Diamond | And | Or | Imp | Iff

_QL_BINARY = {QMeet: "&", QJoin: "|", Impl0: "->0", Impl3: "->3", Equiv: "=="}
_BQ_BINARY = {And: "&", Or: "|", Imp: "->", Iff: "<->"}
_BQ_UNARY = {Neg: "!", Box: "[]", Diamond: "<>"}


def atom_names(f: QLFormula | BQFormula) -> tuple[str, ...]:
    """All atom names occurring in ``f``, sorted."""
    names: set[str] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            names.add(node.name)
        elif isinstance(node, (QNeg, Neg, Box, Diamond)):
            stack.append(node.child)
        elif isinstance(node, (Top, Bot)):
            pass
        else:
            stack.append(node.left)
            stack.append(node.right)
    return tuple(sorted(names))


def node_count(f: QLFormula | BQFormula) -> int:
    count = 0
    stack = [f]
    while stack:
        node = stack.pop()
        count += 1
        if isinstance(node, (QNeg, Neg, Box, Diamond)):
            stack.append(node.child)
        elif not isinstance(node, (Atom, Top, Bot)):
            stack.append(node.left)
            stack.append(node.right)
    return count


def is_core(f: QLFormula) -> bool:
    """Core formulas contain only atoms, ``~``, ``&`` and ``|``."""
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            continue
        if isinstance(node, QNeg):
            stack.append(node.child)
        elif isinstance(node, (QMeet, QJoin)):
            stack.append(node.left)
            stack.append(node.right)
        else:
            return False
    return True


def is_kernel(f: QLFormula) -> bool:
    """Kernel formulas contain only atoms, ``~`` and ``&``."""
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            continue
        if isinstance(node, QNeg):
            stack.append(node.child)
        elif isinstance(node, QMeet):
            stack.append(node.left)
            stack.append(node.right)
        else:
            return False
    return True


# --------------------------------------------------------------------------
# Lexing and parsing


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        self.span = span
        super().__init__(f"{message} at offset {span.start}")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    span: SourceSpan


_IDENT = re.compile(r"[a-z][a-zA-Z0-9_]*")


def _lex(text: str, logic: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "()":
            tokens.append(_Token(c, c, SourceSpan(i, i + 1)))
            i += 1
            continue
        if c in "&|":
            tokens.append(_Token(c, c, SourceSpan(i, i + 1)))
            i += 1
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group(0)
            span = SourceSpan(i, m.end())
            if logic == "bq" and word in ("true", "false"):
                tokens.append(_Token(word, word, span))
            else:
                tokens.append(_Token("atom", word, span))
            i = m.end()
            continue
        if logic == "ql":
            if c == "~":
                tokens.append(_Token("~", c, SourceSpan(i, i + 1)))
                i += 1
                continue
            if text.startswith("->0", i) or text.startswith("->3", i):
                tokens.append(_Token(text[i:i + 3], text[i:i + 3],
                                     SourceSpan(i, i + 3)))
                i += 3
                continue
            if text.startswith("->", i):
                raise ParseError("expected '->0' or '->3'", SourceSpan(i, i + 2))
            if text.startswith("==", i):
                tokens.append(_Token("==", "==", SourceSpan(i, i + 2)))
                i += 2
                continue
        else:
            if c == "!":
                tokens.append(_Token("!", c, SourceSpan(i, i + 1)))
                i += 1
                continue
            if text.startswith("[]", i):
                tokens.append(_Token("[]", "[]", SourceSpan(i, i + 2)))
                i += 2
                continue
            if text.startswith("<->", i):
                tokens.append(_Token("<->", "<->", SourceSpan(i, i + 3)))
                i += 3
                continue
            if text.startswith("<>", i):
                tokens.append(_Token("<>", "<>", SourceSpan(i, i + 2)))
                i += 2
                continue
            if text.startswith("->", i):
                tokens.append(_Token("->", "->", SourceSpan(i, i + 2)))
                i += 2
                continue
        raise ParseError(f"unexpected character {c!r}", SourceSpan(i, i + 1))
    tokens.append(_Token("end", "", SourceSpan(n, n)))
    return tokens


class _Parser:
    """Recursive-descent parser over a token list."""

    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end of input'!r}",
                             tok.span)
        return self.take()

    def done(self) -> None:
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected trailing {tok.text!r}", tok.span)


def _span_over(left, right) -> SourceSpan | None:
    if left.span is None or right.span is None:
        return None
    return SourceSpan(left.span.start, right.span.end)


def parse_ql(text: str) -> QLFormula:
    """Parse the lattice language.

    Grammar: ``equiv := impl ("==" impl)? ; impl := join (("->0"|"->3") impl)? ;
    join := meet ("|" meet)* ; meet := unary ("&" unary)* ;
    unary := "~" unary | atom | "(" equiv ")"``.
    """
    p = _Parser(_lex(text, "ql"))
    f = _ql_equiv(p)
    p.done()
    return f


def _ql_equiv(p: _Parser) -> QLFormula:
    left = _ql_impl(p)
    if p.peek().kind == "==":
        p.take()
        right = _ql_impl(p)
        return Equiv(left, right, _span_over(left, right))
    return left


def _ql_impl(p: _Parser) -> QLFormula:
    left = _ql_join(p)
    kind = p.peek().kind
    if kind in ("->0", "->3"):
        p.take()
        right = _ql_impl(p)
        cls = Impl0 if kind == "->0" else Impl3
        return cls(left, right, _span_over(left, right))
    return left


def _ql_join(p: _Parser) -> QLFormula:
    f = _ql_meet(p)
    while p.peek().kind == "|":
        p.take()
        right = _ql_meet(p)
        f = QJoin(f, right, _span_over(f, right))
    return f


def _ql_meet(p: _Parser) -> QLFormula:
    f = _ql_unary(p)
    while p.peek().kind == "&":
        p.take()
        right = _ql_unary(p)
        f = QMeet(f, right, _span_over(f, right))
    return f


def _ql_unary(p: _Parser) -> QLFormula:
    tok = p.peek()
    if tok.kind == "~":
        p.take()
        child = _ql_unary(p)
        end = child.span.end if child.span else tok.span.end
        return QNeg(child, SourceSpan(tok.span.start, end))
    if tok.kind == "atom":
        p.take()
        return Atom(tok.text, tok.span)
    if tok.kind == "(":
        p.take()
        f = _ql_equiv(p)
        close = p.expect(")")
        return _respan(f, SourceSpan(tok.span.start, close.span.end))
    raise ParseError(f"expected a formula, found {tok.text or 'end of input'!r}",
                     tok.span)


def parse_bq(text: str) -> BQFormula:
    """Parse the modal language (same shape as :func:`parse_ql` with
    ``! [] <>`` unary, ``->``/``<->`` binary and ``true``/``false``)."""
    p = _Parser(_lex(text, "bq"))
    f = _bq_iff(p)
    p.done()
    return f


def _bq_iff(p: _Parser) -> BQFormula:
    left = _bq_imp(p)
    if p.peek().kind == "<->":
        p.take()
        right = _bq_imp(p)
        return Iff(left, right, _span_over(left, right))
    return left


def _bq_imp(p: _Parser) -> BQFormula:
    left = _bq_or(p)
    if p.peek().kind == "->":
        p.take()
        right = _bq_imp(p)
        return Imp(left, right, _span_over(left, right))
    return left


def _bq_or(p: _Parser) -> BQFormula:
    f = _bq_and(p)
    while p.peek().kind == "|":
        p.take()
        right = _bq_and(p)
        f = Or(f, right, _span_over(f, right))
    return f


def _bq_and(p: _Parser) -> BQFormula:
    f = _bq_unary(p)
    while p.peek().kind == "&":
        p.take()
        right = _bq_unary(p)
        f = And(f, right, _span_over(f, right))
    return f


def _bq_unary(p: _Parser) -> BQFormula:
    tok = p.peek()
    if tok.kind in ("!", "[]", "<>"):
        p.take()
        child = _bq_unary(p)
        end = child.span.end if child.span else tok.span.end
        span = SourceSpan(tok.span.start, end)
        if tok.kind == "!":
            return Neg(child, span)
        if tok.kind == "[]":
            return Box(child, span)
        return Diamond(child, span)
    if tok.kind == "atom":
        p.take()
        return Atom(tok.text, tok.span)
    if tok.kind == "true":
        p.take()
        return Top(tok.span)
    if tok.kind == "false":
        p.take()
        return Bot(tok.span)
    if tok.kind == "(":
        p.take()
        f = _bq_iff(p)
        close = p.expect(")")
        return _respan(f, SourceSpan(tok.span.start, close.span.end))
    raise ParseError(f"expected a formula, found {tok.text or 'end of input'!r}",
                     tok.span)


def _respan(f, span: SourceSpan):
    # dataclasses.replace would re-run __init__; object.__setattr__ keeps
    # the frozen instance but spans are compare=False so this is safe.
    object.__setattr__(f, "span", span)
    return f


# --------------------------------------------------------------------------
# Printing

# Precedence levels, loosest first: equivalences 0, implications 1,
# joins/ors 2, meets/ands 3, unary 4, atoms and constants 5.
_LEVEL = {
    Equiv: 0, Iff: 0,
    Impl0: 1, Impl3: 1, Imp: 1,
    QJoin: 2, Or: 2,
    QMeet: 3, And: 3,
    QNeg: 4, Neg: 4, Box: 4, Diamond: 4,
    Atom: 5, Top: 5, Bot: 5,
}


def _render(f, min_level: int) -> str:
    level = _LEVEL[type(f)]
    if isinstance(f, Atom):
        text = f.name
    elif isinstance(f, Top):
        text = "true"
    elif isinstance(f, Bot):
        text = "false"
    elif isinstance(f, QNeg):
        text = "~" + _render(f.child, 5)
    elif isinstance(f, (Neg, Box, Diamond)):
        text = _BQ_UNARY[type(f)] + _render(f.child, 5)
    elif isinstance(f, (Equiv, Iff)):
        op = _QL_BINARY.get(type(f)) or _BQ_BINARY[type(f)]
        text = f"{_render(f.left, 1)} {op} {_render(f.right, 1)}"
    elif isinstance(f, (Impl0, Impl3, Imp)):
        # right-associative
        op = _QL_BINARY.get(type(f)) or _BQ_BINARY[type(f)]
        text = f"{_render(f.left, 2)} {op} {_render(f.right, 1)}"
    elif isinstance(f, (QJoin, Or)):
        op = "|"
        text = f"{_render(f.left, 2)} {op} {_render(f.right, 3)}"
    elif isinstance(f, (QMeet, And)):
        op = "&"
        text = f"{_render(f.left, 3)} {op} {_render(f.right, 4)}"
    else:
        raise TypeError(f"not a formula node: {f!r}")
    if level < min_level:
        return f"({text})"
    return text


def print_ql(f: QLFormula) -> str:
    return _render(f, 0)


def print_bq(f: BQFormula) -> str:
    return _render(f, 0)


# --------------------------------------------------------------------------
# Rewrites


def expand_ql(f: QLFormula) -> QLFormula:
    """Expand the derived connectives bottom-up; the result is core.

    ``a ->0 b`` becomes ``~a | b``; ``a == b`` becomes ``(a & b) | (~a & ~b)``;
    ``a ->3 b`` becomes ``((~a & b) | (~a & ~b)) | (a & (~a | b))`` (the
    three-way join associates left).
    """
    if isinstance(f, Atom):
        return f
    if isinstance(f, QNeg):
        return QNeg(expand_ql(f.child))
    if isinstance(f, QMeet):
        return QMeet(expand_ql(f.left), expand_ql(f.right))
    if isinstance(f, QJoin):
        return QJoin(expand_ql(f.left), expand_ql(f.right))
    a = expand_ql(f.left)
    b = expand_ql(f.right)
    if isinstance(f, Impl0):
        return QJoin(QNeg(a), b)
    if isinstance(f, Impl3):
        return QJoin(
            QJoin(QMeet(QNeg(a), b), QMeet(QNeg(a), QNeg(b))),
            QMeet(a, QJoin(QNeg(a), b)),
        )
    if isinstance(f, Equiv):
        return QJoin(QMeet(a, b), QMeet(QNeg(a), QNeg(b)))
    raise TypeError(f"not a lattice formula node: {f!r}")


def kernelize_ql(f: QLFormula) -> QLFormula:
    """Rewrite joins away by De Morgan, bottom-up: ``a | b`` becomes
    ``~(~a & ~b)``.  Expects a core formula; the result is kernel."""
    if isinstance(f, Atom):
        return f
    if isinstance(f, QNeg):
        return QNeg(kernelize_ql(f.child))
    if isinstance(f, QMeet):
        return QMeet(kernelize_ql(f.left), kernelize_ql(f.right))
    if isinstance(f, QJoin):
        return QNeg(QMeet(QNeg(kernelize_ql(f.left)),
                          QNeg(kernelize_ql(f.right))))
    raise ValueError("kernelize_ql expects a core formula; run expand_ql first")


def translate(f: QLFormula) -> BQFormula:
    """Translate into the modal language, rendering ``~`` as ``![]``.

    Derived connectives are expanded and joins kernelized first, so the
    node-count bound (at most 2x) applies to kernel inputs.
    """
    return _translate_kernel(kernelize_ql(expand_ql(f)), diamond=False)


def translate_diamond_form(f: QLFormula) -> BQFormula:
    """Translate rendering ``~`` as ``<>!`` instead of ``![]``."""
    return _translate_kernel(kernelize_ql(expand_ql(f)), diamond=True)


def _translate_kernel(f: QLFormula, diamond: bool) -> BQFormula:
    if isinstance(f, Atom):
        return Atom(f.name)
    if isinstance(f, QNeg):
        child = _translate_kernel(f.child, diamond)
        if diamond:
            return Diamond(Neg(child))
        return Neg(Box(child))
    if isinstance(f, QMeet):
        return And(_translate_kernel(f.left, diamond),
                   _translate_kernel(f.right, diamond))
    raise ValueError("translation runs on kernel formulas only")


def normalize_bq(f: BQFormula) -> BQFormula:
    """Rewrite ``<>x`` to ``![](!x)`` and ``a <-> b`` to
    ``(a -> b) & (b -> a)``, bottom-up."""
    if isinstance(f, (Atom, Top, Bot)):
        return f
    if isinstance(f, Neg):
        return Neg(normalize_bq(f.child))
    if isinstance(f, Box):
        return Box(normalize_bq(f.child))
    if isinstance(f, Diamond):
        return Neg(Box(Neg(normalize_bq(f.child))))
    if isinstance(f, And):
        return And(normalize_bq(f.left), normalize_bq(f.right))
    if isinstance(f, Or):
        return Or(normalize_bq(f.left), normalize_bq(f.right))
    if isinstance(f, Imp):
        return Imp(normalize_bq(f.left), normalize_bq(f.right))
    if isinstance(f, Iff):
        a = normalize_bq(f.left)
        b = normalize_bq(f.right)
        return And(Imp(a, b), Imp(b, a))
    raise TypeError(f"not a modal formula node: {f!r}")


# --------------------------------------------------------------------------
# Axiom schemes


def ql_axiom(i: int, a: QLFormula, b: QLFormula | None = None,
             c: QLFormula | None = None) -> QLFormula:
    """The i-th axiom scheme of the lattice logic, instantiated at a, b, c.

    Unused slots are ignored; schemes that need b or c raise if the slot
    is missing.
    """
    def need(x, slot):
        if x is None:
            raise ValueError(f"axiom {i} needs argument {slot!r}")
        return x

    if i == 1:
        b, c = need(b, "b"), need(c, "c")
        return Impl0(Equiv(a, b), Impl0(Equiv(b, c), Equiv(a, c)))
    if i == 2:
        b = need(b, "b")
        return Impl0(Equiv(a, b), Equiv(QNeg(a), QNeg(b)))
    if i == 3:
        b, c = need(b, "b"), need(c, "c")
        return Impl0(Equiv(a, b), Equiv(QMeet(a, c), QMeet(b, c)))
    if i == 4:
        b = need(b, "b")
        return Equiv(QMeet(a, b), QMeet(b, a))
    if i == 5:
        b, c = need(b, "b"), need(c, "c")
        return Equiv(QMeet(a, QMeet(b, c)), QMeet(QMeet(a, b), c))
    if i == 6:
        b = need(b, "b")
        return Equiv(QMeet(a, QJoin(a, b)), a)
    if i == 7:
        b = need(b, "b")
        return Equiv(QMeet(QNeg(a), a), QMeet(QMeet(QNeg(a), a), b))
    if i == 8:
        return Equiv(a, QNeg(QNeg(a)))
    if i == 9:
        b = need(b, "b")
        return Equiv(QNeg(QJoin(a, b)), QMeet(QNeg(a), QNeg(b)))
    if i == 10:
        b = need(b, "b")
        return Equiv(Equiv(a, b), Equiv(b, a))
    if i == 11:
        b = need(b, "b")
        return Impl0(Equiv(a, b), Impl0(a, b))
    if i == 12:
        b = need(b, "b")
        return Impl3(Impl0(a, b), Impl3(a, Impl3(a, b)))
    raise ValueError(f"axiom index out of range: {i}")


QL_AXIOM_ARITY = {1: 3, 2: 2, 3: 3, 4: 2, 5: 3, 6: 2, 7: 2, 8: 1, 9: 2,
                  10: 2, 11: 2, 12: 2}


def bq_axiom(name: str, a: BQFormula, b: BQFormula | None = None) -> BQFormula:
    """The K scheme ``[](a -> b) -> ([]a -> []b)`` or the BQ scheme
    ``[]<>a <-> a``."""
    if name == "K":
        if b is None:
            raise ValueError("axiom K needs argument 'b'")
        return Imp(Box(Imp(a, b)), Imp(Box(a), Box(b)))
    if name == "BQ":
        return Iff(Box(Diamond(a)), a)
    raise ValueError(f"unknown modal axiom: {name!r}")
