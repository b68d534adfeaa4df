"""Untyped lambda terms in de Bruijn form, with a named parse/print boundary.

Bound variables are indices (``Idx``), free variables keep their names
(``Var``). Binder names survive only as printing hints and are ignored by
equality, so two alpha-equivalent terms compare equal with ``==``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union


@dataclass(frozen=True)
class Var:
    """A free variable."""

    name: str


@dataclass(frozen=True)
class Idx:
    """A bound variable, counted outward from the innermost binder."""

    index: int


@dataclass(frozen=True)
class App:
    fun: Term
    arg: Term


@dataclass(frozen=True)
class Lam:
    body: Term
    hint: str = field(default="x", compare=False)


Term = Union[Var, Idx, App, Lam]


class LambdaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownName(LambdaSyntaxError):
    pass


class NonClosedTerm(ValueError):
    pass


# ----------------------------------------------------------------------------
# Construction helpers


def abstract(name: str, body: Term, depth: int = 0) -> Term:
    """Replace free occurrences of ``name`` with the index of a new binder."""
    match body:
        case Var(n):
            return Idx(depth) if n == name else body
        case Idx():
            return body
        case App(f, a):
            return App(abstract(name, f, depth), abstract(name, a, depth))
        case Lam(b, hint):
            return Lam(abstract(name, b, depth + 1), hint)
    raise TypeError(body)


def lam(*names_and_body) -> Term:
    """``lam("x", "y", body)`` builds the abstraction over named variables."""
    *names, body = names_and_body
    for name in reversed(names):
        body = Lam(abstract(name, body), name)
    return body


def app(*terms: Term) -> Term:
    head, *rest = terms
    for t in rest:
        head = App(head, t)
    return head


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``h a1 ... an`` into ``(h, [a1, ..., an])``."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def free_variables(t: Term) -> frozenset[str]:
    match t:
        case Var(n):
            return frozenset((n,))
        case Idx():
            return frozenset()
        case App(f, a):
            return free_variables(f) | free_variables(a)
        case Lam(b):
            return free_variables(b)
    raise TypeError(t)


def is_closed(t: Term) -> bool:
    return not free_variables(t)


def size(t: Term) -> int:
    match t:
        case App(f, a):
            return 1 + size(f) + size(a)
        case Lam(b):
            return 1 + size(b)
    return 1


# ----------------------------------------------------------------------------
# Shifting and substitution


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    match t:
        case Idx(k):
            return Idx(k + by) if k >= cutoff else t
        case App(f, a):
            return App(shift(f, by, cutoff), shift(a, by, cutoff))
        case Lam(b, hint):
            return Lam(shift(b, by, cutoff + 1), hint)
    return t


def _subst_index(t: Term, j: int, sub: Term) -> Term:
    """Substitute ``sub`` for ``Idx(j)`` and close the gap left by the binder."""
    match t:
        case Idx(k):
            if k == j:
                return shift(sub, j) if j else sub
            return Idx(k - 1) if k > j else t
        case App(f, a):
            return App(_subst_index(f, j, sub), _subst_index(a, j, sub))
        case Lam(b, hint):
            return Lam(_subst_index(b, j + 1, sub), hint)
    return t


def instantiate(body: Term, arg: Term) -> Term:
    """Contract ``(Lam body) arg``."""
    return _subst_index(body, 0, arg)


def substitute(t: Term, name: str, sub: Term) -> Term:
    """``t[sub/name]`` for a free variable ``name``.

    Free variables of ``sub`` are names and dangling indices in ``sub`` are
    lifted past every binder crossed, so nothing is captured.
    """

    def go(u: Term, depth: int) -> Term:
        match u:
            case Var(n):
                if n == name:
                    return shift(sub, depth) if depth else sub
                return u
            case App(f, a):
                return App(go(f, depth), go(a, depth))
            case Lam(b, hint):
                return Lam(go(b, depth + 1), hint)
        return u

    if name not in free_variables(t):
        return t
    return go(t, 0)


def alpha_eq(m: Term, n: Term) -> bool:
    return m == n


# ----------------------------------------------------------------------------
# Parsing

PRELUDE_SOURCE = {
    "K": r"\x y.x",
    "S": r"\x y z.x z (y z)",
    "I": r"\x.x",
    "T": "K",
    "F": "K (S K K)",
    "Omega": r"(\x.x x)(\x.x x)",
}

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<sym>[\\λ.()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise LambdaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start("name") if m.group("name") else m.start("sym")
        kind = "name" if m.group("name") else m.group("sym")
        if kind == "λ":
            kind = "\\"
        tokens.append((kind, m.group("name") or m.group("sym"), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, prelude: dict[str, Term]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.prelude = prelude

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            want = "identifier" if kind == "name" else repr(kind)
            got = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise LambdaSyntaxError(f"expected {want}, found {got}", tok[2])
        self.pos += 1
        return tok

    def term(self, scope: tuple[str, ...]) -> Term:
        if self.peek()[0] == "\\":
            return self.abstraction(scope)
        return self.application(scope)

    def abstraction(self, scope: tuple[str, ...]) -> Term:
        self.take("\\")
        names = [self.take("name")[1]]
        while self.peek()[0] == "name":
            names.append(self.take("name")[1])
        self.take(".")
        inner = scope + tuple(names)
        body = self.term(inner)
        for name in reversed(names):
            body = Lam(body, name)
        return body

    def application(self, scope: tuple[str, ...]) -> Term:
        head = self.atom(scope)
        while True:
            kind = self.peek()[0]
            if kind in ("name", "("):
                head = App(head, self.atom(scope))
            elif kind == "\\":
                # a trailing abstraction extends maximally right
                return App(head, self.abstraction(scope))
            else:
                return head

    def atom(self, scope: tuple[str, ...]) -> Term:
        kind, value, where = self.peek()
        if kind == "(":
            self.take("(")
            inner = self.term(scope)
            self.take(")")
            return inner
        if kind == "name":
            self.take("name")
            for depth, bound in enumerate(reversed(scope)):
                if bound == value:
                    return Idx(depth)
            if value in self.prelude:
                return self.prelude[value]
            if value[0].isupper():
                raise UnknownName(f"unknown prelude name {value!r}", where)
            return Var(value)
        got = "end of input" if kind == "eof" else repr(value)
        raise LambdaSyntaxError(f"expected a term, found {got}", where)


def _build_prelude() -> dict[str, Term]:
    table: dict[str, Term] = {}
    for name, source in PRELUDE_SOURCE.items():
        table[name] = _parse_with(source, table)
    return table


def _parse_with(text: str, prelude: dict[str, Term]) -> Term:
    parser = _Parser(text, prelude)
    result = parser.term(())
    parser.take("eof")
    return result


PRELUDE: dict[str, Term] = _build_prelude()


def parse(text: str) -> Term:
    """Parse concrete syntax, expanding the prelude names K S I T F Omega."""
    return _parse_with(text, PRELUDE)


def prelude_names_used(text: str) -> list[str]:
    """Prelude names referenced (free) in ``text``, in order of first use."""
    try:
        tokens = _tokenize(text)
    except LambdaSyntaxError:
        return []
    seen: list[str] = []
    for kind, value, _ in tokens:
        if kind == "name" and value in PRELUDE and value not in seen:
            seen.append(value)
    return seen


K = PRELUDE["K"]
S = PRELUDE["S"]
I = PRELUDE["I"]  # noqa: E741
T = PRELUDE["T"]
F = PRELUDE["F"]
OMEGA = PRELUDE["Omega"]


def church(n: int) -> Term:
    body: Term = Idx(0)
    for _ in range(n):
        body = App(Idx(1), body)
    return Lam(Lam(body, "x"), "f")


# ----------------------------------------------------------------------------
# Printing


def fresh_name(hint: str, taken) -> str:
    """``hint`` itself if free, else ``hint`` with the lowest unused suffix."""
    if hint not in taken:
        return hint
    base = hint.rstrip("0123456789") or "x"
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def open_binder(body: Term, name: str) -> Term:
    """Instantiate the outermost dangling index of ``body`` with ``Var(name)``."""
    return instantiate(body, Var(name))


def choose_binder(t: Lam, avoid) -> tuple[str, Term]:
    """Pick a display name for ``t``'s binder and return the opened body."""
    name = fresh_name(t.hint, set(avoid) | free_variables(t.body))
    return name, open_binder(t.body, name)


def show(t: Term) -> str:
    """Print with ``\\`` binders and minimal parentheses."""
    return _show(t, frozenset())


def _show(t: Term, used: frozenset[str]) -> str:
    match t:
        case Var(n):
            return n
        case Idx(k):
            raise NonClosedTerm(f"dangling index {k}")
        case Lam():
            names = []
            while isinstance(t, Lam):
                name, body = choose_binder(t, used)
                names.append(name)
                used = used | {name}
                t = body
            return "\\" + " ".join(names) + "." + _show(t, used)
        case App():
            head, args = spine(t)
            parts = [_show_atom(head, used)]
            parts += [_show_atom(a, used) for a in args]
            return " ".join(parts)
    raise TypeError(t)


def _show_atom(t: Term, used: frozenset[str]) -> str:
    text = _show(t, used)
    return text if isinstance(t, Var) else f"({text})"
