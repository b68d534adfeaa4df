"""Graph models: webs freely completed from finite partial webs.

A web element is either a name (an atom, or a name the partial web assigns to
a coded pair) or a free pair ``(a -> alpha)`` of a finite set and an element.
The coding ``p(a, alpha)`` returns the assigned name when the partial web
fixes one and the free pair otherwise, so it is injective by construction.

Interpretation uses the usual clauses

    [[x]]p       = p(x)
    [[M N]]p     = { alpha : p(c, alpha) in [[M]]p for some finite c <= [[N]]p }
    [[\\x.M]]p    = { p(c, alpha) : alpha in [[M]]p[x := c] }

evaluated exactly on beta-normal terms. Other terms are first reduced with
the given fuel; any redex that survives contributes the empty set, which is a
sound under-approximation that grows with fuel.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .models import Comparison, compare_sets
from .reduce import NORMAL, Verdict, normalize
from .syntax import App, Idx, Lam, Term, Var, spine


class WebElement:
    """Immutable web element with cached rank, sort key and hash."""

    __slots__ = ("name", "argument", "result", "rank", "key", "_hash")

    def __init__(self, name=None, argument=None, result=None):
        self.name = name
        self.argument = argument
        self.result = result
        if name is not None:
            self.rank = 0
            self.key = (0, name)
        else:
            self.rank = 1 + max([e.rank for e in argument] + [result.rank])
            self.key = (1, tuple(e.key for e in argument), result.key)
        self._hash = hash(self.key)

    def __eq__(self, other):
        return isinstance(other, WebElement) and self.key == other.key

    def __lt__(self, other):
        return self.key < other.key

    def __hash__(self):
        return self._hash

    @property
    def is_atom(self) -> bool:
        return self.name is not None

    def __repr__(self) -> str:
        return f"WebElement({show_element(self)!r})"

    def __str__(self) -> str:
        return show_element(self)


def Atom(name: str) -> WebElement:
    return WebElement(name=name)


def Pair(argument: Iterable[WebElement], result: WebElement) -> WebElement:
    return WebElement(argument=tuple(sorted(set(argument))), result=result)


def show_element(e: WebElement) -> str:
    if e.is_atom:
        return e.name
    inner = ",".join(show_element(a) for a in e.argument)
    return f"({{{inner}}}→{show_element(e.result)})"


class WebError(ValueError):
    pass


class InjectivityViolation(WebError):
    pass


class EnumerationTooLarge(ValueError):
    pass


# Cap on subsets enumerated at one rank; rank 3 over one atom already needs 2**25.
MAX_SUBSETS = 2**20


def _check_enumerable(items: list) -> None:
    if 2 ** len(items) > MAX_SUBSETS:
        raise EnumerationTooLarge(
            f"rank stratum of {len(items)} elements has 2^{len(items)} subsets; "
            "lower the rank bound"
        )


# ----------------------------------------------------------------------------
# Partial and completed webs


@dataclass(frozen=True)
class PartialWeb:
    """Atoms plus a finite injective coding of (set of names, name) pairs to names."""

    atoms: frozenset[str] = frozenset()
    precoded: Mapping[tuple[frozenset[str], str], str] = field(default_factory=dict)

    def __post_init__(self):
        names = set(self.atoms)
        coded_names: dict[str, tuple] = {}
        for (arg, res), name in self.precoded.items():
            if name in coded_names:
                raise InjectivityViolation(
                    f"name {name!r} codes both {_show_key(coded_names[name])} "
                    f"and {_show_key((arg, res))}"
                )
            coded_names[name] = (arg, res)
        clash = names & set(coded_names)
        if clash:
            raise InjectivityViolation(f"names declared as atom and code: {sorted(clash)}")
        declared = names | set(coded_names)
        for (arg, res), name in self.precoded.items():
            missing = (set(arg) | {res}) - declared
            if missing:
                raise WebError(f"code {name!r} references undeclared names {sorted(missing)}")

    @property
    def names(self) -> frozenset[str]:
        return frozenset(self.atoms) | frozenset(self.precoded.values())


def _show_key(key) -> str:
    arg, res = key
    return "({" + ",".join(sorted(arg)) + "}→" + res + ")"


class CompletedWeb:
    """The free completion of a partial web.

    The carrier is materialized lazily by rank; the per-rank cache only grows.
    """

    def __init__(self, base: PartialWeb):
        self.base = base
        self._code = {
            (frozenset(Atom(n) for n in arg), Atom(res)): Atom(name)
            for (arg, res), name in base.precoded.items()
        }
        self._decode = {v: k for k, v in self._code.items()}
        self._strata: list[list[WebElement]] = [sorted(Atom(n) for n in base.names)]

    def code(self, argument: Iterable[WebElement], result: WebElement) -> WebElement:
        argument = frozenset(argument)
        named = self._code.get((argument, result))
        return named if named is not None else Pair(argument, result)

    def decode(self, e: WebElement) -> tuple[frozenset[WebElement], WebElement] | None:
        if not e.is_atom:
            return frozenset(e.argument), e.result
        return self._decode.get(e)

    def carrier(self, rank_bound: int) -> list[WebElement]:
        """Sorted carrier elements of rank at most ``rank_bound``."""
        if rank_bound < 0:
            return []
        while len(self._strata) <= rank_bound:
            below = self._strata[-1]
            _check_enumerable(below)
            out = set(self._strata[0])
            for arg in subsets(below):
                for res in below:
                    out.add(self.code(arg, res))
            self._strata.append(sorted(out))
        return self._strata[rank_bound]

    def named_codes(self) -> dict[WebElement, tuple[frozenset[WebElement], WebElement]]:
        return dict(self._decode)

    def __contains__(self, e: WebElement) -> bool:
        if e.is_atom:
            return e.name in self.base.names
        arg, res = frozenset(e.argument), e.result
        return self.code(arg, res) == e and res in self and all(a in self for a in arg)


def free_completion(pw: PartialWeb) -> CompletedWeb:
    return CompletedWeb(pw)


def engeler(atom_count: int) -> CompletedWeb:
    """Free completion of ``atom_count`` atoms with nothing precoded."""
    if atom_count < 1:
        raise WebError("atom count must be positive")
    return CompletedWeb(PartialWeb(frozenset(atom_names(atom_count))))


def atom_names(n: int) -> list[str]:
    letters = "abcdefghijklmnopqrstuvwxyz"
    return [letters[i] if i < 26 else f"a{i}" for i in range(n)]


def enumerate_web(w: CompletedWeb, rank_bound: int) -> list[WebElement]:
    return list(w.carrier(rank_bound))


def subsets(items: list[WebElement]) -> Iterable[tuple[WebElement, ...]]:
    return itertools.chain.from_iterable(
        itertools.combinations(items, r) for r in range(len(items) + 1)
    )


# ----------------------------------------------------------------------------
# Interpretation

GEnv = Mapping[str, frozenset[WebElement]]


class _Interpreter:
    def __init__(self, web: CompletedWeb, env: GEnv):
        self.web = web
        self.env = env

    def lookup(self, t: Term, bound: tuple) -> frozenset[WebElement]:
        if isinstance(t, Var):
            return frozenset(self.env.get(t.name, ()))
        return bound[t.index]

    def elements(self, t: Term, k: int, bound: tuple) -> set[WebElement]:
        """All members of [[t]] with rank at most k."""
        if k < 0:
            return set()
        match t:
            case Var() | Idx():
                return {e for e in self.lookup(t, bound) if e.rank <= k}
            case Lam(body):
                out = set()
                below = self.web.carrier(k - 1)
                _check_enumerable(below)
                for arg in subsets(below):
                    arg = frozenset(arg)
                    for res in self.elements(body, k - 1, (arg,) + bound):
                        out.add(self.web.code(arg, res))
                # named codes have rank 0 whatever their components
                for name, (arg, res) in self.web.named_codes().items():
                    if self.member(res, body, (arg,) + bound):
                        out.add(name)
                return out
            case App():
                head, args = spine(t)
                if isinstance(head, Lam):
                    return set()
                return {
                    res for res in self._spine_results(head, args, bound) if res.rank <= k
                }
        raise TypeError(t)

    def _spine_results(self, head: Term, args: list[Term], bound: tuple):
        for e in self.lookup(head, bound):
            for res in self._unwind(e, args, bound):
                yield res

    def _unwind(self, e: WebElement, args: list[Term], bound: tuple):
        for a in args:
            pair = self.web.decode(e)
            if pair is None:
                return
            arg, e = pair
            if not all(self.member(x, a, bound) for x in arg):
                return
        yield e

    def member(self, alpha: WebElement, t: Term, bound: tuple) -> bool:
        match t:
            case Var() | Idx():
                return alpha in self.lookup(t, bound)
            case Lam(body):
                pair = self.web.decode(alpha)
                if pair is None:
                    return False
                arg, res = pair
                return self.member(res, body, (arg,) + bound)
            case App():
                head, args = spine(t)
                if isinstance(head, Lam):
                    return False
                return any(r == alpha for r in self._spine_results(head, args, bound))
        raise TypeError(t)


def interp_elements(
    m: Term, env: GEnv | None, w: CompletedWeb, rank_bound: int, fuel: int = 10_000
) -> list[WebElement]:
    """Sorted elements of [[m]]env of rank at most ``rank_bound``.

    Exact when ``m`` normalizes within ``fuel``; otherwise a subset.
    """
    _check_env(env, w)
    t = normalize(m, NORMAL, fuel).term
    return sorted(_Interpreter(w, env or {}).elements(t, rank_bound, ()))


def _check_env(env: GEnv | None, w: CompletedWeb) -> None:
    for var, elems in (env or {}).items():
        for e in elems:
            if e not in w:
                raise WebError(f"environment value {e} for {var!r} is not in the web")


def member(
    alpha: WebElement, m: Term, env: GEnv | None, w: CompletedWeb, fuel: int = 10_000
) -> Verdict:
    _check_env(env, w)
    outcome = normalize(m, NORMAL, fuel)
    found = _Interpreter(w, env or {}).member(alpha, outcome.term, ())
    if found:
        return Verdict.YES
    return Verdict.NO if outcome.finished else Verdict.UNKNOWN


def compare(
    m: Term, n: Term, w: CompletedWeb, k: int, fuel: int = 10_000, env: GEnv | None = None
) -> Comparison:
    left = interp_elements(m, env, w, k, fuel)
    right = interp_elements(n, env, w, k, fuel)
    return compare_sets(left, right, k)


# ----------------------------------------------------------------------------
# Text formats

_ELEMENT_TOKEN = re.compile(r"\s*(→|->|[A-Za-z][A-Za-z0-9_']*|[{}(),])")


def _lex(text: str) -> list[str]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _ELEMENT_TOKEN.match(text, pos)
        if m is None:
            raise WebError(f"unexpected character {text[pos:].strip()[:1]!r} in {text!r}")
        out.append("→" if m.group(1) == "->" else m.group(1))
        pos = m.end()
    return out


def parse_element(text: str) -> WebElement:
    """Inverse of ``show_element``; ``->`` is accepted for ``→``."""
    tokens = _lex(text)
    e, rest = _parse_element(tokens, 0)
    if rest != len(tokens):
        raise WebError(f"trailing input in element {text!r}")
    return e


def _parse_element(tokens: list[str], i: int) -> tuple[WebElement, int]:
    if i >= len(tokens):
        raise WebError("unexpected end of element")
    tok = tokens[i]
    if tok == "(":
        arg, i = _parse_set(tokens, i + 1)
        if i >= len(tokens) or tokens[i] != "→":
            raise WebError("expected '→' in pair")
        res, i = _parse_element(tokens, i + 1)
        if i >= len(tokens) or tokens[i] != ")":
            raise WebError("expected ')' closing pair")
        return Pair(arg, res), i + 1
    if tok[0].isalpha():
        return Atom(tok), i + 1
    raise WebError(f"unexpected token {tok!r}")


def _parse_set(tokens: list[str], i: int) -> tuple[list[WebElement], int]:
    if i >= len(tokens) or tokens[i] != "{":
        raise WebError("expected '{'")
    i += 1
    items: list[WebElement] = []
    if i < len(tokens) and tokens[i] == "}":
        return items, i + 1
    while True:
        e, i = _parse_element(tokens, i)
        items.append(e)
        if i < len(tokens) and tokens[i] == ",":
            i += 1
            continue
        if i < len(tokens) and tokens[i] == "}":
            return items, i + 1
        raise WebError("expected ',' or '}' in set")


def parse_element_set(text: str) -> list[WebElement]:
    tokens = _lex(text)
    items, i = _parse_set(tokens, 0)
    if i != len(tokens):
        raise WebError(f"trailing input in set {text!r}")
    return items


_ATOM_LINE = re.compile(r"^atom\s+([A-Za-z][A-Za-z0-9_']*)$")
_CODE_LINE = re.compile(
    r"^code\s+([A-Za-z][A-Za-z0-9_']*)\s*=\s*\{([^}]*)\}\s*(?:->|→)\s*([A-Za-z][A-Za-z0-9_']*)$"
)


def parse_web(text: str) -> PartialWeb:
    """Read the line format ``atom a`` / ``code n = {e1, ...} -> e``.

    Blank lines and ``#`` comments are skipped. Errors carry line numbers.
    """
    atoms: list[str] = []
    precoded: dict[tuple[frozenset[str], str], str] = {}
    declared: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _ATOM_LINE.match(line):
            name = m.group(1)
            _declare(declared, name, lineno)
            atoms.append(name)
            continue
        if m := _CODE_LINE.match(line):
            name, members, res = m.group(1), m.group(2), m.group(3)
            arg = frozenset(x.strip() for x in members.split(",") if x.strip())
            for ref in sorted(arg | {res}):
                if ref not in declared:
                    raise WebError(f"line {lineno}: {ref!r} is not declared before use")
            key = (arg, res)
            if key in precoded:
                raise InjectivityViolation(
                    f"line {lineno}: {_show_key(key)} already coded as {precoded[key]!r}"
                )
            if name in declared:
                raise InjectivityViolation(
                    f"line {lineno}: {name!r} already declared on line {declared[name]}"
                )
            _declare(declared, name, lineno)
            precoded[key] = name
            continue
        raise WebError(f"line {lineno}: cannot parse {line!r}")
    return PartialWeb(frozenset(atoms), precoded)


def _declare(declared: dict[str, int], name: str, lineno: int) -> None:
    if name in declared:
        raise InjectivityViolation(
            f"line {lineno}: {name!r} already declared on line {declared[name]}"
        )
    declared[name] = lineno


def load_web(path) -> PartialWeb:
    with open(path, encoding="utf-8") as fh:
        return parse_web(fh.read())


def parse_env(text: str) -> dict[str, frozenset[WebElement]]:
    """Environment files hold ``var = { elements }`` lines."""
    env: dict[str, frozenset[WebElement]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        var, sep, rest = line.partition("=")
        var = var.strip()
        if not sep or not re.fullmatch(r"[a-z][A-Za-z0-9_]*", var):
            raise WebError(f"line {lineno}: expected 'var = {{ ... }}'")
        try:
            env[var] = frozenset(parse_element_set(rest))
        except WebError as exc:
            raise WebError(f"line {lineno}: {exc}") from None
    return env
