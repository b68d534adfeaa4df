"""The relational model D: finite-multiset sequences and a derivation interpreter.

An element of D is a sequence ``(m1, m2, ...)`` of finite multisets over D,
empty from some point on. Elements are stored with the empty tail trimmed;
the empty sequence is ``STAR``. ``fold(m, s)`` prepends ``m`` to ``s`` and
``unfold`` splits off the first multiset, giving D = Mf(D) x D.

Terms are interpreted by the derivation rules

    x : [s] |- x : s
    G + {x: m} |- M : s          =>  G |- \\x.M : fold(m, s)
    G0 |- M : fold([s1..sj], s),  Gi |- N : si   =>  G0 + G1 + ... + Gj |- M N : s

Every element in a derivation for a beta-normal term occurs in its
conclusion, so bounding element size gives an exact, finite truncation.
Non-normal terms are reduced first; surviving redexes have no derivations.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .models import Comparison, compare_sets
from .reduce import NORMAL, normalize
from .syntax import App, Idx, Lam, Term, Var, open_binder, spine

Multiset = tuple["DElem", ...]


class DElem:
    __slots__ = ("seq", "key", "size", "rank", "_hash")

    def __init__(self, seq: Iterable[Iterable[DElem]] = ()):
        seq = [tuple(sorted(m)) for m in seq]
        while seq and not seq[-1]:
            seq.pop()
        self.seq: tuple[Multiset, ...] = tuple(seq)
        self.key = tuple(tuple(e.key for e in m) for m in self.seq)
        self.size = 1 + len(self.seq) + sum(e.size for m in self.seq for e in m)
        self.rank = 1 + max((e.rank for m in self.seq for e in m), default=0)
        self._hash = hash(self.key)

    def __eq__(self, other):
        return isinstance(other, DElem) and self.key == other.key

    def __lt__(self, other):
        return self.key < other.key

    def __hash__(self):
        return self._hash

    def __repr__(self) -> str:
        return f"DElem({show_delem(self)!r})"

    def __str__(self) -> str:
        return show_delem(self)


STAR = DElem()


def fold(m: Iterable[DElem], sigma: DElem) -> DElem:
    return DElem((tuple(m),) + sigma.seq)


def unfold(sigma: DElem) -> tuple[Multiset, DElem]:
    if not sigma.seq:
        return (), STAR
    return sigma.seq[0], DElem(sigma.seq[1:])


def canonical(sigma: DElem) -> DElem:
    return DElem(sigma.seq)


def multiset_size(m: Multiset) -> int:
    return sum(e.size for e in m)


def fold_size(m: Multiset, sigma: DElem) -> int:
    """``fold(m, sigma).size`` without building the element."""
    if not m and not sigma.seq:
        return 1
    return 1 + multiset_size(m) + sigma.size


# ----------------------------------------------------------------------------
# Enumeration by size


@lru_cache(maxsize=None)
def elements_of_size(n: int) -> tuple[DElem, ...]:
    """All elements of size exactly ``n``, sorted."""
    if n < 1:
        return ()
    if n == 1:
        return (STAR,)
    out = []
    for k in range(0, n - 1):
        for m in multisets_of_size(k):
            for rest in elements_of_size(n - 1 - k):
                if not m and not rest.seq:
                    continue
                out.append(fold(m, rest))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def elements_up_to(s: int) -> tuple[DElem, ...]:
    return tuple(sorted(e for n in range(1, s + 1) for e in elements_of_size(n)))


@lru_cache(maxsize=None)
def multisets_of_size(k: int) -> tuple[Multiset, ...]:
    """Sorted multisets whose entries' sizes sum to ``k``."""
    pool = elements_up_to(k)
    out: list[Multiset] = []

    def go(start: int, left: int, acc: list[DElem]):
        if left == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(pool)):
            e = pool[i]
            if e.size <= left:
                acc.append(e)
                go(i, left - e.size, acc)
                acc.pop()

    go(0, k, [])
    return tuple(out)


def random_delem(rng: random.Random, max_size: int) -> DElem:
    """Random element of size at most ``max_size`` built top-down."""
    budget = rng.randint(1, max_size)
    return _random_with_budget(rng, budget)


def _random_with_budget(rng: random.Random, budget: int) -> DElem:
    seq: list[list[DElem]] = []
    left = budget - 1
    while left > 0 and rng.random() < 0.7:
        left -= 1
        m = []
        while left > 0 and rng.random() < 0.5:
            sub = rng.randint(1, left)
            e = _random_with_budget(rng, sub)
            m.append(e)
            left -= e.size
        seq.append(m)
    return DElem(seq)


# ----------------------------------------------------------------------------
# Typing contexts


class TypingContext:
    """Finite map from variable names to non-empty multisets of elements."""

    __slots__ = ("entries", "key", "_hash")

    def __init__(self, entries: Iterable[tuple[str, Iterable[DElem]]] = ()):
        merged: dict[str, list[DElem]] = {}
        for name, m in entries:
            merged.setdefault(name, []).extend(m)
        self.entries = tuple(
            (name, tuple(sorted(m))) for name, m in sorted(merged.items()) if m
        )
        self.key = tuple((name, tuple(e.key for e in m)) for name, m in self.entries)
        self._hash = hash(self.key)

    def __eq__(self, other):
        return isinstance(other, TypingContext) and self.key == other.key

    def __lt__(self, other):
        return self.key < other.key

    def __hash__(self):
        return self._hash

    def __add__(self, other: TypingContext) -> TypingContext:
        if not other.entries:
            return self
        if not self.entries:
            return other
        return TypingContext(self.entries + other.entries)

    def get(self, name: str) -> Multiset:
        for n, m in self.entries:
            if n == name:
                return m
        return ()

    def without(self, name: str) -> TypingContext:
        return TypingContext(e for e in self.entries if e[0] != name)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __repr__(self) -> str:
        return f"TypingContext({show_context(self)!r})"

    def __str__(self) -> str:
        return show_context(self)


EMPTY_CONTEXT = TypingContext()

Judgment = tuple[TypingContext, DElem]
RelInterp = frozenset  # of Judgment


def _sum_contexts(contexts: Iterable[TypingContext]) -> TypingContext:
    entries: list = []
    for c in contexts:
        entries.extend(c.entries)
    return TypingContext(entries)


# ----------------------------------------------------------------------------
# Interpretation


class _Deriver:
    def __init__(self, bound: int):
        self.bound = bound
        self.memo: dict[Term, frozenset[Judgment]] = {}
        self.counter = itertools.count()

    def judgments(self, t: Term) -> frozenset[Judgment]:
        found = self.memo.get(t)
        if found is None:
            found = frozenset(self._judgments(t))
            self.memo[t] = found
        return found

    def _judgments(self, t: Term) -> Iterator[Judgment]:
        s = self.bound
        match t:
            case Var(name):
                for sigma in elements_up_to(s):
                    yield TypingContext([(name, (sigma,))]), sigma
            case Lam(body):
                # the '%' prefix cannot occur in parsed identifiers
                name = f"%{next(self.counter)}"
                for ctx, sigma in self.judgments(open_binder(body, name)):
                    m = ctx.get(name)
                    if fold_size(m, sigma) <= s:
                        yield ctx.without(name), fold(m, sigma)
            case App():
                head, args = spine(t)
                if isinstance(head, Var):
                    yield from self._spine(head.name, args)
            case Idx():
                raise ValueError("dangling de Bruijn index")

    def _spine(self, head: str, args: list[Term]) -> Iterator[Judgment]:
        """Judgments for ``head N1 ... Nn``: head gets fold(A1, ... fold(An, sigma))."""
        s = self.bound
        per_arg = [sorted(self.judgments(a), key=lambda j: (j[1].size, j[1], j[0])) for a in args]

        def build(i: int, tail: DElem, ctxs: list[TypingContext], result: DElem) -> Iterator[Judgment]:
            if i < 0:
                ctx = _sum_contexts(ctxs) + TypingContext([(head, (tail,))])
                yield ctx, result
                return
            for chosen in _multisets_within(per_arg[i], tail, s):
                elem = fold([j[1] for j in chosen], tail)
                yield from build(i - 1, elem, ctxs + [j[0] for j in chosen], result)

        for result in elements_up_to(s):
            yield from build(len(args) - 1, result, [], result)


def _multisets_within(pool: Sequence[Judgment], tail: DElem, bound: int) -> Iterator[tuple[Judgment, ...]]:
    """Multisets of judgments whose types, folded onto ``tail``, stay within ``bound``."""
    if fold_size((), tail) <= bound:
        yield ()
    budget = bound - 1 - tail.size
    if budget <= 0:
        return

    def go(start: int, left: int, acc: list[Judgment]):
        for i in range(start, len(pool)):
            j = pool[i]
            if j[1].size > left:
                break
            acc.append(j)
            yield tuple(acc)
            yield from go(i, left - j[1].size, acc)
            acc.pop()

    yield from go(0, budget, [])


def interp_d(m: Term, size_bound: int, fuel: int = 10_000) -> frozenset[Judgment]:
    """All derivable ``(context, element)`` pairs with every element of size at most ``size_bound``.

    Exact when ``m`` normalizes within ``fuel``; otherwise a subset that grows with fuel.
    """
    if size_bound < 1:
        raise ValueError("size bound must be at least 1")
    t = normalize(m, NORMAL, fuel).term
    return _Deriver(size_bound).judgments(t)


def interp_elements_d(m: Term, size_bound: int, fuel: int = 10_000) -> list[DElem]:
    """Elements derivable for ``m`` in the empty context."""
    return sorted(e for ctx, e in interp_d(m, size_bound, fuel) if not ctx)


def rel_union(f: Iterable[Judgment], g: Iterable[Judgment]) -> frozenset[Judgment]:
    return frozenset(f) | frozenset(g)


def rel_apply(f: Iterable[Judgment], g: Iterable[Judgment]) -> frozenset[Judgment]:
    """Application of finite relations: (G0 + G1 + ... + Gj, s) for
    (G0, fold([s1..sj], s)) in f and (Gi, si) in g."""
    by_type: dict[DElem, list[TypingContext]] = {}
    for ctx, sigma in g:
        by_type.setdefault(sigma, []).append(ctx)
    out = set()
    for ctx0, tau in f:
        m, sigma = unfold(tau)
        choices = [by_type.get(x, []) for x in m]
        for picked in itertools.product(*choices):
            out.add((_sum_contexts((ctx0,) + picked), sigma))
    return frozenset(out)


def compare_in_d(m: Term, n: Term, size_bound: int, fuel: int = 10_000) -> Comparison:
    left = interp_d(m, size_bound, fuel)
    right = interp_d(n, size_bound, fuel)
    return compare_sets(list(left), list(right), size_bound)


# ----------------------------------------------------------------------------
# Text forms


def show_delem(sigma: DElem) -> str:
    if not sigma.seq:
        return "*"
    m, rest = unfold(sigma)
    inner = ",".join(_show_member(e) for e in m)
    return f"[{inner}]→{show_delem(rest)}"


def _show_member(e: DElem) -> str:
    return "*" if not e.seq else f"({show_delem(e)})"


def show_context(ctx: TypingContext) -> str:
    parts = [f"{name}:[{','.join(_show_member(e) for e in m)}]" for name, m in ctx.entries]
    return "{" + ", ".join(parts) + "}"


def show_judgment(j: Judgment) -> str:
    ctx, sigma = j
    return f"{show_context(ctx)} ⊢ {show_delem(sigma)}"


class DElemSyntaxError(ValueError):
    pass


def parse_delem(text: str) -> DElem:
    """Inverse of ``show_delem``; ``->`` is accepted for ``→``."""
    text = "".join(text.replace("->", "→").split())
    sigma, i = _parse_arrow(text, 0)
    if i != len(text):
        raise DElemSyntaxError(f"trailing input at position {i} in {text!r}")
    return sigma


def _parse_arrow(text: str, i: int) -> tuple[DElem, int]:
    if text.startswith("*", i):
        return STAR, i + 1
    if text.startswith("(", i):
        sigma, i = _parse_arrow(text, i + 1)
        if not text.startswith(")", i):
            raise DElemSyntaxError(f"expected ')' at position {i}")
        return sigma, i + 1
    if not text.startswith("[", i):
        raise DElemSyntaxError(f"expected '*', '(' or '[' at position {i}")
    i += 1
    members: list[DElem] = []
    if not text.startswith("]", i):
        while True:
            e, i = _parse_arrow(text, i)
            members.append(e)
            if text.startswith(",", i):
                i += 1
                continue
            break
    if not text.startswith("]→", i):
        raise DElemSyntaxError(f"expected ']→' at position {i}")
    rest, i = _parse_arrow(text, i + 2)
    return fold(members, rest), i
