"""Fuel-bounded beta reduction, solvability, Boehm approximants, conversion."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Generic, Iterator, TypeVar, Union

from .syntax import App, Lam, Term, Var, choose_binder, free_variables, instantiate, spine

A = TypeVar("A")

NORMAL = "normal"
HEAD = "head"
STRATEGIES = (NORMAL, HEAD)


class Verdict(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ReductionOutcome(Generic[A]):
    """Result of a bounded reduction run.

    ``finished`` means no redex remains for the strategy; otherwise fuel ran
    out and ``term`` is the last reduct reached.
    """

    term: A
    steps: int
    finished: bool

    @property
    def status(self) -> str:
        return "Finished" if self.finished else "Exhausted"


# ----------------------------------------------------------------------------
# One-step reduction


def step_normal(t: Term) -> Term | None:
    """Contract the leftmost-outermost redex, or return None if ``t`` is normal."""
    match t:
        case App(Lam(body), arg):
            return instantiate(body, arg)
        case App(f, a):
            r = step_normal(f)
            if r is not None:
                return App(r, a)
            r = step_normal(a)
            if r is not None:
                return App(f, r)
            return None
        case Lam(body, hint):
            r = step_normal(body)
            return None if r is None else Lam(r, hint)
    return None


def step_head(t: Term) -> Term | None:
    """Contract the head redex, or return None if ``t`` is a head normal form."""
    match t:
        case Lam(body, hint):
            r = step_head(body)
            return None if r is None else Lam(r, hint)
        case App(Lam(body), arg):
            return instantiate(body, arg)
        case App(f, a):
            r = step_head(f)
            return None if r is None else App(r, a)
    return None


_STEPPERS = {NORMAL: step_normal, HEAD: step_head}


def normalize(t: Term, strategy: str = NORMAL, fuel: int = 10_000) -> ReductionOutcome[Term]:
    """Reduce ``t`` with at most ``fuel`` beta steps."""
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    step = _STEPPERS[strategy]
    steps = 0
    while True:
        nxt = step(t)
        if nxt is None:
            return ReductionOutcome(t, steps, True)
        if steps == fuel:
            return ReductionOutcome(t, steps, False)
        t = nxt
        steps += 1


def one_step_reducts(t: Term) -> Iterator[Term]:
    """Every term obtained by contracting exactly one redex of ``t``."""
    match t:
        case App(f, a):
            if isinstance(f, Lam):
                yield instantiate(f.body, a)
            for r in one_step_reducts(f):
                yield App(r, a)
            for r in one_step_reducts(a):
                yield App(f, r)
        case Lam(body, hint):
            for r in one_step_reducts(body):
                yield Lam(r, hint)


def is_beta_normal(t: Term) -> bool:
    return step_normal(t) is None


def is_hnf(t: Term) -> bool:
    return step_head(t) is None


# ----------------------------------------------------------------------------
# Solvability and Boehm approximants


def is_solvable(t: Term, fuel: int = 10_000) -> Term | None:
    """The head normal form of ``t`` if head reduction reaches one within
    ``fuel`` steps, else None. None never means "unsolvable"."""
    outcome = normalize(t, HEAD, fuel)
    return outcome.term if outcome.finished else None


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return "⊥"


@dataclass(frozen=True)
class Node:
    binders: tuple[str, ...]
    head: str
    children: tuple[BohmApprox, ...]

    def __str__(self) -> str:
        prefix = "\\" + " ".join(self.binders) + "." if self.binders else ""
        if not self.children:
            return prefix + self.head
        kids = " ".join(
            str(c) if isinstance(c, Bottom) or (not c.binders and not c.children) else f"({c})"
            for c in self.children
        )
        return f"{prefix}{self.head} {kids}"


BohmApprox = Union[Bottom, Node]
BOTTOM = Bottom()


def bohm_approximant(t: Term, depth: int, fuel: int = 10_000) -> BohmApprox:
    """Depth-truncated Boehm tree of ``t``; each node gets its own head-reduction fuel."""
    return _bohm(t, depth, fuel, frozenset())


def _bohm(t: Term, depth: int, fuel: int, used: frozenset[str]) -> BohmApprox:
    if depth <= 0:
        return BOTTOM
    outcome = normalize(t, HEAD, fuel)
    if not outcome.finished:
        return BOTTOM
    t = outcome.term
    used = used | free_variables(t)
    binders = []
    while isinstance(t, Lam):
        name, t = choose_binder(t, used)
        binders.append(name)
        used = used | {name}
    head, args = spine(t)
    assert isinstance(head, Var), head
    children = tuple(_bohm(a, depth - 1, fuel, used) for a in args)
    return Node(tuple(binders), head.name, children)


def refines(a: BohmApprox, b: BohmApprox) -> bool:
    """``a <= b`` in the approximation order where Bottom is least."""
    if isinstance(a, Bottom):
        return True
    if isinstance(b, Bottom):
        return False
    return (
        a.binders == b.binders
        and a.head == b.head
        and len(a.children) == len(b.children)
        and all(refines(x, y) for x, y in zip(a.children, b.children))
    )


# ----------------------------------------------------------------------------
# Bounded conversion


def convertible(m: Term, n: Term, fuel: int = 10_000, breadth: int = 2_000) -> Verdict:
    """Sound but incomplete beta-conversion test: YES or UNKNOWN.

    First normal-order normalization of both sides; failing that, a
    breadth-first search for a common reduct visiting at most ``breadth``
    terms per side.
    """
    left = normalize(m, NORMAL, fuel)
    right = normalize(n, NORMAL, fuel)
    if left.finished and right.finished:
        return Verdict.YES if left.term == right.term else Verdict.UNKNOWN
    if _common_reduct(m, n, breadth):
        return Verdict.YES
    return Verdict.UNKNOWN


def _common_reduct(m: Term, n: Term, breadth: int) -> bool:
    seen = ({m}, {n})
    queues = (deque([m]), deque([n]))
    if m == n:
        return True
    while any(queues):
        for side in (0, 1):
            queue, mine, other = queues[side], seen[side], seen[1 - side]
            if not queue:
                continue
            t = queue.popleft()
            for r in one_step_reducts(t):
                if r in other:
                    return True
                if r not in mine and len(mine) < breadth:
                    mine.add(r)
                    queue.append(r)
    return False

