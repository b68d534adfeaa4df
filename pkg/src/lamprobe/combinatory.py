"""Combinatory logic over K and S, and the central elements of the lambda term model."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from . import syntax
from .reduce import NORMAL, ReductionOutcome, normalize
from .syntax import App, Idx, Lam, NonClosedTerm, Term, Var, app, free_variables


class _Const(enum.Enum):
    K = "K"
    S = "S"

    def __repr__(self) -> str:
        return self.value


CK = _Const.K
CS = _Const.S


@dataclass(frozen=True)
class CVar:
    name: str


@dataclass(frozen=True)
class CApp:
    left: CLTerm
    right: CLTerm


CLTerm = Union[_Const, CVar, CApp]


def capp(*terms: CLTerm) -> CLTerm:
    head, *rest = terms
    for t in rest:
        head = CApp(head, t)
    return head


def show_cl(t: CLTerm) -> str:
    match t:
        case _Const():
            return t.value
        case CVar(name):
            return name
        case CApp(left, right):
            rhs = show_cl(right)
            if isinstance(right, CApp):
                rhs = f"({rhs})"
            return f"{show_cl(left)} {rhs}"
    raise TypeError(t)


# ----------------------------------------------------------------------------
# Translations


def _occurs(name: str, t: CLTerm) -> bool:
    match t:
        case CVar(n):
            return n == name
        case CApp(left, right):
            return _occurs(name, left) or _occurs(name, right)
    return False


def _bracket(name: str, t: CLTerm) -> CLTerm:
    """Textbook abstraction [x]t using rules I=SKK, K and S (no eta rule)."""
    if t == CVar(name):
        return capp(CS, CK, CK)
    if not _occurs(name, t):
        return CApp(CK, t)
    assert isinstance(t, CApp)
    return capp(CS, _bracket(name, t.left), _bracket(name, t.right))


def lambda_to_cl(t: Term) -> CLTerm:
    return _to_cl(t, ())


def _to_cl(t: Term, names: tuple[str, ...]) -> CLTerm:
    match t:
        case Var(n):
            return CVar(n)
        case Idx(k):
            return CVar(names[k])
        case App(f, a):
            return CApp(_to_cl(f, names), _to_cl(a, names))
        case Lam(body):
            # binder placeholders cannot collide with parsed identifiers
            name = f"#{len(names)}"
            return _bracket(name, _to_cl(body, (name,) + names))
    raise TypeError(t)


def cl_to_lambda(t: CLTerm) -> Term:
    match t:
        case _Const():
            return syntax.K if t is CK else syntax.S
        case CVar(n):
            return Var(n)
        case CApp(left, right):
            return App(cl_to_lambda(left), cl_to_lambda(right))
    raise TypeError(t)


# ----------------------------------------------------------------------------
# Weak reduction


def cl_step(t: CLTerm) -> CLTerm | None:
    """One leftmost-outermost weak step, or None for a weak normal form."""
    if not isinstance(t, CApp):
        return None
    left, right = t.left, t.right
    if isinstance(left, CApp):
        if left.left is CK:
            return left.right
        if isinstance(left.left, CApp) and left.left.left is CS:
            x, y, z = left.left.right, left.right, right
            return CApp(CApp(x, z), CApp(y, z))
    r = cl_step(left)
    if r is not None:
        return CApp(r, right)
    r = cl_step(right)
    if r is not None:
        return CApp(left, r)
    return None


def cl_reduce(t: CLTerm, fuel: int = 10_000) -> ReductionOutcome[CLTerm]:
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    steps = 0
    while True:
        nxt = cl_step(t)
        if nxt is None:
            return ReductionOutcome(t, steps, True)
        if steps == fuel:
            return ReductionOutcome(t, steps, False)
        t = nxt
        steps += 1


# ----------------------------------------------------------------------------
# Central elements


class AxiomStatus(enum.Enum):
    HOLDS = "Holds"
    UNKNOWN = "Unknown"
    FAILS = "Fails"


class CentralVerdict(enum.Enum):
    CENTRAL = "Central"
    NOT_CENTRAL = "NotCentral"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class AxiomResult:
    status: AxiomStatus
    witness: tuple[Term, Term] | None = None


@dataclass(frozen=True)
class CentralityReport:
    axiom_i: AxiomResult
    axiom_ii: AxiomResult
    axiom_iii: AxiomResult
    axiom_iv: AxiomResult

    @property
    def axioms(self) -> dict[str, AxiomResult]:
        return {
            "i": self.axiom_i,
            "ii": self.axiom_ii,
            "iii": self.axiom_iii,
            "iv": self.axiom_iv,
        }

    @property
    def verdict(self) -> CentralVerdict:
        statuses = [a.status for a in self.axioms.values()]
        if all(s is AxiomStatus.HOLDS for s in statuses):
            return CentralVerdict.CENTRAL
        if AxiomStatus.FAILS in statuses:
            return CentralVerdict.NOT_CENTRAL
        return CentralVerdict.INCONCLUSIVE


# Identifiers starting with "_" are rejected by the parser, so user terms never mention them.
_X, _Y, _Z, _T = (Var(n) for n in ("_x", "_y", "_z", "_t"))


def check_equation(lhs: Term, rhs: Term, fuel: int) -> AxiomResult:
    left = normalize(lhs, NORMAL, fuel)
    right = normalize(rhs, NORMAL, fuel)
    if not (left.finished and right.finished):
        return AxiomResult(AxiomStatus.UNKNOWN)
    if left.term == right.term:
        return AxiomResult(AxiomStatus.HOLDS)
    return AxiomResult(AxiomStatus.FAILS, (left.term, right.term))


def _joint(*results: AxiomResult) -> AxiomResult:
    for r in results:
        if r.status is AxiomStatus.FAILS:
            return r
    for r in results:
        if r.status is AxiomStatus.UNKNOWN:
            return r
    return results[0]


def is_central(e: Term, fuel: int = 1_000) -> CentralityReport:
    """Check the four centrality equations for ``e`` in the lambda-beta term model.

    Each side is normalized with ``fuel`` beta steps; distinct normal forms
    are a genuine failure by confluence.
    """
    if free_variables(e):
        raise NonClosedTerm(f"free variables {sorted(free_variables(e))}")
    x, y, z, t = _X, _Y, _Z, _T
    exz = app(e, x, z)
    return CentralityReport(
        axiom_i=check_equation(app(e, x, x), x, fuel),
        axiom_ii=_joint(
            check_equation(app(e, app(e, x, y), z), exz, fuel),
            check_equation(exz, app(e, x, app(e, y, z)), fuel),
        ),
        axiom_iii=check_equation(
            app(e, App(x, y), App(z, t)), app(e, x, z, app(e, y, t)), fuel
        ),
        axiom_iv=check_equation(e, app(e, syntax.T, syntax.F), fuel),
    )


def bool_or(e: Term, d: Term) -> Term:
    return app(e, d, syntax.F)


def bool_and(e: Term, d: Term) -> Term:
    return app(e, syntax.T, d)


def bool_not(e: Term) -> Term:
    return app(e, syntax.F, syntax.T)

