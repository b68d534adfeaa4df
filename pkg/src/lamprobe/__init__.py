"""Desk-scale probes of the untyped lambda calculus and two of its models."""

from .reduce import Verdict, bohm_approximant, convertible, is_solvable, normalize
from .syntax import alpha_eq, parse, show, substitute

__all__ = [
    "Verdict",
    "alpha_eq",
    "bohm_approximant",
    "convertible",
    "is_solvable",
    "normalize",
    "parse",
    "show",
    "substitute",
]
