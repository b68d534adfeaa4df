"""Result shape shared by the graph-model and relational comparisons."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Generic, Sequence, TypeVar

E = TypeVar("E")

EQUAL = "EqualUpTo"
LEFT_EXTRA = "LeftExtra"
RIGHT_EXTRA = "RightExtra"
INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class Comparison(Generic[E]):
    """Set comparison of two truncated interpretations.

    ``left_only`` holds witnesses in the left interpretation but not the
    right one, ``right_only`` the converse; both are sorted.
    """

    kind: str
    bound: int
    left_only: tuple[E, ...] = ()
    right_only: tuple[E, ...] = ()


def compare_sets(left: Sequence[E], right: Sequence[E], bound: int) -> Comparison[E]:
    lset, rset = set(left), set(right)
    left_only = tuple(sorted(lset - rset))
    right_only = tuple(sorted(rset - lset))
    if left_only and right_only:
        kind = INCOMPARABLE
    elif left_only:
        kind = LEFT_EXTRA
    elif right_only:
        kind = RIGHT_EXTRA
    else:
        kind = EQUAL
    return Comparison(kind, bound, left_only, right_only)
