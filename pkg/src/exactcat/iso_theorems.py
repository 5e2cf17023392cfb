"""The admissible short exact sequences built from intersections and sums.

* ``second_iso_sequence``:   Y∩X -> Y -> (Y+X)/X
* ``third_iso_sequence``:    (Y'+X)/X -> (Y''+X)/X -> (Y''+X)/(Y'+X)
* ``three_by_three_sequence``: the bottom row (Y''∩X)/(Y'∩X) -> Y''/Y' -> (Y''+X)/(Y'+X)
  of the 3x3 grid whose top rows are second-isomorphism sequences.

Every induced morphism is obtained from a universal property (by solving),
so the commutation checks are exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .exactstruct import ExactStructure
from .intersect_sum import Sum, sum_subobjects
from .quiverrep import (
    RepMorphism,
    ShortExactSequence,
    cokernel,
    factor_through_epi,
    is_isomorphic,
    pullback_universal,
    pushout_universal,
)
from .simples_schur import AdmissibleSubobject

__all__ = [
    "VerifiedSequence",
    "GridInconsistency",
    "second_iso_sequence",
    "third_iso_sequence",
    "three_by_three_sequence",
    "second_iso_map",
]

TAGS = ("c3", "second_iso", "three_by_three")


class GridInconsistency(RuntimeError):
    """A square that must commute by construction does not."""


@dataclass(frozen=True, eq=False)
class VerifiedSequence:
    sequence: ShortExactSequence
    membership: bool
    construction_tag: str
    details: dict[str, Any] = field(default_factory=dict)


def _quotient_by_x(s: Sum) -> RepMorphism:
    """Projection (Y+X) -> (Y+X)/X, the cokernel of the X-leg of the sum."""
    _, q = cokernel(s.j2)
    return q


def _check_chain(y1: AdmissibleSubobject, y2: AdmissibleSubobject, inc: RepMorphism) -> None:
    if y1.parent != y2.parent:
        raise ValueError("y1 and y2 have different parents")
    if y2.inflation @ inc != y1.inflation:
        raise ValueError("inclusion does not commute with the inflations of y1 and y2")


def second_iso_sequence(x: AdmissibleSubobject, y: AdmissibleSubobject, structure: ExactStructure) -> VerifiedSequence:
    s = sum_subobjects(y, x, structure)
    q = _quotient_by_x(s)
    seq = ShortExactSequence(s.intersection.s1, q @ s.j1)
    return VerifiedSequence(seq, structure.contains(seq), "second_iso", {"sum": s, "quotient": q})


def second_iso_map(x: AdmissibleSubobject, y: AdmissibleSubobject, structure: ExactStructure) -> RepMorphism:
    """The induced map Y/(Y∩X) -> (Y+X)/X; an isomorphism in an abelian category."""
    vs = second_iso_sequence(x, y, structure)
    _, c = cokernel(vs.sequence.i)
    phi = factor_through_epi(c, vs.sequence.d)
    if phi is None:
        raise GridInconsistency("deflation does not vanish on the intersection")
    return phi


def _sum_map(small: Sum, big: Sum, inc: RepMorphism) -> RepMorphism:
    """Y'+X -> Y''+X from the pushout property of the smaller sum."""
    return pushout_universal(small.pushout, big.j1 @ inc, big.j2)


def third_iso_sequence(
    x: AdmissibleSubobject,
    y1: AdmissibleSubobject,
    y2: AdmissibleSubobject,
    inc: RepMorphism,
    structure: ExactStructure,
) -> VerifiedSequence:
    _check_chain(y1, y2, inc)
    s1 = sum_subobjects(y1, x, structure)
    s2 = sum_subobjects(y2, x, structure)
    r = _sum_map(s1, s2, inc)
    q1, q2 = _quotient_by_x(s1), _quotient_by_x(s2)
    c = factor_through_epi(q1, q2 @ r)
    if c is None:
        raise GridInconsistency("induced map on quotients by X does not exist")
    _, qc = cokernel(c)
    seq = ShortExactSequence(c, qc)
    direct, _ = cokernel(r)
    details = {
        "sums": (s1, s2),
        "sum_map": r,
        "matches_direct_quotient": is_isomorphic(seq.right, direct) is not None,
    }
    return VerifiedSequence(seq, structure.contains(seq), "c3", details)


def three_by_three_sequence(
    x: AdmissibleSubobject,
    y1: AdmissibleSubobject,
    y2: AdmissibleSubobject,
    inc: RepMorphism,
    structure: ExactStructure,
) -> VerifiedSequence:
    _check_chain(y1, y2, inc)
    row1 = second_iso_sequence(x, y1, structure)
    row2 = second_iso_sequence(x, y2, structure)
    sum1, sum2 = row1.details["sum"], row2.details["sum"]
    q1, q2 = row1.details["quotient"], row2.details["quotient"]

    inter1, inter2 = sum1.intersection, sum2.intersection
    left = pullback_universal(inter2.pullback, inc @ inter1.s1, inter1.s2)
    right = factor_through_epi(q1, q2 @ _sum_map(sum1, sum2, inc))
    if right is None:
        raise GridInconsistency("induced map on quotients by X does not exist")

    columns = []
    for m in (left, inc, right):
        _, q = cokernel(m)
        columns.append(ShortExactSequence(m, q))
    col1, col2, col3 = columns

    alpha = factor_through_epi(col1.d, col2.d @ row2.sequence.i)
    beta = factor_through_epi(col2.d, col3.d @ row2.sequence.d)
    if alpha is None or beta is None:
        raise GridInconsistency("bottom row maps are not induced on cokernels")
    third = ShortExactSequence(alpha, beta)

    squares = {
        "top-left": row2.sequence.i @ left == inc @ row1.sequence.i,
        "top-right": row2.sequence.d @ inc == right @ row1.sequence.d,
        "bottom-left": alpha @ col1.d == col2.d @ row2.sequence.i,
        "bottom-right": beta @ col2.d == col3.d @ row2.sequence.d,
    }
    if not all(squares.values()):
        bad = [k for k, ok in squares.items() if not ok]
        raise GridInconsistency(f"3x3 grid squares fail to commute: {bad}")
    details = {
        "rows": (row1.sequence, row2.sequence, third),
        "columns": (col1, col2, col3),
        "squares": squares,
        "rows_admissible": (row1.membership, row2.membership),
        "columns_admissible": tuple(structure.contains(c) for c in columns),
    }
    return VerifiedSequence(third, structure.contains(third), "three_by_three", details)
