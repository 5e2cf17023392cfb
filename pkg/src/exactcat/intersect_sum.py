"""Intersections and sums of admissible subobjects, and the AI/AS/AIS checks.

The intersection of two subobjects is the pullback of their inflations; the
sum is the pushout over that intersection, together with the mediating map
``u`` back into the parent. Both are always computed (the ambient category
is abelian); whether the resulting legs are admissible is reported in the
``ai_ok`` / ``as_ok`` flags rather than assumed.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

from .axioms import check_corpus
from .budget import current_budget
from .exactstruct import ExactStructure, is_admissible_monic
from .quiverrep import (
    Pullback,
    Pushout,
    RepMorphism,
    Representation,
    canonical_image,
    cokernel,
    hom_column,
    hom_row,
    image_factorization,
    kernel,
    pullback,
    pullback_universal,
    pushout,
    pushout_universal,
)
from .report import AxiomReport, morphism_to_dict
from .simples_schur import AdmissibleSubobject, enumerate_admissible_subobjects

__all__ = [
    "Intersection",
    "Sum",
    "Embedded",
    "Monotone",
    "intersection",
    "sum_subobjects",
    "abelian_intersection",
    "abelian_sum",
    "check_AI",
    "check_AS",
    "check_AIS",
    "intersection_monotone",
    "sum_monotone",
    "intersection_over_sum_check",
]


class Intersection(NamedTuple):
    object: Representation
    s1: RepMorphism  # to the first subobject
    s2: RepMorphism  # to the second subobject
    ai_ok: bool
    inclusion: RepMorphism  # into the parent, i1∘s1
    pullback: Pullback


class Sum(NamedTuple):
    object: Representation
    j1: RepMorphism
    j2: RepMorphism
    u: RepMorphism  # into the parent
    as_ok: bool
    intersection: Intersection
    pushout: Pushout


class Embedded(NamedTuple):
    object: Representation
    inclusion: RepMorphism


class Monotone(NamedTuple):
    map: RepMorphism
    admissible: bool


def _check_pair(x1: AdmissibleSubobject, x2: AdmissibleSubobject) -> None:
    if x1.parent != x2.parent:
        raise ValueError("subobjects have different parents")


def intersection(x1: AdmissibleSubobject, x2: AdmissibleSubobject, structure: ExactStructure) -> Intersection:
    _check_pair(x1, x2)
    pb = pullback(x1.inflation, x2.inflation)
    ok = is_admissible_monic(pb.s1, structure) and is_admissible_monic(pb.s2, structure)
    return Intersection(pb.object, pb.s1, pb.s2, ok, x1.inflation @ pb.s1, pb)


def sum_subobjects(x1: AdmissibleSubobject, x2: AdmissibleSubobject, structure: ExactStructure) -> Sum:
    inter = intersection(x1, x2, structure)
    po = pushout(inter.s1, inter.s2)
    u = pushout_universal(po, x1.inflation, x2.inflation)
    return Sum(po.object, po.j1, po.j2, u, is_admissible_monic(u, structure), inter, po)


def abelian_intersection(x1: AdmissibleSubobject, x2: AdmissibleSubobject) -> Embedded:
    """Ker[d1; d2] for the cokernels d1, d2 of the two inflations."""
    _check_pair(x1, x2)
    _, d1 = cokernel(x1.inflation)
    _, d2 = cokernel(x2.inflation)
    obj, k = kernel(hom_column([d1, d2]))
    return Embedded(obj, k)


def abelian_sum(x1: AdmissibleSubobject, x2: AdmissibleSubobject) -> Embedded:
    """Im[i1 i2]."""
    _check_pair(x1, x2)
    _, m = image_factorization(hom_row([x1.inflation, x2.inflation]))
    return Embedded(m.source, m)


# -- AI / AS / AIS ------------------------------------------------------------------


def _pairs(lattice_elements: Sequence[AdmissibleSubobject]):
    n = len(lattice_elements)
    for a in range(n):
        for b in range(a, n):
            yield lattice_elements[a], lattice_elements[b]


def _classify(structure: ExactStructure, corpus: Sequence[Representation], which: Sequence[str]) -> AxiomReport:
    check_corpus(structure, corpus)
    b = current_budget()
    report = AxiomReport(structure.name, bounds={"corpus_size": len(corpus), "enumeration_cutoff": b.enumeration_cutoff})
    ai = report.add("AI", "pullback legs of two admissible monics are admissible monics") if "AI" in which else None
    as_ = report.add("AS", "the map from the pushout over the intersection is an admissible monic") if "AS" in which else None
    for x in corpus:
        lattice = enumerate_admissible_subobjects(x, structure)
        for x1, x2 in _pairs(lattice.elements):
            witness = {"x1": morphism_to_dict(x1.inflation), "x2": morphism_to_dict(x2.inflation)}
            if as_ is not None:
                s = sum_subobjects(x1, x2, structure)
                as_.record(s.as_ok, witness)
                if ai is not None:
                    ai.record(s.intersection.ai_ok, witness)
            elif ai is not None:
                ai.record(intersection(x1, x2, structure).ai_ok, witness)
    if ai is not None and as_ is not None:
        ais = report.add("AIS", "AI and AS together")
        ais.checked = ai.checked
        ais.failures = max(ai.failures, as_.failures)
        ais.passed = ai.passed and as_.passed
    return report


def check_AI(structure: ExactStructure, corpus: Sequence[Representation]) -> AxiomReport:
    return _classify(structure, corpus, ("AI",))


def check_AS(structure: ExactStructure, corpus: Sequence[Representation]) -> AxiomReport:
    return _classify(structure, corpus, ("AS",))


def check_AIS(structure: ExactStructure, corpus: Sequence[Representation]) -> AxiomReport:
    return _classify(structure, corpus, ("AI", "AS"))


# -- monotonicity ---------------------------------------------------------------------


def _check_chain(y: AdmissibleSubobject, yp: AdmissibleSubobject, inc: RepMorphism) -> None:
    if y.parent != yp.parent:
        raise ValueError("y and yp have different parents")
    if yp.inflation @ inc != y.inflation:
        raise ValueError("inclusion is not compatible with the two inflations")


def intersection_monotone(
    x: AdmissibleSubobject,
    y: AdmissibleSubobject,
    yp: AdmissibleSubobject,
    inc: RepMorphism,
    structure: ExactStructure,
) -> Monotone:
    """The induced map X∩Y -> X∩Y' for an inclusion Y -> Y'."""
    _check_chain(y, yp, inc)
    small = intersection(x, y, structure)
    big = intersection(x, yp, structure)
    r = pullback_universal(big.pullback, small.s1, inc @ small.s2)
    return Monotone(r, is_admissible_monic(r, structure))


def sum_monotone(
    x: AdmissibleSubobject,
    y: AdmissibleSubobject,
    yp: AdmissibleSubobject,
    inc: RepMorphism,
    structure: ExactStructure,
) -> Monotone:
    """The induced map Y+X -> Y'+X for an inclusion Y -> Y'."""
    _check_chain(y, yp, inc)
    small = sum_subobjects(y, x, structure)
    big = sum_subobjects(yp, x, structure)
    r = pushout_universal(small.pushout, big.j1 @ inc, big.j2)
    return Monotone(r, is_admissible_monic(r, structure))


def intersection_over_sum_check(x1: AdmissibleSubobject, x2: AdmissibleSubobject, structure: ExactStructure) -> bool:
    """Whether X1 ∩_X X2 and X1 ∩_(X1+X2) X2 are the same subobject.

    Compared by canonical image both inside X and inside X1.
    """
    s = sum_subobjects(x1, x2, structure)
    direct = s.intersection
    relative = pullback(s.j1, s.j2)
    in_x = canonical_image(x1.inflation @ direct.s1) == canonical_image(s.u @ s.j1 @ relative.s1)
    in_x1 = canonical_image(direct.s1) == canonical_image(relative.s1)
    return in_x and in_x1
