"""Exhaustive Quillen axiom checks over a finite corpus of objects.

Admissible monics are discovered as inflations of the enumerated admissible
subobjects of each corpus object, admissible epics as the matching quotient
maps. The axioms are then tested on every discovered instance.
"""
from __future__ import annotations

from typing import Sequence

from .budget import current_budget
from .exactstruct import (
    ExactStructure,
    is_admissible_epic,
    is_admissible_monic,
    obscure_axiom_holds,
)
from .quiverrep import Representation, RepMorphism, hom_basis, iter_hom, pullback, pushout
from .report import AxiomReport, morphism_to_dict
from .simples_schur import enumerate_admissible_subobjects, quotient

__all__ = ["check_axioms", "obscure_axiom_sweep", "check_corpus"]


def check_corpus(structure: ExactStructure, corpus: Sequence[Representation]) -> None:
    if not corpus:
        raise ValueError("corpus must not be empty")
    for x in corpus:
        if x.quiver != structure.quiver or x.field != structure.field:
            raise ValueError(f"corpus object {x.dims} is not in the ambient category of {structure.name!r}")


def _bounds(corpus: Sequence[Representation]) -> dict:
    b = current_budget()
    return {
        "corpus_size": len(corpus),
        "max_corpus_total_dim": max((x.total_dim for x in corpus), default=0),
        "enumeration_cutoff": b.enumeration_cutoff,
        "hom_search_cutoff": b.hom_search_cutoff,
    }


def check_axioms(structure: ExactStructure, corpus: Sequence[Representation]) -> AxiomReport:
    """Test A0, A0^op, A1, A1^op, A2, A2^op on everything discoverable from ``corpus``.

    Also asserts that a discovered morphism which is both an admissible monic
    and an admissible epic is an isomorphism.
    """
    check_corpus(structure, corpus)
    E = structure
    report = AxiomReport(E.name, bounds=_bounds(corpus))
    a0 = report.add("A0", "identities are admissible monics")
    a0op = report.add("A0^op", "identities are admissible epics")
    a1 = report.add("A1", "admissible monics compose")
    a1op = report.add("A1^op", "admissible epics compose")
    a2 = report.add("A2", "pushout of an admissible monic along a hom-basis morphism is an admissible monic")
    a2op = report.add("A2^op", "pullback of an admissible epic along a hom-basis morphism is an admissible epic")
    mono_epi = report.add("monic-and-epic-is-iso", "admissible monic and epic implies isomorphism")

    for x in corpus:
        ident = RepMorphism.identity(x)
        a0.record(is_admissible_monic(ident, E), {"object": morphism_to_dict(ident)})
        a0op.record(is_admissible_epic(ident, E), {"object": morphism_to_dict(ident)})

    for x in corpus:
        lattice = enumerate_admissible_subobjects(x, E)
        for sub in lattice.elements:
            j = sub.inflation
            if is_admissible_epic(j, E):
                mono_epi.record(j.is_iso(), {"morphism": morphism_to_dict(j)})
            # A1: sub-subobjects composed into x
            for inner in enumerate_admissible_subobjects(sub.object, E).elements:
                i = inner.inflation
                a1.record(is_admissible_monic(j @ i, E), {"i": morphism_to_dict(i), "j": morphism_to_dict(j)})
            # A1^op: quotient maps composed
            qx, d1 = quotient(x, sub)
            for inner in enumerate_admissible_subobjects(qx, E).elements:
                _, d2 = quotient(qx, inner)
                a1op.record(is_admissible_epic(d2 @ d1, E), {"d1": morphism_to_dict(d1), "d2": morphism_to_dict(d2)})
            for c in corpus:
                # A2: push out j along every hom-basis morphism out of the subobject
                for f in hom_basis(sub.object, c):
                    po = pushout(j, f)
                    a2.record(is_admissible_monic(po.j2, E), {"i": morphism_to_dict(j), "f": morphism_to_dict(f)})
                # A2^op: pull back d1 along every hom-basis morphism into the quotient
                for g in hom_basis(c, qx):
                    pb = pullback(d1, g)
                    a2op.record(is_admissible_epic(pb.s2, E), {"d": morphism_to_dict(d1), "g": morphism_to_dict(g)})
    return report


def obscure_axiom_sweep(structure: ExactStructure, corpus: Sequence[Representation]) -> AxiomReport:
    """Check ``j∘i admissible monic => i admissible monic`` on all i: A -> B, j: B -> C in the corpus."""
    check_corpus(structure, corpus)
    report = AxiomReport(structure.name, bounds=_bounds(corpus))
    res = report.add("obscure-axiom", "i is an admissible monic whenever j∘i is")
    for a in corpus:
        for b in corpus:
            for i in iter_hom(a, b):
                if not i.is_injective():
                    continue
                for c in corpus:
                    for j in iter_hom(b, c):
                        res.record(
                            obscure_axiom_holds(i, j, structure),
                            {"i": morphism_to_dict(i), "j": morphism_to_dict(j)},
                        )
    return report
