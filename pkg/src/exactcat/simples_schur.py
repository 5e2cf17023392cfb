"""Admissible subobjects, E-simple objects and the E-Schur lemma."""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import NamedTuple

from .budget import BudgetExceeded, current_budget
from .exactstruct import (
    AdmissibleFactorization,
    ExactStructure,
    admissible_factorization,
    is_admissible_epic,
    is_admissible_monic,
)
from .linalg import Matrix, PrimeField, subspace_contains
from .quiverrep import (
    RepMorphism,
    Representation,
    all_subspaces,
    canonical_image,
    cokernel,
    factor_through_mono,
    iter_hom,
    subrepresentation,
)

__all__ = [
    "AdmissibleSubobject",
    "NotAdmissible",
    "SubobjectLattice",
    "SchurVerdict",
    "SchurViolation",
    "enumerate_admissible_subobjects",
    "is_E_simple",
    "quotient",
    "is_proper",
    "schur",
    "automorphism_group",
    "aut_group_check",
]


class NotAdmissible(ValueError):
    """The proposed inflation is not an admissible monic for the structure."""


class SchurViolation(RuntimeError):
    """A conclusion of the E-Schur lemma failed on a concrete morphism."""


@dataclass(frozen=True, eq=False)
class AdmissibleSubobject:
    """An admissible monic into a fixed parent, identified by its canonical image."""

    object: Representation
    inflation: RepMorphism
    structure: ExactStructure

    def __post_init__(self) -> None:
        if self.inflation.source != self.object:
            raise ValueError("inflation must start at the subobject")
        if not is_admissible_monic(self.inflation, self.structure):
            raise NotAdmissible(f"{self.object.dims} -> {self.parent.dims} is not an admissible monic in {self.structure.name!r}")

    @classmethod
    def of(cls, inflation: RepMorphism, structure: ExactStructure) -> AdmissibleSubobject:
        return cls(inflation.source, inflation, structure)

    @classmethod
    def whole(cls, x: Representation, structure: ExactStructure) -> AdmissibleSubobject:
        return cls.of(RepMorphism.identity(x), structure)

    @classmethod
    def zero(cls, x: Representation, structure: ExactStructure) -> AdmissibleSubobject:
        return cls.of(RepMorphism.zero(Representation.zero(x.quiver, x.field), x), structure)

    @property
    def parent(self) -> Representation:
        return self.inflation.target

    @functools.cached_property
    def key(self) -> tuple[Matrix, ...]:
        return canonical_image(self.inflation)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.object.dims

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AdmissibleSubobject):
            return NotImplemented
        return self.parent == other.parent and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def contains(self, other: AdmissibleSubobject) -> bool:
        """Whether ``other`` ⊆ ``self`` as subobjects of the common parent."""
        if other.parent != self.parent:
            raise ValueError("subobjects of different parents")
        return all(subspace_contains(a, b) for a, b in zip(self.key, other.key))

    def inclusion_of(self, other: AdmissibleSubobject) -> RepMorphism:
        """The monic ``other.object -> self.object`` compatible with both inflations."""
        m = factor_through_mono(self.inflation, other.inflation)
        if m is None:
            raise ValueError("subobject is not contained in this one")
        return m

    def canonical(self) -> AdmissibleSubobject:
        """The same subobject presented on its canonical image basis."""
        _, m = subrepresentation(self.parent, self.key)
        return AdmissibleSubobject.of(m, self.structure)

    def __repr__(self) -> str:
        return f"AdmissibleSubobject({self.dims} in {self.parent.dims}, key={[k.tolist() for k in self.key]})"


def quotient(x: Representation, sub: AdmissibleSubobject) -> tuple[Representation, RepMorphism]:
    """``x / sub`` with its projection; (inflation, projection) is a short exact sequence."""
    if sub.parent != x:
        raise ValueError("subobject does not live in x")
    return cokernel(sub.inflation)


def is_proper(sub: AdmissibleSubobject) -> bool:
    """True iff the cokernel of the inflation is non-zero."""
    c, _ = cokernel(sub.inflation)
    return not c.is_zero()


@dataclass(frozen=True, eq=False)
class SubobjectLattice:
    parent: Representation
    structure: ExactStructure
    elements: tuple[AdmissibleSubobject, ...]
    order: frozenset[tuple[int, int]]  # (i, j) means elements[i] ⊆ elements[j]

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, sub: AdmissibleSubobject) -> int:
        return self.elements.index(sub)

    def leq(self, i: int, j: int) -> bool:
        return (i, j) in self.order

    @property
    def bottom(self) -> AdmissibleSubobject:
        return self.elements[0]

    @property
    def top(self) -> AdmissibleSubobject:
        return self.elements[-1]

    def below(self, j: int) -> list[int]:
        return [i for i in range(len(self.elements)) if (i, j) in self.order]

    def maximal_proper(self) -> list[int]:
        top = len(self.elements) - 1
        proper = [i for i in range(top) if self.elements[i] != self.top]
        return [i for i in proper if not any((i, j) in self.order and i != j for j in proper)]


@functools.lru_cache(maxsize=None)
def _subspaces(field: PrimeField, n: int) -> tuple[Matrix, ...]:
    return tuple(all_subspaces(field, n))


def _check_enumeration_budget(x: Representation) -> None:
    cost = 1
    for d in x.dims:
        cost *= x.field.p ** (d * d)
    cutoff = current_budget().enumeration_cutoff
    if cost > cutoff:
        raise BudgetExceeded(f"subobject enumeration for dims {x.dims} over {x.field} costs {cost} > cutoff {cutoff}")


def _closed_tuples(x: Representation) -> list[tuple[Matrix, ...]]:
    """All arrow-closed tuples of vertex subspaces, by backtracking over vertices."""
    q = x.quiver
    n = q.vertex_count
    options = [_subspaces(x.field, d) for d in x.dims]
    arrows_at = [[] for _ in range(n)]
    for a, (s, t) in enumerate(q.arrows):
        arrows_at[max(s, t)].append((a, s, t))
    out: list[tuple[Matrix, ...]] = []
    chosen: list[Matrix] = []

    def extend(v: int) -> None:
        if v == n:
            out.append(tuple(chosen))
            return
        for u in options[v]:
            chosen.append(u)
            if all(subspace_contains(chosen[t], x.arrow_maps[a] @ chosen[s]) for a, s, t in arrows_at[v]):
                extend(v + 1)
            chosen.pop()

    extend(0)
    return out


def enumerate_admissible_subobjects(x: Representation, structure: ExactStructure) -> SubobjectLattice:
    """All admissible subobjects of x, deduplicated by canonical image.

    Ordered by total dimension, then dimension vector, then the canonical
    bases; the containment order is computed vertexwise.
    """
    _check_enumeration_budget(x)
    return _lattice(x, structure)


@functools.lru_cache(maxsize=2048)
def _lattice(x: Representation, structure: ExactStructure) -> SubobjectLattice:
    found = []
    for bases in _closed_tuples(x):
        _, inc = subrepresentation(x, bases)
        try:
            found.append(AdmissibleSubobject.of(inc, structure))
        except NotAdmissible:
            continue
    found.sort(key=lambda s: (sum(s.dims), s.dims, tuple(k.tolist() for k in s.key)))
    elements = tuple(found)
    order = frozenset(
        (i, j) for i, a in enumerate(elements) for j, b in enumerate(elements) if b.contains(a)
    )
    return SubobjectLattice(x, structure, elements, order)


def is_E_simple(s: Representation, structure: ExactStructure) -> bool:
    if s.is_zero():
        return False
    return len(enumerate_admissible_subobjects(s, structure)) == 2


# -- the E-Schur lemma ------------------------------------------------------------

CONCLUSIONS = ("monic-forced", "epic-forced", "iso-forced", "zero", "not-admissible", "no-constraint")


class SchurVerdict(NamedTuple):
    morphism: RepMorphism
    factorization: AdmissibleFactorization | None
    conclusion: str
    certificate: RepMorphism | None = None  # inverse, when an isomorphism is forced


def schur(f: RepMorphism, structure: ExactStructure) -> SchurVerdict:
    """Classify f and check the E-Schur conclusions on it.

    Raises SchurViolation if a forced conclusion fails to hold.
    """
    if f.is_zero():
        return SchurVerdict(f, None, "zero")
    fac = admissible_factorization(f, structure)
    if fac is None:
        return SchurVerdict(f, None, "not-admissible")
    src_simple = is_E_simple(f.source, structure)
    tgt_simple = is_E_simple(f.target, structure)
    if src_simple and not fac.e.is_iso():
        raise SchurViolation(f"source is E-simple but the epic part of {f} is not an isomorphism")
    if tgt_simple and not fac.m.is_iso():
        raise SchurViolation(f"target is E-simple but the monic part of {f} is not an isomorphism")
    if src_simple and tgt_simple:
        if not f.is_iso():
            raise SchurViolation(f"{f} between E-simples is not invertible")
        return SchurVerdict(f, fac, "iso-forced", f.inverse())
    if src_simple:
        if not is_admissible_monic(f, structure):
            raise SchurViolation(f"{f} out of an E-simple is not an admissible monic")
        return SchurVerdict(f, fac, "monic-forced")
    if tgt_simple:
        if not is_admissible_epic(f, structure):
            raise SchurViolation(f"{f} into an E-simple is not an admissible epic")
        return SchurVerdict(f, fac, "epic-forced")
    return SchurVerdict(f, fac, "no-constraint")


def automorphism_group(s: Representation, structure: ExactStructure) -> list[RepMorphism]:
    """The non-zero admissible endomorphisms of an E-simple object."""
    if not is_E_simple(s, structure):
        raise ValueError(f"{s} is not E-simple in {structure.name!r}")
    return [f for f in iter_hom(s, s) if not f.is_zero() and admissible_factorization(f, structure) is not None]


def aut_group_check(s: Representation, structure: ExactStructure) -> bool:
    """Non-zero admissible endomorphisms of s are invertible and form a group."""
    auts = automorphism_group(s, structure)
    if not all(f.is_iso() for f in auts):
        return False
    members = set(auts)
    if RepMorphism.identity(s) not in members:
        return False
    if any(f.inverse() not in members for f in auts):
        return False
    if any(g @ f not in members for f in auts for g in auts):
        return False
    # every invertible endomorphism is admissible, so nothing is missing
    return all(f in members for f in iter_hom(s, s) if f.is_iso())
