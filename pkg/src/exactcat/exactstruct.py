"""Exact structures on rep(Q) and admissibility of morphisms."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .linalg import Matrix, PrimeField, identity, inverse, is_invertible, solve
from .quiverrep import (
    Quiver,
    RepMorphism,
    Representation,
    ShortExactSequence,
    cokernel,
    direct_sum,
    hom_basis,
    image_factorization,
    kernel,
)

__all__ = [
    "ExactStructure",
    "InvalidStructure",
    "AdmissibleFactorization",
    "e_all",
    "e_split",
    "custom_structure",
    "splitting",
    "is_split",
    "split_sequence",
    "is_admissible_monic",
    "is_admissible_epic",
    "admissible_factorization",
    "obscure_axiom_holds",
    "transport",
    "random_transport",
    "audit_split_containment",
    "audit_iso_invariance",
]

PROVENANCES = ("all", "split", "custom")


class InvalidStructure(ValueError):
    """A custom membership predicate violates a property every exact structure has."""

    def __init__(self, message: str, witness: ShortExactSequence | None = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class ExactStructure:
    name: str
    quiver: Quiver
    field: PrimeField
    membership: Callable[[ShortExactSequence], bool]
    provenance: str = "custom"

    def __post_init__(self) -> None:
        if self.provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}, got {self.provenance!r}")

    def contains(self, seq: ShortExactSequence) -> bool:
        if seq.middle.quiver != self.quiver or seq.middle.field != self.field:
            raise ValueError(f"sequence does not live in the ambient category of structure {self.name!r}")
        return bool(self.membership(seq))

    def __repr__(self) -> str:
        return f"ExactStructure({self.name!r}, provenance={self.provenance!r})"


def e_all(quiver: Quiver, field: PrimeField) -> ExactStructure:
    """Every kernel-cokernel pair; ShortExactSequence construction already checks that."""
    return ExactStructure("all", quiver, field, lambda seq: True, "all")


def splitting(seq: ShortExactSequence) -> RepMorphism | None:
    """A section s: C -> B with d∘s = id_C, or None if the sequence does not split."""
    b, c, d = seq.middle, seq.right, seq.d
    if c.is_zero():
        return RepMorphism.zero(c, b)
    basis = hom_basis(c, b)
    target = np.concatenate([identity(c.field, n).array.ravel() for n in c.dims])
    if not basis:
        return None
    cols = [np.concatenate([m.array.ravel() for m in (d @ h).vertex_maps]) for h in basis]
    x = solve(Matrix._wrap(c.field, np.stack(cols, axis=1)), Matrix._wrap(c.field, target[:, None]))
    if x is None:
        return None
    s = basis[0].scale(x[0, 0])
    for k in range(1, len(basis)):
        s = s + basis[k].scale(x[k, 0])
    return s


def is_split(seq: ShortExactSequence) -> bool:
    return splitting(seq) is not None


def e_split(quiver: Quiver, field: PrimeField) -> ExactStructure:
    return ExactStructure("split", quiver, field, is_split, "split")


def split_sequence(a: Representation, c: Representation) -> ShortExactSequence:
    """The canonical split sequence A -> A ⊕ C -> C."""
    ds = direct_sum(a, c)
    return ShortExactSequence(ds.injections[0], ds.projections[1])


def audit_split_containment(structure: ExactStructure, objects: Sequence[Representation]) -> ShortExactSequence | None:
    """First split sequence A -> A⊕C -> C (A, C from ``objects``) the structure rejects."""
    for a in objects:
        for c in objects:
            seq = split_sequence(a, c)
            if not structure.contains(seq):
                return seq
    return None


def _default_audit_objects(quiver: Quiver, field: PrimeField) -> list[Representation]:
    objs = [Representation.zero(quiver, field)]
    objs += [Representation.simple(quiver, field, v) for v in range(quiver.vertex_count)]
    return objs


def custom_structure(
    quiver: Quiver,
    field: PrimeField,
    predicate: Callable[[ShortExactSequence], bool],
    name: str = "custom",
    audit_objects: Iterable[Representation] | None = None,
) -> ExactStructure:
    """Wrap a membership predicate.

    The predicate is audited on split sequences built from ``audit_objects``
    (default: zero and the simples); axiom conformance is not assumed and
    must be checked separately.
    """
    structure = ExactStructure(name, quiver, field, predicate, "custom")
    objs = list(audit_objects) if audit_objects is not None else _default_audit_objects(quiver, field)
    bad = audit_split_containment(structure, objs)
    if bad is not None:
        raise InvalidStructure(
            f"structure {name!r} rejects the split sequence {bad.left.dims} -> {bad.middle.dims} -> {bad.right.dims}",
            bad,
        )
    return structure


# -- admissibility ----------------------------------------------------------------


def is_admissible_monic(f: RepMorphism, structure: ExactStructure) -> bool:
    # Isomorphism closure lets the canonical cokernel stand in for "some d".
    if not f.is_injective():
        return False
    _, q = cokernel(f)
    return structure.contains(ShortExactSequence(f, q))


def is_admissible_epic(f: RepMorphism, structure: ExactStructure) -> bool:
    if not f.is_surjective():
        return False
    _, k = kernel(f)
    return structure.contains(ShortExactSequence(k, f))


class AdmissibleFactorization(NamedTuple):
    e: RepMorphism
    m: RepMorphism


def admissible_factorization(f: RepMorphism, structure: ExactStructure) -> AdmissibleFactorization | None:
    """``f = m∘e`` through the canonical image, if both parts are admissible."""
    e, m = image_factorization(f)
    if is_admissible_epic(e, structure) and is_admissible_monic(m, structure):
        return AdmissibleFactorization(e, m)
    return None


def obscure_axiom_holds(i: RepMorphism, j: RepMorphism, structure: ExactStructure) -> bool:
    """Whether the instance ``j∘i admissible monic => i admissible monic`` holds."""
    if not is_admissible_monic(j @ i, structure):
        return True
    return is_admissible_monic(i, structure)


# -- isomorphism-invariance audit -----------------------------------------------


def transport(x: Representation, changes: Sequence[Matrix]) -> tuple[Representation, RepMorphism]:
    """Change basis at each vertex by ``changes[v]``; returns x' and the iso x -> x'."""
    maps = []
    for a, (s, t) in enumerate(x.quiver.arrows):
        maps.append(changes[t] @ x.arrow_maps[a] @ inverse(changes[s]))
    y = Representation(x.quiver, x.field, x.dims, tuple(maps))
    return y, RepMorphism(x, y, tuple(changes))


def _random_invertible(rng: np.random.Generator, field: PrimeField, n: int) -> Matrix:
    while True:
        m = Matrix._wrap(field, rng.integers(0, field.p, size=(n, n)))
        if is_invertible(m):
            return m


def random_transport(x: Representation, rng: np.random.Generator) -> tuple[Representation, RepMorphism]:
    return transport(x, [_random_invertible(rng, x.field, d) for d in x.dims])


def audit_iso_invariance(
    structure: ExactStructure,
    sequences: Sequence[ShortExactSequence],
    seed: int = 0,
    trials: int = 4,
) -> list[tuple[ShortExactSequence, ShortExactSequence]]:
    """Pairs of isomorphic sequences (random ladders) on which membership disagrees."""
    rng = np.random.default_rng(seed)
    bad = []
    for seq in sequences:
        expected = structure.contains(seq)
        for _ in range(trials):
            _, alpha = random_transport(seq.left, rng)
            _, beta = random_transport(seq.middle, rng)
            _, gamma = random_transport(seq.right, rng)
            moved = ShortExactSequence(beta @ seq.i @ alpha.inverse(), gamma @ seq.d @ beta.inverse())
            if structure.contains(moved) != expected:
                bad.append((seq, moved))
                break
    return bad
