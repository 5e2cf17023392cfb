"""Representations of a finite acyclic quiver over F_p.

This is the ambient abelian category: kernels, cokernels and images are
computed vertexwise, pullbacks and pushouts as kernels and cokernels of
difference maps, so every result comes with canonical bases.
"""
from __future__ import annotations

import graphlib
import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .budget import BudgetExceeded, current_budget
from .linalg import (
    DimensionError,
    Matrix,
    PrimeField,
    block_diag,
    column_space,
    cokernel_projection,
    hstack,
    identity,
    is_invertible,
    inverse,
    kernel_basis,
    rank,
    solve,
    vstack,
    zeros,
)

__all__ = [
    "Quiver",
    "Representation",
    "RepMorphism",
    "ShortExactSequence",
    "InvalidSequence",
    "DirectSum",
    "Pullback",
    "Pushout",
    "hom_basis",
    "hom_dimension",
    "iter_hom",
    "kernel",
    "cokernel",
    "image_factorization",
    "subrepresentation",
    "canonical_image",
    "direct_sum",
    "hom_row",
    "hom_column",
    "pullback",
    "pullback_universal",
    "pushout",
    "pushout_universal",
    "factor_through_mono",
    "factor_through_epi",
    "is_isomorphic",
    "all_subspaces",
    "quotient_representation",
]


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        arrows = tuple((int(s), int(t)) for s, t in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        for s, t in arrows:
            if not (0 <= s < self.vertex_count and 0 <= t < self.vertex_count):
                raise ValueError(f"arrow {s}->{t} uses a vertex outside [0, {self.vertex_count})")
        ts = graphlib.TopologicalSorter({v: set() for v in range(self.vertex_count)})
        for s, t in arrows:
            ts.add(t, s)
        try:
            order = tuple(ts.static_order())
        except graphlib.CycleError as exc:
            raise ValueError(f"quiver has an oriented cycle: {exc.args[1]}") from None
        object.__setattr__(self, "_order", order)

    @classmethod
    def linear(cls, n: int) -> Quiver:
        """The equioriented A_n quiver 0 -> 1 -> ... -> n-1."""
        return cls(n, tuple((v, v + 1) for v in range(n - 1)))

    @property
    def topological_order(self) -> tuple[int, ...]:
        return self._order  # type: ignore[attr-defined]


@dataclass(frozen=True)
class Representation:
    quiver: Quiver
    field: PrimeField
    dims: tuple[int, ...]
    arrow_maps: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "arrow_maps", tuple(self.arrow_maps))
        q = self.quiver
        if len(dims) != q.vertex_count or any(d < 0 for d in dims):
            raise DimensionError(f"dims {dims} do not fit a quiver with {q.vertex_count} vertices")
        bound = current_budget().max_total_dim
        if sum(dims) > bound:
            raise BudgetExceeded(f"total dimension {sum(dims)} exceeds bound {bound}")
        if len(self.arrow_maps) != len(q.arrows):
            raise DimensionError(f"expected {len(q.arrows)} arrow maps, got {len(self.arrow_maps)}")
        for a, ((s, t), m) in enumerate(zip(q.arrows, self.arrow_maps)):
            if m.field != self.field:
                raise DimensionError(f"arrow {a}: matrix over {m.field}, representation over {self.field}")
            if m.shape != (dims[t], dims[s]):
                raise DimensionError(f"arrow {a}: expected shape {(dims[t], dims[s])}, got {m.shape}")

    @classmethod
    def build(cls, quiver: Quiver, field: PrimeField, dims: Sequence[int], maps: Sequence) -> Representation:
        """Build from integer grids; each grid is reduced mod p and shaped by ``dims``."""
        mats = []
        for (s, t), grid in zip(quiver.arrows, maps):
            mats.append(Matrix(field, grid, shape=(dims[t], dims[s])))
        return cls(quiver, field, tuple(dims), tuple(mats))

    @classmethod
    def zero(cls, quiver: Quiver, field: PrimeField) -> Representation:
        return cls.build(quiver, field, [0] * quiver.vertex_count, [[] for _ in quiver.arrows])

    @classmethod
    def simple(cls, quiver: Quiver, field: PrimeField, vertex: int) -> Representation:
        dims = [0] * quiver.vertex_count
        dims[vertex] = 1
        return cls.build(quiver, field, dims, [[] for _ in quiver.arrows])

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def same_ambient(self, other: Representation) -> bool:
        return self.quiver == other.quiver and self.field == other.field

    def sort_key(self) -> tuple:
        return (self.dims, tuple(tuple(map(tuple, m.tolist())) for m in self.arrow_maps))

    def __repr__(self) -> str:
        maps = [m.tolist() for m in self.arrow_maps]
        return f"Representation(dims={self.dims}, maps={maps})"


def _check_ambient(x: Representation, y: Representation) -> None:
    if not x.same_ambient(y):
        raise DimensionError("representations live over different quivers or fields")


@dataclass(frozen=True)
class RepMorphism:
    source: Representation
    target: Representation
    vertex_maps: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertex_maps", tuple(self.vertex_maps))
        x, y = self.source, self.target
        _check_ambient(x, y)
        if len(self.vertex_maps) != x.quiver.vertex_count:
            raise DimensionError("one vertex map per vertex is required")
        for v, m in enumerate(self.vertex_maps):
            if m.shape != (y.dims[v], x.dims[v]):
                raise DimensionError(f"vertex {v}: expected shape {(y.dims[v], x.dims[v])}, got {m.shape}")
        for a, (s, t) in enumerate(x.quiver.arrows):
            if self.vertex_maps[t] @ x.arrow_maps[a] != y.arrow_maps[a] @ self.vertex_maps[s]:
                raise ValueError(f"vertex maps do not intertwine along arrow {a}: {s}->{t}")

    @classmethod
    def identity(cls, x: Representation) -> RepMorphism:
        return cls(x, x, tuple(identity(x.field, d) for d in x.dims))

    @classmethod
    def zero(cls, x: Representation, y: Representation) -> RepMorphism:
        return cls(x, y, tuple(zeros(x.field, dy, dx) for dx, dy in zip(x.dims, y.dims)))

    @property
    def field(self) -> PrimeField:
        return self.source.field

    def __matmul__(self, other: RepMorphism) -> RepMorphism:
        """``g @ f`` is the composite g∘f."""
        if other.target != self.source:
            raise DimensionError("morphisms are not composable")
        return RepMorphism(other.source, self.target, tuple(a @ b for a, b in zip(self.vertex_maps, other.vertex_maps)))

    def _check_parallel(self, other: RepMorphism) -> None:
        if self.source != other.source or self.target != other.target:
            raise DimensionError("morphisms are not parallel")

    def __add__(self, other: RepMorphism) -> RepMorphism:
        self._check_parallel(other)
        return RepMorphism(self.source, self.target, tuple(a + b for a, b in zip(self.vertex_maps, other.vertex_maps)))

    def __sub__(self, other: RepMorphism) -> RepMorphism:
        self._check_parallel(other)
        return RepMorphism(self.source, self.target, tuple(a - b for a, b in zip(self.vertex_maps, other.vertex_maps)))

    def __neg__(self) -> RepMorphism:
        return RepMorphism(self.source, self.target, tuple(-a for a in self.vertex_maps))

    def scale(self, c: int) -> RepMorphism:
        return RepMorphism(self.source, self.target, tuple(a.scale(c) for a in self.vertex_maps))

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.vertex_maps)

    def is_injective(self) -> bool:
        return all(rank(m) == m.cols for m in self.vertex_maps)

    def is_surjective(self) -> bool:
        return all(rank(m) == m.rows for m in self.vertex_maps)

    def is_iso(self) -> bool:
        return all(is_invertible(m) for m in self.vertex_maps)

    def inverse(self) -> RepMorphism:
        if not self.is_iso():
            raise ValueError("morphism is not an isomorphism")
        return RepMorphism(self.target, self.source, tuple(inverse(m) for m in self.vertex_maps))

    def __repr__(self) -> str:
        return f"RepMorphism({self.source.dims} -> {self.target.dims}, {[m.tolist() for m in self.vertex_maps]})"


class InvalidSequence(ValueError):
    """The pair (i, d) is not a kernel-cokernel pair."""


@dataclass(frozen=True)
class ShortExactSequence:
    """Kernel-cokernel pair ``A --i--> B --d--> C``."""

    i: RepMorphism
    d: RepMorphism

    def __post_init__(self) -> None:
        i, d = self.i, self.d
        if i.target != d.source:
            raise InvalidSequence("i and d are not composable")
        if not (d @ i).is_zero():
            raise InvalidSequence("d∘i is not zero")
        if not i.is_injective():
            raise InvalidSequence("i is not injective")
        if not d.is_surjective():
            raise InvalidSequence("d is not surjective")
        for v, (iv, dv) in enumerate(zip(i.vertex_maps, d.vertex_maps)):
            if column_space(iv) != column_space(kernel_basis(dv)):
                raise InvalidSequence(f"image of i differs from kernel of d at vertex {v}")

    @property
    def left(self) -> Representation:
        return self.i.source

    @property
    def middle(self) -> Representation:
        return self.i.target

    @property
    def right(self) -> Representation:
        return self.d.target


# -- hom spaces ---------------------------------------------------------------


def hom_basis(x: Representation, y: Representation) -> list[RepMorphism]:
    """Basis of Hom(x, y): the null space of the stacked intertwining constraints."""
    _check_ambient(x, y)
    field = x.field
    q = x.quiver
    offsets = [0]
    for dx, dy in zip(x.dims, y.dims):
        offsets.append(offsets[-1] + dx * dy)
    n = offsets[-1]
    blocks = []
    for a, (s, t) in enumerate(q.arrows):
        xa, ya = x.arrow_maps[a].array, y.arrow_maps[a].array
        rows = y.dims[t] * x.dims[s]
        block = np.zeros((rows, n), dtype=np.int64)
        # row-major vec: vec(phi_t X_a) = (I ⊗ X_a^T) vec(phi_t), vec(Y_a phi_s) = (Y_a ⊗ I) vec(phi_s)
        block[:, offsets[t] : offsets[t + 1]] += np.kron(np.eye(y.dims[t], dtype=np.int64), xa.T)
        block[:, offsets[s] : offsets[s + 1]] -= np.kron(ya, np.eye(x.dims[s], dtype=np.int64))
        blocks.append(block)
    system = np.vstack(blocks) if blocks else np.zeros((0, n), dtype=np.int64)
    basis = kernel_basis(Matrix._wrap(field, system)).array
    out = []
    for j in range(basis.shape[1]):
        col = basis[:, j]
        maps = tuple(
            Matrix._wrap(field, col[offsets[v] : offsets[v + 1]].reshape(y.dims[v], x.dims[v]))
            for v in range(q.vertex_count)
        )
        out.append(RepMorphism(x, y, maps))
    return out


def hom_dimension(x: Representation, y: Representation) -> int:
    return len(hom_basis(x, y))


def _combine(field: PrimeField, stacks: list[np.ndarray], coeffs: np.ndarray) -> list[np.ndarray]:
    """Per vertex, the batch of maps sum_k coeffs[:, k] * basis_k."""
    return [np.einsum("bk,kij->bij", coeffs, st) % field.p for st in stacks]


def _stacks(basis: list[RepMorphism], x: Representation, y: Representation) -> list[np.ndarray]:
    h = len(basis)
    return [
        np.stack([f.vertex_maps[v].array for f in basis]) if h else np.zeros((0, y.dims[v], x.dims[v]), dtype=np.int64)
        for v in range(x.quiver.vertex_count)
    ]


def _coefficients(p: int, h: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    powers = p ** np.arange(h - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % p


def iter_hom(x: Representation, y: Representation, basis: list[RepMorphism] | None = None) -> Iterator[RepMorphism]:
    """Every element of Hom(x, y), in lexicographic order of basis coefficients."""
    if basis is None:
        basis = hom_basis(x, y)
    p, h = x.field.p, len(basis)
    cutoff = current_budget().hom_search_cutoff
    if p**h > cutoff:
        raise BudgetExceeded(f"hom space has {p}^{h} elements, cutoff is {cutoff}")
    stacks = _stacks(basis, x, y)
    coeffs = _coefficients(p, h, 0, p**h)
    batches = _combine(x.field, stacks, coeffs)
    for b in range(p**h):
        yield RepMorphism(x, y, tuple(Matrix._wrap(x.field, batches[v][b]) for v in range(len(stacks))))


def _batch_invertible(p: int, mats: np.ndarray) -> np.ndarray:
    """Invertibility mod p of a batch of square matrices, shape (B, n, n)."""
    batch, n, _ = mats.shape
    if n == 0:
        return np.ones(batch, dtype=bool)
    inv_table = np.array([0] + [pow(a, -1, p) for a in range(1, p)], dtype=np.int64)
    a = mats.copy() % p
    ok = np.ones(batch, dtype=bool)
    rows = np.arange(batch)
    for c in range(n):
        sub = a[:, c:, c]
        has = sub.any(axis=1)
        ok &= has
        piv = c + np.argmax(sub != 0, axis=1)
        tmp = a[rows, piv].copy()
        a[rows, piv] = a[:, c]
        a[:, c] = tmp
        scale = inv_table[a[:, c, c]]
        a[:, c] = (a[:, c] * scale[:, None]) % p
        factors = a[:, :, c].copy()
        factors[:, c] = 0
        a = (a - factors[:, :, None] * a[:, c][:, None, :]) % p
    return ok


def is_isomorphic(x: Representation, y: Representation, seed: int = 0) -> RepMorphism | None:
    """An isomorphism x -> y, or None when none exists.

    The hom space is searched exhaustively when it has at most
    ``hom_search_cutoff`` elements. Larger spaces are sampled; a found
    isomorphism is returned, otherwise BudgetExceeded is raised rather than
    reporting an unproven negative.
    """
    _check_ambient(x, y)
    if x.dims != y.dims:
        return None
    if x == y:
        return RepMorphism.identity(x)
    basis = hom_basis(x, y)
    p, h = x.field.p, len(basis)
    if h == 0:
        return None
    stacks = _stacks(basis, x, y)
    budget = current_budget()

    def first_iso(coeffs: np.ndarray) -> RepMorphism | None:
        batches = _combine(x.field, stacks, coeffs)
        ok = np.ones(len(coeffs), dtype=bool)
        for v, b in enumerate(batches):
            ok &= _batch_invertible(p, b)
        hits = np.flatnonzero(ok)
        if hits.size == 0:
            return None
        k = int(hits[0])
        return RepMorphism(x, y, tuple(Matrix._wrap(x.field, batches[v][k]) for v in range(len(stacks))))

    chunk = 8192
    if p**h <= budget.hom_search_cutoff:
        for start in range(0, p**h, chunk):
            found = first_iso(_coefficients(p, h, start, min(p**h, start + chunk)))
            if found is not None:
                return found
        return None
    rng = np.random.default_rng(seed)
    found = first_iso(rng.integers(0, p, size=(budget.sample_trials, h)))
    if found is not None:
        return found
    raise BudgetExceeded(
        f"hom space of size {p}^{h} exceeds cutoff {budget.hom_search_cutoff} and sampling found no isomorphism"
    )


# -- kernels, cokernels, images ---------------------------------------------------


def subrepresentation(x: Representation, bases: Sequence[Matrix]) -> tuple[Representation, RepMorphism]:
    """The subrepresentation spanned by the given column bases, with its inclusion.

    Raises ValueError if the subspaces are not closed under the arrow maps.
    """
    maps = []
    for a, (s, t) in enumerate(x.quiver.arrows):
        m = solve(bases[t], x.arrow_maps[a] @ bases[s])
        if m is None:
            raise ValueError(f"subspaces are not closed under arrow {a}: {s}->{t}")
        maps.append(m)
    sub = Representation(x.quiver, x.field, tuple(b.cols for b in bases), tuple(maps))
    return sub, RepMorphism(sub, x, tuple(bases))


def quotient_representation(y: Representation, projections: Sequence[Matrix]) -> tuple[Representation, RepMorphism]:
    maps = []
    for a, (s, t) in enumerate(y.quiver.arrows):
        qs, qt = projections[s], projections[t]
        m = solve(qs.T, (qt @ y.arrow_maps[a]).T)
        if m is None:
            raise ValueError(f"kernels are not closed under arrow {a}: {s}->{t}")
        maps.append(m.T)
    quo = Representation(y.quiver, y.field, tuple(q.rows for q in projections), tuple(maps))
    return quo, RepMorphism(y, quo, tuple(projections))


def kernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    return subrepresentation(f.source, [kernel_basis(m) for m in f.vertex_maps])


def cokernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    return quotient_representation(f.target, [cokernel_projection(m) for m in f.vertex_maps])


def canonical_image(f: RepMorphism) -> tuple[Matrix, ...]:
    """Vertexwise canonical bases of the image of ``f``; the identity of a subobject."""
    return tuple(column_space(m) for m in f.vertex_maps)


def image_factorization(f: RepMorphism) -> tuple[RepMorphism, RepMorphism]:
    """``f = m ∘ e`` with e onto the canonical image and m its inclusion."""
    _, m = subrepresentation(f.target, canonical_image(f))
    e = factor_through_mono(m, f)
    assert e is not None
    return e, m


def factor_through_mono(m: RepMorphism, h: RepMorphism) -> RepMorphism | None:
    """The unique u with ``m ∘ u == h`` for injective m, or None."""
    if m.target != h.target:
        raise DimensionError("morphisms do not share a target")
    maps = []
    for mv, hv in zip(m.vertex_maps, h.vertex_maps):
        u = solve(mv, hv)
        if u is None:
            return None
        maps.append(u)
    return RepMorphism(h.source, m.source, tuple(maps))


def factor_through_epi(e: RepMorphism, h: RepMorphism) -> RepMorphism | None:
    """The unique u with ``u ∘ e == h`` for surjective e, or None."""
    if e.source != h.source:
        raise DimensionError("morphisms do not share a source")
    maps = []
    for ev, hv in zip(e.vertex_maps, h.vertex_maps):
        u = solve(ev.T, hv.T)
        if u is None:
            return None
        maps.append(u.T)
    return RepMorphism(e.target, h.target, tuple(maps))


# -- biproducts, pullbacks, pushouts ---------------------------------------------


class DirectSum(NamedTuple):
    object: Representation
    injections: tuple[RepMorphism, ...]
    projections: tuple[RepMorphism, ...]


def direct_sum(*summands: Representation) -> DirectSum:
    if not summands:
        raise ValueError("direct_sum needs at least one summand")
    first = summands[0]
    for s in summands[1:]:
        _check_ambient(first, s)
    q, field = first.quiver, first.field
    dims = tuple(sum(s.dims[v] for s in summands) for v in range(q.vertex_count))
    maps = []
    for a in range(len(q.arrows)):
        maps.append(block_diag([s.arrow_maps[a] for s in summands]))
    total = Representation(q, field, dims, tuple(maps))
    injections, projections = [], []
    offsets = [[0] * q.vertex_count]
    for s in summands:
        offsets.append([o + d for o, d in zip(offsets[-1], s.dims)])
    for k, s in enumerate(summands):
        inj, proj = [], []
        for v in range(q.vertex_count):
            e = np.zeros((dims[v], s.dims[v]), dtype=np.int64)
            e[offsets[k][v] : offsets[k + 1][v], :] = np.eye(s.dims[v], dtype=np.int64)
            inj.append(Matrix._wrap(field, e))
            proj.append(Matrix._wrap(field, e.T.copy()))
        injections.append(RepMorphism(s, total, tuple(inj)))
        projections.append(RepMorphism(total, s, tuple(proj)))
    return DirectSum(total, tuple(injections), tuple(projections))


def hom_row(maps: Sequence[RepMorphism]) -> RepMorphism:
    """``[f1 f2 ...]``: the direct sum of the sources mapped into the common target."""
    target = maps[0].target
    if any(f.target != target for f in maps):
        raise DimensionError("row entries must share a target")
    ds = direct_sum(*(f.source for f in maps))
    vm = tuple(hstack([f.vertex_maps[v] for f in maps]) for v in range(target.quiver.vertex_count))
    return RepMorphism(ds.object, target, vm)


def hom_column(maps: Sequence[RepMorphism]) -> RepMorphism:
    """``[f1; f2; ...]``: the common source mapped into the direct sum of the targets."""
    source = maps[0].source
    if any(f.source != source for f in maps):
        raise DimensionError("column entries must share a source")
    ds = direct_sum(*(f.target for f in maps))
    vm = tuple(vstack([f.vertex_maps[v] for f in maps]) for v in range(source.quiver.vertex_count))
    return RepMorphism(source, ds.object, vm)


class Pullback(NamedTuple):
    object: Representation
    s1: RepMorphism
    s2: RepMorphism
    inclusion: RepMorphism  # into the direct sum B ⊕ C
    g: RepMorphism
    j: RepMorphism


class Pushout(NamedTuple):
    object: Representation
    j1: RepMorphism
    j2: RepMorphism
    projection: RepMorphism  # from the direct sum B ⊕ C
    i: RepMorphism
    f: RepMorphism


def pullback(g: RepMorphism, j: RepMorphism) -> Pullback:
    """Pullback of ``g: B -> D`` and ``j: C -> D`` as Ker[g  -j]."""
    if g.target != j.target:
        raise DimensionError("pullback needs a common target")
    diff = hom_row([g, -j])
    obj, k = kernel(diff)
    ds = direct_sum(g.source, j.source)
    return Pullback(obj, ds.projections[0] @ k, ds.projections[1] @ k, k, g, j)


def pullback_universal(pb: Pullback, v1: RepMorphism, v2: RepMorphism) -> RepMorphism:
    """The unique v with ``s1∘v == v1`` and ``s2∘v == v2``."""
    if pb.g @ v1 != pb.j @ v2:
        raise ValueError("cone over the pullback diagram does not commute")
    v = factor_through_mono(pb.inclusion, hom_column([v1, v2]))
    assert v is not None
    return v


def pushout(i: RepMorphism, f: RepMorphism) -> Pushout:
    """Pushout of ``i: A -> B`` and ``f: A -> C`` as Coker[i; -f]."""
    if i.source != f.source:
        raise DimensionError("pushout needs a common source")
    diff = hom_column([i, -f])
    obj, q = cokernel(diff)
    ds = direct_sum(i.target, f.target)
    return Pushout(obj, q @ ds.injections[0], q @ ds.injections[1], q, i, f)


def pushout_universal(po: Pushout, g: RepMorphism, jj: RepMorphism) -> RepMorphism:
    """The unique u with ``u∘j1 == g`` and ``u∘j2 == jj``."""
    if g @ po.i != jj @ po.f:
        raise ValueError("cocone under the pushout diagram does not commute")
    u = factor_through_epi(po.projection, hom_row([g, jj]))
    assert u is not None
    return u


def all_subspaces(field: PrimeField, n: int) -> list[Matrix]:
    """All subspaces of F_p^n as canonical column bases.

    Ordered by dimension, then lexicographically by the rref rows.
    """
    p = field.p
    out: list[Matrix] = []
    for k in range(n + 1):
        found = []
        for pivots in itertools.combinations(range(n), k):
            free_slots = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots]
            for values in itertools.product(range(p), repeat=len(free_slots)):
                rows = np.zeros((k, n), dtype=np.int64)
                for r, pc in enumerate(pivots):
                    rows[r, pc] = 1
                for (r, c), val in zip(free_slots, values):
                    rows[r, c] = val
                found.append(rows)
        found.sort(key=lambda r: r.tolist())
        out.extend(Matrix._wrap(field, r.T.copy()) for r in found)
    return out
