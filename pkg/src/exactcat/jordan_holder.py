"""E-composition series and the intersect-and-sum comparison of two series.

``baumslag_compare`` turns the inductive Jordan-Hölder argument into a
certificate producer: at each level it intersects and sums the second
series with the penultimate term of the first, locates the unique jump,
builds explicit factor isomorphisms from cokernel universal properties and
recurses on the derived series.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .exactstruct import ExactStructure, is_admissible_monic
from .intersect_sum import check_AIS
from .iso_theorems import three_by_three_sequence
from .quiverrep import (
    RepMorphism,
    Representation,
    canonical_image,
    cokernel,
    factor_through_epi,
    factor_through_mono,
    is_isomorphic,
    pullback,
    pushout,
    pushout_universal,
    subrepresentation,
)
from .report import AxiomReport, rep_to_dict
from .simples_schur import (
    AdmissibleSubobject,
    NotAdmissible,
    enumerate_admissible_subobjects,
    is_E_simple,
    is_proper,
)

__all__ = [
    "CompositionSeries",
    "JHComparisonResult",
    "TraceLevel",
    "find_composition_series",
    "all_composition_series",
    "composition_factors",
    "same_factors",
    "baumslag_compare",
    "jh_property_check",
]


@dataclass(frozen=True, eq=False)
class CompositionSeries:
    """``0 = X_0 -> X_1 -> ... -> X_n = X`` with factors ``X_{l+1}/X_l``."""

    object: Representation
    structure: ExactStructure
    terms: tuple[Representation, ...]
    inflations: tuple[RepMorphism, ...]
    factors: tuple[Representation, ...]
    projections: tuple[RepMorphism, ...]

    @classmethod
    def empty(cls, x: Representation, structure: ExactStructure) -> CompositionSeries:
        if not x.is_zero():
            raise ValueError("only the zero object has the empty series")
        return cls(x, structure, (x,), (), (), ())

    @classmethod
    def from_inflations(cls, inflations: Sequence[RepMorphism], structure: ExactStructure) -> CompositionSeries:
        inflations = tuple(inflations)
        if not inflations:
            raise ValueError("use CompositionSeries.empty for length 0")
        terms = (inflations[0].source,) + tuple(i.target for i in inflations)
        factors, projections = [], []
        for i in inflations:
            c, q = cokernel(i)
            factors.append(c)
            projections.append(q)
        return cls(terms[-1], structure, terms, inflations, tuple(factors), tuple(projections))

    def extend(self, inflation: RepMorphism) -> CompositionSeries:
        """Append a step ``self.object -> inflation.target``."""
        if inflation.source != self.object:
            raise ValueError("inflation does not start at the top of the series")
        c, q = cokernel(inflation)
        return CompositionSeries(
            inflation.target,
            self.structure,
            self.terms + (inflation.target,),
            self.inflations + (inflation,),
            self.factors + (c,),
            self.projections + (q,),
        )

    def truncate(self) -> CompositionSeries:
        """The series of X_{n-1} obtained by dropping the top step."""
        n = self.length
        return CompositionSeries(
            self.terms[n - 1], self.structure, self.terms[:n], self.inflations[: n - 1],
            self.factors[: n - 1], self.projections[: n - 1],
        )

    @property
    def length(self) -> int:
        return len(self.inflations)

    @property
    def steps(self) -> tuple[AdmissibleSubobject, ...]:
        """Each X_l as an admissible subobject of X_{l+1}."""
        return tuple(AdmissibleSubobject.of(i, self.structure) for i in self.inflations)

    def embeddings(self) -> tuple[RepMorphism, ...]:
        """The composite monics X_l -> X, for l = 0..n."""
        out = [RepMorphism.identity(self.object)]
        for i in reversed(self.inflations):
            out.append(out[-1] @ i)
        return tuple(reversed(out))

    def problems(self) -> list[str]:
        """Violations of the composition-series conditions, re-checked from scratch."""
        found = []
        if not self.terms[0].is_zero():
            found.append("X_0 is not zero")
        if self.terms[-1] != self.object:
            found.append("X_n is not the object")
        if not (len(self.inflations) == len(self.factors) == len(self.terms) - 1):
            found.append("lengths of inflations, factors and terms disagree")
        for l, i in enumerate(self.inflations):
            if i.source != self.terms[l] or i.target != self.terms[l + 1]:
                found.append(f"step {l} does not connect X_{l} to X_{l + 1}")
                continue
            if not is_admissible_monic(i, self.structure):
                found.append(f"step {l} is not an admissible monic")
                continue
            if not is_proper(AdmissibleSubobject.of(i, self.structure)):
                found.append(f"step {l} is not proper")
            c, _ = cokernel(i)
            if not is_E_simple(c, self.structure):
                found.append(f"factor {l} is not E-simple")
        return found

    def to_dict(self) -> dict[str, Any]:
        return {
            "length": self.length,
            "terms": [list(t.dims) for t in self.terms],
            "factors": [rep_to_dict(f) for f in self.factors],
        }


def _step_candidates(x: Representation, structure: ExactStructure) -> list[AdmissibleSubobject]:
    """Proper admissible subobjects with E-simple quotient, maximal ones first."""
    lattice = enumerate_admissible_subobjects(x, structure)
    maximal = set(lattice.maximal_proper())
    cands = []
    for idx, m in enumerate(lattice.elements):
        if not is_proper(m):
            continue
        c, _ = cokernel(m.inflation)
        if is_E_simple(c, structure):
            cands.append((idx not in maximal, idx, m))
    return [m for _, _, m in sorted(cands, key=lambda t: (t[0], t[1]))]


def find_composition_series(x: Representation, structure: ExactStructure) -> CompositionSeries | None:
    """First series found by depth-first search from the top, or None."""
    if x.is_zero():
        return CompositionSeries.empty(x, structure)
    for m in _step_candidates(x, structure):
        below = find_composition_series(m.object, structure)
        if below is not None:
            return below.extend(m.inflation)
    return None


def all_composition_series(x: Representation, structure: ExactStructure) -> list[CompositionSeries]:
    memo: dict[Representation, list[CompositionSeries]] = {}

    def walk(y: Representation) -> list[CompositionSeries]:
        if y in memo:
            return memo[y]
        if y.is_zero():
            out = [CompositionSeries.empty(y, structure)]
        else:
            out = [s.extend(m.inflation) for m in _step_candidates(y, structure) for s in walk(m.object)]
        memo[y] = out
        return out

    return walk(x)


def composition_factors(series: CompositionSeries) -> list[tuple[Representation, int]]:
    """Factors grouped into isomorphism classes, as (representative, multiplicity)."""
    classes: list[list[Representation]] = []
    for f in series.factors:
        for cls in classes:
            if is_isomorphic(cls[0], f) is not None:
                cls.append(f)
                break
        else:
            classes.append([f])
    out = [(min(cls, key=Representation.sort_key), len(cls)) for cls in classes]
    return sorted(out, key=lambda t: t[0].sort_key())


def same_factors(a: list[tuple[Representation, int]], b: list[tuple[Representation, int]]) -> bool:
    if len(a) != len(b):
        return False
    unmatched = list(b)
    for rep, mult in a:
        for k, (other, mult2) in enumerate(unmatched):
            if mult == mult2 and is_isomorphic(rep, other) is not None:
                del unmatched[k]
                break
        else:
            return False
    return True


# -- intersect-and-sum comparison ------------------------------------------------


@dataclass(frozen=True)
class TraceLevel:
    level: int
    lengths: tuple[int, int]
    pivot: int | None
    sum_dims: tuple[tuple[int, ...], ...]
    derived_factor_dims: tuple[tuple[int, ...], ...] | None
    ses_certified: bool | None
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "level": self.level,
            "lengths": list(self.lengths),
            "pivot": self.pivot,
            "sum_dims": [list(d) for d in self.sum_dims],
            "derived_factor_dims": None if self.derived_factor_dims is None else [list(d) for d in self.derived_factor_dims],
            "ses_certified": self.ses_certified,
            "note": self.note,
        }


@dataclass(frozen=True, eq=False)
class JHComparisonResult:
    equal_length: bool
    sigma: tuple[int, ...] | None  # factor l of the first series ≅ factor sigma[l] of the second
    factor_isos: tuple[RepMorphism, ...]
    refinement_trace: tuple[TraceLevel, ...]
    supported: bool
    witness: dict[str, Any] | None = None

    @property
    def status(self) -> str:
        return "supported" if self.supported else "unsupported structure"

    @property
    def verified(self) -> bool:
        return self.equal_length and self.sigma is not None and self.witness is None

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "equal_length": self.equal_length,
            "verified": self.verified,
            "sigma": None if self.sigma is None else list(self.sigma),
            "factor_isos": [[m.tolist() for m in f.vertex_maps] for f in self.factor_isos],
            "trace": [t.to_dict() for t in self.refinement_trace],
            "witness": self.witness,
        }


class _Mismatch(Exception):
    def __init__(self, reason: str, **info: Any):
        super().__init__(reason)
        self.witness = {"reason": reason, **info}


def _compare(a: CompositionSeries, b: CompositionSeries, level: int, supported: bool, trace: list[TraceLevel]):
    E = a.structure
    m, n = a.length, b.length
    if m == 0 or n == 0:
        if m != n:
            trace.append(TraceLevel(level, (m, n), None, (), None, None, "one series is empty"))
            raise _Mismatch("lengths differ", level=level, lengths=[m, n])
        trace.append(TraceLevel(level, (0, 0), None, (), None, None, "zero object"))
        return [], []

    w_emb = a.inflations[m - 1]
    w = a.terms[m - 1]
    b_emb = b.embeddings()

    # intersect and sum every term of b with W = X_{m-1}
    inters, sum_keys = [], []
    for l in range(n + 1):
        pb = pullback(b_emb[l], w_emb)
        po = pushout(pb.s1, pb.s2)
        u = pushout_universal(po, b_emb[l], w_emb)
        inters.append(pb)
        sum_keys.append(canonical_image(u))
    sum_dims = tuple(tuple(k.cols for k in key) for key in sum_keys)
    jumps = [l for l in range(n) if sum_keys[l] != sum_keys[l + 1]]
    if len(jumps) != 1:
        trace.append(TraceLevel(level, (m, n), None, sum_dims, None, None, f"{len(jumps)} jumps in the sums"))
        raise _Mismatch("pivot not unique" if jumps else "pivot missing", level=level, jumps=jumps)
    k = jumps[0]

    # top factor of a against factor k of b
    phi = factor_through_epi(b.projections[k], a.projections[m - 1] @ b_emb[k + 1])
    if phi is None or not phi.is_iso():
        trace.append(TraceLevel(level, (m, n), k, sum_dims, None, None, "pivot factors not isomorphic"))
        raise _Mismatch("pivot factor map is not an isomorphism", level=level, pivot=k)
    top_iso = phi.inverse()

    ses_ok = None
    if supported:
        try:
            xs = AdmissibleSubobject.of(w_emb, E)
            y1 = AdmissibleSubobject.of(b_emb[k], E)
            y2 = AdmissibleSubobject.of(b_emb[k + 1], E)
        except NotAdmissible:
            ses_ok = False
        else:
            grid = three_by_three_sequence(xs, y1, y2, b.inflations[k], E)
            seq = grid.sequence
            ses_ok = grid.membership and seq.left.is_zero() and seq.d.is_iso()

    # derived series of W from the intersections, dropping the repeated term
    w_keys = [canonical_image(pb.s2) for pb in inters]
    if w_keys[k] != w_keys[k + 1]:
        trace.append(TraceLevel(level, (m, n), k, sum_dims, None, ses_ok, "intersections differ at the pivot"))
        raise _Mismatch("intersection does not collapse at the pivot", level=level, pivot=k)
    kept = [l for l in range(n + 1) if l != k + 1]
    subs = [subrepresentation(w, w_keys[l]) for l in kept]
    if subs[-1][0] != w:
        subs[-1] = (w, RepMorphism.identity(w))
    if n == 1:
        if not w.is_zero():
            trace.append(TraceLevel(level, (m, n), k, sum_dims, (), ses_ok, "W is not zero"))
            raise _Mismatch("derived series is empty but W is not zero", level=level)
        derived = CompositionSeries.empty(w, E)
    else:
        steps = []
        for (lo, lo_inc), (hi, hi_inc) in zip(subs, subs[1:]):
            step = factor_through_mono(hi_inc, lo_inc)
            assert step is not None
            steps.append(step)
        derived = CompositionSeries.from_inflations(steps, E)
    bad = derived.problems()
    trace.append(TraceLevel(level, (m, n), k, sum_dims, tuple(f.dims for f in derived.factors), ses_ok,
                            "; ".join(bad)))
    if bad:
        raise _Mismatch("derived series is not a composition series", level=level, problems=bad)

    # factor isomorphisms of the derived series against b, away from the pivot
    psi = {}
    for j in range(n - 1):
        l = j if j < k else j + 1
        pb = inters[l + 1]
        hi_obj, hi_inc = subs[j + 1]
        e = factor_through_mono(hi_inc, pb.s2)
        assert e is not None and e.is_iso()
        to_b = b.projections[l] @ pb.s1 @ e.inverse()
        f = factor_through_epi(derived.projections[j], to_b)
        if f is None or not f.is_iso():
            raise _Mismatch("derived factor is not isomorphic to the matching factor", level=level, index=l)
        psi[j] = (l, f)

    sigma_rest, isos_rest = _compare(a.truncate(), derived, level + 1, supported, trace)
    sigma, isos = [], []
    for i, (j, iso) in enumerate(zip(sigma_rest, isos_rest)):
        l, f = psi[j]
        sigma.append(l)
        isos.append(f @ iso)
    sigma.append(k)
    isos.append(top_iso)
    return sigma, isos


def baumslag_compare(
    s1: CompositionSeries,
    s2: CompositionSeries,
    structure: ExactStructure | None = None,
    assume_ais: bool | None = None,
) -> JHComparisonResult:
    """Compare two composition series of the same object.

    When the structure is not known to be AIS (checked on the object itself
    unless ``assume_ais`` is given) the comparison still runs but the result
    is labelled as unsupported.
    """
    E = structure or s1.structure
    if s1.object != s2.object:
        raise ValueError("series are of different objects")
    supported = assume_ais if assume_ais is not None else check_AIS(E, [s1.object]).passed
    trace: list[TraceLevel] = []
    equal_length = s1.length == s2.length
    try:
        sigma, isos = _compare(s1, s2, 0, supported, trace)
    except _Mismatch as exc:
        return JHComparisonResult(equal_length, None, (), tuple(trace), supported, exc.witness)
    perm = tuple(sigma)
    ok = sorted(perm) == list(range(s2.length)) and all(
        f.source == s1.factors[l] and f.target == s2.factors[perm[l]] and f.is_iso() for l, f in enumerate(isos)
    )
    witness = None if ok else {"reason": "assembled permutation or isomorphisms failed verification"}
    return JHComparisonResult(equal_length, perm, tuple(isos), tuple(trace), supported, witness)


def jh_property_check(corpus: Sequence[Representation], structure: ExactStructure) -> AxiomReport:
    """Pairwise equal length and equal factor multisets for all series of every corpus object."""
    report = AxiomReport(structure.name, bounds={"corpus_size": len(corpus)})
    exists = report.add("series-exist", "every corpus object has a composition series")
    lengths = report.add("equal-length", "any two series of an object have the same length")
    factors = report.add("same-factors", "any two series of an object have isomorphic factor multisets")
    for x in corpus:
        series = all_composition_series(x, structure)
        exists.record(bool(series), {"object": rep_to_dict(x)})
        multisets = [composition_factors(s) for s in series]
        for p in range(len(series)):
            for q in range(p + 1, len(series)):
                witness = {
                    "object": rep_to_dict(x),
                    "series": [series[p].to_dict(), series[q].to_dict()],
                }
                lengths.record(series[p].length == series[q].length, witness)
                factors.record(same_factors(multisets[p], multisets[q]), witness)
    return report
