import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exactcat.budget import BudgetExceeded, use_budget
from exactcat.exactstruct import e_all, e_split
from exactcat.linalg import Matrix
from exactcat.quiverrep import RepMorphism, Representation, hom_basis, iter_hom
from exactcat.simples_schur import (
    AdmissibleSubobject,
    NotAdmissible,
    aut_group_check,
    automorphism_group,
    enumerate_admissible_subobjects,
    is_E_simple,
    is_proper,
    quotient,
    schur,
)

import oracles
from conftest import A2, CORPUS, F2, F3, P1, P1S1, S1, S1S2, S2, all_representations, rep

SMALL = list(all_representations(A2, F2, 3))


def as_sets(lattice):
    p = lattice.parent.field.p
    return {tuple(oracles.columns_span(p, k.array) for k in s.key) for s in lattice.elements}


def complemented(x, tup, subs):
    """Oracle for split admissibility: some subrepresentation is a vertexwise complement."""
    p = x.field.p
    for other in subs:
        ok = all(
            len(a & b) == 1 and len(a) * len(b) == p ** x.dims[v]
            for v, (a, b) in enumerate(zip(tup, other))
        )
        if ok:
            return True
    return False


@settings(max_examples=60, deadline=None)
@given(x=st.sampled_from(SMALL))
def test_e_all_lattice_is_all_subrepresentations(x, E_all):
    assert as_sets(enumerate_admissible_subobjects(x, E_all)) == oracles.subrepresentations(x)


@settings(max_examples=60, deadline=None)
@given(x=st.sampled_from(SMALL))
def test_e_split_lattice_is_direct_summands(x, E_split):
    subs = oracles.subrepresentations(x)
    expected = {t for t in subs if complemented(x, t, subs)}
    assert as_sets(enumerate_admissible_subobjects(x, E_split)) == expected


def test_known_lattices(E_all, E_split):
    assert [s.dims for s in enumerate_admissible_subobjects(P1, E_all).elements] == [(0, 0), (0, 1), (1, 1)]
    assert [s.dims for s in enumerate_admissible_subobjects(P1, E_split).elements] == [(0, 0), (1, 1)]
    assert len(enumerate_admissible_subobjects(P1S1, E_all)) == 7
    assert len(enumerate_admissible_subobjects(P1S1, E_split)) == 5
    lat = enumerate_admissible_subobjects(S1S2, E_all)
    assert lat.bottom.dims == (0, 0) and lat.top.dims == (1, 1)
    assert [lat.elements[i].dims for i in lat.maximal_proper()] == [(0, 1), (1, 0)]


def test_simples(E_all, E_split):
    assert [is_E_simple(x, E_all) for x in CORPUS] == [True, True, False, False, False]
    assert [is_E_simple(x, E_split) for x in CORPUS] == [True, True, True, False, False]
    assert not is_E_simple(Representation.zero(A2, F2), E_all)


def test_admissible_subobject_rejects_non_admissible(E_split):
    i = hom_basis(S2, P1)[0]
    with pytest.raises(NotAdmissible):
        AdmissibleSubobject.of(i, E_split)


def test_subobject_identity_ignores_presentation(E_all):
    x = rep([2, 1], [[[1, 0]]], field=F3)
    E3 = e_all(A2, F3)
    i = hom_basis(Representation.simple(A2, F3, 0), x)[0]
    assert AdmissibleSubobject.of(i.scale(2), E3) == AdmissibleSubobject.of(i, E3)
    a = AdmissibleSubobject.of(hom_basis(S1, P1S1)[0], E_all)
    whole = AdmissibleSubobject.whole(P1S1, E_all)
    zero = AdmissibleSubobject.zero(P1S1, E_all)
    assert whole.contains(a) and a.contains(zero) and not a.contains(whole)
    assert is_proper(a) and not is_proper(whole)
    q, d = quotient(P1S1, a)
    assert q.dims == (1, 1) and (d @ a.inflation).is_zero()


def test_enumeration_budget_is_loud(E_all):
    x = rep([3, 3], [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]])
    with use_budget(enumeration_cutoff=2**17):
        with pytest.raises(BudgetExceeded):
            enumerate_admissible_subobjects(x, E_all)


def test_schur_conclusions(E_all):
    i = hom_basis(S2, P1)[0]
    d = hom_basis(P1, S1)[0]
    assert schur(i, E_all).conclusion == "monic-forced"
    assert schur(d, E_all).conclusion == "epic-forced"
    assert schur(RepMorphism.zero(S1, P1), E_all).conclusion == "zero"
    v = schur(RepMorphism.identity(S1), E_all)
    assert v.conclusion == "iso-forced" and v.certificate == RepMorphism.identity(S1)
    assert schur(RepMorphism.identity(P1), E_all).conclusion == "no-constraint"


def test_schur_not_admissible(E_split):
    f = RepMorphism(P1, S1S2, (Matrix(F2, [[1]]), Matrix(F2, [[0]])))
    assert schur(f, E_split).conclusion == "not-admissible"


def test_schur_sweep_matches_brute_force_count(E_all):
    simples = [x for x in CORPUS if is_E_simple(x, E_all)]
    certified = brute = 0
    for s in simples:
        for t in simples:
            for f in iter_hom(s, t):
                if schur(f, E_all).conclusion == "iso-forced":
                    certified += 1
            brute += sum(all(oracles.is_bijective(2, m) for m in h) for h in oracles.homs(s, t))
    assert certified == brute == 2


def test_aut_group_over_f3():
    x = rep([1, 1], [[[1]]], field=F3)
    E = e_all(A2, F3)
    s1 = Representation.simple(A2, F3, 0)
    assert len(automorphism_group(s1, E)) == 2
    assert aut_group_check(s1, E)
    with pytest.raises(ValueError):
        automorphism_group(x, E)
    assert aut_group_check(P1, e_split(A2, F2))
