import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exactcat.exactstruct import e_all
from exactcat.jordan_holder import (
    CompositionSeries,
    all_composition_series,
    baumslag_compare,
    composition_factors,
    find_composition_series,
    jh_property_check,
    same_factors,
)
from exactcat.quiverrep import Quiver, RepMorphism, Representation

from conftest import A2, CORPUS, F2, P1, P1S1, S1, S1S2, all_representations, rep

A3 = Quiver.linear(3)


def factor_dims(series):
    return [f.dims for f in series.factors]


def test_zero_object_has_empty_series(E_all):
    z = Representation.zero(A2, F2)
    s = find_composition_series(z, E_all)
    assert s.length == 0 and s.factors == ()
    assert [t.length for t in all_composition_series(z, E_all)] == [0]
    assert composition_factors(s) == []


def test_simple_object_has_one_step(E_all):
    s = find_composition_series(S1, E_all)
    assert s.length == 1 and s.terms[0].is_zero() and s.terms[1] == S1


def test_p1_series(E_all, E_split):
    series = all_composition_series(P1, E_all)
    assert len(series) == 1
    assert factor_dims(series[0]) == [(0, 1), (1, 0)]
    assert factor_dims(find_composition_series(P1, E_all)) == [(0, 1), (1, 0)]
    mult = composition_factors(series[0])
    assert [(r.dims, k) for r, k in mult] == [((0, 1), 1), ((1, 0), 1)]
    # P1 is simple for the split structure
    assert [s.length for s in all_composition_series(P1, E_split)] == [1]


def test_repeated_factor_multiplicity(E_all):
    x = rep([2, 0], [[]])
    [(r, k)] = composition_factors(find_composition_series(x, E_all))
    assert r.dims == (1, 0) and k == 2
    assert len(all_composition_series(x, E_all)) == 3  # one per line in F_2^2


def test_series_invariants_rechecked(E_all, E_split):
    for E in (E_all, E_split):
        for x in CORPUS:
            for s in all_composition_series(x, E):
                assert s.problems() == []
                total = tuple(sum(f.dims[v] for f in s.factors) for v in range(2))
                assert total == x.dims
                assert len(s.steps) == s.length
                assert all(e.target == x for e in s.embeddings())


def test_problems_detects_bad_chain(E_all):
    # 0 -> S1+S2 skipping a step: the factor is not simple
    whole = CompositionSeries.from_inflations([RepMorphism.zero(Representation.zero(A2, F2), S1S2)], E_all)
    assert whole.problems() == ["factor 0 is not E-simple"]


def test_two_series_of_semisimple_give_transposition(E_all):
    series = all_composition_series(S1S2, E_all)
    assert len(series) == 2
    a, b = series
    r = baumslag_compare(a, b, E_all)
    assert r.supported and r.verified and r.equal_length
    assert r.sigma == (1, 0)
    for l, f in enumerate(r.factor_isos):
        assert f.is_iso()
        assert f.source == a.factors[l] and f.target == b.factors[r.sigma[l]]
    assert [t.pivot for t in r.refinement_trace] == [0, 0, None]


def test_compare_with_itself_is_identity(E_all):
    for x in CORPUS:
        for s in all_composition_series(x, E_all):
            r = baumslag_compare(s, s, E_all)
            assert r.sigma == tuple(range(s.length))
            assert all(f == RepMorphism.identity(f.source) for f in r.factor_isos)


def test_compare_rejects_different_objects(E_all):
    with pytest.raises(ValueError):
        baumslag_compare(find_composition_series(P1, E_all), find_composition_series(S1S2, E_all), E_all)


@pytest.mark.parametrize("x", CORPUS, ids=lambda x: str(x.dims))
def test_baumslag_agrees_with_direct_comparison(x, E_all):
    series = all_composition_series(x, E_all)
    for a, b in itertools.product(series, series):
        r = baumslag_compare(a, b, E_all)
        direct = a.length == b.length and same_factors(composition_factors(a), composition_factors(b))
        assert direct and r.verified


def test_jh_property_on_corpus(E_all, E_split):
    assert jh_property_check(CORPUS, E_all).passed
    assert jh_property_check(CORPUS, E_split).passed
    assert jh_property_check([Representation.zero(A2, F2)], E_all).passed


def test_length_mismatch_under_broken_structure(workspace):
    E = workspace.structure("custom:jh-broken")
    series = all_composition_series(P1S1, E)
    assert sorted({s.length for s in series}) == [2, 3]
    long = next(s for s in series if s.length == 3)
    short = next(s for s in series if s.length == 2)
    r = baumslag_compare(long, short, E)
    assert not r.equal_length and r.sigma is None and r.witness is not None
    assert r.status == "unsupported structure"
    report = jh_property_check(CORPUS, E)
    assert not report["equal-length"].passed and report["equal-length"].witnesses


def test_unsupported_label(E_split):
    # AI fails for the split structure inside P1+S1, but not inside S1+S2
    s = find_composition_series(P1S1, E_split)
    assert baumslag_compare(s, s, E_split).status == "unsupported structure"
    t = find_composition_series(S1S2, E_split)
    assert baumslag_compare(t, t, E_split).status == "supported"
    assert baumslag_compare(s, s, E_split, assume_ais=True).status == "supported"


@settings(max_examples=25, deadline=None)
@given(x=st.sampled_from(list(all_representations(A3, F2, 3))))
def test_jordan_holder_on_a3(x):
    E = e_all(A3, F2)
    series = all_composition_series(x, E)
    assert series
    base = series[0]
    for s in series:
        r = baumslag_compare(base, s, E, assume_ais=True)
        assert r.verified
        assert all(f.total_dim == 1 for f in s.factors)
        for l, f in enumerate(r.factor_isos):
            assert f.source == base.factors[l] and f.target == s.factors[r.sigma[l]] and f.is_iso()
