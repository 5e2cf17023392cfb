import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exactcat.exactstruct import e_all
from exactcat.intersect_sum import (
    abelian_intersection,
    abelian_sum,
    check_AI,
    check_AIS,
    check_AS,
    intersection,
    intersection_monotone,
    intersection_over_sum_check,
    sum_monotone,
    sum_subobjects,
)
from exactcat.quiverrep import Quiver, canonical_image, cokernel, hom_column, hom_row, is_isomorphic, kernel
from exactcat.simples_schur import enumerate_admissible_subobjects

import oracles
from conftest import A2, CORPUS, F2, P1, P1S1, all_representations

A3 = Quiver.linear(3)
SMALL = list(all_representations(A2, F2, 3)) + list(all_representations(A3, F2, 3))


def image_sets(f):
    return tuple(oracles.columns_span(f.field.p, k.array) for k in canonical_image(f))


def pairs(x, E):
    subs = enumerate_admissible_subobjects(x, E).elements
    return list(itertools.combinations_with_replacement(subs, 2))


@settings(max_examples=40, deadline=None)
@given(x=st.sampled_from(SMALL))
def test_intersection_and_sum_match_set_operations(x):
    E = e_all(x.quiver, F2)
    for a, b in pairs(x, E):
        s = sum_subobjects(a, b, E)
        sa, sb = image_sets(a.inflation), image_sets(b.inflation)
        assert image_sets(s.intersection.inclusion) == tuple(u & v for u, v in zip(sa, sb))
        n = x.dims
        assert image_sets(s.u) == tuple(
            oracles.span(2, n[v], list(sa[v] | sb[v])) for v in range(len(n))
        )
        assert s.intersection.ai_ok and s.as_ok


def test_abelian_structure_is_ais(E_all, corpus):
    report = check_AIS(E_all, corpus)
    assert report.passed
    assert [c.name for c in report.checks] == ["AI", "AS", "AIS"]
    assert report["AI"].checked == 50


def test_split_structure_fails_ai_but_not_as(E_split, corpus):
    assert not check_AI(E_split, corpus).passed
    assert check_AS(E_split, corpus).passed
    assert not check_AIS(E_split, corpus).passed


def test_split_ai_witness(E_split):
    # two embeddings of P1 into P1+S1 meet in S2, which is not a summand
    report = check_AI(E_split, [P1S1])
    assert report["AI"].failures == 1
    w = report["AI"].witnesses[0]
    assert w["x1"]["source"]["dims"] == w["x2"]["source"]["dims"] == [1, 1]


@pytest.mark.parametrize("x", CORPUS, ids=lambda x: str(x.dims))
def test_alternative_constructions_agree(x, E_all):
    for a, b in pairs(x, E_all):
        s = sum_subobjects(a, b, E_all)
        inter = s.intersection
        # intersection as Ker[i1 -i2] and sum as Coker[s1; -s2]
        k, _ = kernel(hom_row([a.inflation, -b.inflation]))
        assert is_isomorphic(k, inter.object) is not None
        c, _ = cokernel(hom_column([inter.s1, -inter.s2]))
        assert is_isomorphic(c, s.object) is not None
        # the abelian formulas give the same subobjects of x
        ai = abelian_intersection(a, b)
        asum = abelian_sum(a, b)
        assert canonical_image(ai.inclusion) == canonical_image(inter.inclusion)
        assert canonical_image(asum.inclusion) == canonical_image(s.u)
        assert is_isomorphic(ai.object, inter.object) is not None
        assert is_isomorphic(asum.object, s.object) is not None
        assert intersection_over_sum_check(a, b, E_all)


def test_intersection_with_self_and_whole(E_all):
    subs = enumerate_admissible_subobjects(P1S1, E_all).elements
    whole = subs[-1]
    for a in subs:
        assert canonical_image(intersection(a, a, E_all).inclusion) == a.key
        assert canonical_image(intersection(a, whole, E_all).inclusion) == a.key
        assert canonical_image(sum_subobjects(a, whole, E_all).u) == whole.key


def test_monotonicity(E_all):
    subs = enumerate_admissible_subobjects(P1S1, E_all).elements
    for x in subs:
        for y, yp in itertools.product(subs, subs):
            if not yp.contains(y):
                continue
            inc = yp.inclusion_of(y)
            m1 = intersection_monotone(x, y, yp, inc, E_all)
            m2 = sum_monotone(x, y, yp, inc, E_all)
            assert m1.admissible and m1.map.is_injective()
            assert m2.admissible and m2.map.is_injective()


def test_parent_mismatch_is_an_error(E_all):
    a = enumerate_admissible_subobjects(P1, E_all).elements[1]
    b = enumerate_admissible_subobjects(P1S1, E_all).elements[1]
    with pytest.raises(ValueError):
        intersection(a, b, E_all)
    with pytest.raises(ValueError):
        abelian_sum(a, b)
