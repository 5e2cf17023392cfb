"""Acceptance criteria, one test each.

Every test prints a ``PASS criterion N: ...`` or ``FAIL criterion N: ...`` line
and the lines are repeated in the pytest terminal summary.
"""

import collections
import contextlib
import functools
import io
import itertools
import json
import os
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from exactcat.axioms import check_axioms
from exactcat.cli import main
from exactcat.exactstruct import e_all, is_split
from exactcat.intersect_sum import (
    abelian_intersection,
    abelian_sum,
    intersection_over_sum_check,
    sum_subobjects,
)
from exactcat.iso_theorems import second_iso_map, second_iso_sequence, third_iso_sequence, three_by_three_sequence
from exactcat.jordan_holder import (
    all_composition_series,
    baumslag_compare,
    composition_factors,
    jh_property_check,
    same_factors,
)
from exactcat.quiverrep import (
    Quiver,
    ShortExactSequence,
    canonical_image,
    cokernel,
    hom_column,
    hom_dimension,
    hom_row,
    is_isomorphic,
    iter_hom,
    kernel,
)
from exactcat.report import morphism_from_dict
from exactcat.simples_schur import AdmissibleSubobject, enumerate_admissible_subobjects, quotient
from exactcat.workspace import canonical_workspace_path, compile_rule, load_workspace

import oracles
from conftest import A2, CORPUS, F2, P1, S1, S1S2, S2, all_representations

RESULTS: dict[int, str] = {}
WORKSPACE = str(canonical_workspace_path())
STRUCTURES = ["all", "split", "custom:broken", "custom:jh-broken"]
ENDO_SAMPLE = 32


def criterion(number, title, limit):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                note = fn(*args, **kwargs)
                elapsed = time.perf_counter() - start
                assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
            except BaseException as exc:
                RESULTS[number] = f"FAIL criterion {number}: {title} ({exc.__class__.__name__}: {exc})"
                print(RESULTS[number])
                raise
            RESULTS[number] = f"PASS criterion {number}: {title} [{elapsed:.1f}s{'; ' + note if note else ''}]"
            print(RESULTS[number])

        return run

    return wrap


def cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        status = main(list(argv))
    return status, buf.getvalue()


def sets(f):
    return tuple(oracles.columns_span(f.field.p, k.array) for k in canonical_image(f))


@criterion(1, "abelian structure classifies as AIS", 5)
def test_criterion_1_abelian_is_ais():
    status, out = cli("classify", "--workspace", WORKSPACE, "--structure", "all")
    report = json.loads(out)
    verdicts = {c["name"]: c["passed"] for c in report["checks"]}
    assert status == 0 and verdicts == {"AI": True, "AS": True, "AIS": True}
    assert report["details"]["classification"] == "AIS"
    return f"{report['checks'][0]['checked']} subobject pairs"


@criterion(2, "axiom suite and replayable broken-rule witness", 5)
def test_criterion_2_axioms():
    ws = load_workspace(WORKSPACE)
    for name in ("all", "split"):
        assert check_axioms(ws.structure(name), ws.corpus).passed
    status, out = cli("check-axioms", "--workspace", WORKSPACE, "--structure", "custom:broken")
    report = json.loads(out)
    [a1] = [c for c in report["checks"] if c["name"] == "A1"]
    assert status == 1 and not a1["passed"] and a1["witnesses"]

    # replay the embedded matrices with plain numpy arithmetic
    w = a1["witnesses"][0]
    i = morphism_from_dict(w["i"], A2, F2)
    j = morphism_from_dict(w["j"], A2, F2)
    assert j.source == i.target
    for m in (i, j):
        for a, (s, t) in enumerate(A2.arrows):
            left = (m.target.arrow_maps[a].array @ m.vertex_maps[s].array) % 2
            right = (m.vertex_maps[t].array @ m.source.arrow_maps[a].array) % 2
            assert np.array_equal(left, right)
    comp = [(b.array @ a.array) % 2 for a, b in zip(i.vertex_maps, j.vertex_maps)]
    assert all(oracles.rank(2, c) == c.shape[1] for c in comp)
    # the rule admits both legs but not the composite's sequence
    rule = compile_rule(ws.rules["broken"])
    for m in (i, j):
        seq = ShortExactSequence(m, cokernel(m)[1])
        assert is_split(seq) or all(d <= 1 for d in seq.middle.dims)
        assert rule(seq)
    composite = j @ i
    seq = ShortExactSequence(composite, cokernel(composite)[1])
    assert not rule(seq) and not is_split(seq)
    return f"witness middle dims {list(seq.middle.dims)}"


@criterion(3, "Schur sweep matches brute-force isomorphism count", 5)
def test_criterion_3_schur():
    status, out = cli("simples", "--workspace", WORKSPACE, "--structure", "all")
    report = json.loads(out)
    assert status == 0
    assert all(c["failures"] == 0 for c in report["checks"])
    names = report["details"]["simples"]
    ws = load_workspace(WORKSPACE)
    simples = [ws.representation(n) for n in names]
    brute = sum(
        all(oracles.is_bijective(2, m) for m in h)
        for s, t in itertools.product(simples, simples)
        for h in oracles.homs(s, t)
    )
    assert report["details"]["certified_isomorphisms"] == brute == 2
    return f"{brute} isomorphisms among {names}"


@criterion(4, "intersection and sum agree with abelian constructions", 10)
def test_criterion_4_intersection_sum(E_all):
    n = 0
    for x in CORPUS:
        subs = enumerate_admissible_subobjects(x, E_all).elements
        for a, b in itertools.combinations_with_replacement(subs, 2):
            s = sum_subobjects(a, b, E_all)
            inter = s.intersection
            k, _ = kernel(hom_row([a.inflation, -b.inflation]))
            c, _ = cokernel(hom_column([inter.s1, -inter.s2]))
            assert is_isomorphic(k, inter.object) is not None
            assert is_isomorphic(c, s.object) is not None
            ai, asum = abelian_intersection(a, b), abelian_sum(a, b)
            assert canonical_image(ai.inclusion) == canonical_image(inter.inclusion)
            assert canonical_image(asum.inclusion) == canonical_image(s.u)
            assert is_isomorphic(ai.object, inter.object) is not None
            assert is_isomorphic(asum.object, s.object) is not None
            assert intersection_over_sum_check(a, b, E_all)
            n += 1
    return f"{n} pairs"


@criterion(5, "second, third and 3x3 isomorphism sequences", 10)
def test_criterion_5_iso_sequences(E_all):
    pairs = triples = 0
    for x in CORPUS:
        subs = enumerate_admissible_subobjects(x, E_all).elements
        for xs, y in itertools.product(subs, subs):
            assert second_iso_sequence(xs, y, E_all).membership
            assert second_iso_map(xs, y, E_all).is_iso()
            # Y/(Y∩X) and (Y+X)/X built directly as quotient representations
            s = sum_subobjects(y, xs, E_all)
            left = quotient(y.object, AdmissibleSubobject.of(s.intersection.s1, E_all))[0]
            right = quotient(s.object, AdmissibleSubobject.of(s.j2, E_all))[0]
            assert is_isomorphic(left, right) is not None
            pairs += 1
        for xs, y1, y2 in itertools.product(subs, repeat=3):
            if not y2.contains(y1):
                continue
            inc = y2.inclusion_of(y1)
            t = third_iso_sequence(xs, y1, y2, inc, E_all)
            g = three_by_three_sequence(xs, y1, y2, inc, E_all)
            assert t.membership and t.details["matches_direct_quotient"]
            assert g.membership and all(g.details["squares"].values())
            assert all(g.details["rows_admissible"]) and all(g.details["columns_admissible"])
            triples += 1
    return f"{pairs} pairs, {triples} triples"


@criterion(6, "Jordan-Hoelder on the corpus", 10)
def test_criterion_6_jordan_holder(E_all, E_split):
    [p1] = all_composition_series(P1, E_all)
    mult = composition_factors(p1)
    assert [k for _, k in mult] == [1, 1]
    assert all(is_isomorphic(f, s) is not None for (f, _), s in zip(mult, (S2, S1)))

    a, b = all_composition_series(S1S2, E_all)
    r = baumslag_compare(a, b, E_all)
    assert r.supported and r.verified and r.sigma == (1, 0)
    assert all(f.is_iso() and f.source == a.factors[l] and f.target == b.factors[r.sigma[l]] for l, f in enumerate(r.factor_isos))

    assert jh_property_check(CORPUS, E_all).passed
    assert jh_property_check(CORPUS, E_split).passed

    compared = 0
    for x in CORPUS:
        series = all_composition_series(x, E_all)
        for s, t in itertools.product(series, series):
            direct = s.length == t.length and same_factors(composition_factors(s), composition_factors(t))
            assert baumslag_compare(s, t, E_all).verified == direct
            compared += 1
    return f"{compared} series pairs"


@functools.lru_cache(maxsize=None)
def oracle_homs(x, y):
    return oracles.homs(x, y)


def oracle_isomorphic(x, y):
    return x.dims == y.dims and any(all(oracles.is_bijective(2, m) for m in h) for h in oracle_homs(x, y))


@criterion(7, "brute-force oracle equivalence up to total dimension 4", 60)
def test_criterion_7_oracles():
    reps = [r for n in (1, 2, 3) for r in all_representations(Quiver.linear(n), F2, 4)]
    maps = 0
    for x in reps:
        lattice = enumerate_admissible_subobjects(x, e_all(x.quiver, F2))
        assert {sets(s.inflation) for s in lattice.elements} == oracles.subrepresentations(x)

        endo = oracle_homs(x, x)
        assert 2 ** hom_dimension(x, x) == len(endo)
        homs = list(iter_hom(x, x))
        for f in homs[:: max(1, len(homs) // ENDO_SAMPLE)][:ENDO_SAMPLE]:
            arrays = [m.array for m in f.vertex_maps]
            k, ki = kernel(f)
            assert sets(ki) == tuple(oracles.kernel_vectors(2, a) for a in arrays)
            c, q = cokernel(f)
            assert c.dims == tuple(d - oracles.rank(2, a) for d, a in zip(x.dims, arrays))
            assert sets(kernel(q)[1]) == tuple(oracles.image_vectors(2, a) for a in arrays)
            maps += 1

    groups = collections.defaultdict(list)
    for x in reps:
        groups[(x.quiver.vertex_count, x.dims)].append(x)
    pairs = 0
    for group in groups.values():
        for a, b in itertools.combinations_with_replacement(group, 2):
            assert (is_isomorphic(a, b) is not None) == oracle_isomorphic(a, b)
            pairs += 1
    return f"{len(reps)} representations, {maps} endomorphisms, {pairs} isomorphism pairs"


def _invocations():
    out = []
    for structure in STRUCTURES:
        for command in ("check-axioms", "classify", "simples", "jh", "iso-theorems"):
            out.append([command, "--structure", structure])
        for name in ("P1", "S1+S2", "P1+S1"):
            out.append(["series", "--structure", structure, "--object", name])
    return out


def _run_subprocess(argv, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    env.pop("EXACTCAT_OUTPUT_DIR", None)
    proc = subprocess.run(
        [sys.executable, "-m", "exactcat.cli", *argv, "--workspace", WORKSPACE, "--seed", "3"],
        capture_output=True,
        env=env,
        check=False,
    )
    return proc.returncode, proc.stdout


@criterion(8, "byte-identical reports across runs", 120)
def test_criterion_8_determinism():
    jobs = [(argv, seed) for argv in _invocations() for seed in (1, 2)]
    with ThreadPoolExecutor(max_workers=os.cpu_count() or 2) as pool:
        results = list(pool.map(lambda job: _run_subprocess(*job), jobs))
    for k in range(0, len(results), 2):
        (s1, o1), (s2, o2) = results[k], results[k + 1]
        assert s1 == s2 and s1 in (0, 1), jobs[k][0]
        assert o1 == o2 and o1, jobs[k][0]
    return f"{len(jobs) // 2} invocations, different hash seeds"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
