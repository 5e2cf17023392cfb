"""Command-line front end.

Usage::

    exactcat <command> --workspace WS.yaml --structure all|split|custom:NAME
             [--object NAME] [--seed N] [--budget N] [--out PATH] [--timings]

Reports are JSON with sorted keys; without ``--timings`` they depend only on
the workspace, command, structure and seed. Exit status is 0 when every check
passes, 1 when some check fails (witnesses are in the report) and 2 on input
or budget errors. ``EXACTCAT_OUTPUT_DIR``, when set, is the base for relative
``--out`` paths and the default destination when ``--out`` is omitted.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from pathlib import Path
from typing import Any, Callable, Sequence

from .axioms import check_axioms, obscure_axiom_sweep
from .budget import BudgetExceeded, use_budget
from .exactstruct import ExactStructure, InvalidStructure, audit_iso_invariance
from .intersect_sum import check_AIS
from .iso_theorems import GridInconsistency, second_iso_map, second_iso_sequence, third_iso_sequence, three_by_three_sequence
from .jordan_holder import (
    all_composition_series,
    baumslag_compare,
    composition_factors,
    find_composition_series,
    jh_property_check,
    same_factors,
)
from .quiverrep import ShortExactSequence, cokernel, iter_hom
from .report import REPORT_VERSION, CheckResult, morphism_to_dict, rep_to_dict, sequence_to_dict
from .simples_schur import SchurViolation, aut_group_check, enumerate_admissible_subobjects, is_E_simple, schur
from .workspace import Workspace, WorkspaceError, load_workspace

OUTPUT_DIR_ENV = "EXACTCAT_OUTPUT_DIR"


class InputError(Exception):
    pass


Command = Callable[[Workspace, ExactStructure, argparse.Namespace], tuple[list[CheckResult], dict[str, Any]]]


def _names(ws: Workspace):
    return list(zip(ws.corpus_names, ws.corpus))


def _lattice_dict(lattice) -> dict[str, Any]:
    return {
        "elements": [{"dims": list(s.dims), "basis": [k.tolist() for k in s.key]} for s in lattice.elements],
        "order": sorted([list(p) for p in lattice.order]),
    }


def cmd_check_axioms(ws, E, args):
    report = check_axioms(E, ws.corpus)
    checks = list(report.checks) + list(obscure_axiom_sweep(E, ws.corpus).checks)
    # sampled audit: isomorphic copies of every subobject sequence get the same verdict
    seqs = []
    for x in ws.corpus:
        for sub in enumerate_admissible_subobjects(x, E).elements:
            _, q = cokernel(sub.inflation)
            seqs.append(ShortExactSequence(sub.inflation, q))
    audit = CheckResult("iso-invariance", note="membership is stable under random isomorphic transport")
    bad = audit_iso_invariance(E, seqs, seed=args.seed)
    for seq, moved in bad:
        audit.record(False, {"sequence": sequence_to_dict(seq), "transported": sequence_to_dict(moved)})
    audit.checked = len(seqs)
    checks.append(audit)
    return checks, {"bounds": report.bounds}


def cmd_classify(ws, E, args):
    report = check_AIS(E, ws.corpus)
    ai, as_ = report["AI"].passed, report["AS"].passed
    label = "AIS" if ai and as_ else "AI" if ai else "AS" if as_ else "neither"
    return report.checks, {"classification": label, "bounds": report.bounds}


def cmd_simples(ws, E, args):
    objects, simples = [], []
    for name, x in _names(ws):
        lattice = enumerate_admissible_subobjects(x, E)
        simple = is_E_simple(x, E)
        objects.append({"name": name, "dims": list(x.dims), "e_simple": simple, "lattice": _lattice_dict(lattice)})
        if simple:
            simples.append((name, x))

    sweep = CheckResult("schur", note="E-Schur conclusions on every morphism between E-simple corpus objects")
    auts = CheckResult("aut-group", note="non-zero admissible endomorphisms of an E-simple form a group")
    certified = 0
    for _, s in simples:
        for _, t in simples:
            for f in iter_hom(s, t):
                try:
                    verdict = schur(f, E)
                except SchurViolation as exc:
                    sweep.record(False, {"morphism": morphism_to_dict(f), "error": str(exc)})
                    continue
                sweep.record(True)
                certified += verdict.conclusion == "iso-forced"
        auts.record(aut_group_check(s, E), {"object": rep_to_dict(s)})
    details = {"objects": objects, "simples": [n for n, _ in simples], "certified_isomorphisms": certified}
    return [sweep, auts], details


def cmd_series(ws, E, args):
    if not args.object:
        raise InputError("series needs --object")
    x = ws.representation(args.object)
    series = all_composition_series(x, E)
    valid = CheckResult("series-valid", note="every enumerated chain meets the composition-series conditions")
    conserve = CheckResult("dimension-conservation", note="factor dimension vectors sum to the object's")
    out = []
    for s in series:
        problems = s.problems()
        valid.record(not problems, {"series": s.to_dict(), "problems": problems})
        total = [sum(f.dims[v] for f in s.factors) for v in range(len(x.dims))]
        conserve.record(total == list(x.dims), {"series": s.to_dict()})
        d = s.to_dict()
        d["factor_multiset"] = [{"factor": rep_to_dict(r), "multiplicity": k} for r, k in composition_factors(s)]
        out.append(d)
    first = find_composition_series(x, E)
    details = {
        "object": args.object,
        "series": out,
        "first_found": None if first is None else first.to_dict(),
    }
    return [valid, conserve], details


def cmd_jh(ws, E, args):
    report = jh_property_check(ws.corpus, E)
    supported = check_AIS(E, ws.corpus).passed
    agree = CheckResult(
        "baumslag-agrees",
        note="intersect-and-sum verdict matches direct factor comparison"
        + ("" if supported else " (not enforced: structure is not AIS on this corpus)"),
    )
    objects = []
    unsupported_disagreements = 0
    for name, x in _names(ws):
        series = all_composition_series(x, E)
        pairs = []
        for p, a in enumerate(series):
            for q, b in enumerate(series):
                r = baumslag_compare(a, b, E, assume_ais=supported)
                direct = a.length == b.length and same_factors(composition_factors(a), composition_factors(b))
                if supported:
                    agree.record(r.verified == direct, {"object": name, "pair": [p, q], "result": r.to_dict()})
                elif r.verified != direct:
                    unsupported_disagreements += 1
                pairs.append({"pair": [p, q], "direct": direct, **r.to_dict()})
        objects.append({"name": name, "series_count": len(series), "comparisons": pairs})
    details = {
        "status": "supported" if supported else "unsupported structure",
        "objects": objects,
        "unsupported_disagreements": unsupported_disagreements,
    }
    return list(report.checks) + [agree], details


def cmd_iso_theorems(ws, E, args):
    second = CheckResult("second-iso", note="Y∩X -> Y -> (Y+X)/X is admissible")
    second_map = CheckResult("second-iso-map", note="Y/(Y∩X) -> (Y+X)/X is an isomorphism")
    third = CheckResult("third-iso", note="(Y'+X)/X -> (Y''+X)/X -> (Y''+X)/(Y'+X) is admissible")
    grid = CheckResult("three-by-three", note="bottom row of the 3x3 grid is admissible and the grid commutes")
    for x in ws.corpus:
        subs = enumerate_admissible_subobjects(x, E).elements
        for xs in subs:
            for y in subs:
                w = {"x": morphism_to_dict(xs.inflation), "y": morphism_to_dict(y.inflation)}
                second.record(second_iso_sequence(xs, y, E).membership, w)
                try:
                    second_map.record(second_iso_map(xs, y, E).is_iso(), w)
                except GridInconsistency as exc:
                    second_map.record(False, {**w, "error": str(exc)})
                for y2 in subs:
                    if not y2.contains(y):
                        continue
                    inc = y2.inclusion_of(y)
                    w3 = {**w, "y2": morphism_to_dict(y2.inflation)}
                    try:
                        t = third_iso_sequence(xs, y, y2, inc, E)
                        third.record(t.membership and t.details["matches_direct_quotient"], w3)
                    except GridInconsistency as exc:
                        third.record(False, {**w3, "error": str(exc)})
                    try:
                        g = three_by_three_sequence(xs, y, y2, inc, E)
                        ok = g.membership and all(g.details["rows_admissible"]) and all(g.details["columns_admissible"])
                        grid.record(ok, w3)
                    except GridInconsistency as exc:
                        grid.record(False, {**w3, "error": str(exc)})
    return [second, second_map, third, grid], {}


COMMANDS: dict[str, Command] = {
    "check-axioms": cmd_check_axioms,
    "classify": cmd_classify,
    "simples": cmd_simples,
    "series": cmd_series,
    "jh": cmd_jh,
    "iso-theorems": cmd_iso_theorems,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exactcat", description="Exact-structure checks on quiver representations.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--workspace", required=True, help="workspace YAML file")
    parser.add_argument("--structure", required=True, help="all, split or custom:<rule-name>")
    parser.add_argument("--object", help="representation name (series)")
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled audits")
    parser.add_argument("--budget", type=int, help="override the subobject enumeration cutoff")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    return parser


def run(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    ws = load_workspace(args.workspace)
    budget = ws.budget
    if args.budget is not None:
        if args.budget < 1:
            raise InputError("--budget must be positive")
        budget = dataclasses.replace(budget, enumeration_cutoff=args.budget)
    start = time.perf_counter()
    with use_budget(budget):
        E = ws.structure(args.structure)
        checks, details = COMMANDS[args.command](ws, E, args)
    elapsed = time.perf_counter() - start
    passed = all(c.passed for c in checks)
    report = {
        "version": REPORT_VERSION,
        "command": args.command,
        "workspace_digest": ws.digest,
        "structure": args.structure,
        "seed": args.seed,
        "budget": dataclasses.asdict(budget),
        "passed": passed,
        "checks": [c.to_dict() for c in checks],
        "details": details,
    }
    if args.timings:
        report["timings"] = {"seconds": round(elapsed, 3)}
    return report, 0 if passed else 1


def _destination(args: argparse.Namespace) -> Path | None:
    base = os.environ.get(OUTPUT_DIR_ENV)
    if args.out:
        out = Path(args.out)
        return Path(base) / out if base and not out.is_absolute() else out
    if base:
        slug = args.structure.replace(":", "-")
        return Path(base) / f"{args.command}-{slug}.json"
    return None


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, status = run(args)
    except (WorkspaceError, InputError, InvalidStructure, BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    dest = _destination(args)
    if dest is None:
        sys.stdout.write(text)
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
