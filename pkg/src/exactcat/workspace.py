"""YAML workspaces: ambient data, named representations and structure rules.

A workspace file looks like::

    version: 1
    field: 2
    quiver:
      vertices: 2
      arrows: [[0, 1]]
    representations:
      P1: {dims: [1, 1], maps: [[[1]]]}
    corpus: [P1]                     # optional, defaults to every representation
    structures:
      small: "split or B <= [1, 1]"
    budget:
      max_total_dim: 12

Structure rules are boolean expressions over ``split``, ``nonsplit``, ``all``
and comparisons of the dimension vectors ``A``, ``B``, ``C`` of a sequence
A -> B -> C with integer lists. ``==`` and ``!=`` compare whole vectors; the
order comparisons are componentwise. Rules are parsed with :mod:`ast` and
only that vocabulary is accepted.
"""
from __future__ import annotations

import ast
import dataclasses
import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import yaml

from .budget import Budget, use_budget
from .exactstruct import ExactStructure, InvalidStructure, custom_structure, e_all, e_split, is_split
from .linalg import DimensionError, PrimeField
from .quiverrep import Quiver, Representation, ShortExactSequence

__all__ = [
    "WorkspaceError",
    "Workspace",
    "compile_rule",
    "load_workspace",
    "parse_workspace",
    "canonical_workspace_path",
]

WORKSPACE_VERSION = 1


class WorkspaceError(ValueError):
    """Malformed workspace or unresolvable name."""


Predicate = Callable[[ShortExactSequence], bool]

_FLAGS: dict[str, Predicate] = {
    "split": is_split,
    "nonsplit": lambda s: not is_split(s),
    "all": lambda s: True,
}
_VECTORS = {"A": lambda s: s.left.dims, "B": lambda s: s.middle.dims, "C": lambda s: s.right.dims}


def _vector_operand(node: ast.expr, rule: str) -> Callable[[ShortExactSequence], tuple[int, ...]]:
    if isinstance(node, ast.Name) and node.id in _VECTORS:
        return _VECTORS[node.id]
    if isinstance(node, (ast.List, ast.Tuple)) and all(
        isinstance(e, ast.Constant) and type(e.value) is int for e in node.elts
    ):
        value = tuple(e.value for e in node.elts)
        return lambda s: value
    raise WorkspaceError(f"rule {rule!r}: expected A, B, C or an integer list, got {ast.unparse(node)!r}")


def _vector_compare(op: ast.cmpop, rule: str) -> Callable[[tuple, tuple], bool]:
    def check(u, v, cmp):
        if len(u) != len(v):
            raise WorkspaceError(f"rule {rule!r}: comparing vectors of lengths {len(u)} and {len(v)}")
        return cmp(u, v)

    table = {
        ast.Eq: lambda u, v: check(u, v, lambda a, b: a == b),
        ast.NotEq: lambda u, v: check(u, v, lambda a, b: a != b),
        ast.LtE: lambda u, v: check(u, v, lambda a, b: all(x <= y for x, y in zip(a, b))),
        ast.GtE: lambda u, v: check(u, v, lambda a, b: all(x >= y for x, y in zip(a, b))),
        ast.Lt: lambda u, v: check(u, v, lambda a, b: a != b and all(x <= y for x, y in zip(a, b))),
        ast.Gt: lambda u, v: check(u, v, lambda a, b: a != b and all(x >= y for x, y in zip(a, b))),
    }
    try:
        return table[type(op)]
    except KeyError:
        raise WorkspaceError(f"rule {rule!r}: unsupported comparison") from None


def _compile(node: ast.expr, rule: str) -> Predicate:
    if isinstance(node, ast.BoolOp):
        parts = [_compile(v, rule) for v in node.values]
        if isinstance(node.op, ast.And):
            return lambda s: all(p(s) for p in parts)
        return lambda s: any(p(s) for p in parts)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.Not):
        inner = _compile(node.operand, rule)
        return lambda s: not inner(s)
    if isinstance(node, ast.Name) and node.id in _FLAGS:
        return _FLAGS[node.id]
    if isinstance(node, ast.Compare):
        operands = [_vector_operand(n, rule) for n in [node.left, *node.comparators]]
        ops = [_vector_compare(op, rule) for op in node.ops]

        def compare(s):
            values = [f(s) for f in operands]
            return all(op(values[k], values[k + 1]) for k, op in enumerate(ops))

        return compare
    raise WorkspaceError(f"rule {rule!r}: unsupported expression {ast.unparse(node)!r}")


def compile_rule(rule: str) -> Predicate:
    """Compile a structure rule to a membership predicate on short exact sequences."""
    try:
        tree = ast.parse(rule, mode="eval")
    except SyntaxError as exc:
        raise WorkspaceError(f"rule {rule!r}: {exc.msg}") from None
    return _compile(tree.body, rule)


@dataclass(frozen=True, eq=False)
class Workspace:
    field: PrimeField
    quiver: Quiver
    representations: dict[str, Representation]
    corpus_names: tuple[str, ...]
    rules: dict[str, str]
    budget: Budget
    digest: str

    @property
    def corpus(self) -> list[Representation]:
        return [self.representations[n] for n in self.corpus_names]

    def representation(self, name: str) -> Representation:
        try:
            return self.representations[name]
        except KeyError:
            raise WorkspaceError(f"unknown representation {name!r}") from None

    def structure(self, name: str) -> ExactStructure:
        if name == "all":
            return e_all(self.quiver, self.field)
        if name == "split":
            return e_split(self.quiver, self.field)
        if name.startswith("custom:"):
            rule_name = name.split(":", 1)[1]
            if rule_name not in self.rules:
                raise WorkspaceError(f"unknown structure rule {rule_name!r}")
            pred = compile_rule(self.rules[rule_name])
            audit = [Representation.zero(self.quiver, self.field)]
            audit += [Representation.simple(self.quiver, self.field, v) for v in range(self.quiver.vertex_count)]
            try:
                return custom_structure(self.quiver, self.field, pred, name=name, audit_objects=audit + self.corpus)
            except InvalidStructure as exc:
                raise WorkspaceError(str(exc)) from None
        raise WorkspaceError(f"unknown structure {name!r}; use all, split or custom:<name>")


def _require(d: dict, key: str, kind: type, where: str):
    if key not in d:
        raise WorkspaceError(f"{where}: missing key {key!r}")
    value = d[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise WorkspaceError(f"{where}: {key!r} must be a {kind.__name__}")
    return value


def parse_workspace(data: Any) -> Workspace:
    """Validate a decoded workspace document."""
    if not isinstance(data, dict):
        raise WorkspaceError("workspace must be a mapping")
    version = data.get("version", WORKSPACE_VERSION)
    if version != WORKSPACE_VERSION:
        raise WorkspaceError(f"unsupported workspace version {version!r}")
    try:
        field = PrimeField(_require(data, "field", int, "workspace"))
    except ValueError as exc:
        raise WorkspaceError(str(exc)) from None
    q = _require(data, "quiver", dict, "workspace")
    try:
        arrows = tuple(tuple(a) for a in q.get("arrows", []))
        quiver = Quiver(_require(q, "vertices", int, "quiver"), arrows)
    except (TypeError, ValueError) as exc:
        raise WorkspaceError(f"quiver: {exc}") from None

    budget_data = data.get("budget") or {}
    known = {f.name for f in dataclasses.fields(Budget)}
    if not isinstance(budget_data, dict) or set(budget_data) - known:
        raise WorkspaceError(f"budget: keys must be among {sorted(known)}")
    budget = Budget(**budget_data)

    reps: dict[str, Representation] = {}
    normalized: dict[str, Any] = {}
    raw_reps = _require(data, "representations", dict, "workspace")
    with use_budget(budget):
        for name, entry in raw_reps.items():
            where = f"representation {name!r}"
            if not isinstance(entry, dict):
                raise WorkspaceError(f"{where}: must be a mapping")
            dims = _require(entry, "dims", list, where)
            maps = entry.get("maps", [[] for _ in arrows])
            if len(dims) != quiver.vertex_count or len(maps) != len(arrows):
                raise WorkspaceError(f"{where}: needs {quiver.vertex_count} dims and {len(arrows)} maps")
            try:
                rep = Representation.build(quiver, field, dims, maps)
            except (DimensionError, TypeError, ValueError) as exc:
                raise WorkspaceError(f"{where}: {exc}") from None
            reps[str(name)] = rep
            normalized[str(name)] = {"dims": list(rep.dims), "maps": [m.tolist() for m in rep.arrow_maps]}

    corpus = data.get("corpus", list(reps))
    if not isinstance(corpus, list):
        raise WorkspaceError("corpus must be a list of names")
    for n in corpus:
        if n not in reps:
            raise WorkspaceError(f"corpus refers to unknown representation {n!r}")
    rules = {str(k): str(v) for k, v in (data.get("structures") or {}).items()}
    for rule in rules.values():
        compile_rule(rule)

    canonical = {
        "version": WORKSPACE_VERSION,
        "field": field.p,
        "quiver": {"vertices": quiver.vertex_count, "arrows": [list(a) for a in arrows]},
        "representations": normalized,
        "corpus": list(corpus),
        "structures": rules,
        "budget": dataclasses.asdict(budget),
    }
    digest = hashlib.sha256(json.dumps(canonical, sort_keys=True, separators=(",", ":")).encode()).hexdigest()
    return Workspace(field, quiver, reps, tuple(corpus), rules, budget, digest)


def load_workspace(path: str | Path) -> Workspace:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise WorkspaceError(f"cannot read workspace: {exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise WorkspaceError(f"invalid YAML: {exc}") from None
    return parse_workspace(data)


def canonical_workspace_path() -> Path:
    """The bundled A_2 over F_2 workspace."""
    return Path(str(resources.files("exactcat").joinpath("data/a2_f2.yaml")))
