"""Pass/fail reports with replayable witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .linalg import Matrix, PrimeField
from .quiverrep import Quiver, RepMorphism, Representation, ShortExactSequence

REPORT_VERSION = 1
MAX_WITNESSES = 5


def rep_to_dict(x: Representation) -> dict[str, Any]:
    return {"dims": list(x.dims), "maps": [m.tolist() for m in x.arrow_maps]}


def rep_from_dict(d: dict[str, Any], quiver: Quiver, field: PrimeField) -> Representation:
    return Representation.build(quiver, field, d["dims"], d["maps"])


def morphism_to_dict(f: RepMorphism) -> dict[str, Any]:
    return {
        "source": rep_to_dict(f.source),
        "target": rep_to_dict(f.target),
        "maps": [m.tolist() for m in f.vertex_maps],
    }


def morphism_from_dict(d: dict[str, Any], quiver: Quiver, field: PrimeField) -> RepMorphism:
    x = rep_from_dict(d["source"], quiver, field)
    y = rep_from_dict(d["target"], quiver, field)
    maps = tuple(Matrix(field, g, shape=(y.dims[v], x.dims[v])) for v, g in enumerate(d["maps"]))
    return RepMorphism(x, y, maps)


def sequence_to_dict(seq: ShortExactSequence) -> dict[str, Any]:
    return {"i": morphism_to_dict(seq.i), "d": morphism_to_dict(seq.d)}


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    checked: int = 0
    failures: int = 0
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    note: str = ""

    def record(self, ok: bool, witness: dict[str, Any] | None = None) -> None:
        self.checked += 1
        if not ok:
            self.passed = False
            self.failures += 1
            if witness is not None and len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(witness)

    def to_dict(self) -> dict[str, Any]:
        out = {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "witnesses": self.witnesses,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class AxiomReport:
    structure: str
    checks: list[CheckResult] = field(default_factory=list)
    bounds: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, note: str = "") -> CheckResult:
        c = CheckResult(name, note=note)
        self.checks.append(c)
        return c

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    def to_dict(self) -> dict[str, Any]:
        return {
            "structure": self.structure,
            "passed": self.passed,
            "bounds": self.bounds,
            "checks": [c.to_dict() for c in self.checks],
        }
