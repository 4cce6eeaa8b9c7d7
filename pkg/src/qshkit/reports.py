"""Verdict records shared by every module."""
from __future__ import annotations

from dataclasses import dataclass, field

from .exact import is_zero

PASS = "pass"
FAIL = "fail"
NOT_EVALUATED = "not-evaluated"


@dataclass(frozen=True)
class Check:
    name: str
    verdict: str
    residual: object = None
    ref: str = ""
    evidence: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def residual_value(self) -> float | None:
        return None if self.residual is None else float(self.residual)

    def record(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "residual": self.residual_value(),
            "paper_ref": self.ref,
        }


def check(name: str, residual, tol: float = 1e-10, ref: str = "", evidence: str = "") -> Check:
    """Pass iff the residual vanishes (exactly, or below ``tol`` for floats)."""
    return Check(name, PASS if is_zero(residual, tol) else FAIL, residual, ref, evidence)


def flag(name: str, ok: bool, residual=None, ref: str = "", evidence: str = "") -> Check:
    return Check(name, PASS if ok else FAIL, residual, ref, evidence)


def skipped(name: str, ref: str = "", evidence: str = "") -> Check:
    return Check(name, NOT_EVALUATED, None, ref, evidence)


class Report(list):
    """An ordered list of checks with lookup by name."""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self)

    def __getitem__(self, key):
        if isinstance(key, str):
            for c in self:
                if c.name == key:
                    return c
            raise KeyError(key)
        return super().__getitem__(key)

    def names(self) -> list[str]:
        return [c.name for c in self]


@dataclass
class SubspaceReport:
    checks: Report = field(default_factory=Report)
    signatures: dict = field(default_factory=dict)

    def add(self, c: Check) -> Check:
        self.checks.append(c)
        return c

    def verdict(self, name: str) -> str:
        return self.checks[name].verdict

    @property
    def verdicts(self) -> dict[str, str]:
        return {c.name: c.verdict for c in self.checks}

    @property
    def residuals(self) -> dict[str, float]:
        return {c.name: c.residual_value() for c in self.checks if c.residual is not None}

    @property
    def evidence(self) -> dict[str, str]:
        return {c.name: c.evidence for c in self.checks if c.evidence}

    def to_json(self) -> dict:
        return {
            "verdicts": self.verdicts,
            "residuals": self.residuals,
            "evidence": self.evidence,
            "signatures": {k: list(v) for k, v in self.signatures.items()},
        }


@dataclass
class ExampleReport:
    name: str
    params: dict
    dimensions: dict = field(default_factory=dict)
    checks: Report = field(default_factory=Report)
    identity_residuals: dict = field(default_factory=dict)

    def add(self, c: Check) -> Check:
        self.checks.append(c)
        return c

    def extend(self, cs) -> None:
        for c in cs:
            self.add(c)

    @property
    def passed(self) -> bool:
        return self.checks.passed

    def verdict(self, name: str) -> str:
        return self.checks[name].verdict

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "dimensions": self.dimensions,
            "verdicts": {c.name: c.verdict for c in self.checks},
            "identity_residuals": {k: float(v) for k, v in self.identity_residuals.items()},
        }
