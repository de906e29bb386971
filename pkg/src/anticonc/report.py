"""Verification report objects shared by the verifiers and the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

SCHEMA_VERSION = "1.0"


def jsonable(obj: Any) -> Any:
    """Convert numpy scalars/arrays and non-finite floats into JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    return obj


@dataclass
class Check:
    """One numeric comparison: ``value`` against ``bound`` with a pass flag."""

    name: str
    value: float
    bound: float | None
    passed: bool
    stderr: float | None = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"name": self.name, "value": self.value, "stderr": self.stderr,
               "bound": self.bound, "pass": bool(self.passed)}
        out.update(self.detail)
        return jsonable(out)


@dataclass
class VerificationReport:
    name: str
    config: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    constants: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, value: float, bound: float | None, passed: bool,
            stderr: float | None = None, **detail) -> Check:
        check = Check(name, value, bound, bool(passed), stderr, detail)
        self.checks.append(check)
        return check

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return jsonable({
            "name": self.name,
            "config": self.config,
            "constants": self.constants,
            "checks": [c.to_dict() for c in self.checks],
            "notes": self.notes,
            "pass": self.passed,
        })
