"""Deterministic verification reports.

A report is a JSON object ``{"body": ..., "sha256": ..., ["timestamp": ...]}``.
The body holds the suite name, parameters and results; it is serialised with
sorted keys and floats at 17 significant digits, and ``sha256`` is the hash of
that serialisation.  The optional timestamp lives outside the body.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any

import numpy as np

from . import __version__

SCHEMA_VERSION = 1

PASS, FAIL, INFO = "pass", "fail", "info"


@dataclass
class Check:
    """One check: ``residual`` is compared with ``tolerance`` using ``op``."""

    id: str
    residual: float | None
    tolerance: float | None = None
    op: str = "<"
    status: str | None = None
    detail: Any = None

    def __post_init__(self):
        if self.status is None:
            self.status = PASS if _compare(self.residual, self.tolerance, self.op) else FAIL

    def as_dict(self) -> dict:
        out = {"id": self.id, "status": self.status, "residual": self.residual, "tolerance": self.tolerance,
               "comparison": self.op}
        if self.detail is not None:
            out["detail"] = self.detail
        return out


def _compare(value, tol, op) -> bool:
    if value is None or tol is None:
        return False
    value = float(value)
    if math.isnan(value):
        return False
    return {"<": value < tol, "<=": value <= tol, ">": value > tol, ">=": value >= tol, "==": value == tol}[op]


def flag(id: str, ok: bool, detail=None) -> Check:
    """A boolean check (residual 0 on success, 1 on failure)."""
    return Check(id, 0.0 if ok else 1.0, 0.5, "<", detail=detail)


def info(id: str, value=None, detail=None) -> Check:
    return Check(id, value, None, "", status=INFO, detail=detail)


@dataclass
class Report:
    suite: str
    parameters: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    def add(self, *checks: Check) -> "Report":
        self.checks.extend(checks)
        return self

    def extend(self, other: "Report", prefix: str | None = None) -> "Report":
        prefix = other.suite if prefix is None else prefix
        for c in other.checks:
            self.checks.append(Check(f"{prefix}.{c.id}", c.residual, c.tolerance, c.op, c.status, c.detail))
        if other.parameters:
            self.parameters[prefix] = other.parameters
        return self

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def body(self) -> dict:
        return {
            "schemaVersion": SCHEMA_VERSION,
            "artifactVersion": __version__,
            "suite": self.suite,
            "parameters": self.parameters,
            "results": [c.as_dict() for c in sorted(self.checks, key=lambda c: c.id)],
            "passed": self.passed,
        }

    def to_json(self, timestamp: bool = False) -> str:
        body = dumps(self.body())
        digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
        parts = [f'"body": {_indent(body)}', f'"sha256": "{digest}"']
        if timestamp:
            parts.append(f'"timestamp": "{datetime.now(timezone.utc).isoformat()}"')
        return "{\n  " + ",\n  ".join(parts) + "\n}\n"


def _indent(text: str) -> str:
    return text.replace("\n", "\n  ")


def _scalar(x) -> str:
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, Fraction):
        return json.dumps(str(x)) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return json.dumps(repr(x))
        return format(x, ".17g")
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dumps(obj, level: int = 0) -> str:
    """JSON with sorted keys, two-space indentation and 17-digit floats."""
    pad = "  " * (level + 1)
    end = "  " * level
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, level + 1)}" for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        return "[\n" + ",\n".join(pad + dumps(v, level + 1) for v in obj) + "\n" + end + "]"
    return _scalar(obj)
