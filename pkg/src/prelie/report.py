"""Structured verdicts returned by the check_* functions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable


def jsonable(obj):
    """Convert rationals, tuples and nested reports into JSON-friendly values."""
    from .linalg import Matrix, fmt

    if isinstance(obj, Report):
        return obj.to_dict()
    if isinstance(obj, Fraction):
        return fmt(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Matrix):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return str(obj)


@dataclass
class Report:
    """Outcome of a check.

    ``witness`` is the first failing basis tuple (1-based) and ``residual`` the
    nonzero defect found there. ``clauses`` holds named sub-verdicts.
    """

    name: str
    ok: bool
    witness: Any = None
    residual: Any = None
    violations: int = 0
    clauses: dict = field(default_factory=dict)
    note: str = ""

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        d: dict = {"name": self.name, "ok": self.ok}
        if self.witness is not None:
            d["witness"] = jsonable(self.witness)
        if self.residual is not None:
            d["residual"] = jsonable(self.residual)
        if self.violations:
            d["violations"] = self.violations
        if self.clauses:
            d["clauses"] = {k: jsonable(v) for k, v in self.clauses.items()}
        if self.note:
            d["note"] = self.note
        return d

    def failed_clauses(self) -> list[str]:
        return [k for k, v in self.clauses.items() if isinstance(v, Report) and not v.ok]

    def lines(self, indent: int = 0, label: str | None = None) -> list[str]:
        pad = "  " * indent
        title = self.name if label is None or label == self.name else f"{label}: {self.name}"
        head = f"{pad}{'PASS' if self.ok else 'FAIL'} {title}"
        if not self.ok and self.witness is not None:
            head += f" at {jsonable(self.witness)}"
            if self.residual is not None:
                head += f" residual {jsonable(self.residual)}"
        if self.note:
            head += f" ({self.note})"
        out = [head]
        for k, v in self.clauses.items():
            if isinstance(v, Report):
                out.extend(v.lines(indent + 1, label=str(k)))
        return out

    def __str__(self):
        return "\n".join(self.lines())


def scan(name: str, items: Iterable, note: str = "") -> Report:
    """Build a report from ``(witness, residual)`` pairs; a residual is a failure
    when any of its entries is nonzero."""
    first = None
    count = 0
    for witness, residual in items:
        vals = residual if isinstance(residual, (tuple, list)) else (residual,)
        if any(v != 0 for v in vals):
            count += 1
            if first is None:
                first = (witness, residual)
    if first is None:
        return Report(name, True, note=note)
    return Report(name, False, witness=first[0], residual=first[1], violations=count, note=note)


def combine(name: str, clauses: dict, note: str = "") -> Report:
    ok = all(bool(v) for v in clauses.values())
    return Report(name, ok, clauses=dict(clauses), note=note)
