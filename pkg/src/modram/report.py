"""Verdicts and structured check records shared by the verifiers and the CLI."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INDETERMINATE = "indeterminate"

    @classmethod
    def of(cls, ok: bool | None) -> Verdict:
        if ok is None:
            return cls.INDETERMINATE
        return cls.PASS if ok else cls.FAIL


class Truth(enum.Enum):
    """Three-valued answer for decision procedures that may hit a cap."""

    TRUE = "true"
    FALSE = "false"
    INDETERMINATE = "indeterminate"

    def __bool__(self) -> bool:
        raise TypeError("Truth is three-valued; compare against Truth.TRUE explicitly")

    @classmethod
    def of(cls, ok: bool | None) -> Truth:
        if ok is None:
            return cls.INDETERMINATE
        return cls.TRUE if ok else cls.FALSE


@dataclass
class Check:
    """One verified statement: a stable id, what it is about, verdict and witness."""

    check_id: str
    about: str
    verdict: Verdict
    witness: Any = None
    details: dict[str, Any] = field(default_factory=dict)
    seconds: float | None = None

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_json(self, timing: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "id": self.check_id,
            "about": self.about,
            "verdict": self.verdict.value,
        }
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.details:
            out["details"] = _jsonable(self.details)
        if timing and self.seconds is not None:
            out["seconds"] = round(self.seconds, 4)
        return out


@dataclass
class Report:
    """An ordered collection of checks with an aggregate verdict."""

    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: Report) -> None:
        self.checks.extend(other.checks)

    @property
    def verdict(self) -> Verdict:
        verdicts = {c.verdict for c in self.checks}
        if Verdict.FAIL in verdicts:
            return Verdict.FAIL
        if Verdict.INDETERMINATE in verdicts:
            return Verdict.INDETERMINATE
        return Verdict.PASS

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.verdict is Verdict.FAIL]

    def to_json(self, timing: bool = False) -> dict[str, Any]:
        return {
            "title": self.title,
            "verdict": self.verdict.value,
            "checks": [c.to_json(timing) for c in self.checks],
        }


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    return str(obj)
