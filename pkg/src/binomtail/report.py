"""Verification report data model and its JSON form."""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    HOLDS_WITH_EQUALITY = "holds_with_equality"
    VIOLATED = "violated"
    INDETERMINATE = "indeterminate"


def rational_str(q) -> str:
    """Exact ``"num/den"`` form used for rationals in reports."""
    q = Fraction(int(q.numerator), int(q.denominator))
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Cell:
    """One checked parameter point.

    ``params`` and ``witness`` hold JSON-ready values only (ints, strings,
    nested dicts) so a report survives a round trip unchanged.
    """

    check: str
    params: dict
    verdict: Verdict
    witness: dict = field(default_factory=dict)

    def sort_key(self):
        p = self.params
        p_val = Fraction(p["p"]) if "p" in p else Fraction(-1)
        return (
            self.check,
            p.get("n", -1),
            p.get("k", -1),
            p_val,
            json.dumps(p, sort_keys=True),
        )

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "params": self.params,
            "verdict": self.verdict.value,
            "witness": self.witness,
        }

    @classmethod
    def from_json(cls, obj: dict) -> Cell:
        return cls(obj["check"], obj["params"], Verdict(obj["verdict"]), obj["witness"])


@dataclass
class VerificationReport:
    suite: str
    grid: dict
    cells: list[Cell]
    precision: int
    duration_s: float | None = None

    def __post_init__(self):
        self.cells = sorted(self.cells, key=Cell.sort_key)

    @property
    def summary(self) -> dict:
        counts = Counter(c.verdict for c in self.cells)
        out = {v.value: counts.get(v, 0) for v in Verdict}
        out["cells"] = len(self.cells)
        out["passed"] = self.passed
        return out

    @property
    def passed(self) -> bool:
        return not any(c.verdict in (Verdict.VIOLATED, Verdict.INDETERMINATE) for c in self.cells)

    def count(self, verdict: Verdict, check_prefix: str = "") -> int:
        return sum(1 for c in self.cells if c.verdict is verdict and c.check.startswith(check_prefix))

    def select(self, check_prefix: str) -> list[Cell]:
        return [c for c in self.cells if c.check.startswith(check_prefix)]

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "grid": self.grid,
            "cells": [c.to_json() for c in self.cells],
            "summary": self.summary,
            "precision": self.precision,
            "duration_s": self.duration_s,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def loads(cls, text: str) -> VerificationReport:
        obj = json.loads(text)
        report = cls(
            suite=obj["suite"],
            grid=obj["grid"],
            cells=[Cell.from_json(c) for c in obj["cells"]],
            precision=obj["precision"],
            duration_s=obj["duration_s"],
        )
        if report.summary != obj["summary"]:
            raise ValueError("summary does not match the cell tally")
        return report

    def summary_line(self) -> str:
        s = self.summary
        status = "PASS" if self.passed else "FAIL"
        counts = ", ".join(f"{v.value}={s[v.value]}" for v in Verdict)
        return f"{status} {self.suite}: {s['cells']} cells ({counts})"
