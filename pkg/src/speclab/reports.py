"""Theorem-check reports and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass
class Hypothesis:
    name: str
    holds: bool
    witness: Any = None


@dataclass
class TheoremReport:
    """Outcome of one executable check.

    ``passed`` is true exactly when every hypothesis holds and the conclusion
    defect is within ``tolerance``. A failed hypothesis makes the report
    not-applicable rather than failed.
    """

    theorem_id: str
    hypotheses: list[Hypothesis] = field(default_factory=list)
    conclusion_defect: float = 0.0
    tolerance: float = 0.0
    tolerances: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    seed: int | None = None

    @property
    def applicable(self) -> bool:
        return all(h.holds for h in self.hypotheses)

    @property
    def passed(self) -> bool:
        return self.applicable and bool(self.conclusion_defect <= self.tolerance)

    @property
    def status(self) -> str:
        if not self.applicable:
            return NOT_APPLICABLE
        return PASS if self.passed else FAIL

    def hypothesis(self, name: str) -> Hypothesis:
        for h in self.hypotheses:
            if h.name == name:
                return h
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "status": self.status,
            "pass": self.passed,
            "hypotheses": [
                {"name": h.name, "pass": bool(h.holds), "witness": to_jsonable(h.witness)} for h in self.hypotheses
            ],
            "defect": to_jsonable(self.conclusion_defect),
            "tolerance": self.tolerance,
            "tolerances": to_jsonable(self.tolerances),
            "details": to_jsonable(self.details),
            "seed": self.seed,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)


def not_applicable(theorem_id: str, name: str, witness=None, **details) -> TheoremReport:
    return TheoremReport(theorem_id, [Hypothesis(name, False, witness)], details=details)


def to_jsonable(obj):
    """Convert numpy scalars/arrays and complex numbers to JSON-friendly values."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_finite(obj.real), _finite(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _finite(float(obj))
    return obj


def _finite(v: float):
    v = float(v)
    if np.isnan(v):
        return "nan"
    if np.isinf(v):
        return "inf" if v > 0 else "-inf"
    # round-trip stable repr keeps reports byte-identical across runs
    return float(repr(v))
