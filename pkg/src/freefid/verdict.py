"""Verdict record shared by the Hankel test and the analytic classifiers."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Status(str, Enum):
    CertifiedNotFID = "CertifiedNotFID"
    KnownFID = "KnownFID"
    Inconclusive = "Inconclusive"


class Reason(str, Enum):
    ExponentInI = "ExponentInI"
    ParamRegion = "ParamRegion"
    HankelNegative = "HankelNegative"
    SubordinationEndpoint = "SubordinationEndpoint"
    IndicatorCritical = "IndicatorCritical"


@dataclass
class FidVerdict:
    status: Status
    reason: Reason | None = None
    evidence: dict[str, Any] = field(default_factory=dict)
    citation: str = ""

    def __post_init__(self):
        if self.status is not Status.Inconclusive and not (self.citation or self.evidence):
            raise ValueError("a definite verdict needs a citation or evidence")

    @property
    def definite(self) -> bool:
        return self.status is not Status.Inconclusive

    def to_dict(self) -> dict:
        return {"status": self.status.value,
                "reason": None if self.reason is None else self.reason.value,
                "citation": self.citation,
                "evidence": _jsonable(self.evidence)}


def _jsonable(x):
    from fractions import Fraction
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, int) and not isinstance(x, bool) and abs(x) > 2 ** 53:
        return str(x)
    return x
