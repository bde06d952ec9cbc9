"""
Result records: weight-class verdicts and the report document every CLI
command produces.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


class Verdict(str, Enum):
    IN = "in"
    OUT = "out"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ConstantEstimate:
    """
    A weight-class constant with its verdict.

    curve holds (range in decades, running supremum) pairs from the sweep.
    value is inf when the constant diverges.
    """

    name: str
    value: float
    verdict: Verdict
    reason: str = ""
    curve: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def diverging(self) -> bool:
        return self.verdict is Verdict.OUT

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "value": self.value,
            "verdict": self.verdict.value,
            "reason": self.reason,
            "curve": [[d, v] for d, v in self.curve],
        }


@dataclass
class WeightClassReport:
    weight: Dict[str, Any]
    p: float
    constants: Dict[str, ConstantEstimate] = field(default_factory=dict)
    verdicts: Dict[str, Verdict] = field(default_factory=dict)
    checks: Dict[str, Any] = field(default_factory=dict)

    def verdict(self, name: str) -> Verdict:
        return self.verdicts[name]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "weight": self.weight,
            "p": self.p,
            "constants": {k: c.to_dict() for k, c in self.constants.items()},
            "verdicts": {k: v.value for k, v in self.verdicts.items()},
            "checks": self.checks,
        }


def _jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays and non-finite floats into JSON-safe values."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(value, (np.complexfloating, complex)):
        return {"re": _jsonable(value.real), "im": _jsonable(value.imag)}
    if hasattr(value, "to_dict"):
        return _jsonable(value.to_dict())
    return value


@dataclass
class ReportDocument:
    """Structured output of one CLI command."""

    command: List[str]
    config: Dict[str, Any]
    version: str
    seed: int
    results: Dict[str, Any] = field(default_factory=dict)
    errors: List[Dict[str, Any]] = field(default_factory=list)
    annotations: Dict[str, Any] = field(default_factory=dict)
    curves: Dict[str, List[Tuple[float, float]]] = field(default_factory=dict)
    timestamp: Optional[str] = None

    def add_result(self, name: str, value: Any, annotation: Any = None) -> None:
        self.results[name] = value
        if annotation is not None:
            self.annotations[name] = annotation

    def add_error(self, error: Exception) -> None:
        self.errors.append({
            "type": type(error).__name__,
            "message": str(error),
            "diagnostics": getattr(error, "diagnostics", {}) or {},
        })

    def add_curve(self, name: str, points) -> None:
        self.curves[name] = [(float(t), float(v)) for t, v in points]

    @property
    def ok(self) -> bool:
        return not self.errors

    def _canonical(self) -> Dict[str, Any]:
        return _jsonable({
            "command": self.command,
            "config": self.config,
            "version": self.version,
            "seed": self.seed,
            "results": self.results,
            "errors": self.errors,
            "annotations": self.annotations,
        })

    def digest(self) -> str:
        """SHA-256 of the document without its timestamp."""
        payload = json.dumps(self._canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def to_dict(self) -> Dict[str, Any]:
        data = self._canonical()
        data["digest"] = self.digest()
        data["timestamp"] = self.timestamp or datetime.now(timezone.utc).isoformat()
        return data

    def to_json(self, with_timestamp: bool = True) -> str:
        data = self.to_dict()
        if not with_timestamp:
            data.pop("timestamp")
        return json.dumps(data, sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ReportDocument":
        return cls(
            command=list(data.get("command", [])),
            config=dict(data.get("config", {})),
            version=data.get("version", ""),
            seed=int(data.get("seed", 0)),
            results=dict(data.get("results", {})),
            errors=list(data.get("errors", [])),
            annotations=dict(data.get("annotations", {})),
            timestamp=data.get("timestamp"),
        )
