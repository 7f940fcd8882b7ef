"""Structured experiment reports: named checks, JSON output, CSV columns.

A report is deterministic for a fixed config and seeds except for its
timestamp, which callers can blank out when byte-stable output matters.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import List, Optional

SCHEMA_VERSION = 1

_STATUSES = ("pass", "fail", "info")


@dataclass(frozen=True)
class Check:
    """One measured quantity with an optional tolerance verdict."""

    name: str
    value: float
    tolerance: Optional[float]
    status: str
    detail: str = ""
    direction: str = "upper"

    def __post_init__(self):
        if self.status not in _STATUSES:
            raise ValueError(f"check status must be one of {_STATUSES}, got {self.status!r}")
        if self.direction not in ("upper", "lower"):
            raise ValueError(f"check direction must be 'upper' or 'lower', got {self.direction!r}")

    @classmethod
    def bounded(cls, name: str, value: float, tolerance: float, detail: str = "") -> "Check":
        status = "pass" if value <= tolerance else "fail"
        return cls(name, float(value), float(tolerance), status, detail)

    @classmethod
    def floor(cls, name: str, value: float, minimum: float, detail: str = "") -> "Check":
        """Pass when the value is at least the stated minimum."""
        status = "pass" if value >= minimum else "fail"
        return cls(name, float(value), float(minimum), status, detail, "lower")

    @classmethod
    def info(cls, name: str, value: float, detail: str = "") -> "Check":
        return cls(name, float(value), None, "info", detail)

    def line(self) -> str:
        word = "tolerance" if self.direction == "upper" else "at least"
        tol = "" if self.tolerance is None else f" ({word} {self.tolerance:.6g})"
        tail = f"  {self.detail}" if self.detail else ""
        return f"[{self.status.upper():4s}] {self.name}: {self.value:.6g}{tol}{tail}"


@dataclass
class ExperimentReport:
    experiment: str
    config: dict
    mesh: Optional[dict] = None
    seeds: Optional[dict] = None
    checks: List[Check] = field(default_factory=list)
    timestamp: str = ""

    def __post_init__(self):
        if not self.timestamp:
            self.timestamp = datetime.now(timezone.utc).isoformat()

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "experiment": self.experiment,
            "timestamp": self.timestamp,
            "passed": self.passed,
            "config": self.config,
            "mesh": self.mesh,
            "seeds": self.seeds,
            "checks": [
                {
                    "name": c.name,
                    "value": c.value,
                    "tolerance": c.tolerance,
                    "direction": c.direction,
                    "status": c.status,
                    "detail": c.detail,
                }
                for c in self.checks
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())

    def write_csv(self, path) -> None:
        """Plot-ready columns: one row per check."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["check", "value", "tolerance", "status"])
            for c in self.checks:
                writer.writerow([c.name, repr(c.value), "" if c.tolerance is None else repr(c.tolerance), c.status])

    def lines(self) -> List[str]:
        return [c.line() for c in self.checks]
