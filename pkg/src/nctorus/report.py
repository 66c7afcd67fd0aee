"""Verification reports: check records, JSON/CSV emission and a stable digest."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import platform
from dataclasses import asdict, dataclass, field
from typing import Any

__all__ = ["SCHEMA_VERSION", "REPORT_SCHEMA", "CATALOG_SCHEMA", "Check", "ScenarioReport"]

SCHEMA_VERSION = "1.0"


@dataclass(frozen=True)
class Check:
    """One verified quantity.

    ``value`` is the measured number (a residual, ratio or trace), ``tolerance``
    the bound it was held to and ``anchor`` names the statement being tested.
    """

    name: str
    value: float
    tolerance: float
    passed: bool
    anchor: str
    uncertainty: float = 0.0
    note: str = ""

    def to_json_obj(self) -> dict[str, Any]:
        obj = asdict(self)
        for key in ("value", "tolerance", "uncertainty"):
            obj[key] = _finite(obj[key])
        return obj


def _finite(x: float) -> float | str:
    # JSON has no inf/nan; spell them out so the file stays standard
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def _versions() -> dict[str, str]:
    import numba
    import numpy

    from . import __version__

    return {
        "nctorus": __version__,
        "numpy": numpy.__version__,
        "numba": numba.__version__,
        "python": platform.python_version(),
    }


@dataclass
class ScenarioReport:
    scenario: str
    description: str
    anchor: str
    config: dict[str, Any]
    conventions: dict[str, Any]
    checks: list[Check] = field(default_factory=list)
    wall_time: float = 0.0
    timestamp: str = ""
    versions: dict[str, str] = field(default_factory=_versions)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def _stable_obj(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "scenario": self.scenario,
            "description": self.description,
            "anchor": self.anchor,
            "passed": self.passed,
            "environment": {"config": self.config, "conventions": self.conventions, "versions": self.versions},
            "checks": [c.to_json_obj() for c in self.checks],
        }

    def digest(self) -> str:
        """sha256 of the canonical JSON without the timing block."""
        blob = json.dumps(self._stable_obj(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_json_obj(self) -> dict[str, Any]:
        obj = self._stable_obj()
        obj["digest"] = self.digest()
        obj["timing"] = {"timestamp": self.timestamp, "wall_time_s": round(self.wall_time, 3)}
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["scenario", "name", "value", "uncertainty", "tolerance", "passed", "anchor", "note"]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for c in self.checks:
            row = c.to_json_obj()
            w.writerow({"scenario": self.scenario, **{k: row[k] for k in cols[1:]}})
        return buf.getvalue()

    def summary(self) -> str:
        lines = [f"{self.scenario}: {'PASS' if self.passed else 'FAIL'} ({len(self.checks)} checks, {self.wall_time:.1f} s)"]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.name}: {c.value:.3e} (tol {c.tolerance:.1e})" + (f"  {c.note}" if c.note else ""))
        return "\n".join(lines)


_NUMBER = {"oneOf": [{"type": "number"}, {"enum": ["nan", "inf", "-inf"]}]}

REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "nctorus scenario report",
    "type": "object",
    "required": ["schema_version", "scenario", "description", "anchor", "passed", "environment", "checks", "digest", "timing"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "scenario": {"type": "string"},
        "description": {"type": "string"},
        "anchor": {"type": "string", "minLength": 1},
        "passed": {"type": "boolean"},
        "digest": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "environment": {
            "type": "object",
            "required": ["config", "conventions", "versions"],
            "properties": {
                "config": {"type": "object"},
                "conventions": {"type": "object"},
                "versions": {"type": "object", "additionalProperties": {"type": "string"}},
            },
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "value", "uncertainty", "tolerance", "passed", "anchor", "note"],
                "properties": {
                    "name": {"type": "string"},
                    "value": _NUMBER,
                    "uncertainty": _NUMBER,
                    "tolerance": _NUMBER,
                    "passed": {"type": "boolean"},
                    "anchor": {"type": "string", "minLength": 1},
                    "note": {"type": "string"},
                },
                "additionalProperties": False,
            },
        },
        "timing": {
            "type": "object",
            "required": ["timestamp", "wall_time_s"],
            "properties": {"timestamp": {"type": "string"}, "wall_time_s": {"type": "number"}},
        },
    },
    "additionalProperties": False,
}

CATALOG_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "nctorus scenario catalog",
    "type": "array",
    "items": {
        "type": "object",
        "required": ["name", "description", "anchor"],
        "properties": {
            "name": {"type": "string", "pattern": "^[a-z0-9-]+$"},
            "description": {"type": "string", "minLength": 1},
            "anchor": {"type": "string", "minLength": 1},
        },
        "additionalProperties": False,
    },
}
