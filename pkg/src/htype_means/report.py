"""Pass/fail records shared by the verification suites and the CLI."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "config", "suites", "pass"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "config": {"type": "object"},
        "pass": {"type": "boolean"},
        "wall_time": {"type": "number"},
        "suites": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["suite", "checks", "pass"],
                "additionalProperties": False,
                "properties": {
                    "suite": {"type": "string"},
                    "pass": {"type": "boolean"},
                    "wall_time": {"type": "number"},
                    "checks": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["name", "max_abs_err", "rel_err", "tol", "metric", "pass"],
                            "additionalProperties": False,
                            "properties": {
                                "name": {"type": "string"},
                                "max_abs_err": {"type": "number"},
                                "rel_err": {"type": "number"},
                                "tol": {"type": "number"},
                                "metric": {"enum": ["abs", "rel", "min"]},
                                "pass": {"type": "boolean"},
                            },
                        },
                    },
                },
            },
        },
    },
}


def _finite(x: float) -> float:
    x = float(x)
    return x if math.isfinite(x) else 1e308


@dataclass
class Check:
    name: str
    max_abs_err: float
    rel_err: float
    tol: float
    metric: str = "abs"

    @property
    def passed(self) -> bool:
        if self.metric == "min":
            # lower bound: the observed value sits in max_abs_err
            return bool(math.isfinite(self.max_abs_err) and self.max_abs_err >= self.tol)
        err = self.rel_err if self.metric == "rel" else self.max_abs_err
        return bool(math.isfinite(err) and err <= self.tol)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "max_abs_err": _finite(self.max_abs_err),
            "rel_err": _finite(self.rel_err),
            "tol": float(self.tol),
            "metric": self.metric,
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    config_echo: dict = field(default_factory=dict)
    wall_time: float | None = None

    def add(self, name: str, abs_err: float, tol: float, rel_err: float | None = None, metric: str = "abs") -> Check:
        chk = Check(name, float(abs_err), float(abs_err if rel_err is None else rel_err), float(tol), metric)
        self.checks.append(chk)
        return chk

    def add_bool(self, name: str, ok: bool) -> Check:
        return self.add(name, 0.0 if ok else 1.0, 0.0)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self, timing: bool = False) -> dict:
        out = {"suite": self.suite, "checks": [c.to_dict() for c in self.checks], "pass": self.passed}
        if timing and self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 6)
        return out
