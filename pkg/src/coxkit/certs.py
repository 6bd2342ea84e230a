"""Certificates: itemized finite-check records for the tree-product lemmas."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Certificate:
    name: str
    checks: list = field(default_factory=list)
    assumptions: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.get("status") for c in self.checks)

    def check(self, description: str, status: bool, **data) -> bool:
        entry = {"description": description, "status": bool(status)}
        if data:
            entry["data"] = data
        self.checks.append(entry)
        return status

    def assume(self, description: str) -> None:
        self.assumptions.append(description)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "checks": self.checks,
            "assumptions": self.assumptions,
            "data": self.data,
            "elapsed": round(self.elapsed, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)
