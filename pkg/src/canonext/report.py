from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """Outcome of a batch of named universal checks.

    ``checks`` maps a check name to pass/fail; ``witnesses`` holds the
    first counterexample of each failed check (and, for some checks, the
    positive witnesses that were found).  A report with
    ``applicable=False`` records a vacuous check, which counts as passed.
    """

    name: str
    checks: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, Any] = field(default_factory=dict)
    info: dict[str, Any] = field(default_factory=dict)
    applicable: bool = True

    def record(self, check: str, ok: bool, witness: Any = None) -> bool:
        self.checks[check] = self.checks.get(check, True) and bool(ok)
        if not ok and check not in self.witnesses:
            self.witnesses[check] = witness
        return bool(ok)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, ok in self.checks.items() if not ok]

    def __bool__(self) -> bool:
        return self.passed

    def require(self) -> "Report":
        if not self.passed:
            detail = "; ".join(f"{k}: {self.witnesses.get(k)!r}" for k in self.failures())
            raise AssertionError(f"{self.name} failed: {detail}")
        return self

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "applicable": self.applicable,
            "checks": dict(self.checks),
            "witnesses": {k: _jsonable(v) for k, v in self.witnesses.items()},
            "info": {k: _jsonable(v) for k, v in self.info.items()},
        }


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if hasattr(v, "item"):
        return v.item()
    return str(v)
