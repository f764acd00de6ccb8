"""Named residual checks shared by the verification suites and the CLI report."""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        """Plain-JSON form; non-finite residuals become strings ("inf", "nan")."""
        residual = float(self.residual)
        return {
            "name": self.name,
            "residual": residual if math.isfinite(residual) else str(residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }


def exact(name: str, ok: bool) -> Check:
    """An identity that either holds exactly or not at all."""
    return Check(name, 0.0 if ok else 1.0, 0.0)


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)
