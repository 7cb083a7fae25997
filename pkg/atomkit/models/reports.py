"""
Pydantic models for verification verdicts and check reports.
"""
import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .estimates import BoundEstimate


class CheckResult(BaseModel):
    """One named sub-check with the residual it was judged on."""

    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    residual: float = Field(ge=0)
    tol: Optional[float] = None

    @classmethod
    def within(cls, name: str, residual: float, tol: float) -> "CheckResult":
        residual = float(residual)
        return cls(name=name, passed=bool(residual <= tol), residual=residual, tol=tol)


class CheckReport(BaseModel):
    """Collection of sub-checks; passes iff every check passes."""

    model_config = ConfigDict(frozen=True)

    name: str
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def get(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)


class Certificate(BaseModel):
    """Machine-readable verdict on an atomic system, local atoms or a decomposition."""

    model_config = ConfigDict(frozen=True)

    verdict: bool
    tol: float
    bessel_atoms: BoundEstimate
    bessel_functionals: BoundEstimate
    level_residuals: List[float] = Field(default_factory=list)
    constants: Optional[Tuple[float, float]] = None
    notes: List[CheckResult] = Field(default_factory=list)
    kind: str = "atomic-system"

    @model_validator(mode="after")
    def _verdict_consistent(self) -> "Certificate":
        if self.verdict:
            final = self.level_residuals[-1] if self.level_residuals else 0.0
            if final > self.tol:
                raise ValueError("passing certificate with final residual above tolerance")
            if not (math.isfinite(self.bessel_atoms.upper) and math.isfinite(self.bessel_functionals.upper)):
                raise ValueError("passing certificate needs finite Bessel bounds")
        return self

    @property
    def final_residual(self) -> float:
        return self.level_residuals[-1] if self.level_residuals else 0.0

    def note(self, name: str) -> CheckResult:
        for check in self.notes:
            if check.name == name:
                return check
        raise KeyError(name)


class EquivalenceReport(BaseModel):
    """Independently evaluated verdicts that are asserted to agree."""

    model_config = ConfigDict(frozen=True)

    verdicts: dict
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def agree(self) -> bool:
        return len(set(self.verdicts.values())) <= 1

    @property
    def verdict(self) -> bool:
        return self.agree and all(self.verdicts.values())
