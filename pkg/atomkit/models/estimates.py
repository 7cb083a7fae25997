"""
Certified two-sided estimates of norm-type quantities.
"""
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

EXACT_RTOL = 1e-12


class BoundMethod(str, Enum):
    SVD = "svd"
    COLUMN_FORMULA = "column-formula"
    ROW_FORMULA = "row-formula"
    SAMPLE_POWER_ITERATION = "sample-power-iteration"


class BoundEstimate(BaseModel):
    """Certified interval [lower, upper] containing a norm-type quantity."""

    model_config = ConfigDict(frozen=True)

    lower: float = Field(ge=0)
    upper: float = Field(ge=0)
    exact: bool = False
    method: BoundMethod

    @model_validator(mode="after")
    def _check_interval(self) -> "BoundEstimate":
        slack = EXACT_RTOL * max(1.0, self.upper)
        if self.lower > self.upper + slack:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")
        if self.exact and abs(self.upper - self.lower) > slack:
            raise ValueError("exact estimate must have lower == upper")
        return self

    @classmethod
    def exactly(cls, value: float, method: BoundMethod) -> "BoundEstimate":
        value = max(float(value), 0.0)
        return cls(lower=value, upper=value, exact=True, method=method)

    @property
    def value(self) -> float:
        """Midpoint; equals the bound when exact."""
        return 0.5 * (self.lower + self.upper)

    def scaled(self, factor: float) -> "BoundEstimate":
        factor = abs(float(factor))
        return BoundEstimate(
            lower=self.lower * factor, upper=self.upper * factor, exact=self.exact, method=self.method
        )

    def squared(self) -> "BoundEstimate":
        return BoundEstimate(
            lower=self.lower**2, upper=self.upper**2, exact=self.exact, method=self.method
        )
