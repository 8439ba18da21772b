"""
Hypothesis test and interval estimation results
"""
import math
from typing import Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.constants import INTERVAL_RESULT_COLUMNS, TEST_RESULT_COLUMNS

TestMethod = Literal[
    "neyman", "frt_mc", "frt_exact", "frt_var_ratio",
    "pair_neyman", "pair_frt", "pair_frt_normal",
    "factorial_neyman", "factorial_frt",
    "wald_hw", "score",
]
IntervalMethod = Literal["neyman_ci", "fiducial"]


class TestResult(BaseModel):
    """Outcome of one hypothesis test"""
    model_config = ConfigDict(frozen=True)
    __test__ = False

    statistic: float = Field(..., description="Observed value of the test statistic")
    p_value: float = Field(..., ge=0, le=1, description="Two-sided p-value")
    method: TestMethod = Field(..., description="Test procedure")
    m_draws: int = Field(0, ge=0, description="Monte Carlo draws, 0 for exact or asymptotic tests")
    reject_at: Dict[float, bool] = Field(default_factory=dict, description="Rejection decision per level")
    degenerate: bool = Field(False, description="Set when a variance or statistic was degenerate")
    extreme_count: Optional[int] = Field(None, ge=0, description="Assignments at least as extreme as observed")
    n_assignments: Optional[int] = Field(None, ge=1, description="Size of the reference distribution")
    add_one: bool = Field(False, description="Whether the (1 + count)/(1 + M) rule was used")

    def rejects(self, alpha: float) -> bool:
        """Reject when the p-value does not exceed the level"""
        return self.p_value <= alpha

    def to_row(self) -> Dict[str, object]:
        """Return the result as one CSV row"""
        return {column: getattr(self, column) for column in TEST_RESULT_COLUMNS}


class IntervalResult(BaseModel):
    """Interval estimate of the average causal effect"""
    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    level: float = Field(..., gt=0, lt=1)
    method: IntervalMethod
    empty: bool = Field(False, description="No candidate effect was retained")
    truncated: bool = Field(False, description="The retained set reaches the edge of the search grid")
    connected: bool = Field(True, description="The retained grid points form one run")

    @model_validator(mode="after")
    def _check_order(self) -> "IntervalResult":
        if not (math.isnan(self.lower) or math.isnan(self.upper)) and self.lower > self.upper:
            raise ValueError(f"lower={self.lower} exceeds upper={self.upper}")
        return self

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    def to_row(self) -> Dict[str, object]:
        """Return the result as one CSV row"""
        return {column: getattr(self, column) for column in INTERVAL_RESULT_COLUMNS}
