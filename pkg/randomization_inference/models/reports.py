"""
Estimator reports for observed experimental data
"""
from typing import Dict, List

from pydantic import BaseModel, ConfigDict, Field

from ..core.constants import BINARY_REPORT_COLUMNS, VARIANCE_REPORT_COLUMNS
from .arrays import FloatArray

FROZEN = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class VarianceReport(BaseModel):
    """All variance estimators of the difference in means, side by side"""
    model_config = FROZEN

    tau_hat: float = Field(..., description="Difference in observed arm means")
    v_neyman: float = Field(..., ge=0, description="s1^2/N1 + s0^2/N0")
    v_fisher: float = Field(..., ge=0, description="Randomization variance under the sharp null, N s^2/(N1 N0)")
    v_ols: float = Field(..., ge=0, description="Homoskedastic OLS variance of the slope")
    v_hw: float = Field(..., ge=0, description="Huber-White variance of the slope")
    v_score: float = Field(..., ge=0, description="Score-test variance (N-1) s^2/(N1 N0)")
    v_improved: float = Field(..., ge=0, description="Cauchy-Schwarz improved Neymanian variance")
    s1sq: float = Field(..., ge=0, description="Treated sample variance")
    s0sq: float = Field(..., ge=0, description="Control sample variance")
    ssq: float = Field(..., ge=0, description="Sample variance of all observed outcomes")

    def to_row(self) -> Dict[str, float]:
        """Return the report as one CSV row"""
        return {column: getattr(self, column) for column in VARIANCE_REPORT_COLUMNS}


class BinaryReport(VarianceReport):
    """Variance report for 0/1 outcomes with pooled and unpooled proportions"""

    p1_hat: float = Field(..., ge=0, le=1)
    p0_hat: float = Field(..., ge=0, le=1)
    p_hat: float = Field(..., ge=0, le=1, description="Pooled proportion")
    v_unpooled: float = Field(..., ge=0, description="p1(1-p1)/N1 + p0(1-p0)/N0")
    v_pooled: float = Field(..., ge=0, description="p(1-p)(1/N1 + 1/N0)")
    constant_arms: List[str] = Field(default_factory=list, description="Arms whose outcomes are all equal")

    def to_binary_row(self) -> Dict[str, float]:
        """Return the proportion fields as one CSV row"""
        return {column: getattr(self, column) for column in BINARY_REPORT_COLUMNS}


class PairEffectReport(BaseModel):
    """Matched-pair point and variance estimates"""
    model_config = FROZEN

    tau_hat: float = Field(..., description="Mean of the within-pair estimates")
    per_pair: FloatArray = Field(..., description="Within-pair estimates tau_i hat")
    v_neyman: float = Field(..., ge=0)
    v_fisher: float = Field(..., ge=0)

    @property
    def n_pairs(self) -> int:
        return len(self.per_pair)


class FactorialEffectReport(BaseModel):
    """Factorial contrast estimate with its Neymanian and sharp-null variances"""
    model_config = FROZEN

    tau1_hat: float = Field(..., description="Estimated factorial effect")
    v1_neyman: float = Field(..., ge=0)
    v1_fisher: float = Field(..., ge=0)
    cell_means: FloatArray = Field(..., description="Observed mean per treatment combination")
    cell_vars: FloatArray = Field(..., description="Observed variance per treatment combination")
    k: int = Field(..., ge=1)
    r: int = Field(..., ge=2)
    contrast: FloatArray = Field(..., description="The +/-1 contrast vector")


class OlsFit(BaseModel):
    """Two-group linear model fitted by arm means"""
    model_config = FROZEN

    alpha_hat: float = Field(..., description="Intercept, the control mean")
    beta_hat: float = Field(..., description="Slope, equal to the difference in means")
    residuals: FloatArray = Field(..., description="Outcome minus its arm mean")
    sigma2_hat: float = Field(..., ge=0, description="Residual variance with divisor N-2")
    sigma2_mle: float = Field(..., ge=0, description="Null-restricted MLE of the variance, divisor N")
