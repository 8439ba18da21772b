"""
Potential-outcome tables, population summaries and observed data
"""
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.exceptions import DegenerateDataError, InsufficientDataError, ParameterError
from .arrays import FloatArray, IntArray

FROZEN = ConfigDict(arbitrary_types_allowed=True, frozen=True)


def _require_finite(name: str, values: np.ndarray) -> None:
    if not np.all(np.isfinite(values)):
        raise ParameterError(f"{name} contains non-finite entries")


class PotentialTable(BaseModel):
    """Both potential outcomes for every unit of a completely randomized experiment"""
    model_config = FROZEN

    y1: FloatArray = Field(..., description="Potential outcomes under treatment, Y_i(1)")
    y0: FloatArray = Field(..., description="Potential outcomes under control, Y_i(0)")

    @model_validator(mode="after")
    def _check_shape(self) -> "PotentialTable":
        if self.y1.ndim != 1 or self.y0.ndim != 1 or len(self.y1) != len(self.y0):
            raise ParameterError("y1 and y0 must be vectors of equal length")
        if len(self.y1) < 2:
            raise DegenerateDataError("A population needs at least 2 units", cause="degenerate population")
        _require_finite("y1", self.y1)
        _require_finite("y0", self.y0)
        return self

    @property
    def n(self) -> int:
        return len(self.y1)

    @property
    def tau_i(self) -> np.ndarray:
        """Individual causal effects Y_i(1) - Y_i(0)"""
        return self.y1 - self.y0


class PopulationSummary(BaseModel):
    """Population-level estimands of a potential table (all variances use the N-1 divisor)"""
    model_config = FROZEN

    n: int = Field(..., ge=2, description="Number of units")
    tau: float = Field(..., description="Average causal effect")
    ybar1: float = Field(..., description="Mean treated potential outcome")
    ybar0: float = Field(..., description="Mean control potential outcome")
    s1sq: float = Field(..., ge=0, description="Variance of Y(1)")
    s0sq: float = Field(..., ge=0, description="Variance of Y(0)")
    stausq: float = Field(..., ge=0, description="Variance of the individual effects")
    s10: float = Field(..., description="Covariance of Y(1) and Y(0)")

    def sampling_variance(self, n1: int, n0: int) -> float:
        """
        True randomization variance of the difference in means

        Args:
            n1: Treated units
            n0: Control units

        Returns:
            float: S1^2/N1 + S0^2/N0 - S_tau^2/N
        """
        if n1 < 1 or n0 < 1 or n1 + n0 != self.n:
            raise ParameterError(f"Arm sizes ({n1}, {n0}) do not partition {self.n} units")
        return self.s1sq / n1 + self.s0sq / n0 - self.stausq / self.n


class MatchedPairTable(BaseModel):
    """Potential outcomes y[i, j, t] of unit j in pair i under arm t (t=1 treated)"""
    model_config = FROZEN

    y: FloatArray = Field(..., description="Array of shape (n_pairs, 2, 2)")

    @model_validator(mode="after")
    def _check_shape(self) -> "MatchedPairTable":
        if self.y.ndim != 3 or self.y.shape[1:] != (2, 2):
            raise ParameterError(f"Pair table must have shape (n_pairs, 2, 2), got {self.y.shape}")
        if self.y.shape[0] < 2:
            raise DegenerateDataError("A matched-pair population needs at least 2 pairs", cause="degenerate population")
        _require_finite("y", self.y)
        return self

    @property
    def n_pairs(self) -> int:
        return self.y.shape[0]


class PairSummary(BaseModel):
    """Population-level estimands of a matched-pair table"""
    model_config = FROZEN

    n_pairs: int = Field(..., ge=2)
    tau: float = Field(..., description="Average causal effect over all 2N units")
    per_pair: FloatArray = Field(..., description="Within-pair average effects tau_i")
    sampling_variance: float = Field(..., ge=0, description="Exact variance of the pair estimator")


class FactorialTable(BaseModel):
    """Potential outcomes Y_i(z) of a balanced 2^K factorial with r units per cell"""
    model_config = FROZEN

    k: int = Field(..., ge=1, description="Number of factors")
    r: int = Field(..., ge=2, description="Replications per treatment combination")
    y: FloatArray = Field(..., description="Matrix of shape (r * 2^k, 2^k), canonical column order")

    @model_validator(mode="after")
    def _check_shape(self) -> "FactorialTable":
        expected = (self.r * 2 ** self.k, 2 ** self.k)
        if self.y.shape != expected:
            raise ParameterError(f"Factorial table must have shape {expected}, got {self.y.shape}")
        _require_finite("y", self.y)
        return self

    @property
    def j_cells(self) -> int:
        return 2 ** self.k

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def g1(self) -> np.ndarray:
        """Main-effect contrast of the first factor"""
        half = self.j_cells // 2
        return np.concatenate([np.ones(half), -np.ones(half)])


class FactorialSummary(BaseModel):
    """Population-level estimands of a factorial table for one contrast"""
    model_config = FROZEN

    k: int = Field(..., ge=1)
    r: int = Field(..., ge=2)
    contrast: FloatArray = Field(..., description="The +/-1 contrast vector")
    cell_means: FloatArray = Field(..., description="Mean potential outcome per treatment combination")
    cell_vars: FloatArray = Field(..., description="Variance S^2(z) per treatment combination")
    tau1: float = Field(..., description="Average factorial effect")
    s_tau1sq: float = Field(..., ge=0, description="Variance of the unit-level factorial effects")
    sampling_variance: float = Field(..., ge=0, description="Exact variance of the contrast estimator")


class ObservedData(BaseModel):
    """Outcomes and treatment labels seen after an assignment"""
    model_config = FROZEN

    yobs: FloatArray = Field(..., description="Observed outcomes")
    t: IntArray = Field(..., description="0/1 treatment labels (CRD) or cell indices (factorial)")
    design: Literal["crd", "factorial"] = Field("crd", description="Design the labels refer to")

    @model_validator(mode="after")
    def _check_labels(self) -> "ObservedData":
        if self.yobs.ndim != 1 or self.t.shape != self.yobs.shape:
            raise ParameterError("yobs and t must be vectors of equal length")
        _require_finite("yobs", self.yobs)
        if self.design == "crd":
            if not np.all((self.t == 0) | (self.t == 1)):
                raise ParameterError("CRD treatment labels must be 0 or 1")
            if self.n1 < 1:
                raise InsufficientDataError("The treated arm is empty", arm="treated")
            if self.n0 < 1:
                raise InsufficientDataError("The control arm is empty", arm="control")
        elif np.any(self.t < 0):
            raise ParameterError("Cell indices must be nonnegative")
        return self

    @property
    def n(self) -> int:
        return len(self.yobs)

    @property
    def n1(self) -> int:
        return int(np.count_nonzero(self.t == 1))

    @property
    def n0(self) -> int:
        return int(np.count_nonzero(self.t == 0))

    @property
    def treated(self) -> np.ndarray:
        return self.yobs[self.t == 1]

    @property
    def control(self) -> np.ndarray:
        return self.yobs[self.t == 0]


class PairObservedData(BaseModel):
    """Observed outcomes of a matched-pair experiment, one row per pair"""
    model_config = FROZEN

    y_obs: FloatArray = Field(..., description="Observed (Y_i1, Y_i2) per pair, shape (n_pairs, 2)")
    flips: IntArray = Field(..., description="1 if the first unit of the pair was treated")

    @model_validator(mode="after")
    def _check_shape(self) -> "PairObservedData":
        if self.y_obs.ndim != 2 or self.y_obs.shape[1] != 2 or len(self.flips) != self.y_obs.shape[0]:
            raise ParameterError("Pair observations must have shape (n_pairs, 2) with one flip per pair")
        return self

    @property
    def n_pairs(self) -> int:
        return self.y_obs.shape[0]
