"""
Simulation scenario configuration and aggregated results
"""
import math
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.constants import STATISTIC_DIFF_IN_MEANS, STATISTIC_VARIANCE_RATIO
from ..core.exceptions import ParameterError
from ..utils.helpers import binomial_standard_error


class PopulationSpec(BaseModel):
    """How to build the frozen population of a scenario"""
    model_config = ConfigDict(frozen=True)

    source: Literal["normal", "csv"] = Field("normal", description="Draw from normals or read a CSV table")
    mu1: float = Field(0.1, description="Mean of Y(1) (or of every treated cell)")
    var1: float = Field(1 / 16, gt=0, description="Variance of Y(1)")
    mu0: float = Field(0.0, description="Mean of Y(0)")
    var0: float = Field(1 / 16, gt=0, description="Variance of Y(0)")
    exact_moments: bool = Field(False, description="Rescale draws so sample moments equal the parameters")
    pair_var: float = Field(0.0, ge=0, description="Variance of the shared pair effect (matched pairs)")
    cell_means: Optional[List[float]] = Field(None, description="Mean per treatment combination (factorial)")
    noise_var: float = Field(1.0, gt=0, description="Unit-level noise variance (factorial)")
    path: Optional[str] = Field(None, description="CSV table when source is csv")

    @model_validator(mode="after")
    def _check_source(self) -> "PopulationSpec":
        if self.source == "csv" and not self.path:
            raise ParameterError("A csv population needs a path")
        return self


class ScenarioConfig(BaseModel):
    """Protocol of one simulation: a frozen population re-randomized reps times"""
    model_config = ConfigDict(frozen=True)

    name: str = Field("scenario", description="Label used in outputs")
    design: Literal["crd", "pairs", "factorial"] = Field("crd")
    population: PopulationSpec = Field(default_factory=PopulationSpec)
    n: Optional[int] = Field(None, ge=2, description="Units (crd)")
    n1: Optional[int] = Field(None, ge=1, description="Treated units (crd)")
    n_pairs: Optional[int] = Field(None, ge=2, description="Pairs (matched pairs)")
    k: Optional[int] = Field(None, ge=1, description="Factors (factorial)")
    r: Optional[int] = Field(None, ge=2, description="Replications per cell (factorial)")
    contrast_factors: Tuple[int, ...] = Field((0,), description="Factors whose product defines the contrast")
    reps: int = Field(1000, ge=1, description="Simulated assignments")
    m: int = Field(100000, ge=1, description="Monte Carlo draws per randomization test")
    alpha: float = Field(0.05, gt=0, lt=1)
    statistic: Literal["diff_in_means", "variance_ratio"] = Field(STATISTIC_DIFF_IN_MEANS)
    add_one: bool = Field(False, description="Use (1 + count)/(1 + M) Monte Carlo p-values")
    master_seed: int = Field(..., ge=0)
    workers: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def _check_design(self) -> "ScenarioConfig":
        if self.design == "crd":
            if self.n is None or self.n1 is None:
                raise ParameterError("A crd scenario needs n and n1")
            if not 1 <= self.n1 <= self.n - 1:
                raise ParameterError(f"n1={self.n1} must lie in [1, {self.n - 1}]")
        elif self.design == "pairs" and self.n_pairs is None:
            raise ParameterError("A pairs scenario needs n_pairs")
        elif self.design == "factorial":
            if self.k is None or self.r is None:
                raise ParameterError("A factorial scenario needs k and r")
            if any(f < 0 or f >= self.k for f in self.contrast_factors):
                raise ParameterError(f"Contrast factors must lie in [0, {self.k - 1}]")
            means = self.population.cell_means
            if means is not None and len(means) != 2 ** self.k:
                raise ParameterError(f"cell_means must have {2 ** self.k} entries")
        if self.statistic == STATISTIC_VARIANCE_RATIO and self.design != "crd":
            raise ParameterError("The variance-ratio statistic is defined for crd scenarios only")
        return self

    @property
    def n0(self) -> Optional[int]:
        return None if self.n is None or self.n1 is None else self.n - self.n1


class RejectionTable(BaseModel):
    """Cross-tabulation of Neyman (rows) and Fisher (columns) decisions"""
    model_config = ConfigDict(frozen=True)

    keep_keep: int = Field(0, ge=0)
    keep_reject: int = Field(0, ge=0, description="Neyman keeps, Fisher rejects")
    reject_keep: int = Field(0, ge=0, description="Neyman rejects, Fisher keeps")
    reject_reject: int = Field(0, ge=0)
    degenerate: int = Field(0, ge=0, description="Replications excluded from the rates")

    @classmethod
    def from_decisions(cls, decisions: List[Tuple[bool, bool]], degenerate: int = 0) -> "RejectionTable":
        """
        Count (neyman_rejects, fisher_rejects) decisions

        Args:
            decisions: One pair of decisions per valid replication
            degenerate: Number of excluded replications

        Returns:
            RejectionTable: The 2x2 table
        """
        counts = {(False, False): 0, (False, True): 0, (True, False): 0, (True, True): 0}
        for neyman, fisher in decisions:
            counts[(bool(neyman), bool(fisher))] += 1
        return cls(
            keep_keep=counts[(False, False)],
            keep_reject=counts[(False, True)],
            reject_keep=counts[(True, False)],
            reject_reject=counts[(True, True)],
            degenerate=degenerate,
        )

    def __add__(self, other: "RejectionTable") -> "RejectionTable":
        return RejectionTable(
            keep_keep=self.keep_keep + other.keep_keep,
            keep_reject=self.keep_reject + other.keep_reject,
            reject_keep=self.reject_keep + other.reject_keep,
            reject_reject=self.reject_reject + other.reject_reject,
            degenerate=self.degenerate + other.degenerate,
        )

    @property
    def valid(self) -> int:
        return self.keep_keep + self.keep_reject + self.reject_keep + self.reject_reject

    @property
    def total(self) -> int:
        return self.valid + self.degenerate

    @property
    def neyman_rate(self) -> float:
        return (self.reject_keep + self.reject_reject) / self.valid if self.valid else math.nan

    @property
    def fisher_rate(self) -> float:
        return (self.keep_reject + self.reject_reject) / self.valid if self.valid else math.nan

    @property
    def neyman_se(self) -> float:
        return binomial_standard_error(self.neyman_rate, self.valid)

    @property
    def fisher_se(self) -> float:
        return binomial_standard_error(self.fisher_rate, self.valid)

    def to_row(self) -> Dict[str, float]:
        """Counts, rates and binomial standard errors as one CSV row"""
        return {
            "keep_keep": self.keep_keep,
            "keep_reject": self.keep_reject,
            "reject_keep": self.reject_keep,
            "reject_reject": self.reject_reject,
            "valid": self.valid,
            "degenerate": self.degenerate,
            "neyman_rate": self.neyman_rate,
            "neyman_se": self.neyman_se,
            "fisher_rate": self.fisher_rate,
            "fisher_se": self.fisher_se,
        }


class VarianceScatterRow(BaseModel):
    """Neymanian and sharp-null variances of one replication"""
    model_config = ConfigDict(frozen=True)

    rep_index: int = Field(..., ge=0)
    v_neyman: float = Field(..., ge=0)
    v_fisher: float = Field(..., ge=0)


class ScenarioSummary(BaseModel):
    """Machine-readable digest written to summary.json"""
    model_config = ConfigDict(frozen=True)

    config: Dict[str, Any]
    population: Dict[str, Any] = Field(..., description="Population estimands of the frozen table")
    neyman_power: float
    neyman_se: float
    fisher_power: float
    fisher_se: float
    mean_v_neyman: float
    mean_v_fisher: float
    empirical_gap: float = Field(..., description="Mean of v_fisher - v_neyman over valid replications")
    theoretical_gap: float = Field(..., description="Leading-order gap evaluated on the population")
    fisher_never_below_neyman: bool = Field(..., description="v_fisher >= v_neyman held in every replication")
    degenerate: List[Dict[str, Any]] = Field(default_factory=list)


class ScenarioResult(BaseModel):
    """Everything a scenario produces"""
    model_config = ConfigDict(frozen=True)

    table: RejectionTable
    scatter: List[VarianceScatterRow]
    summary: ScenarioSummary


class GapReport(BaseModel):
    """Empirical versus theoretical variance gap"""
    model_config = ConfigDict(frozen=True)

    design: Literal["crd", "pairs", "factorial"]
    size: int = Field(..., description="N for crd and pairs, r for factorial")
    reps: int
    empirical_gap: float
    empirical_se: float
    theoretical_gap: float
    relative_deviation: float = Field(..., description="|empirical - theoretical| / |theoretical|, nan if theoretical is 0")
    scaled_gap: float = Field(..., description="Empirical gap times N")


class SweepPoint(BaseModel):
    """Powers of both tests at one population size"""
    model_config = ConfigDict(frozen=True)

    n: int
    tau: float
    neyman_power: float
    fisher_power: float
    neyman_se: float
    fisher_se: float

    @property
    def difference(self) -> float:
        return self.neyman_power - self.fisher_power


class SweepReport(BaseModel):
    """Power curves under local and fixed constant-effect alternatives"""
    model_config = ConfigDict(frozen=True)

    c: float
    fixed_tau: float
    local: List[SweepPoint]
    fixed: List[SweepPoint]


class HeterogeneityReport(BaseModel):
    """Rejection rates when Neyman's null holds but effects are heterogeneous"""
    model_config = ConfigDict(frozen=True)

    reps: int
    valid: int
    neyman_rate: float
    frt_diff_rate: float
    frt_var_ratio_rate: float
    neyman_se: float
    frt_diff_se: float
    frt_var_ratio_se: float
