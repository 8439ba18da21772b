"""
Data models for the randomization inference engine
"""

# Populations and observed data
from .population import (
    FactorialSummary,
    FactorialTable,
    MatchedPairTable,
    ObservedData,
    PairObservedData,
    PairSummary,
    PopulationSummary,
    PotentialTable,
)

# Assignments
from .assignments import Assignment, FactorialAssignment, PairAssignment

# Estimator reports
from .reports import (
    BinaryReport,
    FactorialEffectReport,
    OlsFit,
    PairEffectReport,
    VarianceReport,
)

# Test and interval results
from .results import IntervalResult, TestResult

# Simulation scenarios
from .scenario import (
    GapReport,
    HeterogeneityReport,
    PopulationSpec,
    RejectionTable,
    ScenarioConfig,
    ScenarioResult,
    ScenarioSummary,
    SweepPoint,
    SweepReport,
    VarianceScatterRow,
)

__all__ = [
    # Populations and observed data
    "PotentialTable",
    "PopulationSummary",
    "MatchedPairTable",
    "PairSummary",
    "FactorialTable",
    "FactorialSummary",
    "ObservedData",
    "PairObservedData",

    # Assignments
    "Assignment",
    "PairAssignment",
    "FactorialAssignment",

    # Estimator reports
    "VarianceReport",
    "BinaryReport",
    "PairEffectReport",
    "FactorialEffectReport",
    "OlsFit",

    # Test and interval results
    "TestResult",
    "IntervalResult",

    # Simulation scenarios
    "PopulationSpec",
    "ScenarioConfig",
    "RejectionTable",
    "VarianceScatterRow",
    "ScenarioSummary",
    "ScenarioResult",
    "GapReport",
    "SweepPoint",
    "SweepReport",
    "HeterogeneityReport",
]
