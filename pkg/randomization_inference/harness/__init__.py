"""
Simulation harness: scenarios, replication workers and output writers
"""

from .scenarios import (
    build_population,
    population_estimands,
    run_scenario,
    run_population_study,
    verify_gap_theorem,
    verify_gap_sweep,
    local_alternative_sweep,
    heterogeneity_demo,
    example_one,
    example_two,
    heterogeneity_scenario,
    check_paradox_signature
)
from .replication import ReplicationOutcome, run_replications
from .outputs import write_scenario_outputs, write_analysis_outputs, write_gap_outputs
