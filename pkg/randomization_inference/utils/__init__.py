"""
Utility modules for the randomization inference engine
"""

from .file_utils import (
    ensure_directory,
    file_exists,
    read_numeric_csv,
    read_potential_table,
    read_pair_table,
    read_factorial_table,
    read_observed_data,
    write_rows_csv,
    read_json,
    write_json
)

from .helpers import (
    measure_time,
    binomial_standard_error,
    relative_deviation,
    format_error_response
)

__all__ = [
    # File utilities
    "ensure_directory",
    "file_exists",
    "read_numeric_csv",
    "read_potential_table",
    "read_pair_table",
    "read_factorial_table",
    "read_observed_data",
    "write_rows_csv",
    "read_json",
    "write_json",

    # Helpers
    "measure_time",
    "binomial_standard_error",
    "relative_deviation",
    "format_error_response"
]
