"""
Helper utilities for the randomization inference engine
"""
import functools
import logging
import math
import time
from typing import Any, Dict

logger = logging.getLogger(__name__)


def measure_time(func):
    """
    Decorator to log the execution time of a long-running function

    Args:
        func: Function to measure

    Returns:
        Wrapped function that logs its elapsed time
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        execution_time = (time.perf_counter() - start_time) * 1000  # Convert to milliseconds
        logger.info(f"{func.__name__} finished in {execution_time:.1f} ms")
        return result

    return wrapper


def binomial_standard_error(rate: float, count: int) -> float:
    """
    Standard error of a rejection rate estimated from count replications

    Args:
        rate: Observed proportion
        count: Number of replications

    Returns:
        float: sqrt(rate (1 - rate) / count), nan when undefined
    """
    if count <= 0 or math.isnan(rate):
        return math.nan
    return math.sqrt(rate * (1 - rate) / count)


def relative_deviation(value: float, reference: float) -> float:
    """
    Relative distance of value from a nonzero reference

    Args:
        value: Measured value
        reference: Reference value

    Returns:
        float: |value - reference| / |reference|, nan if the reference is 0
    """
    if reference == 0:
        return math.nan
    return abs(value - reference) / abs(reference)


def format_error_response(error: Exception, context: str = "") -> Dict[str, Any]:
    """
    Format an error in a consistent way for machine-readable outputs

    Args:
        error: Exception that occurred
        context: Additional context about the error

    Returns:
        Dict[str, Any]: Formatted error record
    """
    record = {
        "error": str(error),
        "type": error.__class__.__name__,
        "context": context,
    }
    cause = getattr(error, "cause", None) or getattr(error, "arm", None)
    if cause:
        record["cause"] = cause
    return record
