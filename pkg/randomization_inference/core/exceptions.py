"""
Exception hierarchy for the randomization inference engine
"""
from typing import Optional


class RandomizationInferenceError(ValueError):
    """Base class for all engine errors"""


class ParameterError(RandomizationInferenceError):
    """Invalid parameters passed to an operation"""


class DegenerateDataError(RandomizationInferenceError):
    """Data with zero spread where a statistic divides by it"""

    def __init__(self, message: str, cause: str = "zero variance"):
        super().__init__(message)
        self.cause = cause


class InsufficientDataError(RandomizationInferenceError):
    """Too few units in an arm or cell"""

    def __init__(self, message: str, arm: str):
        super().__init__(message)
        self.arm = arm


class EnumerationCapError(RandomizationInferenceError):
    """Exhaustive enumeration would exceed the configured cap"""

    def __init__(self, count: int, cap: int):
        super().__init__(
            f"Enumeration of {count} assignments exceeds the cap of {cap}; use Monte Carlo instead"
        )
        self.count = count
        self.cap = cap


class InputFormatError(RandomizationInferenceError):
    """Malformed CSV or JSON input"""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
