"""
Treatment assignments for completely randomized, matched-pair and factorial designs
"""
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.exceptions import ParameterError
from .arrays import IntArray

FROZEN = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class Assignment(BaseModel):
    """One completely randomized allocation"""
    model_config = FROZEN

    labels: IntArray = Field(..., description="0/1 treatment indicator per unit")
    n1: int = Field(..., description="Number of treated units")

    @model_validator(mode="after")
    def _check_counts(self) -> "Assignment":
        if not np.all((self.labels == 0) | (self.labels == 1)):
            raise ParameterError("Assignment labels must be 0 or 1")
        if int(self.labels.sum()) != self.n1:
            raise ParameterError(f"Labels sum to {int(self.labels.sum())}, expected n1={self.n1}")
        if not 1 <= self.n1 <= len(self.labels) - 1:
            raise ParameterError(f"n1={self.n1} must lie in [1, {len(self.labels) - 1}]")
        return self

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def treated_indices(self) -> tuple:
        return tuple(int(i) for i in np.flatnonzero(self.labels))

    @classmethod
    def from_treated(cls, n: int, treated: Sequence[int]) -> "Assignment":
        """
        Build an assignment from the indices of the treated units

        Args:
            n: Number of units
            treated: Indices of treated units

        Returns:
            Assignment: The allocation
        """
        labels = np.zeros(n, dtype=np.int64)
        labels[np.asarray(treated, dtype=np.intp)] = 1
        return cls(labels=labels, n1=int(labels.sum()))


class PairAssignment(BaseModel):
    """Independent fair flips, one per matched pair"""
    model_config = FROZEN

    flips: IntArray = Field(..., description="1 if the first unit of the pair is treated")

    @model_validator(mode="after")
    def _check_flips(self) -> "PairAssignment":
        if not np.all((self.flips == 0) | (self.flips == 1)):
            raise ParameterError("Pair flips must be 0 or 1")
        return self

    @property
    def n_pairs(self) -> int:
        return len(self.flips)


class FactorialAssignment(BaseModel):
    """Balanced allocation of r units to each of the 2^K treatment combinations"""
    model_config = FROZEN

    cell_of_unit: IntArray = Field(..., description="Canonical cell index per unit")
    k: int = Field(..., ge=1)
    r: int = Field(..., ge=2)

    @model_validator(mode="after")
    def _check_balance(self) -> "FactorialAssignment":
        cells = 2 ** self.k
        if len(self.cell_of_unit) != self.r * cells:
            raise ParameterError(f"Expected {self.r * cells} units, got {len(self.cell_of_unit)}")
        if np.any(self.cell_of_unit < 0) or np.any(self.cell_of_unit >= cells):
            raise ParameterError(f"Cell indices must lie in [0, {cells - 1}]")
        counts = np.bincount(self.cell_of_unit, minlength=cells)
        if np.any(counts != self.r):
            raise ParameterError(f"Every cell must receive exactly r={self.r} units")
        return self
