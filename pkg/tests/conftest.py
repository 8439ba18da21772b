"""
Test configuration and fixtures for the randomization inference engine
"""
import tempfile
from pathlib import Path
from typing import Generator

import numpy as np
import pytest

from randomization_inference.engine.design import stream
from randomization_inference.models.population import (
    FactorialTable,
    MatchedPairTable,
    ObservedData,
    PotentialTable,
)


@pytest.fixture
def temp_dir() -> Generator[str, None, None]:
    """
    Create a temporary directory for test files

    Yields:
        str: Path to temporary directory
    """
    with tempfile.TemporaryDirectory() as temp_dir:
        yield temp_dir


@pytest.fixture
def d4() -> ObservedData:
    """
    Four units, the first two treated

    Returns:
        ObservedData: yobs = (1, 2, 3, 4), t = (1, 1, 0, 0)
    """
    return ObservedData(yobs=[1.0, 2.0, 3.0, 4.0], t=[1, 1, 0, 0])


@pytest.fixture
def binary_data() -> ObservedData:
    """
    Binary outcomes with p1 = 2/3 and p0 = 1/3

    Returns:
        ObservedData: Three treated and three control units
    """
    return ObservedData(yobs=[1, 1, 0, 0, 0, 1], t=[1, 1, 1, 0, 0, 0])


@pytest.fixture
def rng() -> np.random.Generator:
    """Deterministic random stream"""
    return stream(12345, 0)


@pytest.fixture
def small_population() -> PotentialTable:
    """Ten units with heterogeneous effects"""
    y0 = np.arange(10, dtype=float)
    y1 = y0 + np.array([1.0, 0.5, 2.0, 1.5, 0.0, 1.0, 3.0, 0.5, 1.0, 2.5])
    return PotentialTable(y1=y1, y0=y0)


@pytest.fixture
def pair_table() -> MatchedPairTable:
    """Three pairs; y[i, j, t] is unit j of pair i under arm t"""
    y = np.array([
        [[0.0, 1.0], [0.5, 2.0]],
        [[1.0, 1.5], [1.0, 3.0]],
        [[2.0, 2.0], [2.5, 4.5]],
    ])
    return MatchedPairTable(y=y)


@pytest.fixture
def factorial_observed() -> ObservedData:
    """
    Balanced 2^2 factorial with r = 2

    Returns:
        ObservedData: Cell means (2, 3, 6, 7), every cell variance 2
    """
    return ObservedData(
        yobs=[1.0, 3.0, 2.0, 4.0, 5.0, 7.0, 6.0, 8.0],
        t=[0, 0, 1, 1, 2, 2, 3, 3],
        design="factorial",
    )


@pytest.fixture
def factorial_table() -> FactorialTable:
    """2^2 factorial table with r = 2 and additive cell effects"""
    base = np.arange(8, dtype=float)[:, None]
    return FactorialTable(k=2, r=2, y=base + np.array([3.0, 2.0, 1.0, 0.0]))


@pytest.fixture
def write_csv(temp_dir):
    """
    Write a CSV file from text and return its path

    Returns:
        Callable[[str, str], str]: (name, content) -> path
    """
    def _write(name: str, content: str) -> str:
        path = Path(temp_dir) / name
        path.write_text(content)
        return str(path)

    return _write
