"""
Treatment-assignment mechanisms

Sampling and lexicographic enumeration for completely randomized designs,
fair flips for matched pairs and balanced r-per-cell factorial allocation.
Every draw takes an explicit generator; ``stream`` derives independent
generators from a master seed and a path of integers.
"""
import itertools
import logging
from typing import Iterator, Optional

import numpy as np
from scipy.special import comb

from ..core.config import settings
from ..core.exceptions import EnumerationCapError, ParameterError
from ..models.assignments import Assignment, FactorialAssignment, PairAssignment

logger = logging.getLogger(__name__)


def stream(master_seed: int, *path: int) -> np.random.Generator:
    """
    Derive an independent random stream

    Args:
        master_seed: Scenario seed
        *path: Integers locating the stream, e.g. (rep_index, purpose)

    Returns:
        np.random.Generator: Philox-backed generator for this path
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([master_seed, *path])))


def _check_arms(n: int, n1: int) -> None:
    if not 1 <= n1 <= n - 1:
        raise ParameterError(f"n1={n1} must lie in [1, {n - 1}]")


def count_crd(n: int, n1: int) -> int:
    """Exact number C(n, n1) of completely randomized assignments"""
    _check_arms(n, n1)
    return int(comb(n, n1, exact=True))


def draw_crd(n: int, n1: int, rng: np.random.Generator) -> Assignment:
    """
    Draw one completely randomized assignment

    Partial Fisher-Yates: the first n1 slots of a shuffled index vector
    are the treated units.

    Args:
        n: Units
        n1: Treated units
        rng: Random stream

    Returns:
        Assignment: Uniform over all C(n, n1) allocations
    """
    _check_arms(n, n1)
    index = np.arange(n)
    swaps = rng.integers(np.arange(n1), n)
    for i, j in enumerate(swaps):
        index[i], index[j] = index[j], index[i]
    return Assignment.from_treated(n, index[:n1])


def draw_crd_batch(n: int, n1: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draw many treated-index sets at once

    Args:
        n: Units
        n1: Treated units
        size: Number of assignments
        rng: Random stream

    Returns:
        np.ndarray: (size, n1) array of sorted treated indices
    """
    _check_arms(n, n1)
    keys = rng.random((size, n))
    treated = np.argpartition(keys, n1 - 1, axis=1)[:, :n1]
    treated.sort(axis=1)
    return treated


def enumerate_crd(
    n: int,
    n1: int,
    cap: Optional[int] = None,
    start: int = 0,
    stop: Optional[int] = None,
) -> Iterator[Assignment]:
    """
    Yield every completely randomized assignment in lexicographic order

    Args:
        n: Units
        n1: Treated units
        cap: Largest enumeration allowed, defaults to settings.ENUMERATION_CAP
        start: First position of the lexicographic range
        stop: End of the range (exclusive), defaults to C(n, n1)

    Returns:
        Iterator[Assignment]: Assignments of the requested range

    Raises:
        EnumerationCapError: If C(n, n1) exceeds the cap
    """
    total = count_crd(n, n1)
    cap = settings.ENUMERATION_CAP if cap is None else cap
    if total > cap:
        raise EnumerationCapError(total, cap)
    stop = total if stop is None else min(stop, total)
    if start < 0 or start > stop:
        raise ParameterError(f"Invalid enumeration range [{start}, {stop})")

    for treated in itertools.islice(itertools.combinations(range(n), n1), start, stop):
        yield Assignment.from_treated(n, treated)


def enumerate_crd_batches(
    n: int,
    n1: int,
    batch_size: Optional[int] = None,
    cap: Optional[int] = None,
    start: int = 0,
    stop: Optional[int] = None,
) -> Iterator[np.ndarray]:
    """
    Enumerate treated-index sets as arrays of rows, lexicographic order

    Args:
        n: Units
        n1: Treated units
        batch_size: Rows per yielded array, defaults to settings.BATCH_SIZE
        cap: Largest enumeration allowed
        start: First position of the lexicographic range
        stop: End of the range (exclusive)

    Returns:
        Iterator[np.ndarray]: (rows, n1) index arrays
    """
    total = count_crd(n, n1)
    cap = settings.ENUMERATION_CAP if cap is None else cap
    if total > cap:
        raise EnumerationCapError(total, cap)
    stop = total if stop is None else min(stop, total)
    batch_size = batch_size or settings.BATCH_SIZE

    combos = itertools.islice(itertools.combinations(range(n), n1), start, stop)
    while True:
        chunk = list(itertools.islice(combos, batch_size))
        if not chunk:
            return
        yield np.array(chunk, dtype=np.intp).reshape(len(chunk), n1)


def draw_pairs(n_pairs: int, rng: np.random.Generator) -> PairAssignment:
    """Independent fair flips, one per pair"""
    if n_pairs < 1:
        raise ParameterError("n_pairs must be at least 1")
    return PairAssignment(flips=rng.integers(0, 2, size=n_pairs))


def enumerate_pairs(n_pairs: int, cap: Optional[int] = None) -> Iterator[PairAssignment]:
    """
    Yield all 2^n_pairs flip vectors in lexicographic order

    Args:
        n_pairs: Pairs
        cap: Largest enumeration allowed, defaults to settings.ENUMERATION_CAP

    Returns:
        Iterator[PairAssignment]: Every flip vector once
    """
    total = 2 ** n_pairs
    cap = settings.ENUMERATION_CAP if cap is None else cap
    if total > cap:
        raise EnumerationCapError(total, cap)
    for flips in itertools.product((0, 1), repeat=n_pairs):
        yield PairAssignment(flips=flips)


def _check_factorial(k: int, r: int) -> None:
    if k < 1:
        raise ParameterError("k must be at least 1")
    if r < 2:
        raise ParameterError(f"r={r} leaves cell sample variances undefined; need r >= 2")


def draw_factorial(k: int, r: int, rng: np.random.Generator) -> FactorialAssignment:
    """
    Balanced factorial allocation

    Shuffles the unit indices and cuts them into 2^k consecutive blocks of
    r units; block j receives canonical cell j.

    Args:
        k: Factors
        r: Replications per cell
        rng: Random stream

    Returns:
        FactorialAssignment: Uniform over all N!/(r!)^J allocations
    """
    _check_factorial(k, r)
    cells = 2 ** k
    order = rng.permutation(r * cells)
    cell_of_unit = np.empty(r * cells, dtype=np.int64)
    cell_of_unit[order] = np.repeat(np.arange(cells), r)
    return FactorialAssignment(cell_of_unit=cell_of_unit, k=k, r=r)


def draw_factorial_batch(k: int, r: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draw many balanced allocations as unit permutations

    Row p of the result lists the units in block order: positions
    [j*r, (j+1)*r) hold the units of canonical cell j.

    Args:
        k: Factors
        r: Replications per cell
        size: Number of allocations
        rng: Random stream

    Returns:
        np.ndarray: (size, r * 2^k) permutation array
    """
    _check_factorial(k, r)
    return np.argsort(rng.random((size, r * 2 ** k)), axis=1)
