"""
File utilities: CSV ingestion of tables and observed data, CSV/JSON emission
"""
import json
import os
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from ..core.constants import (
    OBSERVED_COLUMNS,
    PAIR_TABLE_COLUMNS,
    POTENTIAL_TABLE_COLUMNS,
)
from ..core.exceptions import InputFormatError
from ..models.population import FactorialTable, MatchedPairTable, ObservedData, PotentialTable


def ensure_directory(path: str) -> None:
    """
    Ensure a directory exists, create it if it doesn't

    Args:
        path: Directory path to ensure exists
    """
    Path(path).mkdir(parents=True, exist_ok=True)


def file_exists(filepath: str) -> bool:
    """
    Check if a file exists

    Args:
        filepath: Path to file

    Returns:
        bool: True if a file exists, False otherwise
    """
    return os.path.exists(filepath) and os.path.isfile(filepath)


def read_numeric_csv(path: str, columns: Optional[List[str]] = None) -> pd.DataFrame:
    """
    Read a CSV of numbers, reporting the file line of the first bad cell

    Args:
        path: CSV file
        columns: Required header, in order; None accepts any header

    Returns:
        pd.DataFrame: Float-valued frame

    Raises:
        InputFormatError: Missing file, empty file, wrong header or non-numeric cell
    """
    if not file_exists(path):
        raise InputFormatError(f"File {path} not found")

    try:
        raw = pd.read_csv(path, dtype=str, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise InputFormatError(f"File {path} is empty", line=1)
    except pd.errors.ParserError as e:
        raise InputFormatError(f"Could not parse {path}: {e}")

    header = [str(c).strip() for c in raw.columns]
    if columns is not None and header != columns:
        raise InputFormatError(f"Expected header {','.join(columns)}, got {','.join(header)}", line=1)
    raw.columns = header
    if raw.empty:
        raise InputFormatError(f"File {path} has a header but no rows", line=2)

    frame = raw.apply(pd.to_numeric, errors="coerce")
    bad = frame.isna().any(axis=1) | ~np.isfinite(frame.to_numpy(dtype=float)).all(axis=1)
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise InputFormatError(f"Non-numeric or missing value in {path}", line=row + 2)
    return frame.astype(float)


def read_potential_table(path: str) -> PotentialTable:
    """
    Read a potential-outcome table with header y1,y0

    Args:
        path: CSV file

    Returns:
        PotentialTable: The frozen table
    """
    frame = read_numeric_csv(path, POTENTIAL_TABLE_COLUMNS)
    return PotentialTable(y1=frame["y1"].to_numpy(), y0=frame["y0"].to_numpy())


def read_pair_table(path: str) -> MatchedPairTable:
    """
    Read a matched-pair table with header y11_t,y11_c,y12_t,y12_c

    Args:
        path: CSV file

    Returns:
        MatchedPairTable: Array indexed [pair, unit, arm]
    """
    frame = read_numeric_csv(path, PAIR_TABLE_COLUMNS)
    y = np.empty((len(frame), 2, 2))
    y[:, 0, 1] = frame["y11_t"]
    y[:, 0, 0] = frame["y11_c"]
    y[:, 1, 1] = frame["y12_t"]
    y[:, 1, 0] = frame["y12_c"]
    return MatchedPairTable(y=y)


def read_factorial_table(path: str, sidecar: Optional[str] = None) -> FactorialTable:
    """
    Read a factorial table with header y_1..y_J and its JSON sidecar

    The sidecar holds k, r and optionally column_order, a list of J sign
    vectors naming the treatment combination of each CSV column. Columns are
    rearranged into canonical order.

    Args:
        path: CSV file
        sidecar: JSON file, defaults to the CSV path with a .json suffix

    Returns:
        FactorialTable: The frozen table
    """
    from ..engine.population import canonical_cells

    sidecar_path = sidecar or str(Path(path).with_suffix(".json"))
    meta = read_json(sidecar_path)
    try:
        k, r = int(meta["k"]), int(meta["r"])
    except (KeyError, TypeError, ValueError):
        raise InputFormatError(f"Sidecar {sidecar_path} must give integer k and r")

    j_cells = 2 ** k
    frame = read_numeric_csv(path, [f"y_{j}" for j in range(1, j_cells + 1)])
    values = frame.to_numpy()

    order = meta.get("column_order")
    if order is not None:
        canonical = [tuple(z) for z in canonical_cells(k)]
        given = [tuple(int(v) for v in z) for z in order]
        if sorted(given) != sorted(canonical):
            raise InputFormatError(f"column_order in {sidecar_path} is not a permutation of the 2^{k} cells")
        values = values[:, [given.index(z) for z in canonical]]

    return FactorialTable(k=k, r=r, y=values)


def read_observed_data(path: str) -> ObservedData:
    """
    Read observed CRD data with header yobs,t

    Args:
        path: CSV file

    Returns:
        ObservedData: Outcomes and 0/1 labels
    """
    frame = read_numeric_csv(path, OBSERVED_COLUMNS)
    labels = frame["t"].to_numpy()
    bad = np.flatnonzero((labels != 0) & (labels != 1))
    if bad.size:
        raise InputFormatError("Treatment labels must be 0 or 1", line=int(bad[0]) + 2)
    return ObservedData(yobs=frame["yobs"].to_numpy(), t=labels.astype(int))


def write_rows_csv(rows: Iterable[Dict[str, Any]], path: str, columns: List[str]) -> str:
    """
    Write rows to a CSV file with a fixed column order

    Args:
        rows: Row mappings
        path: Output file
        columns: Column order

    Returns:
        str: Path to the written file
    """
    ensure_directory(str(Path(path).parent))
    pd.DataFrame(list(rows), columns=columns).to_csv(path, index=False, float_format="%.17g")
    return path


def read_json(path: str) -> Dict[str, Any]:
    """
    Read a JSON object from a file

    Args:
        path: JSON file

    Returns:
        Dict[str, Any]: Parsed object
    """
    if not file_exists(path):
        raise InputFormatError(f"File {path} not found")
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InputFormatError(f"Invalid JSON in {path}: {e.msg}", line=e.lineno)
    if not isinstance(data, dict):
        raise InputFormatError(f"{path} must contain a JSON object")
    return data


def write_json(data: Dict[str, Any], path: str) -> str:
    """
    Write a JSON document with sorted keys

    Args:
        data: JSON-serializable mapping
        path: Output file

    Returns:
        str: Path to the written file
    """
    ensure_directory(str(Path(path).parent))
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True, allow_nan=True) + "\n")
    return path
