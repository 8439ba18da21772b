"""
Annotated numpy array types shared by the data models
"""
from typing import Annotated

import numpy as np
from pydantic import BeforeValidator, PlainSerializer


def _frozen_array(value, dtype) -> np.ndarray:
    array = np.array(value, dtype=dtype)
    array.setflags(write=False)
    return array


def _to_float_array(value) -> np.ndarray:
    return _frozen_array(value, float)


def _to_int_array(value) -> np.ndarray:
    array = np.asarray(value)
    if array.size and not np.all(np.equal(np.mod(array, 1), 0)):
        raise ValueError("expected integer labels")
    return _frozen_array(array, np.int64)


# Read-only float array, serialized as a nested list
FloatArray = Annotated[
    np.ndarray,
    BeforeValidator(_to_float_array),
    PlainSerializer(lambda a: a.tolist(), return_type=list),
]

# Read-only integer array, serialized as a nested list
IntArray = Annotated[
    np.ndarray,
    BeforeValidator(_to_int_array),
    PlainSerializer(lambda a: a.tolist(), return_type=list),
]
