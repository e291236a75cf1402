from typing import Annotated

import numpy as np
from pydantic import PlainSerializer, PlainValidator


def _real_array(value) -> np.ndarray:
    array = np.array(value, dtype=float)
    array.flags.writeable = False
    return array


def _complex_array(value) -> np.ndarray:
    array = np.array(value, dtype=complex)
    array.flags.writeable = False
    return array


def _complex_number(value) -> complex:
    if isinstance(value, dict):
        return complex(value["re"], value["im"])
    return complex(value)


# Arrays are copied and frozen on validation
RealArray = Annotated[
    np.ndarray,
    PlainValidator(_real_array),
    PlainSerializer(lambda a: a.tolist(), when_used="json"),
]
ComplexArray = Annotated[
    np.ndarray,
    PlainValidator(_complex_array),
    PlainSerializer(
        lambda a: {"re": a.real.tolist(), "im": a.imag.tolist()}, when_used="json"
    ),
]
ComplexNumber = Annotated[
    complex,
    PlainValidator(_complex_number),
    PlainSerializer(lambda z: {"re": z.real, "im": z.imag}, when_used="json"),
]
