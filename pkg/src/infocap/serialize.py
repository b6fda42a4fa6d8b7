"""JSON encoding of complex vectors and matrices.

Matrices are nested row-major lists of [re, im] pairs; vectors are flat
lists of [re, im] pairs.
"""

from __future__ import annotations

import numpy as np


def matrix_to_json(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_json(obj: list) -> np.ndarray:
    rows = [[complex(p[0], p[1]) for p in row] for row in obj]
    return np.asarray(rows, dtype=complex)


def vector_to_json(v: np.ndarray) -> list:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in v]


def vector_from_json(obj: list) -> np.ndarray:
    return np.asarray([complex(p[0], p[1]) for p in obj], dtype=complex)
