"""Exact rank of integer matrices."""

from __future__ import annotations

import flint
import numpy as np


def dedupe_rows(A: np.ndarray) -> np.ndarray:
    """Drop zero rows and rows equal up to sign; the row space is unchanged."""
    A = np.asarray(A, dtype=np.int64)
    A = A[np.any(A != 0, axis=1)]
    if not len(A):
        return A
    lead = A[np.arange(len(A)), np.argmax(A != 0, axis=1)]
    A = A * np.sign(lead)[:, None]
    return np.unique(A, axis=0)


def integer_rank(A: np.ndarray) -> int:
    """Rank over the rationals of an integer matrix."""
    A = dedupe_rows(A)
    if A.size == 0:
        return 0
    return int(flint.fmpz_mat(A.tolist()).rank())


def nullity(A: np.ndarray) -> int:
    A = np.asarray(A)
    return A.shape[1] - integer_rank(A)
