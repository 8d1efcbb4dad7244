"""Internal helpers for state matrices.

States are N x d float64 matrices. Scalar per-node states may be passed as
1-d arrays; these helpers lift them to a single column and remember to
flatten the result back.
"""

from __future__ import annotations

import numpy as np


def to_matrix(x):
    """Return (x as an N x d float64 matrix, was_flat flag)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        return x[:, None], True
    if x.ndim != 2:
        raise ValueError("state must be a vector or an N x d matrix")
    return x, False


def from_matrix(x, flat):
    """Undo to_matrix: drop the column axis when the input was 1-d."""
    return x[:, 0] if flat else x
