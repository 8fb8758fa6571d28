"""Minkowski distance aggregation over variables.

For order q >= 1 the distance between rows x and y is
(sum_l |x_l - y_l|**q) ** (1/q); q = inf takes the largest coordinate
difference.  Computations factor out the largest absolute difference first,
so very large coordinates cannot overflow for any finite q.
"""

from __future__ import annotations

import math

import numpy as np

from .core import CondensedDistanceMatrix, check_data_matrix

__all__ = ["check_order", "parse_order", "minkowski", "pairwise", "cross"]


def check_order(q):
    """Validate an aggregation order: a real q >= 1, or infinity."""
    q = float(q)
    if math.isnan(q) or q < 1.0:
        raise ValueError("aggregation order must be >= 1 or inf, got %r" % (q,))
    return q


def parse_order(text):
    """Parse an aggregation order from a string; accepts 'inf'."""
    s = str(text).strip().lower()
    if s in ("inf", "infinity"):
        return math.inf
    try:
        q = float(s)
    except ValueError:
        raise ValueError("could not parse aggregation order %r" % (text,)) from None
    return check_order(q)


def format_order(q):
    """Compact string for an order: '1', '2.5', 'inf'."""
    q = float(q)
    if math.isinf(q):
        return "inf"
    if q == int(q):
        return str(int(q))
    return repr(q)


def _powered(scaled, q):
    # small integer exponents dominate use; avoid the generic pow for them
    if q == 1.0:
        return scaled
    if q == 2.0:
        return scaled * scaled
    if q == 3.0:
        return scaled * scaled * scaled
    if q == 4.0:
        s2 = scaled * scaled
        return s2 * s2
    return scaled ** q


def _reduce(diffs, q):
    """Aggregate |x - y| rows (last axis = variables) to distances."""
    m = diffs.max(axis=-1)
    if math.isinf(q):
        return m
    safe = m > 0.0
    denom = np.where(safe, m, 1.0)
    scaled = diffs / denom[..., None]
    s = _powered(scaled, q).sum(axis=-1)
    out = denom * s ** (1.0 / q)
    return np.where(safe, out, 0.0)


def minkowski(x, y, q):
    """Minkowski distance of order q between two vectors.

    Parameters
    ----------
    x, y : array_like, 1-D, equal length, finite
    q : float >= 1 or inf

    Returns
    -------
    float
    """
    q = check_order(q)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1:
        raise ValueError("expected 1-D vectors")
    if x.shape != y.shape:
        raise ValueError("length mismatch: %d vs %d" % (x.shape[0], y.shape[0]))
    if x.shape[0] == 0:
        raise ValueError("vectors must be non-empty")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("vectors must be finite")
    return float(_reduce(np.abs(x - y)[None, :], q)[0])


def pairwise(X, q):
    """All pairwise distances between rows of X, condensed.

    Returns a :class:`CondensedDistanceMatrix`.  The result is a deterministic
    function of X and q alone (same bytes on every run and thread count).
    """
    q = check_order(q)
    X = check_data_matrix(X, min_rows=2)
    n = X.shape[0]
    D = np.zeros((n, n))
    for i in range(n - 1):
        d = _reduce(np.abs(X[i + 1:] - X[i]), q)
        D[i, i + 1:] = d
        D[i + 1:, i] = d
    return CondensedDistanceMatrix.from_square(D)


def cross(X_left, X_right, q):
    """Distances between every row of X_left and every row of X_right.

    Returns an (n_left, n_right) array; entry (a, b) is the distance between
    row a of X_left and row b of X_right.  Column counts must match.
    """
    q = check_order(q)
    A = check_data_matrix(X_left)
    B = check_data_matrix(X_right)
    if A.shape[1] != B.shape[1]:
        raise ValueError(
            "variable count mismatch: %d vs %d" % (A.shape[1], B.shape[1])
        )
    out = np.empty((A.shape[0], B.shape[0]))
    for a in range(A.shape[0]):
        out[a] = _reduce(np.abs(B - A[a]), q)
    return out
