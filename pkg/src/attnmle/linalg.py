"""Vector primitives: inner product, norm, cosine, stabilized softmax.

All arithmetic is 64-bit floating point. Vectors are 1-D float64 numpy
arrays; ``as_vector`` is the boundary validator every public entry point
runs its inputs through.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DimensionMismatchError,
    NonFiniteInputError,
    ZeroVectorError,
)

__all__ = [
    "as_vector",
    "inner_product",
    "norm",
    "cosine",
    "softmax",
    "validate_probability_vector",
]

PROBABILITY_SUM_TOL = 1e-12


def as_vector(x, name: str = "vector") -> np.ndarray:
    """Coerce ``x`` to a finite 1-D float64 array of length >= 1."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionMismatchError(f"{name} must be 1-D, got shape {v.shape}")
    if v.size < 1:
        raise DimensionMismatchError(f"{name} must have at least one entry")
    if not np.all(np.isfinite(v)):
        raise NonFiniteInputError(f"{name} contains NaN or infinity")
    return v


def _check_same_dim(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape[0] != y.shape[0]:
        raise DimensionMismatchError(
            f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}"
        )


def inner_product(x, y) -> float:
    """<x, y> = sum_i x_i * y_i."""
    xv = as_vector(x, "x")
    yv = as_vector(y, "y")
    _check_same_dim(xv, yv)
    return float(np.dot(xv, yv))


def norm(x) -> float:
    """Euclidean length sqrt(<x, x>)."""
    xv = as_vector(x, "x")
    return float(np.sqrt(np.dot(xv, xv)))


def cosine(x, y) -> float:
    """cos of the angle between x and y: <x,y> / (|x| |y|).

    Undefined for zero vectors; raises ZeroVectorError rather than
    returning an arbitrary value.
    """
    xv = as_vector(x, "x")
    yv = as_vector(y, "y")
    _check_same_dim(xv, yv)
    nx = norm(xv)
    ny = norm(yv)
    if nx == 0.0 or ny == 0.0:
        raise ZeroVectorError("cosine is undefined for a zero vector")
    return inner_product(xv, yv) / (nx * ny)


def softmax(logits) -> np.ndarray:
    """exp(x_i) / sum_j exp(x_j), with the max logit subtracted first.

    The shift is value-identical in exact arithmetic and keeps the
    computation finite for logits of magnitude well beyond exp's overflow
    point. Entries whose distance from the max exceeds ~745 log units
    underflow to exact 0.0; normalization still holds.
    """
    x = as_vector(logits, "logits")
    e = np.exp(x - x.max())
    return e / e.sum()


def validate_probability_vector(w, sum_tol: float = PROBABILITY_SUM_TOL) -> np.ndarray:
    """Check that ``w`` is a probability vector: finite, in [0, 1], sum ~ 1.

    Entries may be exact 0.0 only through exp underflow; anything negative
    or above 1 is rejected.
    """
    v = as_vector(w, "weights")
    if np.any(v < 0.0) or np.any(v > 1.0):
        raise NonFiniteInputError("weights must lie in [0, 1]")
    s = float(v.sum())
    if abs(s - 1.0) > sum_tol:
        raise NonFiniteInputError(f"weights sum to {s!r}, not 1 within {sum_tol}")
    return v
