"""Log-linear (maximum entropy) view of attention weights.

Labels y are key indices 0..T-1. Feature i fires only on its own label,
with value q.k_i, so the exponent sum_j lambda_j f_j(q, y) collapses to
lambda_y q.k_y and the conditional distribution is a softmax over the
per-key scores scaled by their lambdas. With every lambda equal to the
attention scaling factor, this is exactly the attention weight vector.

Lambdas are supplied, never fitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .attention import as_rows, key_scores
from .errors import (
    DimensionMismatchError,
    ExpOverflowError,
    NonFiniteInputError,
)
from .gaussian import EXP_ARG_LIMIT

__all__ = [
    "MaxEntAttentionModel",
    "feature",
    "conditional_probability",
    "expected_feature",
    "feature_score_sum",
    "partition_function",
]


@dataclass(frozen=True)
class MaxEntAttentionModel:
    """(lambda_1..lambda_T, query, keys) defining p(y | q).

    Raw per-key scores q.k_i are computed once at construction. Logits
    lambda_i * q.k_i must be finite; magnitudes beyond the exp guard are
    allowed here because the stabilized softmax only needs representable
    logit differences. The raw-exponentiation diagnostics below do
    enforce the guard.
    """

    lambdas: np.ndarray
    query: np.ndarray
    keys: np.ndarray
    scores: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lambdas = linalg.as_vector(self.lambdas, "lambdas")
        query = linalg.as_vector(self.query, "query")
        keys = as_rows(self.keys, "keys")
        if lambdas.shape[0] != keys.shape[0]:
            raise DimensionMismatchError(
                f"{lambdas.shape[0]} lambdas for {keys.shape[0]} keys"
            )
        scores = key_scores(query, keys)
        if not np.all(np.isfinite(lambdas * scores)):
            raise NonFiniteInputError("lambda_i * q.k_i overflowed double precision")
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "query", query)
        object.__setattr__(self, "keys", keys)
        object.__setattr__(self, "scores", scores)

    @property
    def length(self) -> int:
        return self.keys.shape[0]


def _check_index(i: int, n: int) -> None:
    if not 0 <= i < n:
        raise IndexError(f"index {i} out of range [0, {n})")


def feature(model: MaxEntAttentionModel, i: int, y: int) -> float:
    """f_i(q, y): q.k_i when the label y names key i, else 0."""
    _check_index(i, model.length)
    _check_index(y, model.length)
    return float(model.scores[i]) if y == i else 0.0


def feature_score_sum(model: MaxEntAttentionModel, y: int) -> float:
    """sum_j lambda_j f_j(q, y) by explicit summation over all features.

    Diagnostic for the collapse step: only feature y is nonzero, so the
    sum must equal lambda_y * q.k_y exactly.
    """
    _check_index(y, model.length)
    total = 0.0
    for j in range(model.length):
        total += float(model.lambdas[j]) * feature(model, j, y)
    return total


def conditional_probability(model: MaxEntAttentionModel) -> np.ndarray:
    """p(y | q) for y = 0..T-1: softmax of (lambda_1 q.k_1, ..., lambda_T q.k_T)."""
    return linalg.softmax(model.lambdas * model.scores)


def partition_function(model: MaxEntAttentionModel) -> float:
    """Z(q) = sum_y exp(sum_j lambda_j f_j(q, y)), by raw exponentiation.

    Unlike the stabilized softmax path, this exponentiates unshifted
    exponents and therefore enforces the exp range guard.
    """
    exponents = np.array(
        [feature_score_sum(model, y) for y in range(model.length)]
    )
    if np.abs(exponents).max() > EXP_ARG_LIMIT:
        raise ExpOverflowError(
            f"|lambda * q.k| = {np.abs(exponents).max():.6g} exceeds the raw exp "
            f"guard ({EXP_ARG_LIMIT:g})"
        )
    return float(np.exp(exponents).sum())


def expected_feature(model: MaxEntAttentionModel, i: int) -> float:
    """Model expectation of feature i: sum_y p(y|q) f_i(q, y) = p(i|q) q.k_i."""
    _check_index(i, model.length)
    probs = conditional_probability(model)
    return float(probs[i]) * float(model.scores[i])
