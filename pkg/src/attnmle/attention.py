"""Forward attention path: softmax weights over scaled query-key scores
and the weighted value (context) vector, for one query or a whole
sequence of queries.

Inner products are the unit of the cost model: every query-key score is
one counted inner product, so a full self-attention pass over a length-T
sequence performs exactly T*T of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatchError,
    EmptySequenceError,
    ExpOverflowError,
    NonFiniteInputError,
)

__all__ = [
    "AttentionConfig",
    "KeyValueSequence",
    "InnerProductCounter",
    "SelfAttentionResult",
    "key_scores",
    "attention_weights",
    "context_vector",
    "self_attention",
]


def as_rows(x, name: str = "sequence") -> np.ndarray:
    """Coerce ``x`` to a finite (T, d) float64 array with T >= 1, d >= 1."""
    m = np.asarray(x, dtype=np.float64)
    if m.ndim == 1:
        if m.size == 0:
            raise EmptySequenceError(f"{name} must contain at least one vector")
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise DimensionMismatchError(f"{name} must be a sequence of vectors")
    if m.shape[0] < 1:
        raise EmptySequenceError(f"{name} must contain at least one vector")
    if m.shape[1] < 1:
        raise DimensionMismatchError(f"{name} vectors must have dimension >= 1")
    if not np.all(np.isfinite(m)):
        raise NonFiniteInputError(f"{name} contains NaN or infinity")
    return m


@dataclass(frozen=True)
class AttentionConfig:
    """Scaling factor applied to query-key scores before the softmax."""

    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise NonFiniteInputError(f"alpha must be positive and finite, got {self.alpha!r}")

    @classmethod
    def for_dim(cls, d: int) -> "AttentionConfig":
        """The standard default: alpha = 1/sqrt(d)."""
        return cls(alpha=1.0 / math.sqrt(d))


@dataclass(frozen=True)
class KeyValueSequence:
    """Paired key and value vectors {k_1..k_T}, {v_1..v_T} of common dim d."""

    keys: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        keys = as_rows(self.keys, "keys")
        values = as_rows(self.values, "values")
        if keys.shape[0] != values.shape[0]:
            raise DimensionMismatchError(
                f"keys and values differ in length: {keys.shape[0]} vs {values.shape[0]}"
            )
        if keys.shape[1] != values.shape[1]:
            raise DimensionMismatchError(
                f"keys and values differ in dimension: {keys.shape[1]} vs {values.shape[1]}"
            )
        object.__setattr__(self, "keys", keys)
        object.__setattr__(self, "values", values)

    @property
    def length(self) -> int:
        return self.keys.shape[0]

    @property
    def dim(self) -> int:
        return self.keys.shape[1]


@dataclass
class InnerProductCounter:
    """Plain counter of query-key inner products, for the cost report."""

    count: int = 0

    def add(self, n: int = 1) -> None:
        self.count += n


@dataclass(frozen=True)
class SelfAttentionResult:
    """Context vectors (one row per query) plus the exact inner-product count."""

    contexts: np.ndarray
    inner_products: int


def key_scores(q, keys, counter: InnerProductCounter | None = None) -> np.ndarray:
    """Raw scores q.k_i for every key, one counted inner product per key.

    Shared by the attention and maxent weighting paths so both produce
    bitwise-identical logits for the same inputs.
    """
    qv = linalg.as_vector(q, "query")
    km = as_rows(keys, "keys")
    if qv.shape[0] != km.shape[1]:
        raise DimensionMismatchError(
            f"query dim {qv.shape[0]} does not match key dim {km.shape[1]}"
        )
    scores = np.empty(km.shape[0], dtype=np.float64)
    for i in range(km.shape[0]):
        scores[i] = np.dot(qv, km[i])
    if counter is not None:
        counter.add(km.shape[0])
    return scores


def attention_weights(
    q,
    keys,
    cfg: AttentionConfig | None = None,
    counter: InnerProductCounter | None = None,
) -> np.ndarray:
    """w_i(q) = exp(alpha q.k_i) / sum_j exp(alpha q.k_j).

    Evaluated through the shift-stabilized softmax, so large scaled scores
    stay finite. When ``cfg`` is None, alpha defaults to 1/sqrt(d).
    """
    scores = key_scores(q, keys, counter)
    if cfg is None:
        cfg = AttentionConfig.for_dim(np.asarray(keys).shape[-1])
    logits = cfg.alpha * scores
    if not np.all(np.isfinite(logits)):
        raise ExpOverflowError("scaled query-key score overflowed double precision")
    return linalg.softmax(logits)


def context_vector(
    q,
    seq: KeyValueSequence,
    cfg: AttentionConfig | None = None,
    counter: InnerProductCounter | None = None,
) -> np.ndarray:
    """Weighted value vector sum_i w_i(q) v_i.

    Each output coordinate lies in [min_i v_ij, max_i v_ij]: the weights
    are a convex combination.
    """
    weights = attention_weights(q, seq.keys, cfg, counter)
    return weights @ seq.values


def self_attention(
    queries,
    seq: KeyValueSequence,
    cfg: AttentionConfig | None = None,
) -> SelfAttentionResult:
    """Context vector for every query in a length-T sequence.

    The queries must number exactly T (self-attention: each query is one
    of the sequence positions). Row j of the result is exactly
    ``context_vector(queries[j], seq, cfg)``; the counted cost is T*T
    inner products.
    """
    qm = as_rows(queries, "queries")
    if qm.shape[0] != seq.length:
        raise DimensionMismatchError(
            f"self-attention needs one query per position: got {qm.shape[0]} queries "
            f"for sequence length {seq.length}"
        )
    if qm.shape[1] != seq.dim:
        raise DimensionMismatchError(
            f"query dim {qm.shape[1]} does not match sequence dim {seq.dim}"
        )
    counter = InnerProductCounter()
    contexts = np.empty((seq.length, seq.dim), dtype=np.float64)
    for j in range(qm.shape[0]):
        contexts[j] = context_vector(qm[j], seq, cfg, counter)
    return SelfAttentionResult(contexts=contexts, inner_products=counter.count)
