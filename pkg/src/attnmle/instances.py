"""Instance files and seeded random instance generation.

An instance file is a single JSON document with fields ``alpha``,
``beta``, ``queries``, ``keys``, ``values`` and optional ``lambdas``.
All random entries anywhere in the package come from the SplitMix64
stream in :mod:`attnmle.prng`, drawn in a documented order so files and
verification runs are reproducible bit-for-bit from the seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .attention import AttentionConfig, KeyValueSequence, as_rows
from .errors import ValidationError
from .gaussian import GaussianAttentionModel
from .linalg import as_vector
from .maxent import MaxEntAttentionModel
from .prng import SplitMix64

__all__ = [
    "InstanceFile",
    "load_instance",
    "save_instance",
    "random_instance_file",
    "random_gaussian_model",
    "draw_matrix",
    "draw_vector",
]

VERIFY_MAX_T = 16
VERIFY_MAX_D = 8


@dataclass(frozen=True)
class InstanceFile:
    """One attention scenario: scaling constants plus query/key/value arrays."""

    alpha: float
    beta: float
    queries: np.ndarray
    keys: np.ndarray
    values: np.ndarray
    lambdas: np.ndarray | None = None

    def __post_init__(self):
        if not (isinstance(self.alpha, (int, float)) and math.isfinite(self.alpha) and self.alpha > 0):
            raise ValidationError(f"field 'alpha' must be a positive finite number, got {self.alpha!r}")
        if not (isinstance(self.beta, (int, float)) and math.isfinite(self.beta) and self.beta > 0):
            raise ValidationError(f"field 'beta' must be a positive finite number, got {self.beta!r}")
        arrays = {}
        for name in ("queries", "keys", "values"):
            try:
                arrays[name] = as_rows(getattr(self, name), name)
            except (ValidationError, ValueError) as exc:
                raise ValidationError(f"field '{name}': {exc}") from exc
        if arrays["keys"].shape[0] != arrays["values"].shape[0]:
            raise ValidationError(
                "field 'values': length "
                f"{arrays['values'].shape[0]} does not match keys length {arrays['keys'].shape[0]}"
            )
        d = arrays["keys"].shape[1]
        for name in ("queries", "values"):
            if arrays[name].shape[1] != d:
                raise ValidationError(
                    f"field '{name}': dimension {arrays[name].shape[1]} does not match keys dimension {d}"
                )
        lambdas = self.lambdas
        if lambdas is not None:
            try:
                lambdas = as_vector(lambdas, "lambdas")
            except (ValidationError, ValueError) as exc:
                raise ValidationError(f"field 'lambdas': {exc}") from exc
            if lambdas.shape[0] != arrays["keys"].shape[0]:
                raise ValidationError(
                    f"field 'lambdas': length {lambdas.shape[0]} does not match keys length "
                    f"{arrays['keys'].shape[0]}"
                )
        for name, arr in arrays.items():
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "lambdas", lambdas)

    @property
    def length(self) -> int:
        return self.keys.shape[0]

    @property
    def dim(self) -> int:
        return self.keys.shape[1]

    def config(self) -> AttentionConfig:
        return AttentionConfig(alpha=self.alpha)

    def sequence(self) -> KeyValueSequence:
        return KeyValueSequence(keys=self.keys, values=self.values)

    def gaussian_model(self, query_index: int = 0) -> GaussianAttentionModel:
        return GaussianAttentionModel(
            alpha=self.alpha,
            beta=self.beta,
            query=self.queries[query_index],
            seq=self.sequence(),
        )

    def maxent_model(self, query_index: int = 0) -> MaxEntAttentionModel:
        lambdas = self.lambdas
        if lambdas is None:
            lambdas = np.full(self.length, self.alpha)
        return MaxEntAttentionModel(
            lambdas=lambdas, query=self.queries[query_index], keys=self.keys
        )

    def to_dict(self) -> dict:
        out = {
            "alpha": self.alpha,
            "beta": self.beta,
            "queries": self.queries.tolist(),
            "keys": self.keys.tolist(),
            "values": self.values.tolist(),
        }
        if self.lambdas is not None:
            out["lambdas"] = self.lambdas.tolist()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "InstanceFile":
        if not isinstance(data, dict):
            raise ValidationError("instance file must be a JSON object")
        for name in ("alpha", "beta", "queries", "keys", "values"):
            if name not in data:
                raise ValidationError(f"missing field '{name}'")
        known = {"alpha", "beta", "queries", "keys", "values", "lambdas"}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown field '{sorted(unknown)[0]}'")
        for name in ("alpha", "beta"):
            if isinstance(data[name], bool) or not isinstance(data[name], (int, float)):
                raise ValidationError(f"field '{name}' must be a number, got {data[name]!r}")
        return cls(
            alpha=float(data["alpha"]),
            beta=float(data["beta"]),
            queries=data["queries"],
            keys=data["keys"],
            values=data["values"],
            lambdas=data.get("lambdas"),
        )


def load_instance(path) -> InstanceFile:
    """Parse and validate an instance file; errors name the offending field."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON in {path}: {exc}") from exc
    return InstanceFile.from_dict(data)


def save_instance(instance: InstanceFile, path) -> None:
    """Write an instance file as indented JSON (deterministic bytes)."""
    Path(path).write_text(json.dumps(instance.to_dict(), indent=2) + "\n")


def draw_vector(stream: SplitMix64, n: int) -> np.ndarray:
    """n uniforms in [-1, 1), in stream order."""
    return np.array([stream.uniform() for _ in range(n)], dtype=np.float64)


def draw_matrix(stream: SplitMix64, rows: int, cols: int) -> np.ndarray:
    """rows x cols uniforms in [-1, 1), drawn row-major."""
    return draw_vector(stream, rows * cols).reshape(rows, cols)


def random_instance_file(seed: int, length: int, dim: int) -> InstanceFile:
    """Deterministic instance with ``length`` queries/keys/values of ``dim``.

    Draw order from SplitMix64(seed): queries row-major, then keys, then
    values. alpha = 1/sqrt(dim), beta = 1.
    """
    if length < 1:
        raise ValidationError(f"length must be >= 1, got {length}")
    if dim < 1:
        raise ValidationError(f"dim must be >= 1, got {dim}")
    stream = SplitMix64(seed)
    return InstanceFile(
        alpha=1.0 / math.sqrt(dim),
        beta=1.0,
        queries=draw_matrix(stream, length, dim),
        keys=draw_matrix(stream, length, dim),
        values=draw_matrix(stream, length, dim),
    )


def random_gaussian_model(
    stream: SplitMix64,
    max_length: int = VERIFY_MAX_T,
    max_dim: int = VERIFY_MAX_D,
    beta: float = 1.0,
) -> GaussianAttentionModel:
    """One verification instance drawn from the stream.

    Draw order: T in [1, max_length], d in [1, max_dim], then the query
    row, key rows, value rows. alpha = 1/sqrt(d).
    """
    length = stream.randint(1, max_length)
    dim = stream.randint(1, max_dim)
    query = draw_vector(stream, dim)
    keys = draw_matrix(stream, length, dim)
    values = draw_matrix(stream, length, dim)
    return GaussianAttentionModel(
        alpha=1.0 / math.sqrt(dim),
        beta=beta,
        query=query,
        seq=KeyValueSequence(keys=keys, values=values),
    )
