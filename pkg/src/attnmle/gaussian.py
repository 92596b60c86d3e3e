"""Gaussian model behind attention: each timestep i contributes a
Gaussian over every coordinate of the unknown vector v, centered at the
observed value vector v_i with precision exp(alpha q.k_i) * beta.

Maximizing the joint log-likelihood in v has a closed form: the
precision-weighted mean of the value vectors, which is exactly the
softmax-attention context vector. An independent gradient-ascent
optimizer is provided to confirm the closed form numerically.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .attention import KeyValueSequence, key_scores
from .errors import (
    ConvergenceWarning,
    DimensionMismatchError,
    ExpOverflowError,
    NonFiniteInputError,
    ValidationError,
)

__all__ = [
    "EXP_ARG_LIMIT",
    "GaussianAttentionModel",
    "LikelihoodEvaluation",
    "precision",
    "variance",
    "log_density",
    "log_likelihood",
    "log_likelihood_gradient",
    "evaluate",
    "closed_form_mle",
    "numerical_mle",
]

# exp() overflows float64 just above exp(709.78); stay clear of it.
EXP_ARG_LIMIT = 700.0


@dataclass(frozen=True)
class GaussianAttentionModel:
    """(alpha, beta, query, key/value sequence) with derived precisions.

    ``precisions[i] = exp(alpha * q.k_i)`` must stay strictly positive and
    finite; construction rejects scaled scores outside the safe exp range.
    """

    alpha: float
    beta: float
    query: np.ndarray
    seq: KeyValueSequence
    precisions: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("alpha", "beta"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0.0):
                raise NonFiniteInputError(f"{name} must be positive and finite, got {val!r}")
        query = linalg.as_vector(self.query, "query")
        if query.shape[0] != self.seq.dim:
            raise DimensionMismatchError(
                f"query dim {query.shape[0]} does not match sequence dim {self.seq.dim}"
            )
        exponents = self.alpha * key_scores(query, self.seq.keys)
        if exponents.max() > EXP_ARG_LIMIT:
            raise ExpOverflowError(
                f"alpha * q.k = {exponents.max():.6g} exceeds the exp overflow guard "
                f"({EXP_ARG_LIMIT:g})"
            )
        thetas = np.exp(exponents)
        if np.any(thetas == 0.0):
            raise ExpOverflowError(
                "alpha * q.k underflows exp to zero; precisions must stay positive"
            )
        object.__setattr__(self, "query", query)
        object.__setattr__(self, "precisions", thetas)

    @property
    def length(self) -> int:
        return self.seq.length

    @property
    def dim(self) -> int:
        return self.seq.dim


@dataclass(frozen=True)
class LikelihoodEvaluation:
    """Log-likelihood and its gradient with respect to v at one point."""

    log_likelihood: float
    gradient: np.ndarray


def _check_index(i: int, n: int, what: str) -> None:
    if not 0 <= i < n:
        raise IndexError(f"{what} index {i} out of range [0, {n})")


def precision(model: GaussianAttentionModel, i: int) -> float:
    """theta(i, q) = exp(alpha q.k_i), the timestep-i precision up to beta."""
    _check_index(i, model.length, "timestep")
    return float(model.precisions[i])


def variance(model: GaussianAttentionModel, i: int) -> float:
    """sigma^2(i, q) = 1 / (theta(i, q) * beta), shared by all coordinates."""
    _check_index(i, model.length, "timestep")
    return 1.0 / (float(model.precisions[i]) * model.beta)


def log_density(model: GaussianAttentionModel, i: int, coord: int, v: float) -> float:
    """Log of the timestep-i Gaussian at scalar v for one coordinate:

        1/2 log(theta beta / 2pi) - (theta beta / 2) (v - v_i[coord])^2
    """
    _check_index(i, model.length, "timestep")
    _check_index(coord, model.dim, "coordinate")
    if not math.isfinite(v):
        raise NonFiniteInputError(f"v must be finite, got {v!r}")
    tb = float(model.precisions[i]) * model.beta
    diff = v - float(model.seq.values[i, coord])
    return 0.5 * math.log(tb / (2.0 * math.pi)) - 0.5 * tb * diff * diff


def _check_v(model: GaussianAttentionModel, v) -> np.ndarray:
    vv = linalg.as_vector(v, "v")
    if vv.shape[0] != model.dim:
        raise DimensionMismatchError(
            f"v has dim {vv.shape[0]}, model dim is {model.dim}"
        )
    return vv


def log_likelihood(model: GaussianAttentionModel, v) -> float:
    """Joint log-likelihood of the observed values under mean vector v.

    Coordinates are independent with a shared per-timestep variance, so
    the scalar log-densities sum over all (timestep, coordinate) pairs.
    """
    vv = _check_v(model, v)
    thetas = model.precisions
    diffs = vv[np.newaxis, :] - model.seq.values
    quad = -0.5 * model.beta * float(thetas @ (diffs * diffs).sum(axis=1))
    norm_term = 0.5 * model.dim * float(
        np.log(thetas * model.beta / (2.0 * math.pi)).sum()
    )
    return norm_term + quad


def log_likelihood_gradient(model: GaussianAttentionModel, v) -> np.ndarray:
    """dL/dv, coordinate j: sum_i -beta theta_i (v_j - v_i[j])."""
    vv = _check_v(model, v)
    thetas = model.precisions
    return model.beta * (thetas @ model.seq.values - vv * thetas.sum())


def evaluate(model: GaussianAttentionModel, v) -> LikelihoodEvaluation:
    """Log-likelihood and gradient at v in one call."""
    return LikelihoodEvaluation(
        log_likelihood=log_likelihood(model, v),
        gradient=log_likelihood_gradient(model, v),
    )


def closed_form_mle(model: GaussianAttentionModel) -> np.ndarray:
    """The stationary point of the log-likelihood:

        v = sum_i theta_i v_i / sum_i theta_i

    beta cancels, and the weights theta_i / sum theta_j are exactly the
    softmax attention weights, so this equals the context vector.
    """
    thetas = model.precisions
    return (thetas @ model.seq.values) / thetas.sum()


def numerical_mle(
    model: GaussianAttentionModel,
    init,
    tol: float = 1e-10,
    max_iters: int = 10_000,
) -> np.ndarray:
    """Maximize the log-likelihood by gradient ascent with backtracking.

    Deliberately shares no algebra with ``closed_form_mle``: steps follow
    the gradient, and the line search halves the step until the Armijo
    sufficient-increase test holds (gain at least half the first-order
    prediction ``step * |grad|^2``), warm-starting at twice the last
    accepted step. For this concave quadratic the Armijo band keeps the
    per-iteration error contraction at roughly one half; plain
    accept-on-any-increase can land on steps with near-unit contraction
    when the curvature sits close to a power of two of the step grid.

    Stops when the gradient's max-abs coordinate drops to
    ``tol * beta * sum(theta)``; since the per-coordinate curvature is
    exactly -beta * sum(theta), that bounds the distance to the optimum
    by ``tol``.

    Close to the optimum the achievable likelihood gain falls below the
    rounding noise of L itself, where comparisons certify nothing (and
    can accept garbage steps). The line search therefore only trusts
    margins comfortably above one ulp of L; once the certifiable gain
    drops under that floor, the ascent finishes with small fixed steps
    derived from the last cleanly accepted step (or from a directional
    curvature probe of the gradient if none exists), using gradient
    information alone, which stays accurate long after L has gone flat.

    Always returns the final iterate; a ConvergenceWarning reports any
    case that ends above tolerance.
    """
    if not (math.isfinite(tol) and tol > 0.0):
        raise ValidationError(f"tol must be positive, got {tol!r}")
    if max_iters < 1:
        raise ValidationError(f"max_iters must be >= 1, got {max_iters!r}")
    v = _check_v(model, init).copy()
    grad_tol = tol * model.beta * float(model.precisions.sum())
    current = log_likelihood(model, v)
    step = 1.0
    clean_step = None
    for _ in range(max_iters):
        grad = log_likelihood_gradient(model, v)
        grad_max = float(np.abs(grad).max())
        if grad_max <= grad_tol:
            return v
        grad_sq = float(grad @ grad)
        noise_floor = _NOISE_MARGIN * np.spacing(abs(current))
        step *= 2.0
        accepted = False
        for _ in range(200):
            margin = 0.5 * step * grad_sq
            if margin < noise_floor:
                break
            candidate = v + step * grad
            cand_value = log_likelihood(model, candidate)
            if cand_value > current + margin:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            return _gradient_finish(model, v, clean_step, grad_tol)
        v, current = candidate, cand_value
        clean_step = step
    grad_max = float(np.abs(log_likelihood_gradient(model, v)).max())
    if grad_max > grad_tol:
        _warn_unconverged(f"iteration cap {max_iters} reached", grad_max, grad_tol)
    return v


# Margin (in ulps of |L|) an Armijo gain must clear before a likelihood
# comparison is considered trustworthy.
_NOISE_MARGIN = 64.0


def _gradient_finish(
    model: GaussianAttentionModel,
    v: np.ndarray,
    clean_step: float | None,
    grad_tol: float,
) -> np.ndarray:
    """Finish the ascent once likelihood comparisons have gone flat.

    A cleanly accepted Armijo step s satisfies s*c <= ~1 for curvature c,
    so s/2 contracts the error by at least ~1/2 per gradient step without
    consulting L again. Without a clean step, c is measured directly from
    the gradient's change along its own direction.
    """
    if clean_step is not None:
        step = clean_step / 2.0
    else:
        step = _probe_step(model, v)
        if step is None:
            grad_max = float(np.abs(log_likelihood_gradient(model, v)).max())
            _warn_unconverged("no usable step size", grad_max, grad_tol)
            return v
    return _fixed_step_finish(model, v, step, grad_tol)


def _probe_step(model: GaussianAttentionModel, v: np.ndarray) -> float | None:
    """Half the inverse curvature along the gradient direction, measured
    as a difference quotient of the gradient itself."""
    grad = log_likelihood_gradient(model, v)
    grad_sq = float(grad @ grad)
    if grad_sq == 0.0:
        return None
    scale = max(float(np.abs(v).max()), 1.0)
    h = 1e-6 * scale / math.sqrt(grad_sq)
    probed = log_likelihood_gradient(model, v + h * grad)
    curvature = float((grad - probed) @ grad) / (h * grad_sq)
    if not (math.isfinite(curvature) and curvature > 0.0):
        return None
    return 0.5 / curvature


def _fixed_step_finish(
    model: GaussianAttentionModel,
    v: np.ndarray,
    step: float,
    grad_tol: float,
    max_steps: int = 200,
) -> np.ndarray:
    """Ascend with a fixed known-safe step until the gradient tolerance holds.

    The step is halved between rounds in case the seed step was inflated
    by an acceptance decided inside likelihood rounding noise.
    """
    grad_max = math.inf
    for _ in range(3):
        for _ in range(max_steps):
            grad = log_likelihood_gradient(model, v)
            grad_max = float(np.abs(grad).max())
            if grad_max <= grad_tol:
                return v
            v = v + step * grad
        step *= 0.5
    _warn_unconverged("fixed-step finish exhausted", grad_max, grad_tol)
    return v


def _warn_unconverged(reason: str, grad_max: float, grad_tol: float) -> None:
    warnings.warn(
        f"numerical_mle: {reason} with |grad|_max {grad_max:.3e} > "
        f"tolerance {grad_tol:.3e}; returning the final iterate",
        ConvergenceWarning,
        stacklevel=3,
    )
