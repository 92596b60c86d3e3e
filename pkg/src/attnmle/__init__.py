"""Scaled-dot-product attention as the closed-form MLE of a
query/key-dependent Gaussian variance model, with the equivalent
maximum-entropy formulation and a mechanical verification suite.
"""

from .attention import (
    AttentionConfig,
    InnerProductCounter,
    KeyValueSequence,
    SelfAttentionResult,
    attention_weights,
    context_vector,
    self_attention,
)
from .errors import (
    ConvergenceWarning,
    DimensionMismatchError,
    EmptySequenceError,
    ExpOverflowError,
    NonFiniteInputError,
    ValidationError,
    ZeroVectorError,
)
from .gaussian import (
    GaussianAttentionModel,
    LikelihoodEvaluation,
    closed_form_mle,
    log_density,
    log_likelihood,
    log_likelihood_gradient,
    numerical_mle,
    precision,
    variance,
)
from .instances import (
    InstanceFile,
    load_instance,
    random_gaussian_model,
    random_instance_file,
    save_instance,
)
from .linalg import cosine, inner_product, norm, softmax
from .maxent import (
    MaxEntAttentionModel,
    conditional_probability,
    expected_feature,
    feature,
    partition_function,
)
from .prng import SplitMix64

__version__ = "0.1.0"

__all__ = [
    "AttentionConfig",
    "ConvergenceWarning",
    "DimensionMismatchError",
    "EmptySequenceError",
    "ExpOverflowError",
    "GaussianAttentionModel",
    "InnerProductCounter",
    "InstanceFile",
    "KeyValueSequence",
    "LikelihoodEvaluation",
    "MaxEntAttentionModel",
    "NonFiniteInputError",
    "SelfAttentionResult",
    "SplitMix64",
    "ValidationError",
    "ZeroVectorError",
    "attention_weights",
    "closed_form_mle",
    "conditional_probability",
    "context_vector",
    "cosine",
    "expected_feature",
    "feature",
    "inner_product",
    "load_instance",
    "log_density",
    "log_likelihood",
    "log_likelihood_gradient",
    "norm",
    "numerical_mle",
    "partition_function",
    "precision",
    "random_gaussian_model",
    "random_instance_file",
    "save_instance",
    "self_attention",
    "softmax",
    "variance",
]
