import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from attnmle.errors import (
    DimensionMismatchError,
    NonFiniteInputError,
    ZeroVectorError,
)
from attnmle.linalg import (
    cosine,
    inner_product,
    norm,
    softmax,
    validate_probability_vector,
)

finite_entries = st.floats(
    min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False
)


def vectors(min_size=1, max_size=16, elements=finite_entries):
    return st.lists(elements, min_size=min_size, max_size=max_size).map(np.array)


def paired_vectors(max_size=16, elements=finite_entries):
    return st.integers(min_value=1, max_value=max_size).flatmap(
        lambda n: st.tuples(
            st.lists(elements, min_size=n, max_size=n).map(np.array),
            st.lists(elements, min_size=n, max_size=n).map(np.array),
        )
    )


class TestInnerProduct:
    def test_zero_vector(self):
        assert inner_product([0, 0, 0], [5, -2, 7]) == 0.0

    def test_squared_norm(self):
        assert inner_product([1, 2, 3], [1, 2, 3]) == 14.0

    def test_hand_summed(self):
        # 1*4 + 2*5 + 3*6
        assert inner_product([1, 2, 3], [4, 5, 6]) == 32.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            inner_product([1, 2], [1, 2, 3])

    def test_non_finite_rejected(self):
        with pytest.raises(NonFiniteInputError):
            inner_product([1, np.nan], [1, 2])

    @given(paired_vectors())
    def test_symmetry_exact(self, xy):
        x, y = xy
        assert inner_product(x, y) == inner_product(y, x)


class TestNorm:
    def test_zero(self):
        assert norm([0, 0]) == 0.0

    def test_pythagorean(self):
        assert norm([3, 4]) == 5.0

    def test_sqrt_four(self):
        assert norm([1, 1, 1, 1]) == 2.0

    @given(vectors())
    def test_squared_norm_matches_inner_product(self, x):
        ip = inner_product(x, x)
        assert abs(norm(x) ** 2 - ip) <= 1e-12 * max(1.0, ip)

    # magnitudes where squaring cannot underflow, so zero-iff-zero is exact
    @given(
        st.lists(
            st.one_of(
                st.just(0.0),
                st.floats(min_value=1e-100, max_value=1e3),
                st.floats(min_value=-1e3, max_value=-1e-100),
            ),
            min_size=1,
            max_size=16,
        ).map(np.array)
    )
    def test_nonnegative_and_zero_iff_zero_vector(self, x):
        n = norm(x)
        assert n >= 0.0
        assert (n == 0.0) == bool(np.all(x == 0.0))


class TestCosine:
    def test_identical_direction(self):
        assert cosine([1, 0], [1, 0]) == 1.0

    def test_orthogonal(self):
        assert cosine([1, 0], [0, 1]) == 0.0

    def test_forty_five_degrees(self):
        assert abs(cosine([1, 1], [1, 0]) - 0.7071067811865475) <= 1e-15

    def test_zero_vector_is_loud(self):
        with pytest.raises(ZeroVectorError):
            cosine([0, 0], [1, 2])
        with pytest.raises(ZeroVectorError):
            cosine([1, 2], [0, 0])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            cosine([1, 0, 0], [1, 0])

    @given(paired_vectors())
    def test_range(self, xy):
        x, y = xy
        if norm(x) == 0.0 or norm(y) == 0.0:
            return
        assert -1.0 - 1e-12 <= cosine(x, y) <= 1.0 + 1e-12


class TestSoftmax:
    def test_symmetry(self):
        np.testing.assert_allclose(softmax([0, 0, 0]), [1 / 3] * 3, rtol=0, atol=1e-15)

    def test_shift_example(self):
        for c in (0.0, -17.5, 123.0, 1e3):
            np.testing.assert_allclose(
                softmax([c, c + 1]), softmax([0, 1]), rtol=0, atol=1e-15
            )

    def test_frozen_values(self):
        # direct evaluation of exp/sum(exp) at 50-digit precision
        expected = [0.09003057317038046, 0.24472847105479764, 0.6652409557748219]
        np.testing.assert_allclose(softmax([1, 2, 3]), expected, rtol=0, atol=1e-15)

    def test_rejects_non_finite(self):
        with pytest.raises(NonFiniteInputError):
            softmax([0.0, np.inf])
        with pytest.raises(NonFiniteInputError):
            softmax([np.nan])

    def test_huge_logits_stay_finite_and_normalized(self):
        w = softmax([1e4, -1e4, 0.0])
        validate_probability_vector(w)
        assert w[0] > 0.999

    def test_single_entry(self):
        assert softmax([123.0])[0] == 1.0

    @given(vectors(max_size=64, elements=st.floats(min_value=-1e4, max_value=1e4)))
    def test_normalization(self, x):
        w = softmax(x)
        assert abs(float(w.sum()) - 1.0) <= 1e-12
        assert np.all(w >= 0.0) and np.all(w <= 1.0)

    @settings(max_examples=200)
    @given(
        vectors(max_size=32, elements=st.floats(min_value=-1e3, max_value=1e3)),
        st.floats(min_value=-1e3, max_value=1e3),
    )
    def test_shift_invariance(self, x, c):
        diff = np.abs(softmax(x) - softmax(x + c)).max()
        assert diff <= 1e-12

    # coarse grid in [-30, 30]: gaps of >= 1e-4 keep strict ordering
    # representable through exp and normalization
    @given(
        st.lists(
            st.integers(min_value=-300_000, max_value=300_000).map(lambda k: k / 1e4),
            min_size=2,
            max_size=32,
            unique=True,
        ).map(np.array)
    )
    def test_monotonicity(self, x):
        w = softmax(x)
        order = np.argsort(x)
        for a, b in zip(order, order[1:]):
            assert w[b] > w[a]


class TestValidateProbabilityVector:
    def test_accepts_uniform(self):
        validate_probability_vector(np.full(4, 0.25))

    def test_rejects_negative(self):
        with pytest.raises(NonFiniteInputError):
            validate_probability_vector([-0.1, 1.1])

    def test_rejects_bad_sum(self):
        with pytest.raises(NonFiniteInputError):
            validate_probability_vector([0.3, 0.3])


def test_vectors_must_be_one_dimensional():
    with pytest.raises(DimensionMismatchError):
        norm(np.zeros((2, 2)))
    with pytest.raises(DimensionMismatchError):
        softmax(np.zeros(0))
