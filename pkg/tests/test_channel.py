import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bayes_security.channel import (
    Channel,
    Prior,
    channel_from_rows,
    check_dims,
    tv_distance,
    two_point_prior,
    uniform_prior,
)
from bayes_security.errors import (
    DimensionMismatch,
    EmptyMatrix,
    EqualIndices,
    IndexOutOfRange,
    InvalidPrior,
    LengthMismatch,
    NegativeEntry,
    RowSumViolation,
    ZeroRow,
)

from conftest import COUNTEREXAMPLE


def test_identity_channel():
    c = channel_from_rows([[1, 0], [0, 1]])
    assert c.shape == (2, 2)
    assert c.n == 2 and c.m == 2


def test_counterexample_loads():
    c = channel_from_rows(COUNTEREXAMPLE)
    assert c.shape == (4, 3)


def test_renormalize():
    c = channel_from_rows([[2, 2], [1, 3]], renormalize=True)
    np.testing.assert_allclose(c.rows, [[0.5, 0.5], [0.25, 0.75]])


@pytest.mark.parametrize(
    "rows, exc",
    [
        ([], EmptyMatrix),
        ([[0.5, -0.1, 0.6]], NegativeEntry),
        ([[0.5, 0.4]], RowSumViolation),
        ([[1.0, float("nan")]], NegativeEntry),
    ],
)
def test_validation_errors(rows, exc):
    with pytest.raises(exc):
        channel_from_rows(rows)


def test_row_sum_violation_carries_details():
    with pytest.raises(RowSumViolation) as info:
        channel_from_rows([[1, 0], [0.3, 0.3]])
    assert info.value.row == 1
    assert info.value.total == pytest.approx(0.6)
    assert info.value.code == "RowSumViolation"


def test_zero_row_when_renormalizing():
    with pytest.raises(ZeroRow):
        channel_from_rows([[1, 1], [0, 0]], renormalize=True)


def test_row_sum_tolerance():
    channel_from_rows([[0.5, 0.5 + 5e-10]])
    with pytest.raises(RowSumViolation):
        channel_from_rows([[0.5, 0.5 + 5e-9]])


def test_channel_is_immutable():
    c = channel_from_rows([[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        c.rows[0, 0] = 0.5
    src = np.eye(2)
    c2 = channel_from_rows(src)
    src[0, 0] = 0.0
    assert c2.rows[0, 0] == 1.0


def test_labels_length_checked():
    with pytest.raises(LengthMismatch):
        channel_from_rows([[1, 0]], observable_labels=["a"])
    c = channel_from_rows([[1, 0]], secret_labels=["s"], observable_labels=["a", "b"])
    assert c.observable_labels == ("a", "b")


def test_channel_equality():
    assert channel_from_rows([[1, 0]]) == channel_from_rows([[1.0, 0.0]])
    assert channel_from_rows([[1, 0]]) != channel_from_rows([[0, 1]])


@pytest.mark.parametrize(
    "p, q, expected",
    [
        ([0.2, 0.8], [0.2, 0.8], 0.0),
        ([0.9, 0.1, 0.0], [0.5, 0.5, 0.0], 0.4),
        ([1, 0], [0, 1], 1.0),
    ],
)
def test_tv_examples(p, q, expected):
    assert tv_distance(p, q) == pytest.approx(expected, abs=1e-15)


def test_tv_length_mismatch():
    with pytest.raises(LengthMismatch):
        tv_distance([1, 0], [1, 0, 0])


@given(st.integers(0, 2**32 - 1), st.integers(1, 10))
def test_tv_is_a_metric(seed, m):
    rng = np.random.default_rng(seed)
    p, q, r = rng.dirichlet(np.ones(m), size=3)
    assert tv_distance(p, q) == pytest.approx(tv_distance(q, p), abs=1e-15)
    assert tv_distance(p, r) <= tv_distance(p, q) + tv_distance(q, r) + 1e-12
    assert tv_distance(p, p) == 0.0
    assert 0.0 <= tv_distance(p, q) <= 1.0 + 1e-12


@pytest.mark.parametrize(
    "n, a, b, expected",
    [(3, 0, 2, [0.5, 0, 0.5]), (2, 0, 1, [0.5, 0.5]), (4, 1, 3, [0, 0.5, 0, 0.5])],
)
def test_two_point_prior(n, a, b, expected):
    np.testing.assert_array_equal(two_point_prior(n, a, b).weights, expected)


def test_two_point_equals_uniform_for_two_secrets():
    assert two_point_prior(2, 0, 1) == uniform_prior(2)


def test_two_point_prior_errors():
    with pytest.raises(IndexOutOfRange):
        two_point_prior(3, 0, 3)
    with pytest.raises(EqualIndices):
        two_point_prior(3, 1, 1)


@pytest.mark.parametrize("w", [[0.5, 0.6], [-0.1, 1.1], [], [[0.5, 0.5]]])
def test_invalid_priors(w):
    with pytest.raises(InvalidPrior):
        Prior(np.asarray(w, dtype=float))


def test_prior_support():
    np.testing.assert_array_equal(Prior(np.array([0.5, 0, 0.5])).support, [0, 2])


def test_dimension_check():
    with pytest.raises(DimensionMismatch):
        check_dims(uniform_prior(3), Channel(np.eye(2)))
