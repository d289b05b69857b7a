import math

import pytest
from hypothesis import given, strategies as st

from hyperterm import (
    Accelerated,
    Custom,
    DefaultA,
    DivergentMarker,
    EvalProblem,
    EvalResult,
    ParamError,
    SeriesParams,
    direct_term,
    shift,
    validate,
)
from conftest import HALF_SQRT_PI, SQRT_2_OVER_PI

positive = st.floats(min_value=0.05, max_value=20, allow_nan=False)


def test_validate_returns_problem():
    p = validate(SeriesParams(1, 1), 0.5)
    assert isinstance(p, EvalProblem)
    assert p.n == 0.5


def test_validate_divergent_odd_series():
    marker = validate(SeriesParams(1, 2), -0.5)
    assert isinstance(marker, DivergentMarker)
    assert marker.first_factor == 0


@pytest.mark.parametrize(
    "a,b",
    [(-1, 1), (0, 1), (1, 0), (1, -2), (math.inf, 1), (1, math.nan), ("x", 1)],
)
def test_bad_params(a, b):
    with pytest.raises(ParamError):
        SeriesParams(a, b)


@pytest.mark.parametrize("n", [math.inf, -math.inf, math.nan])
def test_validate_rejects_nonfinite_index(n):
    with pytest.raises(ParamError):
        validate(SeriesParams(1, 1), n)


@given(a=positive, b=positive, n=st.floats(min_value=-50, max_value=50))
def test_validate_is_total(a, b, n):
    out = validate(SeriesParams(a, b), n)
    if a + n * b > 0:
        assert isinstance(out, EvalProblem)
    else:
        assert isinstance(out, DivergentMarker)


@pytest.mark.parametrize("a,b,k,expected", [(1, 1, 3, 6), (1, 2, 3, 15), (1, 1, 0, 1), (2, 3, 4, 2 * 5 * 8 * 11)])
def test_direct_term(a, b, k, expected):
    assert direct_term(SeriesParams(a, b), k) == pytest.approx(expected, rel=1e-15)


def test_direct_term_empty_product_is_exact():
    assert direct_term(SeriesParams(0.3, 7.0), 0) == 1.0


def test_direct_term_factorials():
    for k in range(0, 25):
        assert direct_term(SeriesParams(1, 1), k) == pytest.approx(math.factorial(k), rel=1e-14)


def test_direct_term_overflow():
    with pytest.raises(OverflowError):
        direct_term(SeriesParams(1, 1), 200)


@pytest.mark.parametrize("k", [-1, 1.5, True])
def test_direct_term_rejects_bad_k(k):
    with pytest.raises(ParamError):
        direct_term(SeriesParams(1, 1), k)


@given(a=positive, b=positive, k=st.integers(min_value=1, max_value=60))
def test_direct_term_recurrence(a, b, k):
    params = SeriesParams(a, b)
    prev = direct_term(params, k - 1)
    assert direct_term(params, k) == pytest.approx((a + (k - 1) * b) * prev, rel=1e-13)


def test_shift_examples():
    wallis, odd = SeriesParams(1, 1), SeriesParams(1, 2)
    assert shift(wallis, 0.5, 1, HALF_SQRT_PI) == pytest.approx(1.5 * HALF_SQRT_PI, rel=1e-15)
    assert shift(odd, 0.5, 2, SQRT_2_OVER_PI) == pytest.approx(2 * 4 * SQRT_2_OVER_PI, rel=1e-15)
    assert shift(SeriesParams(2.5, 0.3), 0.7, 0, 1.234) == 1.234


def test_shift_backwards():
    # Δ:-½ = Δ:½ / (a - b/2) = √π for the Wallis series
    assert shift(SeriesParams(1, 1), 0.5, -1, HALF_SQRT_PI) == pytest.approx(math.sqrt(math.pi), rel=1e-15)


def test_shift_rejects_nonpositive_factor():
    with pytest.raises(ParamError):
        shift(SeriesParams(1, 2), -0.5, 1, 1.0)
    with pytest.raises(ParamError):
        shift(SeriesParams(1, 2), 0.5, -1, 1.0)


@given(
    a=positive,
    b=positive,
    n=st.floats(min_value=0, max_value=5),
    m1=st.integers(0, 6),
    m2=st.integers(0, 6),
)
def test_shift_composes(a, b, n, m1, m2):
    params = SeriesParams(a, b)
    v = 1.7
    once = shift(params, n, m1 + m2, v)
    twice = shift(params, n + m1, m2, shift(params, n, m1, v))
    assert once == pytest.approx(twice, rel=1e-12)


def test_custom_alpha_must_be_positive():
    with pytest.raises(ParamError):
        Custom(0.0)
    with pytest.raises(ParamError):
        Custom(-3)


def test_strategies_are_hashable_values():
    assert DefaultA() == DefaultA()
    assert Accelerated() != DefaultA()
    assert {Custom(2.0), Custom(2.0)} == {Custom(2.0)}


def test_eval_result_invariants():
    with pytest.raises(ValueError):
        EvalResult(1.0, "product", 3, -1e-3)
    with pytest.raises(ValueError):
        EvalResult(1.0, "product", 3, 0.0, divergent=True)
    r = EvalResult.divergent_result("oracle")
    assert r.divergent and r.value == math.inf
