from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from telesigma.polynomial import PolyRing
from telesigma.series import (
    BiSeries,
    PrecisionError,
    TruncatedSeries,
    bi_expand_inverse_diff_square,
    series_root,
)

K = PolyRing(["k"], [1])
Q = PolyRing([])
k = K.gen("k")

small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def unit_series(tail, order):
    return TruncatedSeries(Q, 0, [1] + list(tail), order)


def test_root_binomial():
    s = TruncatedSeries(Q, 0, [1, 2], 2)
    assert series_root(s, 2) == TruncatedSeries(Q, 0, [1, 1], 2)


def test_root_identity():
    s = TruncatedSeries(Q, 0, [1], 7)
    for r in (2, 3, 5):
        t = series_root(s, r)
        assert t == s and t.truncation == 7


def test_root_symbolic_squares_back():
    s = TruncatedSeries(K, 0, [1, k], 3)
    t = series_root(s, 2)
    assert t == TruncatedSeries(K, 0, [1, k / 2, -(k ** 2) / 8], 3)
    assert t * t == s


def test_root_errors():
    with pytest.raises(ValueError, match="root of non-monic unit"):
        series_root(TruncatedSeries(Q, 0, [2, 1], 4), 2)
    with pytest.raises(ValueError, match="divisible"):
        series_root(TruncatedSeries(Q, 3, [1], 6), 2)


@given(st.lists(small, min_size=1, max_size=6), st.integers(2, 4))
def test_root_power_round_trip(tail, r):
    s = unit_series(tail, len(tail) + 1)
    t = series_root(s, r)
    assert t.leading_coefficient() == 1
    assert t ** r == s


@given(st.lists(small, min_size=1, max_size=6), st.lists(small, min_size=1, max_size=6))
def test_division_round_trip(a, b):
    order = min(len(a), len(b)) + 1
    x = unit_series(a, len(a) + 1)
    y = unit_series(b, len(b) + 1).shift(-2)
    q = x / y
    assert (q * y).truncate(order) == x.truncate(order)


def test_truncation_is_reported_not_narrowed():
    x = TruncatedSeries(Q, -3, [1, 1, 1], 2)  # z^-3 + z^-2 + z^-1 + O(z^2)
    y = TruncatedSeries(Q, 0, [1, 5], 4)
    assert (x * y).truncation == min(2 + 0, 4 - 3)
    assert (x + y).truncation == 2
    assert x.inverse().truncation == 3 + 5  # relative precision 5 at valuation 3
    assert x.derivative().truncation == 1
    with pytest.raises(PrecisionError):
        (x * y).coefficient(1)


def test_exact_series_stay_exact():
    x = TruncatedSeries(Q, -2, [1, 0, 3])
    assert (x * x).is_exact
    assert (x * x).coefficient(10) == 0
    with pytest.raises(PrecisionError):
        x.inverse()
    assert x.inverse(order=4).truncation == 2 + 4


def test_log_exp_round_trip():
    s = TruncatedSeries(K, 0, [1, k, 3 * k ** 2, -k ** 3], 6)
    assert s.log().exp() == s
    assert TruncatedSeries(Q, 0, [1, 1], None).log(order=4) == TruncatedSeries(
        Q, 0, [0, 1, Fraction(-1, 2), Fraction(1, 3)], 4
    )


def test_fractional_power_needs_monic():
    with pytest.raises(ValueError):
        TruncatedSeries(Q, 0, [3, 1], 4).power(Fraction(1, 2))


def test_inverse_diff_square():
    b = bi_expand_inverse_diff_square(2)
    assert b.terms() == {(0, -2): 1, (1, -3): 2}
    assert b.z1_truncation == 2
    assert bi_expand_inverse_diff_square(1).terms() == {(0, -2): 1}
    assert bi_expand_inverse_diff_square(5).coefficient(3, -5) == 4
    with pytest.raises(PrecisionError):
        b.row(2)


def test_biseries_outer_and_poles():
    s1 = TruncatedSeries(Q, 1, [1, 2], 4)
    s2 = TruncatedSeries(Q, -3, [1], 0)
    b = BiSeries.outer(s1, s2)
    assert b.z1_truncation == 4
    assert b.terms() == {(1, -3): 1, (2, -3): 2}
    assert b.pole_orders() == {1: -3, 2: -3, 3: None}
    d = b.derivative_z2()
    assert d.coefficient(1, -4) == -3
    assert (b - b).terms() == {}
