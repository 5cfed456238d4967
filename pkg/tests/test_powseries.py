from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abelcount.powseries import (
    ScaleMismatch,
    TruncatedSeries,
    add,
    eval_derivatives,
    invert,
    mul,
    pow_exponent,
    pow_int,
    sparse_factor_power,
)

S = TruncatedSeries
N = 8
fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
series = st.lists(fractions, min_size=N + 1, max_size=N + 1).map(S)
units = st.tuples(fractions.filter(bool), st.lists(fractions, min_size=N, max_size=N)).map(
    lambda t: S([t[0]] + t[1]))


def geo(r, n):
    return S([Fraction(r) ** k for k in range(n + 1)])


def test_mul_examples():
    assert mul(S([1, 1, 0]), S([1, -1, 0])) == S([1, 0, -1])
    f = S([3, Fraction(1, 2), -7, 2])
    assert mul(f, S.constant(1, 3)) == f
    assert add(f, -f).is_zero()


def test_result_order_is_minimum():
    assert mul(S([1, 2, 3]), S([1, 1])).order == 1


def test_scale_mismatch():
    with pytest.raises(ScaleMismatch):
        add(S([1, 1], scale=1), S([1, 1], scale=2))


def test_invert_examples():
    q = 3
    assert invert(S([1, -q, 0, 0, 0, 0])) == geo(q, 5)
    f = S([2, Fraction(1, 3), 5, -1])
    assert invert(invert(f)) == f
    assert invert(S([1, 0, -1, 0, 0, 0, 0])) == S([1, 0, 1, 0, 1, 0, 1])
    with pytest.raises(ZeroDivisionError):
        invert(S([0, 1]))


def test_pow_int_examples():
    assert pow_int(S([1, 2, 0]), 2) == S([1, 4, 4])
    assert pow_int(S([5, 1, 2]), 0) == S([1, 0, 0])
    assert pow_int(S([1, -1, 0, 0, 0]), -2) == S([1, 2, 3, 4, 5])


def test_sparse_factor_power_examples():
    assert sparse_factor_power(1, 2, 2, 3) == S([1, 4, 4, 0])
    assert sparse_factor_power(2, 2, 1, 5) == S([1, 0, 2, 0, 0, 0])
    assert sparse_factor_power(1, 2, 4, 2) == S([1, 8, 24])


def test_sparse_factor_power_matches_pow_int():
    for d in (1, 2, 3):
        for c in (2, Fraction(-3, 5)):
            base = S.from_poly([1] + [0] * (d - 1) + [c], 12)
            for m in range(65):
                assert sparse_factor_power(d, c, m, 12) == pow_int(base, m)


def test_sparse_factor_power_huge_exponent():
    m = 10**9 + 7
    f = sparse_factor_power(1, 1, m, 3)
    assert f == S([1, m, m * (m - 1) // 2, m * (m - 1) * (m - 2) // 6])
    assert pow_exponent(S([1, 1, 0, 0]), m) == f


@settings(max_examples=40, deadline=None)
@given(series, series, series)
def test_ring_axioms(f, g, h):
    assert mul(mul(f, g), h) == mul(f, mul(g, h))
    assert mul(f, add(g, h)) == add(mul(f, g), mul(f, h))
    assert mul(f, g) == mul(g, f)
    assert add(add(f, g), h) == add(f, add(g, h))


@settings(max_examples=100, deadline=None)
@given(units)
def test_mul_invert_is_one(f):
    assert mul(f, invert(f)) == S.constant(1, N)


def test_eval_derivatives_examples():
    (v, r), = eval_derivatives(S([1] * 51), Fraction(1, 2), 0, tail_bound=Fraction(2, 2**50))
    assert abs(v - 2) <= r
    assert eval_derivatives(S([1, 4, 4]), Fraction(1, 2), 1)[1][0] == 8
    q, n = 5, 30
    (v, _), = eval_derivatives(geo(q, n), Fraction(1, q**2), 0)
    assert v == Fraction(q, q - 1) * (1 - Fraction(1, q) ** (n + 1))


def test_eval_derivatives_guards():
    with pytest.raises(ValueError):
        eval_derivatives(S([1, 1]), Fraction(1, 2), 0, tail_bound=-1)
    with pytest.raises(ValueError):
        eval_derivatives(S([1, 1]), Fraction(2), 0, radius=1)


def test_pow_exponent_rational():
    f = pow_exponent(S([1, -4] + [0] * 6), Fraction(-1, 2))
    # central binomial coefficients
    assert f == S([1, 2, 6, 20, 70, 252, 924, 3432])
