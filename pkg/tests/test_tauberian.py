import math
import random
from fractions import Fraction

import mpmath
import pytest

from abelcount import tauberian as tb
from abelcount.counting import exact_counts_series
from abelcount.fqcensus import FieldParams
from abelcount.powseries import TruncatedSeries, eval_derivatives


def jet(g, pole):
    return [v for v, _ in eval_derivatives(g, pole.u0, int(pole.w) - 1)]


@pytest.mark.parametrize("q", [2, 3, 7])
def test_strip_pole_examples(q):
    N = 20
    geo = TruncatedSeries([q**n for n in range(N + 1)])
    g = tb.strip_pole(geo, tb.PoleData(q, 1, 1))
    assert g == TruncatedSeries.constant(Fraction(-1, q), N - 1)
    dbl = TruncatedSeries([(n + 1) * q**n for n in range(N + 1)])
    g = tb.strip_pole(dbl, tb.PoleData(q, 1, 2))
    assert g == TruncatedSeries.constant(Fraction(1, q * q), N - 2)


def test_strip_pole_ignores_polynomial_part():
    q, N = 3, 16
    pole = tb.PoleData(q, 1, 2)
    f = TruncatedSeries([(n + 1) * q**n for n in range(N + 1)])
    h = TruncatedSeries.from_poly([4, -1, 9, 2], N)
    assert jet(tb.strip_pole(f, pole), pole) == jet(tb.strip_pole(f + h, pole), pole)


def test_strip_pole_order_guard():
    with pytest.raises(ValueError):
        tb.strip_pole(TruncatedSeries([1, 2]), tb.PoleData(2, 1, 3))


@pytest.mark.parametrize("q", [2, 5])
def test_q_polynomial_examples(q):
    assert tb.q_polynomial([Fraction(-1, q)], tb.PoleData(q, 1, 1)) == [1]
    assert tb.q_polynomial([Fraction(1, q * q), 0], tb.PoleData(q, 1, 2)) == [1, 1]


def test_q_polynomial_field_cross_check():
    m = tb.field_model(FieldParams.from_q_ell(2, 3), order=60, cutoff=30)
    a30 = exact_counts_series(m.params, None, 30)[30]
    # ell = 3: a_3(n) = b_{2n}, so a_3(30) / 4^30 approaches the constant Q
    assert len(m.Q) == 1
    assert abs(Fraction(a30, 4**30) / m.Q[0] - 1) < Fraction(1, 10**9)


def test_c1_c2_examples():
    assert tb.c1_c2(Fraction(1, 4), Fraction(0), tb.PoleData(2, 1, 2)) == (1, 1)
    assert tb.c1_c2(Fraction(-1, 3), None, tb.PoleData(3, 1, 1)) == (1, None)


def test_c1_c2_match_q_polynomial():
    rng = random.Random(7)
    for _ in range(20):
        w = rng.randint(1, 5)
        pole = tb.PoleData(rng.choice([2, 3, 4, 5]), rng.randint(1, 2), w)
        g = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(w)]
        Q = tb.q_polynomial(g, pole)
        c1, c2 = tb.c1_c2(g[0], g[1] if w > 1 else None, pole)
        assert Q[0] == c1
        if w > 1:
            assert Q[1] == c2


def test_r_closed_form_chain():
    m = tb.field_model(FieldParams.from_q_ell(3, 2), order=40, cutoff=40)
    with mpmath.workdps(30):
        r = mpmath.mpf(2) / 3 / mpmath.log(3)
        assert abs(m.r_series / r - 1) < mpmath.mpf(10) ** -20
        for n in range(2, 30):
            exact = 2 * (3**n - 3 ** (n - 1))
            assert abs(m.main_term_a(n) / exact - 1) < mpmath.mpf(10) ** -20
            assert exact * 3 == 4 * 3**n


@pytest.mark.parametrize("q, ell", [(2, 3), (4, 3), (4, 5), (3, 7)])
def test_r_dual_route_and_sign(q, ell):
    m = tb.field_model(FieldParams.from_q_ell(q, ell), order=60, cutoff=40)
    assert m.r_series > 0 and m.r_product > 0
    assert abs(m.r_series - m.r_product) <= 2 * (m.r_series_radius + m.r_product_radius) + abs(m.r_product) * 1e-12
    assert abs(m.c1_from_r() / tb.to_mpf(m.c1) - 1) < 1e-9


def test_r_from_series_rejects_wrong_sign():
    with pytest.raises(ArithmeticError):
        tb.r_from_series(Fraction(1), FieldParams.from_q_ell(2, 3))


def test_binomial_pole_series():
    assert tb.binomial_pole_series(1, 1, 3, 5) == [3**n for n in range(6)]
    assert tb.binomial_pole_series(1, 2, 3, 5) == [(n + 1) * 3**n for n in range(6)]
    c = tb.binomial_pole_series(Fraction(1, 2), Fraction(1, 2), 16, 12)
    assert [int(mpmath.nint(x)) for x in c] == [math.comb(2 * n, n) for n in range(13)]
    assert c[2] == 6


def test_noninteger_constants():
    d = tb.noninteger_pole_demo(Fraction(1, 2), 4, 100)
    with mpmath.workdps(30):
        assert abs(d.c1 - 1 / mpmath.sqrt(mpmath.pi)) < mpmath.mpf(10) ** -25
        assert abs(d.c2 + 1 / (8 * mpmath.sqrt(mpmath.pi))) < mpmath.mpf(10) ** -25


def test_gamma_ratio_examples():
    for n in (10, 50):
        g = tb.gamma_ratio_check(1, n)
        with mpmath.workdps(40):
            assert abs(g.ratio - mpmath.mpf(n) / (n + 1)) < mpmath.mpf(10) ** -30
            assert abs(g.prediction - (1 - mpmath.mpf(1) / n)) < mpmath.mpf(10) ** -30
        assert 0.5 / n**2 < g.residual < 1.5 / n**2
    g = tb.gamma_ratio_check(Fraction(1, 2), 100)
    assert abs(g.ratio - mpmath.sqrt(mpmath.pi) * (1 - 0.375 / 100)) < 1e-4
    with pytest.raises(ValueError):
        tb.gamma_ratio_check(-2, 10)


def test_keyhole_examples():
    assert abs(tb.keyhole_prefactor(Fraction(1, 2)) - mpmath.sqrt(mpmath.pi)) < 1e-25
    k = tb.keyhole_integral_check(1, Fraction(1, 2), Fraction(1, 2), 2, 50)
    with mpmath.workdps(30):
        expect = mpmath.sqrt(mpmath.pi) * mpmath.mpf(2) ** 50.5 / mpmath.sqrt(50) * (1 - mpmath.mpf(1) / 400)
        assert abs(k.prediction / expect - 1) < mpmath.mpf(10) ** -25
    assert k.rel_error < 10 / 50**2 + 2**-25
    prev = k
    for n in (51, 52):
        cur = tb.keyhole_integral_check(1, Fraction(1, 2), Fraction(1, 2), 2, n)
        assert cur.prediction > prev.prediction
        assert abs(cur.prediction / prev.prediction / (2 * math.sqrt((n - 1) / n)) - 1) < 1e-3
        prev = cur
    with pytest.raises(ValueError):
        tb.keyhole_integral_check(1, 1, Fraction(1, 2), 2, 50)


def test_comparison_row_absent_exponent():
    rows = tb.comparison_rows({1: 5, 2: 7}, lambda n: 5 if n == 1 else 6, 2, [1, 2])
    assert rows[0].residual_exponent is None and rows[0].residual == 0
    assert rows[1].residual == 1 and rows[1].residual_exponent == 0


@pytest.mark.parametrize("q, ell", [(2, 3), (4, 3), (3, 2), (4, 5)])
def test_field_residual_exponent(q, ell):
    from abelcount.lfunc import build_f_series

    p = FieldParams.from_q_ell(q, ell)
    m = tb.field_model(p, order=60, cutoff=30)
    f = build_f_series(p, None, 60)
    rows = tb.comparison_rows({n: int(f[n]) for n in range(30, 61)}, m.predict_b, q, range(30, 61))
    assert all(r.residual_exponent is None or r.residual_exponent <= p.alpha / 2 + 0.2 for r in rows)
    assert m.Q[0] == m.c1
