"""Zeta functions, partial Euler products and their analytic factors.

Every product is expanded in ``u = q**(-alpha*s)`` (series scale ``alpha``).
A prime of degree ``e`` with ``alpha | e`` contributes through ``u**(e/alpha)``;
primes entering the ``L_d`` products contribute through ``u**(e/d)``.

Values at ``s = 1`` of the infinite products are computed with mpmath from
the census up to a degree cutoff ``D``, each paired with an explicit bound on
the discarded tail.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath

from .fqcensus import FieldParams, PrimeCensus, build_census, divisors, prime_power
from .powseries import (
    TruncatedSeries,
    invert,
    pow_exponent,
    pow_int,
    sparse_factor_power,
    substitute_power,
)

DEGREE_FILTERS = ("all", "alpha_divides", "even", "gcd_equals")
LOCAL_FACTORS = ("one_plus_cu", "one_minus_u_inv", "h_factor", "cubic_even_rational")


def zeta_series(q: int, scale: int, order: int) -> TruncatedSeries:
    """``1/(1 - q**scale * u)``, the zeta function of F_{q^scale}[t] in ``u = q**(-scale*s)``."""
    return TruncatedSeries([q ** (scale * n) for n in range(order + 1)], scale)


def h_coefficients(ell: int) -> list[int]:
    """Coefficients of ``(1 + (ell-1)x)(1 - x)**(ell-1)``, lowest degree first."""
    poly = [1, ell - 1]
    for _ in range(ell - 1):
        poly = [a - b for a, b in zip(poly + [0], [0] + poly)]
    return poly


def h_coefficient_closed_form(ell: int, i: int) -> int:
    """The displayed closed form for the top coefficient ``i == ell``."""
    if i != ell:
        raise ValueError("the closed form is only trusted at i == ell")
    return (-1) ** (ell - 1) * (ell - 1)


def _cubic_even_local(order: int, scale: int) -> TruncatedSeries:
    # (1 + 2y)(1 - y)/(1 + y)
    num = TruncatedSeries.from_poly([1, 1, -2], order, scale)
    den = TruncatedSeries.from_poly([1, 1], order, scale)
    return num * invert(den)


@dataclass(frozen=True)
class ProductSpec:
    """One partial Euler product template.

    ``degree_filter`` picks the primes (``gcd_equals`` uses ``d``);
    ``local_factor`` names the per-prime factor as a series in that prime's
    power of ``u``.
    """

    params: FieldParams
    census: PrimeCensus
    degree_filter: str
    local_factor: str
    order: int
    d: int = 0

    def __post_init__(self):
        if self.degree_filter not in DEGREE_FILTERS:
            raise ValueError(f"unknown degree filter {self.degree_filter!r}")
        if self.local_factor not in LOCAL_FACTORS:
            raise ValueError(f"unknown local factor {self.local_factor!r}")
        allowed = {
            ("alpha_divides", "one_plus_cu"),
            ("alpha_divides", "h_factor"),
            ("gcd_equals", "one_minus_u_inv"),
            ("all", "one_minus_u_inv"),
            ("even", "cubic_even_rational"),
        }
        if (self.degree_filter, self.local_factor) not in allowed:
            raise ValueError(f"product {self.degree_filter}/{self.local_factor} is not one we build")

    def degrees(self):
        """Yield ``(e, k)``: prime degree and the power of ``u`` it enters with."""
        a = self.params.alpha
        if self.degree_filter == "alpha_divides":
            for k in range(1, self.order + 1):
                yield a * k, k
        elif self.degree_filter == "gcd_equals":
            for e in range(self.d, self.d * self.order + 1, self.d):
                if gcd(a, e) == self.d:
                    yield e, e // self.d
        elif self.degree_filter == "even":
            if a != 2:
                raise ValueError("the even-degree product lives in u = q^(-2s)")
            for e in range(2, 2 * self.order + 1, 2):
                yield e, e // 2
        else:
            for e in range(1, self.order + 1):
                yield e, e


def expand_product(ps: ProductSpec) -> TruncatedSeries:
    p, N, a = ps.params, ps.order, ps.params.alpha
    census = ps.census
    acc = TruncatedSeries.constant(1, N, a)
    for e, k in ps.degrees():
        if k > N:
            continue
        m = census[e]
        if not m:
            continue
        if ps.local_factor == "one_plus_cu":
            factor = sparse_factor_power(k, p.ell - 1, m, N, a)
        elif ps.local_factor == "one_minus_u_inv":
            mult = ps.d if ps.degree_filter == "gcd_equals" else 1
            factor = sparse_factor_power(k, -1, -mult * m, N, a)
        else:
            if ps.local_factor == "h_factor":
                local = TruncatedSeries.from_poly(h_coefficients(p.ell), N // k, a)
            else:
                local = _cubic_even_local(N // k, a)
            factor = substitute_power(pow_exponent(local, m), k, N)
        acc = acc * factor
    return acc


def _census_for(params: FieldParams, depth: int, census: PrimeCensus | None) -> PrimeCensus:
    if census is None:
        return build_census(params.q, depth)
    census.require(depth)
    return census


def build_f_series(params: FieldParams, census: PrimeCensus | None, order: int) -> TruncatedSeries:
    """Coefficient ``n`` is ``b_{alpha n}`` of the partial Euler product over alpha-divisible degrees."""
    census = _census_for(params, params.alpha * order, census)
    return expand_product(ProductSpec(params, census, "alpha_divides", "one_plus_cu", order))


def build_L_d_series(q: int, alpha: int, d: int, order: int, census: PrimeCensus | None = None) -> TruncatedSeries:
    if alpha % d:
        raise ValueError(f"d={d} does not divide alpha={alpha}")
    params = _bare_params(q, alpha)
    census = _census_for(params, d * order, census)
    return expand_product(ProductSpec(params, census, "gcd_equals", "one_minus_u_inv", order, d=d))


def _bare_params(q: int, alpha: int) -> FieldParams:
    p, k = prime_power(q)
    # only q and alpha are read by the L_d template
    return FieldParams(q=q, p=p, k=k, ell=alpha + 1, alpha=alpha, w=1)


def build_h_product(params: FieldParams, census: PrimeCensus | None, order: int) -> TruncatedSeries:
    census = _census_for(params, params.alpha * order, census)
    return expand_product(ProductSpec(params, census, "alpha_divides", "h_factor", order))


def build_g_series(params: FieldParams, census: PrimeCensus | None, order: int) -> TruncatedSeries:
    """The analytic factor ``g`` with ``f = zeta_{A_alpha}**w * g``."""
    census = _census_for(params, params.alpha * order, census)
    g = build_h_product(params, census, order)
    for d in divisors(params.alpha):
        if d != params.alpha:
            g = g * pow_int(build_L_d_series(params.q, params.alpha, d, order, census), -params.w)
    return g


def _first_mismatch(lhs: TruncatedSeries, rhs: TruncatedSeries):
    for n, (x, y) in enumerate(zip(lhs.coeffs, rhs.coeffs)):
        if x != y:
            return n
    return None


def verify_identity(which: str, params: FieldParams, order: int, census: PrimeCensus | None = None):
    """Expand both sides of a product identity and compare exactly.

    Returns ``(ok, first_mismatch_index)``; the index is ``None`` on success.
    """
    q, a = params.q, params.alpha
    census = _census_for(params, a * order, census)
    if which == "zeta_factorization":
        lhs = zeta_series(q, a, order)
        rhs = TruncatedSeries.constant(1, order, a)
        for d in divisors(a):
            rhs = rhs * build_L_d_series(q, a, d, order, census)
    elif which == "lemma_f":
        lhs = build_f_series(params, census, order)
        rhs = pow_int(zeta_series(q, a, order), params.w) * build_g_series(params, census, order)
    elif which == "cubic_ii":
        if params.ell != 3 or q % 3 != 2:
            raise ValueError("cubic_ii needs ell = 3 and q = 2 mod 3")
        lhs = build_f_series(params, census, order)
        zeta_2s_inv = TruncatedSeries.from_poly([1, -q], order, a)
        even = expand_product(ProductSpec(params, census, "even", "cubic_even_rational", order))
        rhs = zeta_series(q, a, order) * zeta_2s_inv * even
    else:
        raise ValueError(f"unknown identity {which!r}")
    bad = _first_mismatch(lhs, rhs)
    return bad is None, bad


# --- values at s = 1 ------------------------------------------------------

@dataclass
class GValue:
    """Partial product ``g(1)`` over primes of degree <= cutoff.

    ``dlog`` is the exact rational ``S`` with ``g'(1)/g(1) = -log(q) * S``;
    the ``*_tail`` fields bound the effect of the discarded primes.
    """

    cutoff: int
    value: mpmath.mpf
    dlog: Fraction
    derivative: mpmath.mpf
    log_tail: mpmath.mpf
    value_tail: mpmath.mpf
    dlog_tail: mpmath.mpf
    derivative_tail: mpmath.mpf


def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def g_at_one(params: FieldParams, census: PrimeCensus | None = None, cutoff: int = 20,
             precision: int = 30, tol=None) -> GValue:
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    q, a, w = params.q, params.alpha, params.w
    census = _census_for(params, cutoff, census)
    h = h_coefficients(params.ell)
    with mpmath.workdps(precision + 15):
        log_g = mpmath.mpf(0)
        S = Fraction(0)
        for e in range(1, cutoff + 1):
            m = census[e]
            d = gcd(a, e)
            if d == a:
                x = Fraction(1, q**e)
                hx = sum(c * x**i for i, c in enumerate(h))
                xdh = sum(i * c * x**i for i, c in enumerate(h))
                log_g += m * mpmath.log1p(_mp(hx - 1))
                S += m * e * xdh / hx
            else:
                k = a * e // d
                y = Fraction(1, q**k)
                log_g += w * d * m * mpmath.log1p(-_mp(y))
                S -= w * d * m * k * y / (1 - y)
        value = mpmath.exp(log_g)

        # geometric tail bounds over degrees e > cutoff, using N_q(e) <= q^e/e
        D1 = cutoff + 1
        xmax = Fraction(1, q**D1)
        K = sum(abs(c) * xmax ** (i - 2) for i, c in enumerate(h) if i >= 2)
        Kd = sum(i * abs(c) * xmax ** (i - 2) for i, c in enumerate(h) if i >= 2)
        if K * xmax**2 > Fraction(1, 2):
            raise ValueError("cutoff too small for the tail estimate")
        geo = Fraction(1, q**D1) / (1 - Fraction(1, q))
        log_tail = _mp((2 * K + w * a) * geo / D1)
        dlog_tail = _mp((2 * Kd + 2 * a * w) * geo)
        value_tail = value * mpmath.expm1(log_tail)
        logq = mpmath.log(q)
        derivative = -logq * value * _mp(S)
        derivative_tail = logq * (value_tail * abs(_mp(S)) + (value + value_tail) * dlog_tail)
        if tol is not None and value_tail > tol * value:
            raise ValueError(f"cutoff {cutoff} too small for relative precision {tol}")
        return GValue(cutoff, +value, S, +derivative, +log_tail, +value_tail, +dlog_tail, +derivative_tail)


@dataclass
class CubicConstant:
    cutoff: int
    value: mpmath.mpf
    tail: mpmath.mpf  # the true constant lies in [value - tail, value]


def cubic_even_product(q: int, cutoff: int = 20, precision: int = 30,
                       census: PrimeCensus | None = None) -> CubicConstant:
    """Leading constant of the cubic count when ``q = 2 (mod 3)``."""
    if q % 3 != 2:
        raise ValueError("cubic_even_product needs q = 2 (mod 3)")
    if cutoff % 2 or cutoff < 2:
        raise ValueError("cutoff must be a positive even degree")
    if census is None:
        census = build_census(q, cutoff)
    with mpmath.workdps(precision + 15):
        log_c = mpmath.log1p(-mpmath.mpf(1) / q)
        for e in range(2, cutoff + 1, 2):
            x = q**e
            log_c += census[e] * mpmath.log1p(-mpmath.mpf(2) / (x * (x + 1)))
        value = mpmath.exp(log_c)
        D1 = cutoff + 1
        log_tail = _mp(Fraction(4, q**D1) / (D1 * (1 - Fraction(1, q))))
        return CubicConstant(cutoff, +value, +(value * -mpmath.expm1(-log_tail)))


def cubic_even_partial_exact(q: int, cutoff: int) -> Fraction:
    """Exact rational partial product; feasible only for small cutoffs."""
    c = 1 - Fraction(1, q)
    census = build_census(q, cutoff)
    for e in range(2, cutoff + 1, 2):
        x = q**e
        c *= Fraction((x + 2) * (x - 1), x * (x + 1)) ** census[e]
    return c
