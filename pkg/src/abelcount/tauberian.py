"""Coefficient asymptotics from a pole of known order.

For ``f(u) = g(u) (u - u0)**(-w) + h(u)`` with ``u0 = q**(-a)``, the
coefficients satisfy ``b_n = q**(a n) Q(n) + O(q**((a - delta + eps) n))``.
With integer ``w`` everything below stays in exact rationals until a
logarithm is needed; the non-integer branch is a real-valued demo.

Sign convention: ``Q`` is normalized so that ``f = 1/(1 - q u)`` gives
``Q = 1``; its leading coefficient is ``c1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .fqcensus import FieldParams, PrimeCensus, build_census
from .lfunc import build_f_series, g_at_one
from .powseries import TruncatedSeries, eval_derivatives, poly_eval


def to_mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


@dataclass(frozen=True)
class PoleData:
    q: int
    a: Fraction
    w: object  # int for the exact pipeline, real for demos

    @property
    def u0(self):
        if Fraction(self.a).denominator == 1:
            return Fraction(1, self.q ** int(self.a))
        return mpmath.mpf(self.q) ** -to_mpf(self.a)

    @property
    def qa(self):
        """``q**a``: exact when ``a`` is an integer."""
        return 1 / self.u0

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        if self.a <= 0:
            raise ValueError("pole exponent a must be positive")
        if self.w <= 0:
            raise ValueError("pole order w must be positive")


def _int_w(pole: PoleData) -> int:
    if int(pole.w) != pole.w or pole.w < 1:
        raise ValueError("this step needs a positive integer pole order")
    return int(pole.w)


def strip_pole(f: TruncatedSeries, pole: PoleData) -> TruncatedSeries:
    """Multiply by ``(u - u0)**w`` exactly and keep the first ``N - w`` coefficients."""
    w = _int_w(pole)
    if w > f.order:
        raise ValueError("pole order exceeds truncation order")
    factor = TruncatedSeries.from_poly(
        [math.comb(w, i) * (-pole.u0) ** (w - i) for i in range(w + 1)], f.order, f.scale)
    return (f * factor).truncate(f.order - w)


def q_polynomial(g_derivs, pole: PoleData) -> list:
    """Coefficients of ``Q`` (highest degree first) from ``g^(j)(u0)``, ``j < w``."""
    w = _int_w(pole)
    if len(g_derivs) < w:
        raise ValueError(f"need {w} derivatives of g")
    qa = pole.qa
    Q = [0] * w  # ascending while accumulating
    for j in range(w):
        # product_{l=1}^{w-j-1} (X + l), ascending coefficients
        prod = [1]
        for l in range(1, w - j):
            prod = [x + l * y for x, y in zip([0] + prod, prod + [0])]
        scale = -g_derivs[j] * (-1) ** (w - j - 1) * Fraction(1, math.factorial(j) * math.factorial(w - j - 1)) * qa ** (w - j)
        for i, c in enumerate(prod):
            Q[i] += scale * c
    return Q[::-1]


def c1_c2(g0, g1, pole: PoleData):
    """Leading constants ``(c1, c2)``; ``c2`` is ``None`` when ``w == 1``.

    For non-integer ``w`` the factor ``(-1)**(-w)`` is taken as ``exp(-i pi w)``,
    matching the branch ``0 < arg < 2 pi`` of ``(u - u0)**w``.
    """
    w = pole.w
    if int(w) == w:
        w = int(w)
        sign = (-1) ** w
        qaw = pole.qa ** w
        c1 = sign * g0 * qaw / math.factorial(w - 1)
        if w == 1:
            return c1, None
        c2 = sign * qaw * (g0 * Fraction(w, 2) - g1 / pole.qa) / math.factorial(w - 2)
        return c1, c2
    w = to_mpf(w)
    sign = mpmath.expjpi(-w)
    qaw = to_mpf(pole.qa) ** w
    c1 = sign * g0 * qaw / mpmath.gamma(w)
    c2 = sign * qaw * (g0 * w / 2 - g1 / to_mpf(pole.qa)) / mpmath.gamma(w - 1)
    return c1, c2


def r_from_series(zg_at_pole, params: FieldParams):
    """Singular constant ``lim (s-1)^w f(s)`` from ``Z_g(q^-alpha)``."""
    if params.w < 1:
        raise ValueError("w must be a positive integer")
    la = params.alpha * mpmath.log(params.q)
    r = to_mpf(zg_at_pole)
    r *= (-mpmath.mpf(params.q) ** params.alpha / la) ** params.w
    if r <= 0:
        raise ArithmeticError(f"nonpositive singular constant {r}; sign fault upstream")
    return r


def r_from_product(g1, params: FieldParams):
    return g1 / (params.alpha * mpmath.log(params.q)) ** params.w


# --- envelope estimate for truncated derivative sums ------------------------

def envelope_tail(f: TruncatedSeries, x: Fraction, rho, j_max: int):
    """Estimated bound on ``sum_{n>N} |c_n| n^j x^(n-j)`` for each ``j``.

    Fits ``|c_n| <= M rho**(-n)`` on the upper half of the stored
    coefficients and sums the geometric majorant. This is an envelope
    estimate, not a proof: it trusts the stored coefficients to show the
    growth rate of the tail.
    """
    N = f.order
    rho = mpmath.mpf(rho)
    xf = to_mpf(x)
    M = max(abs(to_mpf(c)) * rho**n for n, c in enumerate(f.coeffs) if n >= N // 2)
    theta = xf / rho
    if theta >= 1:
        raise ValueError("evaluation point is outside the envelope radius")
    out = []
    for j in range(j_max + 1):
        ratio = theta * (mpmath.mpf(N + 2) / (N + 1)) ** j
        first = M * mpmath.mpf(N + 1) ** j * theta ** (N + 1)
        out.append(first / (1 - ratio) / xf**j)
    return out


# --- the field-derived model -------------------------------------------------

@dataclass
class AsymptoticModel:
    params: FieldParams
    pole: PoleData
    order: int
    Q: list  # exact rationals, highest degree first
    c1: Fraction
    c2: Fraction | None
    r_series: mpmath.mpf
    r_series_radius: mpmath.mpf
    r_product: mpmath.mpf
    r_product_radius: mpmath.mpf
    secondary_exponent: Fraction
    g_jet: list = field(default_factory=list)  # (j, exact value, radius)

    def predict_b(self, n: int) -> Fraction:
        return self.pole.qa ** n * poly_eval(self.Q, n)

    def predict_a(self, n: int) -> Fraction:
        return Fraction(2, self.params.ell - 1) * self.predict_b(n)

    def c1_from_r(self, r=None):
        r = self.r_product if r is None else r
        p = self.params
        return r * (p.alpha * mpmath.log(p.q)) ** p.w / math.factorial(p.w - 1)

    def monic_P(self, r=None) -> list:
        """``Q`` divided by ``r (log q^alpha)^w / (w-1)!``; monic up to rounding."""
        c = self.c1_from_r(r)
        return [to_mpf(x) / c for x in self.Q]

    def main_term_a(self, n: int, r=None):
        """Main term of ``a_ell(n)`` written through ``r`` and the monic ``P``."""
        p = self.params
        r = self.r_product if r is None else r
        qan = mpmath.mpf(p.q) ** (p.alpha * n)
        if p.w == 1:
            return 2 * r * mpmath.log(p.q) * qan
        P = self.monic_P(r)
        return (2 * r * (p.alpha * mpmath.log(p.q)) ** p.w / ((p.ell - 1) * math.factorial(p.w - 1))
                * qan * mpmath.polyval(P, n))


def field_model(params: FieldParams, order: int = 60, cutoff: int = 20, precision: int = 30,
                census: PrimeCensus | None = None) -> AsymptoticModel:
    """Fit ``Q``, ``c1``, ``c2`` and both routes to ``r`` for one ``(q, ell)``."""
    a, w = params.alpha, params.w
    depth = max(a * order, cutoff)
    if census is None:
        census = build_census(params.q, depth)
    pole = PoleData(params.q, a, w)
    f = build_f_series(params, census, order)
    zg = strip_pole(f, pole)
    j_max = w - 1
    with mpmath.workdps(precision + 15):
        rho = mpmath.mpf(params.q) ** (-(mpmath.mpf(a) / 2 + mpmath.mpf(a) / 10))
        tails = envelope_tail(zg, pole.u0, rho, j_max)
        jet = eval_derivatives(zg, pole.u0, j_max, [Fraction(0)] * (j_max + 1))
        jet = [(j, v, tails[j]) for j, (v, _) in enumerate(jet)]
        Q = q_polynomial([v for _, v, _ in jet], pole)
        c1, c2 = c1_c2(jet[0][1], jet[1][1] if w >= 2 else None, pole)
        r_series = r_from_series(jet[0][1], params)
        r_series_radius = r_series * tails[0] / abs(to_mpf(jet[0][1]))
        gv = g_at_one(params, census, cutoff, precision)
        r_product = r_from_product(gv.value, params)
        r_product_radius = r_from_product(gv.value_tail, params)
        return AsymptoticModel(params, pole, order, Q, c1, c2, +r_series, +r_series_radius,
                               +r_product, +r_product_radius, Fraction(a, 2), jet)


@dataclass
class ComparisonRow:
    n: int
    exact: int
    predicted: object
    residual: object
    residual_exponent: object  # None when the residual vanishes


def comparison_rows(exact: dict, predict, q: int, ns) -> list[ComparisonRow]:
    """Rows of exact vs predicted with ``log_q |residual| / n``."""
    rows = []
    for n in ns:
        pred = predict(n)
        res = exact[n] - pred
        if res == 0:
            expo = None
        else:
            expo = mpmath.log(abs(to_mpf(res)), q) / n
        rows.append(ComparisonRow(n, exact[n], pred, res, expo))
    return rows


def cubic_split_prediction(q: int, n: int, gv) -> mpmath.mpf:
    """``g(1) q^n (n + 1 + g'(1)/(g(1) log q))`` for cubic counts with ``q = 1 (mod 3)``."""
    second = -to_mpf(gv.dlog)  # g'(1)/(g(1) log q)
    return gv.value * mpmath.mpf(q) ** n * (n + 1 + second)


# --- synthetic and lemma checks -----------------------------------------------

def binomial_pole_series(a, w, q: int, order: int) -> list:
    """Coefficients of ``(1 - q^a u)^(-w)``: exact for integer ``w`` and ``a``."""
    if w <= 0:
        raise ValueError("w must be positive")
    a = Fraction(a)
    if int(w) == w and a.denominator == 1:
        qa = Fraction(q) ** int(a)
        coef, out = Fraction(1), []
        for n in range(order + 1):
            out.append(coef)
            coef = coef * (int(w) + n) / (n + 1) * qa
        return out
    qa = mpmath.mpf(q) ** to_mpf(a)
    w = to_mpf(w)
    coef, out = mpmath.mpf(1), []
    for n in range(order + 1):
        out.append(coef)
        coef = coef * (w + n) / (n + 1) * qa
    return out


@dataclass
class NonIntegerDemo:
    n: int
    normalized: mpmath.mpf  # coef_n q^(-a n) n^(1-w)
    c1: object
    c2: object
    raw_rel_error: mpmath.mpf
    corrected_rel_error: mpmath.mpf


def noninteger_pole_demo(w, qa: int, n: int, precision: int = 30) -> NonIntegerDemo:
    """Compare ``[u^n](1 - qa u)^(-w)`` with ``c1 q^(an) n^(w-1) + c2 q^(an) n^(w-2)``.

    ``g`` is the constant ``qa^(-w) exp(i pi w)`` under the branch used by
    :func:`c1_c2`, so ``c1`` and ``c2`` come out real.
    """
    with mpmath.workdps(precision):
        w = to_mpf(w)
        norm = mpmath.mpf(1)  # coef_k / qa^k, by the recurrence
        for k in range(n):
            norm = norm * (w + k) / (k + 1)
        norm *= mpmath.mpf(n) ** (1 - w)
        pole = PoleData(qa, 1, w)
        g0 = mpmath.mpf(qa) ** (-w) * mpmath.expjpi(w)
        c1, c2 = c1_c2(g0, 0, pole)
        c1, c2 = mpmath.re(c1), mpmath.re(c2)
        raw = abs(norm / c1 - 1)
        corrected = abs((norm - c1 - c2 / n) / c1)
        return NonIntegerDemo(n, +norm, +c1, +c2, +raw, +corrected)


@dataclass
class GammaRatioCheck:
    t: object
    n: int
    ratio: mpmath.mpf
    prediction: mpmath.mpf
    residual: mpmath.mpf


def gamma_ratio_check(t, n: int, precision: int = 40) -> GammaRatioCheck:
    """``n! n^t / prod_{i=0}^n (t+i)`` against ``Gamma(t) (1 - (t^2+t)/(2n))``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if t <= 0 and int(t) == t:
        raise ValueError("t must not be a nonpositive integer")
    with mpmath.workdps(precision):
        t = to_mpf(t)
        prod = t
        for i in range(1, n + 1):
            prod *= 1 + t / i
        ratio = mpmath.mpf(n) ** t / prod
        prediction = mpmath.gamma(t) * (1 - (t * t + t) / (2 * n))
        return GammaRatioCheck(t, n, +ratio, +prediction, +(ratio - prediction))


def keyhole_prefactor(w):
    """The complex prefactor ``2 pi i e^(-w pi i) / (1 - e^(-2 pi i w)) / Gamma(w)``."""
    w = to_mpf(w)
    return 2j * mpmath.pi * mpmath.expjpi(-w) / (1 - mpmath.expjpi(-2 * w)) / mpmath.gamma(w)


@dataclass
class KeyholeCheck:
    n: int
    integral: mpmath.mpf
    prediction: mpmath.mpf
    rel_error: mpmath.mpf
    quad_error: mpmath.mpf


def keyhole_integral_check(a, w, delta, q: int, n: int, precision: int = 30, tol=1e-8) -> KeyholeCheck:
    """Quadrature of ``int_{q^-a}^{q^-a(1-delta)} du / (u^(n+1) (u - q^-a)^w)``.

    After ``u = q^-a (1 + v)`` and ``v = t^(1/(1-w))`` the integrand is smooth;
    breakpoints at doubling multiples of the peak width ``n^-(1-w)`` keep the
    adaptive rule honest for large ``n``.
    """
    if not 0 < w < 1:
        raise ValueError("w must lie strictly between 0 and 1")
    if not 0 < delta < 1:
        raise ValueError("delta must lie strictly between 0 and 1")
    with mpmath.workdps(precision):
        a, w, delta = (to_mpf(Fraction(x)) for x in (a, w, delta))
        V = mpmath.mpf(q) ** (a * delta) - 1
        T = V ** (1 - w)
        expo = 1 / (1 - w)

        def integrand(t):
            return (1 + t**expo) ** (-n - 1) / (1 - w)

        pts = [mpmath.mpf(0)]
        step = mpmath.mpf(n) ** (w - 1)
        while pts[-1] + step < T:
            pts.append(pts[-1] + step)
            step *= 2
        pts.append(T)
        I, err = mpmath.quad(integrand, pts, error=True)
        if err > tol * abs(I):
            raise ArithmeticError(f"quadrature error {err} above tolerance")
        scale = mpmath.mpf(q) ** (a * (n + w))
        integral = scale * I
        prediction = mpmath.gamma(1 - w) * scale * mpmath.mpf(n) ** (w - 1) * (1 + (w * w - w) / (2 * n))
        return KeyholeCheck(n, +integral, +prediction, +abs(integral / prediction - 1), +err)
