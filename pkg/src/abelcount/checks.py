"""Identity and oracle-equivalence checks run by ``abelcount verify``."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import counting, lfunc, tauberian
from .fqcensus import FieldParams, build_census, count_irreducibles, enumerate_irreducibles
from .powseries import TruncatedSeries, eval_derivatives, poly_eval

IDENTITY_PARAMS = [(2, 3), (2, 5), (3, 7), (4, 3), (4, 5), (5, 2)]
TRIPLE_PARAMS = [(2, 3), (2, 5), (3, 2), (5, 2), (5, 3), (7, 2)]
SERIES_DP_PARAMS = [(4, 3), (4, 5), (2, 3)]
R_PARAMS = [(2, 3), (4, 3), (3, 2), (4, 5)]


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    index: object = None


def census_equivalence(primes=(2, 3, 5, 7), max_deg=8):
    for p in primes:
        for d in range(1, max_deg + 1):
            if len(enumerate_irreducibles(p, d)) != count_irreducibles(p, d):
                return CheckResult("census", False, f"p={p}", d)
    return CheckResult("census", True, f"p in {primes}, d <= {max_deg}")


def triple_oracle():
    for p, ell in TRIPLE_PARAMS:
        params = FieldParams.from_q_ell(p, ell)
        n = counting.max_enumerable_n(p, ell)
        tables = [counting.count(params, n, r).values for r in counting.ROUTES]
        for i in range(n):
            if len({t[i] for t in tables}) != 1:
                return CheckResult("triple-oracle", False, f"(p, ell)=({p}, {ell})", i + 1)
    return CheckResult("triple-oracle", True, f"{TRIPLE_PARAMS}")


def series_vs_dp(max_n=200):
    for q, ell in SERIES_DP_PARAMS:
        params = FieldParams.from_q_ell(q, ell)
        census = build_census(q, params.alpha * max_n)
        s = counting.exact_counts_series(params, census, max_n).values
        d = counting.exact_counts_dp(params, census, max_n).values
        for i, (x, y) in enumerate(zip(s, d)):
            if x != y:
                return CheckResult("series-vs-dp", False, f"(q, ell)=({q}, {ell})", i + 1)
    return CheckResult("series-vs-dp", True, f"n <= {max_n}")


def quadratic_closed_form(qs=(3, 5, 7), max_n=100):
    for q in qs:
        params = FieldParams.from_q_ell(q, 2)
        a = counting.exact_counts_series(params, None, max_n)
        if a[1] != 2 * q:
            return CheckResult("quadratic", False, f"q={q}", 1)
        for n in range(2, max_n + 1):
            if a[n] != 2 * (q**n - q ** (n - 1)):
                return CheckResult("quadratic", False, f"q={q}", n)
    return CheckResult("quadratic", True, f"q in {qs}, n <= {max_n}")


def identity_suite(order=24):
    for q, ell in IDENTITY_PARAMS:
        params = FieldParams.from_q_ell(q, ell)
        for which in ("zeta_factorization", "lemma_f"):
            ok, bad = lfunc.verify_identity(which, params, order)
            if not ok:
                return CheckResult("identities", False, f"{which} ({q}, {ell})", bad)
    for q in (2, 5):
        ok, bad = lfunc.verify_identity("cubic_ii", FieldParams.from_q_ell(q, 3), order)
        if not ok:
            return CheckResult("identities", False, f"cubic_ii q={q}", bad)
    return CheckResult("identities", True, f"order {order}")


def tauberian_exactness(N=40):
    for q in (2, 3, 5):
        for w, coeffs in ((1, [q**n for n in range(N + 1)]), (2, [(n + 1) * q**n for n in range(N + 1)])):
            pole = tauberian.PoleData(q, 1, w)
            for h in ([], [3, -1, 7]):
                f = TruncatedSeries(coeffs) + TruncatedSeries.from_poly(h or [0], N)
                g = tauberian.strip_pole(f, pole)
                jet = [v for v, _ in eval_derivatives(g, pole.u0, w - 1)]
                Q = tauberian.q_polynomial(jet, pole)
                for n in range(len(h), N - w + 1):
                    if Fraction(q) ** n * poly_eval(Q, n) != f[n]:
                        return CheckResult("tauberian-exact", False, f"q={q}, w={w}, h={h}", n)
    return CheckResult("tauberian-exact", True, "geometric and double pole")


def dual_route_r(order=80, cutoff=60, rel=1e-6):
    for q, ell in R_PARAMS:
        m = tauberian.field_model(FieldParams.from_q_ell(q, ell), order=order, cutoff=cutoff)
        if abs(m.r_series / m.r_product - 1) > rel:
            return CheckResult("dual-route-r", False, f"({q}, {ell})", None)
    m = tauberian.field_model(FieldParams.from_q_ell(3, 2), order=order, cutoff=cutoff)
    if abs(m.r_product / (mpmath.mpf(2) / 3 / mpmath.log(3)) - 1) > 1e-9:
        return CheckResult("dual-route-r", False, "closed form at (3, 2)", None)
    return CheckResult("dual-route-r", True, f"relative {rel}")


def character_multiplicities():
    for ell in (2, 3, 5, 7):
        for m in range(1, 13):
            if (ell - 1) ** m > 5000:
                break
            if counting.character_multiplicity(m, ell) != (ell - 1) ** (m - 1):
                return CheckResult("characters", False, f"ell={ell}", m)
    return CheckResult("characters", True, "ell in (2, 3, 5, 7)")


def lemma_checks():
    res = [tauberian.gamma_ratio_check(Fraction(1, 2), n).residual for n in (1000, 2000, 4000)]
    for a, b in zip(res, res[1:]):
        if not 0.75 * 0.25 <= b / a <= 1.25 * 0.25:
            return CheckResult("lemmas", False, "gamma ratio scaling", None)
    for n in (50, 100, 200):
        k = tauberian.keyhole_integral_check(1, Fraction(1, 2), Fraction(1, 2), 2, n)
        if k.rel_error > 10 / n**2 + 2 ** (-n / 2):
            return CheckResult("lemmas", False, "keyhole integral", n)
    demo = tauberian.noninteger_pole_demo(Fraction(1, 2), 4, 10**4)
    if demo.raw_rel_error > 0.01 or demo.corrected_rel_error > 2e-4:
        return CheckResult("lemmas", False, "non-integer pole", 10**4)
    return CheckResult("lemmas", True, "gamma ratio, keyhole, non-integer w")


SUITE = [
    census_equivalence,
    triple_oracle,
    series_vs_dp,
    quadratic_closed_form,
    identity_suite,
    character_multiplicities,
    tauberian_exactness,
    dual_route_r,
    lemma_checks,
]


def run_all(stop_on_failure=True):
    results = []
    for check in SUITE:
        r = check()
        results.append(r)
        if not r.ok and stop_on_failure:
            break
    return results

