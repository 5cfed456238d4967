"""Exact counts ``a_ell(n)`` of abelian ell-extensions of F_q(t).

Three independent routes, sharing only the prime census:

* ``series``      coefficients of the partial Euler product,
* ``dp``          a dynamic program over prime degrees with binomial weights,
* ``enumerative`` brute force over squarefree conductors in F_p[t].

A conductor ``D = P_1 ... P_m`` with every ``deg P_i`` divisible by ``alpha``
carries ``2 (ell-1)^(m-1)`` extensions; ``a_ell(n)`` sums that weight over
conductors of degree ``alpha n``.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field

import numpy as np

from .fqcensus import (
    BudgetExceeded,
    FieldParams,
    PrimeCensus,
    build_census,
    _monic_matrix,
    enumerate_irreducibles,
    poly_divmod,
    poly_mul,
)
from .lfunc import build_f_series

ROUTES = ("series", "dp", "enumerative")
# monic polynomials scanned by the enumerative route
ENUM_POLY_CAP_DEFAULT = 200_000
CHAR_VECTOR_CAP = 200_000


def enum_poly_cap() -> int:
    return int(os.environ.get("ABELCOUNT_ENUM_POLYS", ENUM_POLY_CAP_DEFAULT))


@dataclass
class CountTable:
    params: FieldParams
    max_n: int
    values: list[int]  # values[n - 1] == a_ell(n)
    route: str

    def __getitem__(self, n: int) -> int:
        return self.values[n - 1]

    def as_dict(self) -> dict[int, int]:
        return {n: v for n, v in enumerate(self.values, start=1)}


@dataclass
class SquarefreeProfile:
    """Degree multiset of a squarefree conductor."""

    degree_multiset: dict[int, int] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return sum(self.degree_multiset.values())

    def weight(self, ell: int) -> int:
        return 2 * (ell - 1) ** (self.m - 1)


def _census(params: FieldParams, max_n: int, census: PrimeCensus | None) -> PrimeCensus:
    if census is None:
        return build_census(params.q, params.alpha * max_n)
    census.require(params.alpha * max_n)
    return census


def exact_counts_series(params: FieldParams, census: PrimeCensus | None, max_n: int) -> CountTable:
    census = _census(params, max_n, census)
    f = build_f_series(params, census, max_n)
    values = []
    for n in range(1, max_n + 1):
        b = f[n]
        if b.denominator != 1 or (2 * b.numerator) % (params.ell - 1):
            raise ArithmeticError(f"2 b_{params.alpha * n} = {2 * b} is not divisible by ell - 1")
        values.append(2 * b.numerator // (params.ell - 1))
    return CountTable(params, max_n, values, "series")


def exact_counts_dp(params: FieldParams, census: PrimeCensus | None, max_n: int) -> CountTable:
    census = _census(params, max_n, census)
    ell = params.ell
    # total[j]: summed (ell-1)^m over conductors of degree alpha * j
    total = [0] * (max_n + 1)
    total[0] = 1
    for k in range(1, max_n + 1):
        count = census[params.alpha * k]
        new = total[:]
        for j in range(max_n + 1):
            if not total[j]:
                continue
            choose = 1
            for i in range(1, (max_n - j) // k + 1):
                choose = choose * (count - i + 1) // i
                if not choose:
                    break
                new[j + i * k] += total[j] * choose * (ell - 1) ** i
        total = new
    values = []
    for n in range(1, max_n + 1):
        if (2 * total[n]) % (ell - 1):
            raise ArithmeticError("dp weight not divisible by ell - 1")
        values.append(2 * total[n] // (ell - 1))
    return CountTable(params, max_n, values, "dp")


def factor_by_trial(f, irreducibles_by_degree, p: int):
    """Factor a monic polynomial; returns list of (degree, multiplicity)."""
    out = []
    rest = tuple(f)
    for d in sorted(irreducibles_by_degree):
        if 2 * d > len(rest) - 1:
            break
        for P in irreducibles_by_degree[d]:
            if 2 * d > len(rest) - 1:
                break
            e = 0
            while True:
                quo, rem = poly_divmod(rest, P, p)
                if rem:
                    break
                rest, e = quo, e + 1
            if e:
                out.append((d, e))
    if len(rest) > 1:
        out.append((len(rest) - 1, 1))
    return out


def conductor_profile(poly, p: int, alpha: int = 1) -> SquarefreeProfile | None:
    """Degree profile of a monic ``poly`` if it is a valid conductor, else ``None``."""
    deg = len(poly) - 1
    irr = {d: enumerate_irreducibles(p, d) for d in range(1, deg // 2 + 1)}
    fac = factor_by_trial(poly, irr, p)
    if any(e > 1 for _, e in fac) or any(d % alpha for d, _ in fac):
        return None
    profile = SquarefreeProfile()
    for d, _ in fac:
        profile.degree_multiset[d] = profile.degree_multiset.get(d, 0) + 1
    return profile


def _reduction_matrix(P, deg: int, p: int) -> np.ndarray:
    """Row ``i`` holds ``t^i mod P`` (little-endian, length ``deg(P)``)."""
    d = len(P) - 1
    rows = []
    for i in range(deg + 1):
        mono = (0,) * i + (1,)
        rem = poly_divmod(mono, P, p)[1]
        rows.append(list(rem) + [0] * (d - len(rem)))
    return np.array(rows, dtype=np.int64)


def _divisible(C: np.ndarray, P, p: int) -> np.ndarray:
    return ~((C @ _reduction_matrix(P, C.shape[1] - 1, p)) % p).any(axis=1)


def exact_counts_enumerative(p: int, ell: int, max_n: int) -> CountTable:
    """Scan every monic polynomial of degree ``alpha n`` and trial-divide it.

    Divisibility by each irreducible ``P`` of degree ``<= deg/2`` (and by
    ``P^2``) is tested for all candidates at once through the residues of
    ``t^i mod P``. What survives all small primes is 1 or a single large prime.
    """
    params = FieldParams.from_q_ell(p, ell)
    if params.k != 1:
        raise ValueError("the enumerative route works over prime fields only")
    top = params.alpha * max_n
    if p > 7 or top > 8 or sum(p**(params.alpha * n) for n in range(1, max_n + 1)) > enum_poly_cap():
        raise BudgetExceeded(f"enumerating conductors up to degree {top} over F_{p} exceeds the budget")
    a = params.alpha
    values = []
    for n in range(1, max_n + 1):
        deg = a * n
        C = _monic_matrix(p, deg).astype(np.int64)
        ok = np.ones(len(C), dtype=bool)
        m = np.zeros(len(C), dtype=np.int64)
        covered = np.zeros(len(C), dtype=np.int64)
        for d in range(1, deg // 2 + 1):
            for P in enumerate_irreducibles(p, d):
                hit = _divisible(C, P, p)
                if 2 * d <= deg:
                    ok &= ~(hit & _divisible(C, poly_mul(P, P, p), p))
                if d % a:
                    ok &= ~hit
                m += hit
                covered += d * hit
        rest = deg - covered
        m += rest > 0
        ok &= rest % a == 0
        values.append(sum(2 * (ell - 1) ** (int(k) - 1) for k in m[ok]))
    return CountTable(params, max_n, values, "enumerative")


def max_enumerable_n(p: int, ell: int) -> int:
    """Largest ``n`` the enumerative route accepts for ``(p, ell)``."""
    params = FieldParams.from_q_ell(p, ell)
    n = 0
    while True:
        nxt = n + 1
        if params.alpha * nxt > 8 or sum(p**(params.alpha * k) for k in range(1, nxt + 1)) > enum_poly_cap():
            return n
        n = nxt


def character_multiplicity(m: int, ell: int) -> int:
    """Count all-nonzero vectors of (Z/ell)^m up to unit scaling, by brute force."""
    if m < 1:
        raise ValueError("m must be positive")
    if (ell - 1) ** m > CHAR_VECTOR_CAP:
        raise BudgetExceeded(f"(ell-1)^m = {(ell - 1) ** m} vectors exceed the budget")
    units = range(1, ell)
    orbits = set()
    for v in itertools.product(units, repeat=m):
        orbits.add(min(tuple(c * x % ell for x in v) for c in units))
    count = len(orbits)
    if count != (ell - 1) ** (m - 1):
        raise ArithmeticError(f"orbit count {count} != (ell-1)^(m-1)")
    return count


def count(params: FieldParams, max_n: int, route: str, census: PrimeCensus | None = None) -> CountTable:
    if route == "series":
        return exact_counts_series(params, census, max_n)
    if route == "dp":
        return exact_counts_dp(params, census, max_n)
    if route == "enumerative":
        return exact_counts_enumerative(params.q, params.ell, max_n)
    raise ValueError(f"unknown route {route!r}")


def squarefree_count(q: int, n: int) -> int:
    """Monic squarefree polynomials of degree ``n`` over F_q."""
    if n == 0:
        return 1
    if n == 1:
        return q
    return q**n - q ** (n - 1)

