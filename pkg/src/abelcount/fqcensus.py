"""Monic irreducible polynomials over finite fields.

Counts come from the necklace formula for every prime power ``q``; explicit
lists are produced only over prime fields, by a sieve over monic polynomials.
Polynomials are little-endian coefficient tuples over F_p, so ``(1, 1, 0, 1)``
is ``1 + t + t^3``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# p**d above this is refused by the explicit enumerator
ENUM_CELLS_DEFAULT = 10**7
ENUM_MAX_P = 13
ENUM_MAX_DEG = 10


class BudgetExceeded(ValueError):
    """An explicit enumeration would exceed its configured cost ceiling."""


def enum_cell_cap() -> int:
    return int(os.environ.get("ABELCOUNT_ENUM_CELLS", ENUM_CELLS_DEFAULT))


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``; raise if ``q`` is not a prime power."""
    if q < 2:
        raise ValueError(f"q={q} is not a prime power")
    f = factorize(q)
    if len(f) != 1:
        raise ValueError(f"q={q} is not a prime power")
    ((p, k),) = f.items()
    return p, k


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius needs n >= 1")
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def count_irreducibles(q: int, d: int) -> int:
    """Number of monic irreducible polynomials of degree ``d`` over F_q."""
    prime_power(q)
    if d < 1:
        raise ValueError("degree must be >= 1")
    total = sum(mobius(e) * q ** (d // e) for e in divisors(d))
    if total % d:
        raise ArithmeticError(f"necklace sum for q={q}, d={d} not divisible by d")
    return total // d


def multiplicative_order(q: int, ell: int) -> int:
    """Order of ``q`` in (Z/ell Z)^x."""
    if q % ell == 0:
        raise ValueError(f"ell={ell} divides q={q}")
    x, k = q % ell, 1
    while x != 1:
        x = x * q % ell
        k += 1
    return k


@dataclass(frozen=True)
class FieldParams:
    """The constants (q, p, k, ell, alpha, w) of one counting problem."""

    q: int
    p: int
    k: int
    ell: int
    alpha: int
    w: int

    @classmethod
    def from_q_ell(cls, q: int, ell: int) -> "FieldParams":
        p, k = prime_power(q)
        if not is_prime(ell):
            raise ValueError(f"ell={ell} is not prime")
        if ell == p:
            raise ValueError(f"ell={ell} divides q={q}")
        alpha = multiplicative_order(q, ell)
        return cls(q=q, p=p, k=k, ell=ell, alpha=alpha, w=(ell - 1) // alpha)

    def __post_init__(self):
        if self.p ** self.k != self.q:
            raise ValueError("q != p**k")
        if self.w * self.alpha != self.ell - 1:
            raise ValueError("w * alpha != ell - 1")


# --- polynomial arithmetic over F_p (little-endian tuples) ---------------

def poly_trim(a) -> tuple[int, ...]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def poly_mul(a, b, p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return poly_trim(out)


def poly_divmod(a, b, p: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Division with remainder; ``b`` must be monic."""
    r = list(a)
    db = len(b) - 1
    if b[-1] != 1:
        raise ValueError("divisor must be monic")
    if len(r) - 1 < db:
        return (), poly_trim(r)
    quo = [0] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] % p
        if c:
            quo[i - db] = c
            for j in range(db + 1):
                r[i - db + j] = (r[i - db + j] - c * b[j]) % p
    return poly_trim(quo), poly_trim(x % p for x in r[:db])


def is_irreducible_by_trial(f, p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    d = len(f) - 1
    if d < 1 or f[-1] != 1:
        return False
    for k in range(1, d // 2 + 1):
        for g in _all_monic(p, k):
            if not poly_divmod(f, g, p)[1]:
                return False
    return True


def _all_monic(p: int, d: int):
    for idx in range(p**d):
        yield _index_to_poly(idx, p, d)


def _index_to_poly(idx: int, p: int, d: int) -> tuple[int, ...]:
    # index order matches lexicographic order on (c_0, ..., c_{d-1})
    coeffs = [0] * d
    for i in range(d - 1, -1, -1):
        idx, coeffs[i] = divmod(idx, p)
    return tuple(coeffs) + (1,)


def enumerate_irreducibles(p: int, d: int) -> list[tuple[int, ...]]:
    """All monic irreducibles of degree ``d`` over F_p in lexicographic order.

    Works as a sieve: every product of a lower-degree irreducible with a monic
    cofactor is struck out, the survivors are irreducible.
    """
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime; only prime fields are enumerated")
    if d < 1:
        raise ValueError("degree must be >= 1")
    if p > ENUM_MAX_P or d > ENUM_MAX_DEG or p**d > enum_cell_cap():
        raise BudgetExceeded(f"enumeration of degree {d} over F_{p} exceeds the ceiling")
    return list(_enumerate_cached(p, d))


@lru_cache(maxsize=None)
def _enumerate_cached(p: int, d: int) -> tuple[tuple[int, ...], ...]:
    reducible = np.zeros(p**d, dtype=bool)
    for k in range(1, d // 2 + 1):
        m = d - k
        cof = _monic_matrix(p, m).T.copy()
        for f in _enumerate_cached(p, k):
            # index of f * cofactor, built column by column (column d is the monic 1)
            idx = np.zeros(cof.shape[1], dtype=np.int64)
            for col in range(d):
                acc = np.zeros(cof.shape[1], dtype=np.int32)
                for i in range(max(0, col - m), min(k, col) + 1):
                    if f[i]:
                        acc += f[i] * cof[col - i]
                idx *= p
                idx += acc % p
            reducible[idx] = True
    survivors = _monic_matrix(p, d, np.flatnonzero(~reducible))
    return tuple(map(tuple, survivors.tolist()))


def _monic_matrix(p: int, m: int, idx: np.ndarray | None = None) -> np.ndarray:
    """Rows are the monic degree-``m`` polynomials with the given indices."""
    if idx is None:
        idx = np.arange(p**m, dtype=np.int64)
    out = np.zeros((len(idx), m + 1), dtype=np.int32)
    for i in range(m - 1, -1, -1):
        idx, rem = np.divmod(idx, p)
        out[:, i] = rem
    out[:, m] = 1
    return out


@dataclass
class PrimeCensus:
    """Counts ``N_q(d)`` for ``d <= max_deg``, plus optional explicit lists."""

    q: int
    max_deg: int
    counts: dict[int, int]
    lists: dict[int, list[tuple[int, ...]]] | None = field(default=None, repr=False)

    def __getitem__(self, d: int) -> int:
        if d > self.max_deg:
            raise ValueError(f"census depth {self.max_deg} < requested degree {d}")
        return self.counts[d]

    def require(self, depth: int):
        if depth > self.max_deg:
            raise ValueError(f"census depth {self.max_deg} is too shallow, need {depth}")


def build_census(q: int, max_deg: int, with_lists: bool = False) -> PrimeCensus:
    counts = {d: count_irreducibles(q, d) for d in range(1, max_deg + 1)}
    lists = None
    if with_lists:
        p, k = prime_power(q)
        if k != 1:
            raise ValueError("explicit lists exist only for prime q")
        lists = {d: enumerate_irreducibles(q, d) for d in range(1, max_deg + 1)}
    return PrimeCensus(q=q, max_deg=max_deg, counts=counts, lists=lists)
