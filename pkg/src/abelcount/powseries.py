"""Exact truncated power series over the rationals.

A :class:`TruncatedSeries` holds ``c_0 .. c_N`` as :class:`fractions.Fraction`
together with ``scale``, the integer ``sigma`` such that the formal variable
``u`` stands for ``q**(-sigma*s)``. Nothing here rounds.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial


class ScaleMismatch(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: tuple[Fraction, ...]
    scale: int = 1

    def __init__(self, coeffs, scale: int = 1):
        coeffs = tuple(_frac(c) for c in coeffs)
        if not coeffs:
            raise ValueError("a series needs at least the constant term")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "scale", scale)

    @classmethod
    def constant(cls, c, order: int, scale: int = 1) -> "TruncatedSeries":
        return cls([c] + [0] * order, scale)

    @classmethod
    def from_poly(cls, poly, order: int, scale: int = 1) -> "TruncatedSeries":
        """Truncate or zero-pad a coefficient list to ``order``."""
        c = list(poly[: order + 1])
        return cls(c + [0] * (order + 1 - len(c)), scale)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("truncation cannot extend precision")
        return TruncatedSeries(self.coeffs[: order + 1], self.scale)

    def _check(self, other: "TruncatedSeries"):
        if self.scale != other.scale:
            raise ScaleMismatch(f"variable scales differ: {self.scale} vs {other.scale}")

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries((self.coeffs[0] + other,) + self.coeffs[1:], self.scale)
        self._check(other)
        n = min(self.order, other.order)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)], self.scale)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.scale)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = _frac(other)
            return TruncatedSeries([c * other for c in self.coeffs], self.scale)
        self._check(other)
        return TruncatedSeries(_convolve(self.coeffs, other.coeffs, min(self.order, other.order)), self.scale)

    __rmul__ = __mul__

    def __pow__(self, m: int):
        return pow_int(self, m)

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def _convolve(a, b, n: int) -> list[Fraction]:
    # integer fast path: Fraction gcd bookkeeping dominates on big integers
    if all(c.denominator == 1 for c in a[: n + 1]) and all(c.denominator == 1 for c in b[: n + 1]):
        ai = [c.numerator for c in a[: n + 1]]
        bi = [c.numerator for c in b[: n + 1]]
        out = [0] * (n + 1)
        nz = [(j, y) for j, y in enumerate(bi) if y]
        for i, x in enumerate(ai):
            if x:
                for j, y in nz:
                    if i + j > n:
                        break
                    out[i + j] += x * y
        return [Fraction(c) for c in out]
    out = [Fraction(0)] * (n + 1)
    nz = [(j, y) for j, y in enumerate(b[: n + 1]) if y]
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in nz:
                if i + j > n:
                    break
                out[i + j] += x * y
    return out


def add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f + g


def mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f * g


def invert(f: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse through the same order."""
    c0 = f.coeffs[0]
    if c0 == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    n = f.order
    inv = [Fraction(0)] * (n + 1)
    inv[0] = 1 / c0
    nz = [(j, c) for j, c in enumerate(f.coeffs) if c and j]
    for k in range(1, n + 1):
        s = Fraction(0)
        for j, c in nz:
            if j > k:
                break
            s += c * inv[k - j]
        inv[k] = -s / c0
    return TruncatedSeries(inv, f.scale)


def pow_int(f: TruncatedSeries, m: int) -> TruncatedSeries:
    """``f**m`` by repeated squaring; negative ``m`` goes through :func:`invert`."""
    if m < 0:
        return pow_int(invert(f), -m)
    result = TruncatedSeries.constant(1, f.order, f.scale)
    base = f
    while m:
        if m & 1:
            result = result * base
        m >>= 1
        if m:
            base = base * base
    return result


def binom_general(m: int, j: int) -> int:
    """``m(m-1)...(m-j+1)/j!`` for any integer ``m`` (negative allowed)."""
    num = 1
    for i in range(j):
        num *= m - i
    return num // factorial(j)


def sparse_factor_power(d: int, c, m: int, order: int, scale: int = 1) -> TruncatedSeries:
    """Expand ``(1 + c*u**d)**m`` through ``u**order``.

    Only ``order // d + 1`` binomial terms are touched, so ``m`` may be an
    astronomically large census count. Negative ``m`` uses the generalized
    binomial series.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    c = _frac(c)
    out = [Fraction(0)] * (order + 1)
    coef = Fraction(1)
    cj = Fraction(1)
    for j in range(order // d + 1):
        if j:
            coef = coef * (m - j + 1) / j
            cj *= c
            if coef == 0:
                break
        out[d * j] = coef * cj
    return TruncatedSeries(out, scale)


def eval_derivatives(f: TruncatedSeries, x, j_max: int, tail_bound=0, radius=None):
    """Evaluate ``f`` and its first ``j_max`` derivatives at ``x`` exactly.

    Returns a list of ``(value, radius)`` pairs; ``value`` is the exact sum over
    the stored coefficients and ``radius`` is the caller's bound on the
    discarded tail. ``tail_bound`` is either one number used for every ``j`` or
    a sequence indexed by ``j``. A polynomial passes ``tail_bound=0``.
    When ``radius`` is given, ``|x|`` must lie strictly inside it.
    """
    x = _frac(x)
    if radius is not None and abs(x) >= radius:
        raise ValueError(f"|x|={abs(x)} is not inside the convergence radius {radius}")
    if isinstance(tail_bound, (list, tuple)):
        radii = [_frac(t) for t in tail_bound]
        if len(radii) < j_max + 1:
            raise ValueError("need one tail bound per derivative order")
    else:
        radii = [_frac(tail_bound)] * (j_max + 1)
    if any(r < 0 for r in radii):
        raise ValueError("tail bounds must be nonnegative")
    out = []
    for j in range(j_max + 1):
        total = Fraction(0)
        for n in range(j, f.order + 1):
            c = f.coeffs[n]
            if c:
                total += c * (factorial(n) // factorial(n - j)) * x ** (n - j)
        out.append((total, radii[j]))
    return out


def poly_eval(coeffs_desc, x):
    """Horner evaluation of a polynomial given highest degree first."""
    acc = 0
    for c in coeffs_desc:
        acc = acc * x + c
    return acc


def pow_exponent(f: TruncatedSeries, m) -> TruncatedSeries:
    """``f**m`` for any rational ``m`` via the recurrence ``f * g' = m * f' * g``.

    Needs ``c_0 == 1``. Cost is O(N * nnz(f)) independent of ``m``; this is the
    route for raising a local Euler factor to a census count.
    """
    if f.coeffs[0] != 1:
        raise ValueError("pow_exponent needs constant term 1")
    m = _frac(m)
    n = f.order
    nz = [(k, c) for k, c in enumerate(f.coeffs) if c and k]
    g = [Fraction(0)] * (n + 1)
    g[0] = Fraction(1)
    for i in range(1, n + 1):
        s = Fraction(0)
        for k, c in nz:
            if k > i:
                break
            s += (m * k - (i - k)) * c * g[i - k]
        g[i] = s / i
    return TruncatedSeries(g, f.scale)


def substitute_power(f: TruncatedSeries, k: int, order: int) -> TruncatedSeries:
    """Return ``f(u**k)`` truncated at ``u**order``."""
    out = [Fraction(0)] * (order + 1)
    for j, c in enumerate(f.coeffs):
        if j * k > order:
            break
        out[j * k] = c
    return TruncatedSeries(out, f.scale)
