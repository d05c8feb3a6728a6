"""Exact complex values for sequence analysis.

CycValue models elements of a cyclotomic field Q(zeta_m) as rational
coordinate vectors over the power basis 1, zeta, ..., zeta^(phi(m)-1),
reduced modulo the m-th cyclotomic polynomial.  This covers roots of unity,
Gaussian rationals (m = 4) and their products exactly; rational values are
demoted to order 1 so that rationality is visible structurally.

The module also provides the small dispatch layer (v_mul, v_eq, ...) that
lets the classification code treat int, Fraction, ExactReal, CycValue and
ComplexValue uniformly.  Values never touch floating point except in the
display helpers.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .exactreal import ExactReal


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple:
    """Integer coefficients (low to high) of the m-th cyclotomic polynomial."""
    if m == 1:
        return (-1, 1)
    # x^m - 1 divided by prod of cyclotomic_poly(d) over proper divisors d | m
    poly = [Fraction(0)] * (m + 1)
    poly[0], poly[m] = Fraction(-1), Fraction(1)
    for d in range(1, m):
        if m % d == 0:
            poly = _polydiv_exact(poly, [Fraction(c) for c in cyclotomic_poly(d)])
    assert all(c.denominator == 1 for c in poly)
    return tuple(int(c) for c in poly)


def _polydiv_exact(num: list, den: list) -> list:
    num = list(num)
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        q = num[i + len(den) - 1] / lead
        out[i] = q
        for j, c in enumerate(den):
            num[i + j] -= q * c
    assert all(c == 0 for c in num[: len(den) - 1])
    return out


def _reduce_mod_cyclotomic(coeffs: list, m: int) -> tuple:
    """Reduce a rational polynomial in zeta_m to degree < deg(Phi_m)."""
    phi = [Fraction(c) for c in cyclotomic_poly(m)]
    deg = len(phi) - 1
    coeffs = list(coeffs)
    for i in range(len(coeffs) - 1, deg - 1, -1):
        q = coeffs[i]  # phi is monic
        if q:
            for j in range(deg + 1):
                coeffs[i - deg + j] -= q * phi[j]
    out = coeffs[:deg]
    while len(out) < deg:
        out.append(Fraction(0))
    return tuple(out)


class CycValue:
    """An exact element of Q(zeta_order), zeta_order = e(1/order).

    Rational values always carry order == 1.  Values of different orders
    compare correctly (via the common cyclotomic field) but are unhashable;
    deduplicate with a list and ==.
    """

    __slots__ = ("order", "coeffs")
    __hash__ = None

    def __init__(self, order: int, coeffs):
        coeffs = _reduce_mod_cyclotomic([Fraction(c) for c in coeffs], order)
        if order > 1 and all(c == 0 for c in coeffs[1:]):
            order, coeffs = 1, (coeffs[0],)
        self.order = order
        self.coeffs = coeffs

    # -- constructors --------------------------------------------------------

    @staticmethod
    def rational(q) -> "CycValue":
        return CycValue(1, (Fraction(q),))

    @staticmethod
    def root_of_unity(m: int, e: int) -> "CycValue":
        """e(e/m) = exp(2*pi*i*e/m)."""
        if m < 1:
            raise ValueError("order must be >= 1")
        e %= m
        g = gcd(e, m) if e else m
        m, e = m // g, e // g
        vec = [Fraction(0)] * (e + 1)
        vec[e] = Fraction(1)
        return CycValue(m, vec)

    @staticmethod
    def gaussian(re, im) -> "CycValue":
        """re + im*i as an element of Q(zeta_4)."""
        return CycValue(4, (Fraction(re), Fraction(im)))

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return self.coeffs[0] if self.order == 1 else None

    def _lift(self, order: int) -> list:
        step = order // self.order
        out = [Fraction(0)] * order
        for j, c in enumerate(self.coeffs):
            out[j * step] += c
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycValue.rational(other)
        if not isinstance(other, CycValue):
            return NotImplemented
        if self.order == other.order:
            return self.coeffs == other.coeffs
        m = self.order * other.order // gcd(self.order, other.order)
        return _reduce_mod_cyclotomic(self._lift(m), m) == _reduce_mod_cyclotomic(
            other._lift(m), m
        )

    # -- arithmetic ------------------------------------------------------------

    def _coerced_pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycValue.rational(other)
        m = self.order * other.order // gcd(self.order, other.order)
        return m, self._lift(m), other._lift(m)

    def __add__(self, other):
        m, a, b = self._coerced_pair(other)
        return CycValue(m, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return CycValue(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-(other if isinstance(other, CycValue) else CycValue.rational(other)))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycValue(self.order, [c * other for c in self.coeffs])
        m, a, b = self._coerced_pair(other)
        prod = [Fraction(0)] * (2 * m)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycValue(m, prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        q = Fraction(other)
        if q == 0:
            raise ZeroDivisionError
        return self * (1 / q)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers not supported")
        out = CycValue.rational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "CycValue":
        m = self.order
        out = [Fraction(0)] * m
        for j, c in enumerate(self.coeffs):
            out[(-j) % m] += c
        return CycValue(m, out)

    def abs2(self) -> "CycValue":
        """Squared modulus |v|^2 = v * conj(v); a real cyclotomic value."""
        return self * self.conj()

    # -- display ----------------------------------------------------------------

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(c) * z**j for j, c in enumerate(self.coeffs))

    def __repr__(self):
        if self.order == 1:
            return f"CycValue({self.coeffs[0]})"
        terms = [f"{c}*e({j}/{self.order})" for j, c in enumerate(self.coeffs) if c]
        return "CycValue(" + (" + ".join(terms) or "0") + ")"


def root_sum_is_zero(pairs) -> bool:
    """Exact test whether a finite sum of roots of unity (m, e) vanishes."""
    total = CycValue.rational(0)
    for m, e in pairs:
        total = total + CycValue.root_of_unity(m, e)
    return total.is_zero()


@dataclass(frozen=True)
class ComplexValue:
    """re + i*im with multi-quadratic real and imaginary parts."""

    re: ExactReal
    im: ExactReal

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ComplexValue(self.re * other, self.im * other)
        return ComplexValue(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        q = Fraction(other)
        return ComplexValue(self.re / q, self.im / q)

    def abs2(self) -> ExactReal:
        return self.re * self.re + self.im * self.im


# -- uniform value protocol ------------------------------------------------
#
# Sequence sources emit int, Fraction, ExactReal, CycValue or ComplexValue.
# A single source always sticks to one kind; the helpers below let report
# code compare and combine them without caring which kind it got.


def v_is_zero(v) -> bool:
    if isinstance(v, (int, Fraction)):
        return v == 0
    return v.is_zero()


def v_eq(a, b) -> bool:
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a == b
    if isinstance(a, (int, Fraction)):
        a, b = b, a
    if isinstance(b, (int, Fraction)):
        if isinstance(a, ExactReal):
            return a == ExactReal(b)
        if isinstance(a, CycValue):
            return a == b
        if isinstance(a, ComplexValue):
            return a.im.is_zero() and a.re == ExactReal(b)
    if isinstance(a, ExactReal) and isinstance(b, CycValue):
        a, b = b, a
    if isinstance(a, CycValue) and isinstance(b, ExactReal):
        qa, qb = a.is_rational(), b.is_rational()
        if qa is not None and qb is not None:
            return qa == qb
        return False
    return a == b


def v_mul(a, b):
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a * b
    return a * b


def v_scale(v, q: Fraction):
    """v * q for rational q."""
    if isinstance(v, int):
        return v * q
    return v * q


def v_abs2(v):
    """Squared modulus, exact (Fraction, ExactReal or real CycValue)."""
    if isinstance(v, (int, Fraction)):
        return Fraction(v) ** 2
    if isinstance(v, ExactReal):
        return v * v
    return v.abs2()


def dedupe(values, limit=None) -> list:
    """Distinct values under v_eq, preserving first-seen order.

    Stops early (returning None) once more than `limit` distinct values
    appear, so callers can reject a hypothesis cheaply.
    """
    out: list = []
    for v in values:
        if not any(v_eq(v, w) for w in out):
            out.append(v)
            if limit is not None and len(out) > limit:
                return None
    return out
