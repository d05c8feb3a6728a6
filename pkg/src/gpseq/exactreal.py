"""Exact arithmetic over multi-quadratic real fields Q(sqrt(d1), ..., sqrt(dm)).

Values are finite sums  sum_e c_e * sqrt(e)  with rational c_e and squarefree
integer indices e >= 1 (e = 1 carries the rational part).  Since square roots
of distinct squarefree integers are linearly independent over Q, this
representation is canonical: structural equality is value equality, and the
zero/rationality tests are exact.  Floors of irrational values are certified
by interval refinement, which always terminates because an irrational value
is never an integer.

No floating point is used anywhere in this module.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import floor as _ifloor
from math import gcd, isqrt

DEFAULT_REFINEMENT_BITS = 4096
_ENV_BITS = "GPSEQ_PRECISION_BITS"


class RefinementBudgetExceeded(Exception):
    """Interval refinement hit the precision cap.

    This cannot happen for well-formed inputs (rational values take the exact
    path and an irrational multi-quadratic value eventually separates from
    every integer); it indicates an internal error and is never silenced.
    """


def refinement_cap() -> int:
    bits = os.environ.get(_ENV_BITS)
    if bits is None:
        return DEFAULT_REFINEMENT_BITS
    return max(int(bits), 64)


def is_squarefree(d: int) -> bool:
    if d < 1:
        return False
    p = 2
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        p += 1
    return True


def _sqrt_bounds(d: int, bits: int) -> tuple[Fraction, Fraction]:
    # floor(2^bits * sqrt(d)) via integer square root; width exactly 2^-bits.
    s = isqrt(d << (2 * bits))
    return Fraction(s, 1 << bits), Fraction(s + 1, 1 << bits)


@dataclass(frozen=True)
class IntervalApprox:
    """Rational enclosure [lo, hi] of an exact value, hi - lo <= 2^-precision_bits."""

    lo: Fraction
    hi: Fraction
    precision_bits: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi


class ExactReal:
    """An element of a multi-quadratic real number field.

    Immutable; all arithmetic is exact.  Mixed operations with int and
    Fraction coerce the rational operand.
    """

    __slots__ = ("_coords", "_key")

    def __init__(self, value=0, *, _coords=None):
        if _coords is not None:
            coords = _coords
        else:
            coords = {1: Fraction(value)} if value else {}
        object.__setattr__(self, "_coords", coords)
        object.__setattr__(
            self, "_key", tuple(sorted((e, c) for e, c in coords.items()))
        )

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_rational(q) -> "ExactReal":
        return ExactReal(Fraction(q))

    @staticmethod
    def sqrt_int(d: int) -> "ExactReal":
        """sqrt(d) for a squarefree integer d >= 2."""
        if d < 2 or not is_squarefree(d):
            raise ValueError(f"radicand must be squarefree and >= 2, got {d}")
        return ExactReal(_coords={d: Fraction(1)})

    @staticmethod
    def _make(coords: dict) -> "ExactReal":
        return ExactReal(_coords={e: c for e, c in coords.items() if c})

    @property
    def radicands(self) -> frozenset:
        return frozenset(e for e in self._coords if e != 1)

    def coordinates(self) -> dict:
        return dict(self._coords)

    # -- ring operations ---------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, ExactReal):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactReal(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        coords = dict(self._coords)
        for e, c in other._coords.items():
            coords[e] = coords.get(e, Fraction(0)) + c
        return ExactReal._make(coords)

    __radd__ = __add__

    def __neg__(self):
        return ExactReal._make({e: -c for e, c in self._coords.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        coords: dict = {}
        for e1, c1 in self._coords.items():
            for e2, c2 in other._coords.items():
                # sqrt(e1)*sqrt(e2) = g * sqrt(e1*e2/g^2) with g = gcd(e1, e2);
                # the reduced index stays squarefree.
                g = gcd(e1, e2)
                e = (e1 // g) * (e2 // g)
                coords[e] = coords.get(e, Fraction(0)) + c1 * c2 * g
        return ExactReal._make(coords)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = ExactReal(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other):
        # Division by nonzero rationals only; general field inversion is not needed.
        q = Fraction(other) if isinstance(other, (int, Fraction)) else None
        if q is None:
            rat = other.is_rational() if isinstance(other, ExactReal) else None
            if rat is None:
                raise ValueError("ExactReal division only by nonzero rationals")
            q = rat
        if q == 0:
            raise ZeroDivisionError("ExactReal division by zero")
        return self * (1 / q)

    # -- predicates and comparisons ----------------------------------------

    def is_zero(self) -> bool:
        return not self._coords

    def is_rational(self):
        """The value as a Fraction iff it is rational, else None."""
        if not self._coords:
            return Fraction(0)
        if set(self._coords) == {1}:
            return self._coords[1]
        return None

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def sign(self) -> int:
        if not self._coords:
            return 0
        q = self.is_rational()
        if q is not None:
            return -1 if q < 0 else 1
        bits = 32
        cap = refinement_cap()
        while bits <= cap:
            box = self.approx(bits)
            if box.lo > 0:
                return 1
            if box.hi < 0:
                return -1
            bits *= 2
        raise RefinementBudgetExceeded(
            f"sign undecided at {cap} bits for {self!r}"
        )

    def __lt__(self, other):
        other = self._coerce(other)
        return (self - other).sign() < 0

    def __le__(self, other):
        other = self._coerce(other)
        return (self - other).sign() <= 0

    def __gt__(self, other):
        other = self._coerce(other)
        return (self - other).sign() > 0

    def __ge__(self, other):
        other = self._coerce(other)
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- interval approximation and certified floor -------------------------

    def approx(self, bits: int) -> IntervalApprox:
        """A rational interval of width <= 2^-bits containing the value."""
        if bits < 1:
            raise ValueError("bits must be >= 1")
        q = self.is_rational()
        if q is not None:
            return IntervalApprox(q, q, bits)
        scale = sum(abs(c) for e, c in self._coords.items() if e != 1)
        # width = scale * 2^-m, so m = bits + ceil(log2(scale)) + 1 suffices
        m = bits + max(0, (scale.numerator // scale.denominator).bit_length()) + 1
        lo = hi = self._coords.get(1, Fraction(0))
        for e, c in self._coords.items():
            if e == 1:
                continue
            slo, shi = _sqrt_bounds(e, m)
            if c > 0:
                lo += c * slo
                hi += c * shi
            else:
                lo += c * shi
                hi += c * slo
        return IntervalApprox(lo, hi, bits)

    def floor(self) -> int:
        """Certified integer part.

        Rational values take the exact path; irrational values refine an
        interval until it excludes every integer (guaranteed to happen).
        """
        q = self.is_rational()
        if q is not None:
            return q.numerator // q.denominator
        bits = 32
        cap = refinement_cap()
        while bits <= cap:
            box = self.approx(bits)
            flo = _ifloor(box.lo)
            if flo == _ifloor(box.hi):
                return flo
            bits *= 2
        raise RefinementBudgetExceeded(
            f"floor undecided at {cap} bits for {self!r}"
        )

    def frac(self) -> "ExactReal":
        """Fractional part, an exact value in [0, 1)."""
        return self - self.floor()

    def circle_norm(self) -> "ExactReal":
        """Distance to the nearest integer: min(frac, 1 - frac), in [0, 1/2]."""
        f = self.frac()
        g = ExactReal(1) - f
        return f if (f - g).sign() <= 0 else g

    # -- conversion and rendering -------------------------------------------

    def __float__(self):
        box = self.approx(64)
        return float((box.lo + box.hi) / 2)

    def decimal(self, digits: int = 12) -> str:
        """Decimal rendering truncated toward minus infinity, display only."""
        scaled = self * (10**digits)
        n = scaled.floor()
        sign = "-" if n < 0 else ""
        s = str(abs(n)).rjust(digits + 1, "0")
        return f"{sign}{s[:-digits]}.{s[-digits:]}" if digits else f"{sign}{s}"

    def __str__(self):
        if not self._coords:
            return "0"
        parts = []
        for e, c in sorted(self._coords.items()):
            if e == 1:
                term = str(c)
            elif c == 1:
                term = f"sqrt({e})"
            elif c == -1:
                term = f"-sqrt({e})"
            else:
                term = f"{c}*sqrt({e})"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out

    def __repr__(self):
        return f"ExactReal({self})"


ZERO = ExactReal(0)
ONE = ExactReal(1)


def sqrt(d: int) -> ExactReal:
    """Convenience alias for ExactReal.sqrt_int."""
    return ExactReal.sqrt_int(d)
