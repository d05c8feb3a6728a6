"""Quantitative equidistribution diagnostics.

Polynomials over the reals are carried in two coefficient bases: the binomial
basis a_d*binom(n,d) + ... + a_1*n + a_0 (compatible with the discrete
derivative) and the plain monomial basis.  The smoothness norm of a degree-d
polynomial at scale N is  max_{1<=i<=d} N^i * ||a_i||  with ||.|| the circle
norm; it is computed exactly and only rendered as a decimal at the I/O layer.

The delta-equidistribution estimator scans a finite dictionary of test
functions (torus characters and tent bumps).  For each it knows the integral
in closed form, so the reported figure is a genuine discrepancy over the
dictionary; the Lipschitz-normalised variant (a one-sided lower bound for the
best delta against all Lipschitz test functions) is reported alongside.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from ._norm_constants import NORM_CONSTANTS
from .exactreal import ExactReal

BALL_EPS = 1e-12  # float slack when testing exact points against metric balls


def _coerce(c) -> ExactReal:
    return c if isinstance(c, ExactReal) else ExactReal(Fraction(c))


class RealPolynomial:
    """A real polynomial carried exactly in binomial and/or monomial basis."""

    def __init__(self, *, binomial=None, monomial=None):
        if binomial is None and monomial is None:
            raise ValueError("need coefficients in at least one basis")
        self._binomial = tuple(_coerce(c) for c in binomial) if binomial is not None else None
        self._monomial = tuple(_coerce(c) for c in monomial) if monomial is not None else None

    @staticmethod
    def from_binomial(coeffs) -> "RealPolynomial":
        return RealPolynomial(binomial=coeffs)

    @staticmethod
    def from_monomial(coeffs) -> "RealPolynomial":
        return RealPolynomial(monomial=coeffs)

    @property
    def degree(self) -> int:
        cs = self._binomial if self._binomial is not None else self._monomial
        return len(cs) - 1

    def binomial(self) -> tuple:
        if self._binomial is None:
            mono = self._monomial
            d = len(mono) - 1
            out = []
            for i in range(d + 1):
                acc = ExactReal(0)
                for j in range(i, d + 1):
                    acc = acc + mono[j] * (_stirling2(j, i) * factorial(i))
                out.append(acc)
            self._binomial = tuple(out)
        return self._binomial

    def monomial(self) -> tuple:
        if self._monomial is None:
            bino = self._binomial
            d = len(bino) - 1
            out = []
            for j in range(d + 1):
                acc = ExactReal(0)
                for i in range(j, d + 1):
                    acc = acc + bino[i] * Fraction(_falling_coeff(i, j), factorial(i))
                out.append(acc)
            self._monomial = tuple(out)
        return self._monomial

    def evaluate(self, n: int) -> ExactReal:
        total = ExactReal(0)
        if self._monomial is not None:
            for j, c in enumerate(self._monomial):
                total = total + c * (n**j)
        else:
            for i, c in enumerate(self._binomial):
                total = total + c * _binom_int(n, i)
        return total

    def __eq__(self, other):
        if not isinstance(other, RealPolynomial):
            return NotImplemented
        a, b = self.monomial(), other.monomial()
        d = max(len(a), len(b))
        a = a + (ExactReal(0),) * (d - len(a))
        b = b + (ExactReal(0),) * (d - len(b))
        return all(x == y for x, y in zip(a, b))

    def __repr__(self):
        if self._monomial is not None:
            return f"RealPolynomial(monomial={[str(c) for c in self._monomial]})"
        return f"RealPolynomial(binomial={[str(c) for c in self._binomial]})"


def _binom_int(n: int, k: int) -> int:
    num = 1
    for t in range(k):
        num *= n - t
    return num // factorial(k)


def _falling_coeff(i: int, j: int) -> int:
    poly = [1]
    for t in range(i):
        shifted = [0] + poly
        poly = [a - t * b for a, b in zip(shifted, poly + [0])]
    return poly[j] if j < len(poly) else 0


def _stirling2(j: int, i: int) -> int:
    if i == 0:
        return 1 if j == 0 else 0
    if i > j:
        return 0
    total = sum((-1) ** t * comb(i, t) * (i - t) ** j for t in range(i + 1))
    return total // factorial(i)


def convert_basis(p: RealPolynomial, to: str) -> RealPolynomial:
    """Exact change of coefficient basis; the round trip is the identity."""
    if to == "monomial":
        return RealPolynomial(monomial=p.monomial())
    if to == "binomial":
        return RealPolynomial(binomial=p.binomial())
    raise ValueError(f"unknown basis {to!r}")


def smoothness_norm(p: RealPolynomial, N: int, basis: str = "binomial") -> ExactReal:
    """max over 1 <= i <= degree of N^i * circle_norm(coefficient i), exact."""
    if N < 1:
        raise ValueError("N must be >= 1")
    coeffs = p.binomial() if basis == "binomial" else p.monomial()
    best = ExactReal(0)
    for i in range(1, len(coeffs)):
        term = coeffs[i].circle_norm() * (N**i)
        if term > best:
            best = term
    return best


def restrict_to_ap(p: RealPolynomial, a: int, b: int) -> RealPolynomial:
    """The polynomial n -> p(a*n + b), monomial coefficients computed exactly."""
    if a < 1:
        raise ValueError("step a must be >= 1")
    mono = p.monomial()
    d = len(mono) - 1
    out = [ExactReal(0)] * (d + 1)
    for i, c in enumerate(mono):
        for j in range(i + 1):
            out[j] = out[j] + c * (comb(i, j) * a**j * b ** (i - j))
    return RealPolynomial(monomial=out)


def norm_equiv_constants(d: int) -> tuple[int, int]:
    """(C1, C2) with ||d! p||' <= C1(d) ||p|| and ||d! p|| <= C2(d) ||p||'."""
    c1, c2, _ = NORM_CONSTANTS[d]
    return c1, c2


def ap_constant(d: int) -> int:
    """C(d) with ||a^d p||'_{N} <= C(d) * (1/mu^d) * ||p o ell||'_{M}."""
    return NORM_CONSTANTS[d][2]


# -- star discrepancy ----------------------------------------------------------


def _to_fraction(x) -> Fraction:
    if isinstance(x, ExactReal):
        q = x.is_rational()
        if q is not None:
            return q
        box = x.approx(128)
        return (box.lo + box.hi) / 2
    return Fraction(x)


def star_discrepancy(points) -> Fraction:
    """D*_N of a point set in [0,1) via the sorted-points formula."""
    xs = sorted(_to_fraction(x) for x in points)
    if not xs:
        raise ValueError("empty point set")
    if xs[0] < 0 or xs[-1] >= 1:
        raise ValueError("points must lie in [0,1)")
    n = len(xs)
    best = Fraction(0)
    for i, x in enumerate(xs, start=1):
        best = max(best, abs(x - Fraction(i - 1, n)), abs(x - Fraction(i, n)))
    return best


# -- delta-equidistribution over a test-function dictionary ---------------------


@dataclass
class EquiReport:
    estimate: float            # max |avg - integral| over the dictionary
    normalized: float          # max (|avg - integral| / Lipschitz norm): lower bound for delta
    worst: str
    N: int
    K: int
    dictionary_size: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "estimate": self.estimate,
                "normalized": self.normalized,
                "worst": self.worst,
                "N": self.N,
                "K": self.K,
                "dictionary_size": self.dictionary_size,
            }
        )


def _points_array(points) -> tuple[np.ndarray, object]:
    entry = points[0].entry
    for p in points:
        if p.entry != entry:
            raise ValueError("points must share one catalog entry")
    arr = np.array([[float(c) for c in p.coords] for p in points], dtype=float)
    return arr, entry


def nonzero_vectors(dim: int, K: int):
    """Nonzero integer vectors with sup norm <= K, by growing norm, positives first."""
    vecs = [v for v in itertools.product(range(-K, K + 1), repeat=dim) if any(v)]
    vecs.sort(key=lambda v: (max(abs(c) for c in v), tuple((abs(c), 0 if c >= 0 else 1) for c in v)))
    return vecs


def delta_equi_estimate(points, K: int, rho0=Fraction(1, 4), net: int = 4) -> EquiReport:
    """Scan characters |k| <= K and tent bumps on a (1/net)-grid.

    Characters integrate to zero; a tent of radius rho0 <= 1/2 has integral
    coef * rho0^p / (p+1) where coef * s^p is the entry's metric-ball volume.
    `estimate` is the largest raw discrepancy |avg - integral| seen;
    `normalized` divides each test function by its Lipschitz norm first,
    giving a certified one-sided lower bound for the best delta over all
    Lipschitz test functions.
    """
    if not points:
        raise ValueError("empty orbit")
    arr, entry = _points_array(points)
    N, D = arr.shape
    rho0 = Fraction(rho0)
    if not 0 < rho0 <= Fraction(1, 2):
        raise ValueError("rho0 must be in (0, 1/2]")

    best_raw, best_norm, worst, count = 0.0, 0.0, "none", 0

    ab = entry.abelian_indices()
    for k in nonzero_vectors(len(ab), K):
        phase = np.zeros(N)
        for kj, idx in zip(k, ab):
            if kj:
                phase += kj * arr[:, idx]
        avg = abs(np.exp(2j * np.pi * phase).mean())
        lip = 1.0 + 2.0 * np.pi * sum(abs(c) for c in k)
        count += 1
        if avg > best_raw:
            best_raw, worst = avg, f"character k={tuple(k)}"
        best_norm = max(best_norm, avg / lip)

    vol_coef, vol_pow = entry.ball_volume()
    tent_integral = float(vol_coef * rho0**vol_pow / (vol_pow + 1))
    lip_tent = 1.0 + 1.0 / float(rho0)
    for center in itertools.product(range(net), repeat=D):
        z = tuple(c / net for c in center)
        d = entry.metric_np(arr, z)
        vals = np.maximum(0.0, 1.0 - d / float(rho0))
        raw = abs(float(vals.mean()) - tent_integral)
        count += 1
        if raw > best_raw:
            best_raw, worst = raw, f"tent z={z} rho0={rho0}"
        best_norm = max(best_norm, raw / lip_tent)

    return EquiReport(best_raw, best_norm, worst, N, K, count)


# -- rho-density along arithmetic progressions ----------------------------------


def rho_dense_check(points, rho, net: int | None = None):
    """Every AP of relative length >= rho must hit every radius-rho ball.

    Ball centers are quantised to a (1/net)-grid (default net = 2*ceil(1/rho));
    progressions of step a <= floor(1/rho) are scanned via length-ceil(rho*N)
    windows, which suffices because a longer progression contains one.
    Returns (True, None) or (False, witness).
    """
    rho = Fraction(rho)
    if not 0 < rho < Fraction(1, 2):
        raise ValueError("rho must be in (0, 1/2)")
    arr, entry = _points_array(points)
    N, D = arr.shape
    if net is None:
        net = 2 * math.ceil(1 / rho)
    M0 = math.ceil(rho * N)
    a_max = math.floor(1 / rho)

    centers = [tuple(c / net for c in v) for v in itertools.product(range(net), repeat=D)]
    in_ball = np.empty((len(centers), N), dtype=bool)
    for ci, z in enumerate(centers):
        in_ball[ci] = entry.metric_np(arr, z) <= float(rho) + BALL_EPS

    for a in range(1, a_max + 1):
        for b in range(a):
            idx = np.arange(b, N, a)
            if len(idx) < M0:
                continue
            outside = ~in_ball[:, idx]
            run = np.zeros(len(centers), dtype=np.int64)
            best = np.zeros(len(centers), dtype=np.int64)
            for col in range(outside.shape[1]):
                run = np.where(outside[:, col], run + 1, 0)
                np.maximum(best, run, out=best)
            bad = np.nonzero(best >= M0)[0]
            if len(bad):
                ci = int(bad[0])
                start = _first_run_start(outside[ci], M0)
                witness = {
                    "step": a,
                    "start": int(idx[start]),
                    "length": M0,
                    "center": centers[ci],
                    "radius": str(rho),
                }
                return False, witness
    return True, None


def _first_run_start(outside_row: np.ndarray, m: int) -> int:
    run = 0
    for j, out in enumerate(outside_row):
        run = run + 1 if out else 0
        if run >= m:
            return j - m + 1
    raise AssertionError("run promised but not found")


# -- horizontal character search -------------------------------------------------


def character_search(g, N: int, K: int, C):
    """First small horizontal character making the composed orbit polynomial smooth.

    Scans 0 < |eta| <= K in a deterministic order (growing sup norm, positive
    entries preferred) and returns the first eta with smoothness norm of
    eta o g at scale N at most C, exactly; None when the scan is exhausted.
    """
    from . import nil  # deferred: nil imports this module for RealPolynomial

    if K < 1:
        raise ValueError("K must be >= 1")
    C = Fraction(C)
    for vec in nonzero_vectors(g.entry.abelian_dim(), K):
        eta = nil.HorizontalCharacter(g.entry, vec)
        poly = nil.char_compose(eta, g)
        if smoothness_norm(poly, N, "binomial") <= C:
            return eta
    return None
