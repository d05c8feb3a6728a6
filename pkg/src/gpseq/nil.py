"""Catalog nilmanifolds with exact orbits in Mal'cev-style coordinates.

The catalog holds the torus T^D with a degree-d filtration, the Heisenberg
3-manifold (the one genuinely 2-step example needed here), and finite
products of catalog entries.  Explicit coordinate group laws replace
Lie-algebra data; coordinates are ExactReal throughout and reduction into
[0,1)^D uses the certified floor.

Heisenberg group law in coordinates (x, y, z):

    (x1,y1,z1) * (x2,y2,z2) = (x1+x2, y1+y2, z1+z2+x1*y2)
    (x,y,z)^-1              = (-x, -y, -z+x*y)
    (x,y,z)^n               = (n*x, n*y, n*z + binom(n,2)*x*y)

The metric is a substitute for the classical Mal'cev-basis metric: on the
torus the max of coordinatewise circle norms; on the Heisenberg manifold the
lattice-minimised homogeneous norm

    d(xG, yG) = min over lattice gamma of N(x*gamma*y^-1),
    N(u) = max(|u1|, |u2|, sqrt(|u3|), sqrt(|u3 - u1*u2|)),

whose square-root weighting on the central coordinate makes N subadditive
(|u3 + v3 + u1*v2| <= (N(u)+N(v))^2), so the quotient distance is symmetric
and satisfies the triangle inequality; a plain max-coordinate weighting does
not.  Distances are returned as MetricValue wrappers carrying the exact
squared distance, so ball tests stay exact.  All quantitative thresholds
elsewhere in the package are defined against this metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .equidist import RealPolynomial
from .exactreal import ExactReal


class EntryMismatch(Exception):
    pass


class CentralComponentNonzero(Exception):
    pass


def _binom_int(n: int, k: int) -> int:
    num = 1
    for t in range(k):
        num *= n - t
    return num // factorial(k)


def _coerce(c) -> ExactReal:
    return c if isinstance(c, ExactReal) else ExactReal(Fraction(c))


def _circle_np(a: np.ndarray) -> np.ndarray:
    f = np.mod(a, 1.0)
    return np.minimum(f, 1.0 - f)


class MetricValue:
    """A nonnegative distance carried as its exact square.

    Supports ordering against other MetricValues and against nonnegative
    rationals; only the square lives in the coordinate field (the distance
    itself may involve a fourth root on 2-step entries).
    """

    __slots__ = ("sq",)

    def __init__(self, sq: ExactReal):
        self.sq = sq

    @staticmethod
    def _other_sq(other):
        if isinstance(other, MetricValue):
            return other.sq
        if isinstance(other, (int, Fraction)):
            if other < 0:
                return None  # every distance exceeds a negative number
            return ExactReal(Fraction(other) ** 2)
        if isinstance(other, ExactReal):
            if other.sign() < 0:
                return None
            return other * other
        return NotImplemented

    def __eq__(self, other):
        osq = self._other_sq(other)
        if osq is NotImplemented:
            return NotImplemented
        return osq is not None and self.sq == osq

    def __lt__(self, other):
        osq = self._other_sq(other)
        return False if osq is None else self.sq < osq

    def __le__(self, other):
        osq = self._other_sq(other)
        return False if osq is None else self.sq <= osq

    def __gt__(self, other):
        return not self.__le__(other)

    def __ge__(self, other):
        return not self.__lt__(other)

    def is_zero(self) -> bool:
        return self.sq.is_zero()

    def __float__(self):
        return math.sqrt(float(self.sq))

    def __repr__(self):
        return f"MetricValue(sqrt of {self.sq})"


# -- catalog entries -------------------------------------------------------------


@dataclass(frozen=True)
class TorusEntry:
    """T^D = R^D / Z^D with the (abelian) degree-d filtration."""

    D: int
    degree: int = 1

    def __post_init__(self):
        if self.D < 1 or self.degree < 1:
            raise ValueError("torus needs D >= 1 and degree >= 1")

    @property
    def dim(self) -> int:
        return self.D

    @property
    def step(self) -> int:
        return 1

    def subgroup_dims(self) -> tuple:
        return (self.D,) * (self.degree + 1) + (0,)

    def codim(self, i: int) -> int:
        return 0 if i <= self.degree else self.D

    def abelian_dim(self) -> int:
        return self.D

    def abelian_indices(self) -> tuple:
        return tuple(range(self.D))

    def mul(self, a: tuple, b: tuple) -> tuple:
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a: tuple) -> tuple:
        return tuple(-x for x in a)

    def power(self, a: tuple, n: int) -> tuple:
        return tuple(x * n for x in a)

    def identity(self) -> tuple:
        return (ExactReal(0),) * self.D

    def reduce(self, a: tuple) -> tuple[tuple, tuple]:
        floors = tuple(x.floor() for x in a)
        return tuple(x - f for x, f in zip(a, floors)), tuple(-f for f in floors)

    def metric(self, a: tuple, b: tuple) -> MetricValue:
        best = ExactReal(0)
        for x, y in zip(a, b):
            d = (x - y).circle_norm()
            if d > best:
                best = d
        return MetricValue(best * best)

    def metric_np(self, pts: np.ndarray, z) -> np.ndarray:
        return _circle_np(pts - np.asarray(z)).max(axis=1)

    def ball_volume(self) -> tuple[Fraction, int]:
        """Vol(radius s ball) = coef * s^power; here (2s)^D."""
        return Fraction(2**self.D), self.D


@dataclass(frozen=True)
class HeisenbergEntry:
    """The Heisenberg 3-manifold: 2-step, dimension 3, filtration dims 3,3,1,0."""

    @property
    def dim(self) -> int:
        return 3

    @property
    def degree(self) -> int:
        return 2

    @property
    def step(self) -> int:
        return 2

    def subgroup_dims(self) -> tuple:
        return (3, 3, 1, 0)

    def codim(self, i: int) -> int:
        return {0: 0, 1: 0, 2: 2}.get(i, 3)

    def abelian_dim(self) -> int:
        return 2

    def abelian_indices(self) -> tuple:
        return (0, 1)

    def mul(self, a: tuple, b: tuple) -> tuple:
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1])

    def inv(self, a: tuple) -> tuple:
        return (-a[0], -a[1], -a[2] + a[0] * a[1])

    def power(self, a: tuple, n: int) -> tuple:
        return (a[0] * n, a[1] * n, a[2] * n + a[0] * a[1] * _binom_int(n, 2))

    def identity(self) -> tuple:
        return (ExactReal(0),) * 3

    def reduce(self, a: tuple) -> tuple[tuple, tuple]:
        # right-multiply by integer generators: fix x, then y (which feeds
        # the central coordinate through the group law), then z
        x, y, z = a
        k = -x.floor()
        l = -y.floor()
        x1 = x + k
        z1 = z + x1 * l
        m = -z1.floor()
        gamma = (k, l, k * l + m)  # (k,0,0)(0,l,0)(0,0,m) combined
        return (x1, y + l, z1 + m), gamma

    def _norm_sq(self, v: tuple) -> ExactReal:
        # N(v)^2 = max(v1^2, v2^2, |v3|, |v3 - v1*v2|); the last term is the
        # central coordinate of v^-1, which makes N symmetric under inversion.
        best = v[0] * v[0]
        t = v[1] * v[1]
        if t > best:
            best = t
        t = abs(v[2])
        if t > best:
            best = t
        t = abs(v[2] - v[0] * v[1])
        if t > best:
            best = t
        return best

    def metric(self, a: tuple, b: tuple) -> MetricValue:
        """Exact lattice-minimised homogeneous distance.

        For reduced inputs the identity candidate already gives N^2 < 4, so
        only |gamma1|, |gamma2| <= 3 can compete; for each such pair the map
        gamma3 -> max(|v3|, |v3 - v1*v2|) is convex piecewise linear, so the
        two integers bracketing its real minimiser suffice.
        """
        binv = self.inv(b)
        best = None
        for g1 in range(-3, 4):
            for g2 in range(-3, 4):
                ga = (ExactReal(g1), ExactReal(g2), ExactReal(0))
                base = self.mul(self.mul(a, ga), binv)
                v1, v2, c = base
                lead = v1 * v1
                t = v2 * v2
                if t > lead:
                    lead = t
                if best is not None and lead >= best:
                    continue
                # minimise over gamma3: v3 = c + gamma3
                vertex = (v1 * v2 * Fraction(1, 2)) - c
                f = vertex.floor()
                for g3 in (f - 1, f, f + 1, f + 2):
                    nsq = self._norm_sq((v1, v2, c + g3))
                    if best is None or nsq < best:
                        best = nsq
        return MetricValue(best)

    def metric_np(self, pts: np.ndarray, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        best = None
        for g1 in (-1, 0, 1):
            for g2 in (-1, 0, 1):
                v1 = pts[:, 0] + g1 - z[0]
                v2 = pts[:, 1] + g2 - z[1]
                c = pts[:, 2] + pts[:, 0] * g2 - z[2] + z[0] * z[1] - pts[:, 0] * z[1] - g1 * z[1]
                p = v1 * v2
                lead = np.maximum(v1 * v1, v2 * v2)
                g3 = np.round(p / 2 - c)
                d = None
                for off in (-1.0, 0.0, 1.0):
                    v3 = c + g3 + off
                    nsq = np.maximum(lead, np.maximum(np.abs(v3), np.abs(v3 - p)))
                    d = nsq if d is None else np.minimum(d, nsq)
                best = d if best is None else np.minimum(best, d)
        return np.sqrt(best)

    def ball_volume(self) -> tuple[Fraction, int]:
        """Vol(radius s ball) = 7*s^4: box sides 2s in x, y; central width
        2s^2 - |v1*v2| integrated over the box."""
        return Fraction(7), 4


@dataclass(frozen=True)
class ProductEntry:
    """Direct product of two catalog entries; metric is the max of the factors'."""

    left: object
    right: object

    @property
    def dim(self) -> int:
        return self.left.dim + self.right.dim

    @property
    def degree(self) -> int:
        return max(self.left.degree, self.right.degree)

    @property
    def step(self) -> int:
        return max(self.left.step, self.right.step)

    def subgroup_dims(self) -> tuple:
        d = self.degree
        out = []
        for i in range(d + 2):
            ld = self.left.subgroup_dims()
            rd = self.right.subgroup_dims()
            out.append(
                (ld[i] if i < len(ld) else 0) + (rd[i] if i < len(rd) else 0)
            )
        return tuple(out)

    def abelian_dim(self) -> int:
        return self.left.abelian_dim() + self.right.abelian_dim()

    def abelian_indices(self) -> tuple:
        off = self.left.dim
        return self.left.abelian_indices() + tuple(
            off + i for i in self.right.abelian_indices()
        )

    def _split(self, a: tuple):
        return a[: self.left.dim], a[self.left.dim :]

    def mul(self, a: tuple, b: tuple) -> tuple:
        a1, a2 = self._split(a)
        b1, b2 = self._split(b)
        return self.left.mul(a1, b1) + self.right.mul(a2, b2)

    def inv(self, a: tuple) -> tuple:
        a1, a2 = self._split(a)
        return self.left.inv(a1) + self.right.inv(a2)

    def power(self, a: tuple, n: int) -> tuple:
        a1, a2 = self._split(a)
        return self.left.power(a1, n) + self.right.power(a2, n)

    def identity(self) -> tuple:
        return self.left.identity() + self.right.identity()

    def reduce(self, a: tuple) -> tuple[tuple, tuple]:
        a1, a2 = self._split(a)
        r1, g1 = self.left.reduce(a1)
        r2, g2 = self.right.reduce(a2)
        return r1 + r2, g1 + g2

    def metric(self, a: tuple, b: tuple) -> MetricValue:
        a1, a2 = self._split(a)
        b1, b2 = self._split(b)
        d1 = self.left.metric(a1, b1)
        d2 = self.right.metric(a2, b2)
        return d1 if d1 > d2 else d2

    def metric_np(self, pts: np.ndarray, z) -> np.ndarray:
        k = self.left.dim
        return np.maximum(
            self.left.metric_np(pts[:, :k], z[:k]),
            self.right.metric_np(pts[:, k:], z[k:]),
        )

    def ball_volume(self) -> tuple[Fraction, int]:
        cl, pl = self.left.ball_volume()
        cr, pr = self.right.ball_volume()
        return cl * cr, pl + pr


# -- elements, points, sequences ---------------------------------------------------


@dataclass(frozen=True)
class GroupElement:
    entry: object
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.entry.dim:
            raise ValueError("coordinate count does not match entry dimension")
        object.__setattr__(self, "coords", tuple(_coerce(c) for c in self.coords))


@dataclass(frozen=True)
class NilPoint:
    entry: object
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_coerce(c) for c in self.coords))
        for c in self.coords:
            if c.sign() < 0 or (c - 1).sign() >= 0:
                raise ValueError("point coordinates must lie in [0,1)")


def _same_entry(a, b):
    if a.entry != b.entry:
        raise EntryMismatch(f"{a.entry} vs {b.entry}")


def group_mul(a: GroupElement, b: GroupElement) -> GroupElement:
    _same_entry(a, b)
    return GroupElement(a.entry, a.entry.mul(a.coords, b.coords))


def group_inv(a: GroupElement) -> GroupElement:
    return GroupElement(a.entry, a.entry.inv(a.coords))


def group_pow_binomial(a: GroupElement, n: int) -> GroupElement:
    """a^n by the closed-form binomial formula (valid for negative n too)."""
    return GroupElement(a.entry, a.entry.power(a.coords, n))


def identity(entry) -> GroupElement:
    return GroupElement(entry, entry.identity())


def reduce_element(g: GroupElement) -> tuple[NilPoint, tuple]:
    """Right-multiply by a lattice element into [0,1)^D; returns (point, lattice)."""
    coords, gamma = g.entry.reduce(g.coords)
    return NilPoint(g.entry, coords), gamma


@dataclass(frozen=True)
class PolySequence:
    """g(n) = gs[0] * gs[1]^n * ... * gs[d]^binom(n,d) with gs[i] in G_i."""

    entry: object
    gs: tuple

    def __post_init__(self):
        gs = tuple(
            g if isinstance(g, GroupElement) else GroupElement(self.entry, g)
            for g in self.gs
        )
        object.__setattr__(self, "gs", gs)
        if len(gs) > self.entry.degree + 1:
            raise ValueError("more coefficients than the filtration degree allows")
        for i, g in enumerate(gs):
            _same_entry(self, g)
            for j in range(self.entry.codim(i)):
                if not g.coords[j].is_zero():
                    raise CentralComponentNonzero(
                        f"coefficient {i} must lie in filtration subgroup G_{i}"
                    )

    @property
    def degree(self) -> int:
        return len(self.gs) - 1

    def at(self, n: int) -> GroupElement:
        out = identity(self.entry)
        for i, g in enumerate(self.gs):
            out = group_mul(out, group_pow_binomial(g, _binom_int(n, i)))
        return out

    def point(self, n: int) -> NilPoint:
        return reduce_element(self.at(n))[0]


def orbit(g: PolySequence, N: int, a: int = 1, b: int = 0) -> list:
    """Points g(a*n+b)Gamma for n = 0..N-1 (defaults to g(n)Gamma)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return [g.point(a * n + b) for n in range(N)]


def product_sequence(g1: PolySequence, g2: PolySequence) -> PolySequence:
    entry = ProductEntry(g1.entry, g2.entry)
    d = max(g1.degree, g2.degree)
    gs = []
    for i in range(d + 1):
        c1 = g1.gs[i].coords if i <= g1.degree else g1.entry.identity()
        c2 = g2.gs[i].coords if i <= g2.degree else g2.entry.identity()
        gs.append(GroupElement(entry, c1 + c2))
    return PolySequence(entry, tuple(gs))


# -- horizontal characters ------------------------------------------------------


@dataclass(frozen=True)
class HorizontalCharacter:
    """Integer vector on the abelianised coordinates; annihilates the lattice."""

    entry: object
    k: tuple

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(c) for c in self.k))
        if len(self.k) != self.entry.abelian_dim():
            raise ValueError("character length must match the abelianised dimension")

    @property
    def norm(self) -> int:
        return max(abs(c) for c in self.k) if self.k else 0


def char_compose(eta: HorizontalCharacter, g: PolySequence) -> RealPolynomial:
    """eta o g as a real polynomial in the binomial basis.

    The abelianisation of a product is the coordinate sum, so the degree-i
    binomial coefficient is just eta applied to the abelian part of gs[i].
    """
    if eta.entry != g.entry:
        raise EntryMismatch(f"{eta.entry} vs {g.entry}")
    ab = g.entry.abelian_indices()
    coeffs = []
    for ge in g.gs:
        acc = ExactReal(0)
        for kj, idx in zip(eta.k, ab):
            if kj:
                acc = acc + ge.coords[idx] * kj
        coeffs.append(acc)
    return RealPolynomial(binomial=coeffs)


def metric(x: NilPoint, y: NilPoint) -> MetricValue:
    """Substitute metric on the catalog entry shared by x and y.

    The returned MetricValue compares exactly (via its squared value) against
    rationals and other distances; float() gives the numeric distance.
    """
    _same_entry(x, y)
    return x.entry.metric(x.coords, y.coords)


# -- piecewise polynomial maps and representation checks ---------------------------


@dataclass(frozen=True)
class PiecewisePoly:
    """Finitely many disjoint half-open boxes, a polynomial on each, a default value.

    A polynomial is a mapping from exponent tuples to coefficients, e.g.
    {(0, 1): c} for c*x2 on a 2-dimensional entry; a bare constant is allowed.
    """

    dim: int
    pieces: tuple  # of (box, poly); box = ((lo, hi), ...) per coordinate
    default: ExactReal = ExactReal(0)

    def __post_init__(self):
        norm_pieces = []
        for box, poly in self.pieces:
            box = tuple((_coerce(lo), _coerce(hi)) for lo, hi in box)
            if len(box) != self.dim:
                raise ValueError("box dimension mismatch")
            if not isinstance(poly, dict):
                poly = {(0,) * self.dim: _coerce(poly)}
            else:
                poly = {tuple(e): _coerce(c) for e, c in poly.items()}
            norm_pieces.append((box, poly))
        object.__setattr__(self, "pieces", tuple(norm_pieces))
        object.__setattr__(self, "default", _coerce(self.default))
        for i in range(len(self.pieces)):
            for j in range(i + 1, len(self.pieces)):
                if _boxes_overlap(self.pieces[i][0], self.pieces[j][0]):
                    raise ValueError(f"pieces {i} and {j} overlap")

    def __call__(self, x: NilPoint) -> ExactReal:
        return piecewise_eval(self, x)


def _boxes_overlap(a: tuple, b: tuple) -> bool:
    for (alo, ahi), (blo, bhi) in zip(a, b):
        if not ((alo - bhi).sign() < 0 and (blo - ahi).sign() < 0):
            return False
    return True


def piecewise_eval(F: PiecewisePoly, x: NilPoint) -> ExactReal:
    if len(x.coords) != F.dim:
        raise EntryMismatch("point dimension does not match the map")
    for box, poly in F.pieces:
        inside = True
        for c, (lo, hi) in zip(x.coords, box):
            if (c - lo).sign() < 0 or (c - hi).sign() >= 0:
                inside = False
                break
        if inside:
            total = ExactReal(0)
            for exps, coeff in poly.items():
                term = coeff
                for c, e in zip(x.coords, exps):
                    term = term * c**e
                total = total + term
            return total
    return F.default


@dataclass(frozen=True)
class RepresentationReport:
    matches: bool
    checked: int
    first_mismatch: tuple | None  # (n, sequence value, map value)


def representation_check(f, g: PolySequence, F: PiecewisePoly, N: int) -> RepresentationReport:
    """Compare f(n) against F(g(n)Gamma) for n = 1..N, exactly."""
    for n in range(1, N + 1):
        want = f.eval(n)
        got = piecewise_eval(F, g.point(n))
        want_er = want if isinstance(want, ExactReal) else ExactReal(Fraction(want))
        if want_er != got:
            return RepresentationReport(False, n, (n, want_er, got))
    return RepresentationReport(True, N, None)


def sturmian_representation(alpha: ExactReal, beta: ExactReal):
    """Torus data (g, F) with F(g(n)Gamma) equal to the two-letter coding
    floor(alpha*(n+1)+beta) - floor(alpha*n+beta)."""
    entry = TorusEntry(1)
    g = PolySequence(entry, (GroupElement(entry, (beta,)), GroupElement(entry, (alpha,))))
    F = PiecewisePoly(1, ((((ExactReal(1) - alpha, ExactReal(1)),), ExactReal(1)),))
    return g, F
