"""Exact arithmetic in the nine imaginary quadratic rings of class number 1.

Elements are written a + b*omega where omega = i*sqrt(d) for d = 1, 2 and
omega = (1 + i*sqrt(d))/2 for the seven d = 3 mod 4 values.  Plane points
(x, y) stand for the complex number x + y*sqrt(d)*i, so every sign predicate
below is exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import BothZero, DivByZero, FieldMismatch, ZeroInput

HEEGNER_DS = (1, 2, 3, 7, 11, 19, 43, 67, 163)


@dataclass(frozen=True)
class Field:
    d: int

    def __post_init__(self):
        if self.d not in HEEGNER_DS:
            raise ValueError(f"d must be one of {HEEGNER_DS}, got {self.d}")

    @property
    def case(self) -> int:
        # 1: omega = i*sqrt(d); 2: omega = (1+i*sqrt(d))/2
        return 1 if self.d % 4 in (1, 2) else 2

    @property
    def m(self) -> int:
        # omega^2 = omega - m in case 2
        return (1 + self.d) // 4

    @property
    def trace_omega(self) -> int:
        return 0 if self.case == 1 else 1

    @property
    def norm_omega(self) -> int:
        return self.d if self.case == 1 else self.m

    @property
    def discriminant(self) -> int:
        return -4 * self.d if self.case == 1 else -self.d

    @property
    def sigma(self) -> int:
        if self.d == 1:
            return 4
        if self.d == 3:
            return 6
        return 2

    @cached_property
    def units(self) -> tuple[QuadInt, ...]:
        one = QuadInt(self, 1, 0)
        if self.d == 1:
            i = QuadInt(self, 0, 1)
            return (one, i, -one, -i)
        if self.d == 3:
            w = QuadInt(self, 0, 1)
            return (one, w, w - one, -one, -w, one - w)
        return (one, -one)

    @cached_property
    def omega(self) -> QuadInt:
        return QuadInt(self, 0, 1)

    @cached_property
    def one(self) -> QuadInt:
        return QuadInt(self, 1, 0)

    @cached_property
    def zero(self) -> QuadInt:
        return QuadInt(self, 0, 0)

    def __repr__(self):
        return f"Field(d={self.d})"


_FIELDS: dict[int, Field] = {}


def field(d: int) -> Field:
    f = _FIELDS.get(d)
    if f is None:
        f = Field(d)
        _FIELDS[d] = f
    return f


def _check_same(x, y):
    if x.field.d != y.field.d:
        raise FieldMismatch(f"d={x.field.d} vs d={y.field.d}")


@dataclass(frozen=True)
class QuadInt:
    field: Field
    a: int
    b: int

    def __add__(self, other: QuadInt) -> QuadInt:
        _check_same(self, other)
        return QuadInt(self.field, self.a + other.a, self.b + other.b)

    def __sub__(self, other: QuadInt) -> QuadInt:
        _check_same(self, other)
        return QuadInt(self.field, self.a - other.a, self.b - other.b)

    def __neg__(self) -> QuadInt:
        return QuadInt(self.field, -self.a, -self.b)

    def __mul__(self, other) -> QuadInt:
        if isinstance(other, int):
            return QuadInt(self.field, self.a * other, self.b * other)
        _check_same(self, other)
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        if self.field.case == 1:
            return QuadInt(self.field, a1 * a2 - self.field.d * b1 * b2, a1 * b2 + a2 * b1)
        m = self.field.m
        return QuadInt(self.field, a1 * a2 - m * b1 * b2, a1 * b2 + a2 * b1 + b1 * b2)

    __rmul__ = __mul__

    def norm(self) -> int:
        if self.field.case == 1:
            return self.a * self.a + self.field.d * self.b * self.b
        return self.a * self.a + self.a * self.b + self.field.m * self.b * self.b

    def trace(self) -> int:
        return 2 * self.a if self.field.case == 1 else 2 * self.a + self.b

    def conj(self) -> QuadInt:
        if self.field.case == 1:
            return QuadInt(self.field, self.a, -self.b)
        return QuadInt(self.field, self.a + self.b, -self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def plane(self) -> PlanePoint:
        # affix as (x, y) with value x + y*sqrt(d)*i
        if self.field.case == 1:
            return PlanePoint(Fraction(self.a), Fraction(self.b))
        return PlanePoint(Fraction(2 * self.a + self.b, 2), Fraction(self.b, 2))

    def in_sector(self) -> bool:
        # argument in [0, 2*pi/sigma); exact, see canonical_unit_rep
        if self.field.sigma == 2:
            return self.b > 0 or (self.b == 0 and self.a > 0)
        return self.a > 0 and self.b >= 0

    def __repr__(self):
        return f"QuadInt(d={self.field.d}, {self.a}, {self.b})"


def canonical_unit_rep(x: QuadInt) -> QuadInt:
    if x.is_zero():
        raise ZeroInput("canonical_unit_rep(0)")
    for u in x.field.units:
        y = u * x
        if y.in_sector():
            return y
    raise AssertionError("no unit image in sector")  # unreachable


def _rep_with_unit(x: QuadInt) -> tuple[QuadInt, QuadInt]:
    for u in x.field.units:
        y = u * x
        if y.in_sector():
            return y, u
    raise AssertionError


@dataclass(frozen=True)
class QuadRat:
    """num/den in lowest terms, den > 0."""

    num: QuadInt
    den: int

    @staticmethod
    def make(num: QuadInt, den: int) -> QuadRat:
        if den == 0:
            raise DivByZero("QuadRat with zero denominator")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num.a, num.b, den)
        if g > 1:
            num = QuadInt(num.field, num.a // g, num.b // g)
            den //= g
        return QuadRat(num, den)

    @staticmethod
    def from_int(f: Field, n: int) -> QuadRat:
        return QuadRat(QuadInt(f, n, 0), 1)

    @property
    def field(self) -> Field:
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_integral(self) -> bool:
        return self.den == 1

    def __add__(self, other: QuadRat) -> QuadRat:
        _check_same(self, other)
        return QuadRat.make(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: QuadRat) -> QuadRat:
        return self + (-other)

    def __neg__(self) -> QuadRat:
        return QuadRat(-self.num, self.den)

    def __mul__(self, other) -> QuadRat:
        if isinstance(other, QuadInt):
            other = QuadRat(other, 1)
        elif isinstance(other, int):
            return QuadRat.make(self.num * other, self.den)
        _check_same(self, other)
        return QuadRat.make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> QuadRat:
        if isinstance(other, int):
            other = QuadRat.from_int(self.field, other)
        elif isinstance(other, QuadInt):
            other = QuadRat(other, 1)
        if other.is_zero():
            raise DivByZero("division by zero")
        # 1/(n/d) = d*conj(n)/norm(n)
        return QuadRat.make(self.num * other.num.conj() * other.den, self.den * other.num.norm())

    def inverse(self) -> QuadRat:
        return QuadRat.from_int(self.field, 1) / self

    def norm(self) -> Fraction:
        return Fraction(self.num.norm(), self.den * self.den)

    def trace(self) -> Fraction:
        return Fraction(self.num.trace(), self.den)

    def plane(self) -> PlanePoint:
        p = self.num.plane()
        return PlanePoint(p.x / self.den, p.y / self.den)

    def pow(self, k: int) -> QuadRat:
        if k < 0:
            return self.inverse().pow(-k)
        out = QuadRat.from_int(self.field, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self):
        return f"QuadRat(({self.num.a},{self.num.b})/{self.den})"


def div_exact(x: QuadInt, y: QuadInt) -> QuadRat:
    if y.is_zero():
        raise DivByZero("div_exact by zero")
    return QuadRat.make(x * y.conj(), y.norm())


def divides(y: QuadInt, x: QuadInt) -> bool:
    if y.is_zero():
        return x.is_zero()
    return div_exact(x, y).is_integral()


@dataclass(frozen=True)
class PlanePoint:
    x: Fraction
    y: Fraction

    def __add__(self, other: PlanePoint) -> PlanePoint:
        return PlanePoint(self.x + other.x, self.y + other.y)

    def __neg__(self) -> PlanePoint:
        return PlanePoint(-self.x, -self.y)

    def cmul(self, other: PlanePoint, d: int) -> PlanePoint:
        # (x1 + y1*sqrt(d)i)(x2 + y2*sqrt(d)i)
        return PlanePoint(
            self.x * other.x - d * self.y * other.y,
            self.x * other.y + self.y * other.x,
        )

    def abs2(self, d: int) -> Fraction:
        return self.x * self.x + d * self.y * self.y

    def is_origin(self) -> bool:
        return self.x == 0 and self.y == 0


def plane_to_quadrat(f: Field, p: PlanePoint) -> QuadRat:
    # invert the embedding: case 1 gives (a, b) = (x, y); case 2 gives b = 2y, a = x - y
    if f.case == 1:
        ax, bx = p.x, p.y
    else:
        ax, bx = p.x - p.y, 2 * p.y
    den = math.lcm(ax.denominator, bx.denominator)
    return QuadRat.make(QuadInt(f, int(ax * den), int(bx * den)), den)


def quadrat_in_ring(f: Field, p: PlanePoint) -> QuadInt | None:
    q = plane_to_quadrat(f, p)
    return q.num if q.den == 1 else None


def _norm_vec(f: Field, v: tuple[int, int]) -> int:
    return QuadInt(f, v[0], v[1]).norm()


def _bilinear(f: Field, u, v) -> Fraction:
    s = (u[0] + v[0], u[1] + v[1])
    return Fraction(_norm_vec(f, s) - _norm_vec(f, u) - _norm_vec(f, v), 2)


def _round_frac(q: Fraction) -> int:
    return math.floor(q + Fraction(1, 2))


def gcd(x: QuadInt, y: QuadInt) -> tuple[QuadInt, QuadInt, QuadInt]:
    """Generator of the ideal (x, y), unit-canonical, with Bezout cofactors.

    Returns (g, s, t) with g = s*x + t*y.  The ideal is viewed as the rank-2
    lattice spanned by x, omega*x, y, omega*y and reduced by Lagrange-Gauss
    under the norm form; class number 1 makes the shortest vector a generator.
    """
    _check_same(x, y)
    f = x.field
    if x.is_zero() and y.is_zero():
        raise BothZero("gcd(0, 0)")
    if y.is_zero():
        g, u = _rep_with_unit(x)
        return g, u, f.zero
    if x.is_zero():
        g, u = _rep_with_unit(y)
        return g, f.zero, u

    w = f.omega
    # rows: lattice vectors in omega-coordinates; coeffs: (s, t) with row = s*x + t*y
    rows = [(x.a, x.b), ((w * x).a, (w * x).b), (y.a, y.b), ((w * y).a, (w * y).b)]
    coeffs = [(f.one, f.zero), (w, f.zero), (f.zero, f.one), (f.zero, w)]

    # integer row reduction to two independent rows (Hermite-style on column 1 then 2)
    def reduce_column(idx, col):
        nonlocal rows, coeffs
        while True:
            live = [i for i in range(len(rows)) if i >= idx and rows[i][col] != 0]
            if len(live) <= 1:
                return live[0] if live else None
            live.sort(key=lambda i: abs(rows[i][col]))
            p = live[0]
            for i in live[1:]:
                q = rows[i][col] // rows[p][col]
                rows[i] = (rows[i][0] - q * rows[p][0], rows[i][1] - q * rows[p][1])
                coeffs[i] = (coeffs[i][0] - q * coeffs[p][0], coeffs[i][1] - q * coeffs[p][1])

    piv0 = reduce_column(0, 0)
    if piv0 is not None and piv0 != 0:
        rows[0], rows[piv0] = rows[piv0], rows[0]
        coeffs[0], coeffs[piv0] = coeffs[piv0], coeffs[0]
    start = 0 if piv0 is None else 1
    piv1 = reduce_column(start, 1)
    if piv1 is not None and piv1 != start:
        rows[start], rows[piv1] = rows[piv1], rows[start]
        coeffs[start], coeffs[piv1] = coeffs[piv1], coeffs[start]
    basis = [(rows[i], coeffs[i]) for i in range(len(rows)) if rows[i] != (0, 0)][:2]
    assert len(basis) == 2, "ideal lattice must have rank 2"

    (u, cu), (v, cv) = basis
    # Lagrange-Gauss under the norm form (the inner product may be half-integral)
    if _norm_vec(f, u) > _norm_vec(f, v):
        u, v, cu, cv = v, u, cv, cu
    while True:
        mu = _round_frac(_bilinear(f, u, v) / _norm_vec(f, u))
        v = (v[0] - mu * u[0], v[1] - mu * u[1])
        cv = (cv[0] - mu * cu[0], cv[1] - mu * cu[1])
        if _norm_vec(f, v) >= _norm_vec(f, u):
            break
        u, v, cu, cv = v, u, cv, cu

    g = QuadInt(f, u[0], u[1])
    g, uc = _rep_with_unit(g)
    s, t = uc * cu[0], uc * cu[1]
    assert s * x + t * y == g
    assert divides(g, x) and divides(g, y)
    return g, s, t
