"""Piecewise-affine convex envelopes on the segment from 1 to i.

A line (a, b) is the function t -> a + (b - a)*t on [0, 1], i.e. the linear
form a*x + b*y restricted to x + y = 1, x, y >= 0.  An envelope is the
pointwise max of finitely many lines, kept in canonical form: exactly the
lines that attain the max on a subinterval of positive length, sorted by
slope.  BOTTOM is the constant -infinity.

For d = 1 the support function of a symmetric polygon restricted to this
segment gives an isomorphism of semirings: hull-union becomes pointwise max
and Minkowski sum becomes pointwise +.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import OutOfDomain, WrongField
from .polygeom import EMPTY, ZERO, SymPolygon
from .quadfield import PlanePoint, field

Line = tuple[Fraction, Fraction]

NEG_INF = float("-inf")


def _canonical(lines) -> tuple[Line, ...]:
    """Keep the lines attaining the upper envelope on positive length."""
    uniq = sorted(set(lines))
    kept = []
    for a, b in uniq:
        lo, hi = Fraction(0), Fraction(1)
        dead = False
        for c, g in uniq:
            if (c, g) == (a, b):
                continue
            da = a - c
            s = (b - g) - da
            if s > 0:
                lo = max(lo, Fraction(-da, s))
            elif s < 0:
                hi = min(hi, Fraction(-da, s))
            elif da < 0:
                dead = True
                break
        if not dead and lo < hi:
            kept.append((a, b))
    kept.sort(key=lambda ln: (ln[1] - ln[0], ln[0]))
    return tuple(kept)


@dataclass(frozen=True)
class Envelope:
    lines: tuple[Line, ...] | None  # None encodes BOTTOM

    @staticmethod
    def bottom() -> Envelope:
        return Envelope(None)

    @staticmethod
    def of(lines) -> Envelope:
        ls = tuple((Fraction(a), Fraction(b)) for a, b in lines)
        if not ls:
            return Envelope(None)
        return Envelope(_canonical(ls))

    @staticmethod
    def zero() -> Envelope:
        return Envelope(((Fraction(0), Fraction(0)),))

    def is_bottom(self) -> bool:
        return self.lines is None

    def __repr__(self):
        if self.lines is None:
            return "Envelope(bottom)"
        return "Envelope(" + ", ".join(f"({a},{b})" for a, b in self.lines) + ")"


def tmax(f: Envelope, g: Envelope) -> Envelope:
    if f.lines is None:
        return g
    if g.lines is None:
        return f
    return Envelope(_canonical(f.lines + g.lines))


def tplus(f: Envelope, g: Envelope) -> Envelope:
    if f.lines is None or g.lines is None:
        return Envelope(None)
    sums = {(a + c, b + d) for a, b in f.lines for c, d in g.lines}
    return Envelope(_canonical(sums))


def eval_at(f: Envelope, t: Fraction):
    """Value at t in [0, 1]; -inf for BOTTOM."""
    t = Fraction(t)
    if t < 0 or t > 1:
        raise OutOfDomain(f"t = {t} outside [0, 1]")
    if f.lines is None:
        return NEG_INF
    return max(a + (b - a) * t for a, b in f.lines)


def leq(f: Envelope, g: Envelope) -> bool:
    """Pointwise f <= g, decided via the canonical form of the max."""
    return tmax(f, g) == g


def phi(p: SymPolygon) -> Envelope:
    if p.field.d != 1:
        raise WrongField("the functional dual is built for d=1")
    if p.tag == EMPTY:
        return Envelope(None)
    if p.tag == ZERO:
        return Envelope.zero()
    return Envelope(_canonical([(v.x, v.y) for v in p.orbit_points()]))


def phi_inv(f: Envelope) -> SymPolygon:
    f1 = field(1)
    if f.lines is None:
        return SymPolygon.empty(f1)
    if f.lines == ((Fraction(0), Fraction(0)),):
        return SymPolygon.zero(f1)
    return SymPolygon.from_points(f1, [PlanePoint(a, b) for a, b in f.lines])
