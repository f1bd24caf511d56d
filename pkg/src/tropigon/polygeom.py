"""Idempotent semiring of unit-symmetric convex polygons.

A value is EMPTY, ZERO, or a proper polygon stored by its canonical sector
vertices (one representative per unit orbit, argument in [0, 2*pi/sigma),
sorted by increasing argument).  Hull and containment predicates run on
integer coordinates over a common denominator, so everything is exact.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import FieldMismatch, NotLattice, NotProper, WrongField, ZeroInput
from .quadfield import Field, PlanePoint, QuadInt, QuadRat, gcd, quadrat_in_ring

EMPTY = "empty"
ZERO = "zero"
PROPER = "proper"


def _hull(points):
    # Andrew monotone chain, CCW, strict turns only; may return < 3 points
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def build(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                ox, oy = out[-2]
                ax, ay = out[-1]
                if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = build(pts)
    upper = build(reversed(pts))
    return lower[:-1] + upper[:-1]


def _orbit_expand(f: Field, pts, scale):
    # closes an integer point set under the unit action; d = 3 doubles the grid
    if f.sigma == 2:
        out = set()
        for x, y in pts:
            out.add((x, y))
            out.add((-x, -y))
        return out, scale
    if f.sigma == 4:
        out = set()
        for x, y in pts:
            out.update(((x, y), (-y, x), (-x, -y), (y, -x)))
        return out, scale
    out = set()
    for x, y in pts:
        images = ((2 * x, 2 * y), (x - 3 * y, x + y), (-x - 3 * y, x - y))
        for ix, iy in images:
            out.add((ix, iy))
            out.add((-ix, -iy))
    return out, 2 * scale


def _in_sector_grid(f: Field, x: int, y: int) -> bool:
    if f.sigma == 4:
        return x > 0 and y >= 0
    if f.sigma == 6:
        return x > 0 and 0 <= y < x
    return y > 0 or (y == 0 and x > 0)


def _arg_sort(points):
    # all arguments lie in a half-open half-plane, so one cross product orders them
    import functools

    def cmp(p, q):
        c = p[0] * q[1] - p[1] * q[0]
        return -1 if c > 0 else (1 if c < 0 else 0)

    return sorted(points, key=functools.cmp_to_key(cmp))


@dataclass(frozen=True)
class SymPolygon:
    field: Field
    tag: str
    sector: tuple[PlanePoint, ...]

    @staticmethod
    def empty(f: Field) -> SymPolygon:
        return SymPolygon(f, EMPTY, ())

    @staticmethod
    def zero(f: Field) -> SymPolygon:
        return SymPolygon(f, ZERO, ())

    @staticmethod
    def from_points(f: Field, points) -> SymPolygon:
        pts = [p for p in points]
        if not pts:
            return SymPolygon.empty(f)
        scale = 1
        for p in pts:
            scale = math.lcm(scale, p.x.denominator, p.y.denominator)
        grid = [(int(p.x * scale), int(p.y * scale)) for p in pts]
        orbit, scale = _orbit_expand(f, grid, scale)
        return SymPolygon._from_grid(f, orbit, scale)

    @staticmethod
    def _from_grid(f: Field, grid, scale: int) -> SymPolygon:
        hull = _hull(grid)
        if not hull or all(p == (0, 0) for p in hull):
            return SymPolygon.zero(f)
        if len(hull) < 3:
            raise NotProper("orbit hull has empty interior")
        sector = _arg_sort([p for p in hull if _in_sector_grid(f, p[0], p[1])])
        verts = tuple(PlanePoint(Fraction(x, scale), Fraction(y, scale)) for x, y in sector)
        return SymPolygon(f, PROPER, verts)

    @cached_property
    def _grid(self):
        # (scale, sector points, full orbit hull CCW) over one integer grid
        scale = 1
        for p in self.sector:
            scale = math.lcm(scale, p.x.denominator, p.y.denominator)
        sector = [(int(p.x * scale), int(p.y * scale)) for p in self.sector]
        orbit, scale2 = _orbit_expand(self.field, sector, scale)
        if scale2 != scale:
            sector = [(2 * x, 2 * y) for x, y in sector]
            scale = scale2
        return scale, sector, _hull(orbit)

    def orbit_points(self) -> list[PlanePoint]:
        scale, _, hull = self._grid
        return [PlanePoint(Fraction(x, scale), Fraction(y, scale)) for x, y in hull]

    def contains(self, p: PlanePoint) -> bool:
        if self.tag == EMPTY:
            return False
        if self.tag == ZERO:
            return p.is_origin()
        scale, _, hull = self._grid
        px, py = p.x * scale, p.y * scale
        n = len(hull)
        for i in range(n):
            ax, ay = hull[i]
            bx, by = hull[(i + 1) % n]
            if (bx - ax) * (py - ay) - (by - ay) * (px - ax) < 0:
                return False
        return True

    def contains_polygon(self, other: SymPolygon) -> bool:
        if other.tag == EMPTY:
            return True
        if other.tag == ZERO:
            return self.contains(PlanePoint(Fraction(0), Fraction(0)))
        return all(self.contains(p) for p in other.orbit_points())

    def max_abs2(self) -> Fraction:
        return max(p.abs2(self.field.d) for p in self.sector)

    def __repr__(self):
        if self.tag != PROPER:
            return f"SymPolygon(d={self.field.d}, {self.tag})"
        vs = ", ".join(f"({p.x},{p.y})" for p in self.sector)
        return f"SymPolygon(d={self.field.d}, [{vs}])"


_DK: dict[int, SymPolygon] = {}


def dk(f: Field) -> SymPolygon:
    got = _DK.get(f.d)
    if got is None:
        got = SymPolygon.from_points(f, [f.one.plane(), f.omega.plane()])
        _DK[f.d] = got
    return got


def _check_fields(a: SymPolygon, b: SymPolygon):
    if a.field.d != b.field.d:
        raise FieldMismatch(f"d={a.field.d} vs d={b.field.d}")


def hull_union(a: SymPolygon, b: SymPolygon) -> SymPolygon:
    _check_fields(a, b)
    if a.tag == EMPTY:
        return b
    if b.tag == EMPTY:
        return a
    if a.tag == ZERO:
        return b
    if b.tag == ZERO:
        return a
    return SymPolygon.from_points(a.field, list(a.sector) + list(b.sector))


def minkowski_sum(a: SymPolygon, b: SymPolygon) -> SymPolygon:
    _check_fields(a, b)
    if a.tag == EMPTY or b.tag == EMPTY:
        return SymPolygon.empty(a.field)
    if a.tag == ZERO:
        return b
    if b.tag == ZERO:
        return a
    sa, _, ha = a._grid
    sb, _, hb = b._grid
    s = math.lcm(sa, sb)
    ma, mb = s // sa, s // sb
    pts = {(x1 * ma + x2 * mb, y1 * ma + y2 * mb) for x1, y1 in ha for x2, y2 in hb}
    return SymPolygon._from_grid(a.field, pts, s)


def scale_act(mu: QuadRat, a: SymPolygon) -> SymPolygon:
    if mu.field.d != a.field.d:
        raise FieldMismatch(f"d={mu.field.d} vs d={a.field.d}")
    if a.tag == EMPTY:
        return a
    if mu.is_zero() or a.tag == ZERO:
        return SymPolygon.zero(a.field)
    mp = mu.plane()
    return SymPolygon.from_points(a.field, [p.cmul(mp, a.field.d) for p in a.sector])


def _scale_int(m: QuadInt, a: SymPolygon) -> SymPolygon:
    return scale_act(QuadRat(m, 1), a)


@dataclass(frozen=True)
class GeneratorDecomposition:
    summand_sets: tuple[tuple[QuadRat, ...], ...]

    def replay(self, f: Field) -> SymPolygon:
        base = dk(f)
        acc = SymPolygon.empty(f)
        for ms in self.summand_sets:
            term = SymPolygon.zero(f)
            for h in ms:
                term = minkowski_sum(term, scale_act(h, base))
            acc = hull_union(acc, term)
        return acc


def _enumerate_norm_le(f: Field, bound: int):
    if bound < 1:
        return
    if f.case == 1:
        bmax = math.isqrt(bound // f.d)
        for b in range(-bmax, bmax + 1):
            rest = bound - f.d * b * b
            amax = math.isqrt(rest)
            for a in range(-amax, amax + 1):
                if a or b:
                    yield QuadInt(f, a, b)
    else:
        bmax = math.isqrt(4 * bound // f.d)
        for b in range(-bmax, bmax + 1):
            t = math.isqrt(4 * bound - f.d * b * b)
            for a in range((-b - t + 1) // 2 - 1, (t - b) // 2 + 2):
                if (a or b) and QuadInt(f, a, b).norm() <= bound:
                    yield QuadInt(f, a, b)


def membership_in_generated(
    p: SymPolygon, gens: list[QuadRat] | None = None
) -> tuple[bool, GeneratorDecomposition | None]:
    """Decide p in Semiring({h*D_K : h in the ideal generated by gens}).

    gens defaults to [1] (the full ring).  On success the witness decomposition
    replays to p exactly: each multiset is one Minkowski sum, the list is
    joined by hull-union.
    """
    f = p.field
    if gens is None:
        gens = [QuadRat.from_int(f, 1)]
    for h in gens:
        if h.field.d != f.d:
            raise FieldMismatch(f"generator over d={h.field.d}, polygon over d={f.d}")
    if p.tag == EMPTY:
        return True, GeneratorDecomposition(())
    nonzero = [h for h in gens if not h.is_zero()]
    zero_rat = QuadRat.from_int(f, 0)
    if p.tag == ZERO:
        return True, GeneratorDecomposition(((zero_rat,),))
    if not nonzero:
        return False, None

    den = math.lcm(*[h.den for h in nonzero])
    g0 = nonzero[0].num * (den // nonzero[0].den)
    for h in nonzero[1:]:
        g0, _, _ = gcd(g0, h.num * (den // h.den))
    g = QuadRat.make(g0, den)

    scaled = scale_act(g.inverse(), p)
    sector_ints: list[QuadInt] = []
    for v in scaled.sector:
        q = quadrat_in_ring(f, v)
        if q is None:
            return False, None
        sector_ints.append(q)

    base = dk(f)
    covered = SymPolygon.empty(f)
    for s in sector_ints:
        covered = hull_union(covered, _scale_int(s, base))
    if covered == scaled:
        dec = GeneratorDecomposition(tuple((g * s,) for s in sector_ints))
        return True, dec
    if f.d in (1, 3):
        # with enough symmetries the sector decomposition is exact, so this
        # polygon is not in the semiring
        return False, None

    # breadth-first closure over Minkowski sums of admissible generators
    bound = math.ceil(scaled.max_abs2())
    cand: list[tuple[QuadInt, SymPolygon]] = []
    for m in _enumerate_norm_le(f, bound):
        if not m.in_sector():
            continue
        q = _scale_int(m, base)
        if scaled.contains_polygon(q):
            cand.append((m, q))

    def mkey(m: QuadInt):
        return (m.a, m.b)

    seen: dict[SymPolygon, tuple[QuadInt, ...]] = {}
    queue = deque()
    for m, q in cand:
        if q not in seen:
            seen[q] = (m,)
            queue.append(q)
    while queue:
        cur = queue.popleft()
        ms = seen[cur]
        for m, q in cand:
            nxt = minkowski_sum(cur, q)
            if nxt in seen or not scaled.contains_polygon(nxt):
                continue
            seen[nxt] = tuple(sorted(ms + (m,), key=mkey))
            queue.append(nxt)

    union = SymPolygon.empty(f)
    for q in seen:
        union = hull_union(union, q)
    if union != scaled:
        return False, None
    dec = GeneratorDecomposition(tuple(tuple(g * m for m in ms) for ms in seen.values()))
    return True, dec


def sector_decompose(p: SymPolygon) -> list[QuadInt]:
    if p.field.d not in (1, 3):
        raise WrongField("sector decomposition needs the d=1 or d=3 unit group")
    if p.tag != PROPER:
        raise NotProper("sector decomposition of a degenerate value")
    out = []
    for v in p.sector:
        q = quadrat_in_ring(p.field, v)
        if q is None:
            raise NotLattice(f"vertex ({v.x},{v.y}) not integral")
        out.append(q)
    return out


def reconstruct_lemma_polygon(p: SymPolygon) -> SymPolygon:
    acc = SymPolygon.empty(p.field)
    for s in sector_decompose(p):
        acc = hull_union(acc, _scale_int(s, dk(p.field)))
    return acc


def global_sections_check(p: SymPolygon) -> bool:
    # only the empty set and {0} are fixed by the whole monoid action
    return p.tag in (EMPTY, ZERO)


def aut_orbit_equiv(mu: QuadRat, nu: QuadRat) -> bool:
    if mu.is_zero() or nu.is_zero():
        raise ZeroInput("aut_orbit_equiv on zero")
    q = mu / nu
    return q.den == 1 and q.num.is_unit()


@dataclass(frozen=True)
class StalkElement:
    polygon: SymPolygon
    generator: QuadRat

    def member(self) -> tuple[bool, GeneratorDecomposition | None]:
        return membership_in_generated(self.polygon, [self.generator])


def stalk_scale(k: QuadRat, p: SymPolygon) -> StalkElement:
    if k.is_zero():
        raise ZeroInput("stalk at the zero module")
    return StalkElement(scale_act(k, p), k)
