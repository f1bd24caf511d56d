"""Piecewise-affine envelopes on [0,1] and the d=1 duality."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropigon import (
    Envelope,
    QuadInt,
    QuadRat,
    SymPolygon,
    dk,
    eval_at,
    field,
    hull_union,
    leq,
    minkowski_sum,
    phi,
    phi_inv,
    scale_act,
    tmax,
    tplus,
)
from tropigon.envelope import NEG_INF
from tropigon.errors import NotProper, OutOfDomain, WrongField

rats = st.fractions(min_value=-6, max_value=6, max_denominator=4)
lines_strategy = st.lists(st.tuples(rats, rats), min_size=1, max_size=5)


@st.composite
def envelopes(draw, allow_bottom=True):
    if allow_bottom and draw(st.integers(0, 9)) == 0:
        return Envelope.bottom()
    return Envelope.of(draw(lines_strategy))


# ---------------------------------------------------------------- frozen facts


def _env(*lines):
    return Envelope.of([(Fraction(a), Fraction(b)) for a, b in lines])


def test_tmax_values():
    f = _env((3, -2), (0, 1))
    assert tmax(f, Envelope.bottom()) == f
    assert tmax(_env((1, 0)), _env((0, 1))) == _env((1, 0), (0, 1))
    # 1 >= 1-2t on [0,1] with equality only at the endpoint: zero length, pruned
    assert tmax(_env((1, 1)), _env((1, -1))) == _env((1, 1))


def test_tplus_values():
    f = _env((3, -2), (0, 1))
    assert tplus(f, _env((0, 0))) == f
    assert tplus(Envelope.bottom(), f) == Envelope.bottom()
    # middle line 1 attains max(2-2t, 1, 2t) only at t=1/2: pruned
    assert tplus(_env((1, 0), (0, 1)), _env((1, 0), (0, 1))) == _env((2, 0), (0, 2))


def test_eval_at_values():
    assert eval_at(_env((1, 0), (0, 1)), Fraction(1, 2)) == Fraction(1, 2)
    assert eval_at(Envelope.bottom(), Fraction(1, 3)) is NEG_INF
    assert eval_at(_env((0, 0)), Fraction(1, 3)) == 0
    with pytest.raises(OutOfDomain):
        eval_at(_env((0, 0)), Fraction(3, 2))


# ------------------------------------------------------- canonical form quality


def _raw_max(lines, t):
    return max(a + (b - a) * t for a, b in lines)


@given(lines_strategy)
@settings(max_examples=300)
def test_canonicalization_preserves_the_function(lines):
    e = Envelope.of(lines)
    grid = [Fraction(k, 16) for k in range(17)]
    for t in grid:
        assert eval_at(e, t) == _raw_max(lines, t)


@given(lines_strategy)
@settings(max_examples=200)
def test_canonical_lines_are_irredundant(lines):
    e = Envelope.of(lines)
    kept = e.lines
    for i in range(len(kept)):
        rest = kept[:i] + kept[i + 1 :]
        if not rest:
            continue
        assert Envelope.of(list(rest)) != e


@given(envelopes(), envelopes(), envelopes())
@settings(max_examples=200)
def test_semiring_laws(e, f, g):
    assert tmax(e, f) == tmax(f, e)
    assert tmax(tmax(e, f), g) == tmax(e, tmax(f, g))
    assert tmax(e, e) == e
    assert tplus(e, f) == tplus(f, e)
    assert tplus(tplus(e, f), g) == tplus(e, tplus(f, g))
    assert tplus(e, tmax(f, g)) == tmax(tplus(e, f), tplus(e, g))
    assert leq(e, tmax(e, f))


# -------------------------------------------------------------------- duality


def test_phi_values():
    f = field(1)
    assert phi(dk(f)) == _env((1, 0), (0, 1))
    assert phi(SymPolygon.empty(f)) == Envelope.bottom()
    assert phi(SymPolygon.zero(f)) == _env((0, 0))
    rotated = scale_act(QuadRat.make(QuadInt(f, 1, 1), 1), dk(f))
    assert phi(rotated) == _env((1, 1))
    assert phi_inv(_env((1, 0), (0, 1))) == dk(f)
    assert phi_inv(Envelope.bottom()) == SymPolygon.empty(f)
    assert phi_inv(_env((0, 0))) == SymPolygon.zero(f)


def test_phi_rejects_other_fields():
    with pytest.raises(WrongField):
        phi(dk(field(3)))


@st.composite
def gaussian_polygons(draw):
    f = field(1)
    kind = draw(st.integers(0, 9))
    if kind == 0:
        return SymPolygon.empty(f)
    if kind == 1:
        return SymPolygon.zero(f)
    pts = [
        QuadInt(f, draw(st.integers(-5, 5)), draw(st.integers(-5, 5))).plane()
        for _ in range(draw(st.integers(1, 3)))
    ]
    pts = [p for p in pts if p.x or p.y] or [f.one.plane()]
    return SymPolygon.from_points(f, pts)


@given(gaussian_polygons(), gaussian_polygons())
@settings(max_examples=300)
def test_phi_is_an_isomorphism(a, b):
    fa, fb = phi(a), phi(b)
    assert phi(hull_union(a, b)) == tmax(fa, fb)
    assert phi(minkowski_sum(a, b)) == tplus(fa, fb)
    assert phi_inv(fa) == a
    assert phi(phi_inv(fa)) == fa


@given(gaussian_polygons())
@settings(max_examples=150)
def test_phi_is_the_support_function(p):
    # phi(P)(t) must equal the support max over the polygon's own vertices in
    # the direction that interpolates 1 -> i
    e = phi(p)
    if p.tag != "proper":
        return
    for t in (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)):
        want = max((1 - t) * pt.x + t * pt.y for pt in p.orbit_points())
        assert eval_at(e, t) == want
