"""JSON wire formats.

Integers stay integers, every other scalar is an exact rational serialized as
a [num, den] pair; no floating point appears in any payload.  Parsers are
strict: unexpected shapes raise MalformedInput, which the CLI maps to exit 2.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .adelic import (
    FiniteSection,
    LOCALIZED,
    ModuleHandle,
    PRINCIPAL,
    PrimeIdeal,
    ValuationVector,
    ZERO_MODULE,
    primes_above,
)
from .envelope import Envelope
from .errors import MalformedInput
from .polygeom import EMPTY, PROPER, ZERO, GeneratorDecomposition, SymPolygon
from .quadfield import (
    HEEGNER_DS,
    Field,
    PlanePoint,
    QuadInt,
    QuadRat,
    canonical_unit_rep,
    field,
)
from .tensorlab import FormalTensor


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def _expect(cond: bool, msg: str):
    if not cond:
        raise MalformedInput(msg)


def _as_int(v, what: str) -> int:
    _expect(isinstance(v, int) and not isinstance(v, bool), f"{what} must be an integer")
    return v


def _as_list(v, what: str) -> list:
    _expect(isinstance(v, list), f"{what} must be a list")
    return v


def _as_dict(v, what: str) -> dict:
    _expect(isinstance(v, dict), f"{what} must be an object")
    return v


def field_from_json(v) -> Field:
    d = _as_int(v, "field")
    _expect(d in HEEGNER_DS, f"field must be one of {list(HEEGNER_DS)}")
    return field(d)


def quadint_to_json(x: QuadInt) -> list[int]:
    return [x.a, x.b]


def quadint_from_json(f: Field, data) -> QuadInt:
    v = _as_list(data, "ring element")
    _expect(len(v) == 2, "ring element must be [a, b]")
    return QuadInt(f, _as_int(v[0], "coefficient"), _as_int(v[1], "coefficient"))


def quadrat_to_json(q: QuadRat) -> dict:
    return {"num": quadint_to_json(q.num), "den": q.den}


def quadrat_from_json(f: Field, data) -> QuadRat:
    if isinstance(data, list):  # integral shorthand
        return QuadRat(quadint_from_json(f, data), 1)
    v = _as_dict(data, "field element")
    _expect(set(v) == {"num", "den"}, 'field element must be {"num": [a,b], "den": n}')
    den = _as_int(v["den"], "den")
    _expect(den != 0, "den must be nonzero")
    return QuadRat.make(quadint_from_json(f, v["num"]), den)


def fraction_to_json(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


def fraction_from_json(data) -> Fraction:
    v = _as_list(data, "rational")
    _expect(len(v) == 2, "rational must be [num, den]")
    den = _as_int(v[1], "denominator")
    _expect(den != 0, "rational with zero denominator")
    return Fraction(_as_int(v[0], "numerator"), den)


def polygon_to_json(p: SymPolygon) -> dict:
    sector = [
        [v.x.numerator, v.x.denominator, v.y.numerator, v.y.denominator] for v in p.sector
    ]
    return {"field": p.field.d, "tag": p.tag, "sector": sector}


def polygon_from_json(data, expect_field: Field | None = None) -> SymPolygon:
    v = _as_dict(data, "polygon")
    _expect({"field", "tag"} <= set(v), 'polygon needs "field" and "tag"')
    f = field_from_json(v["field"])
    if expect_field is not None:
        _expect(f.d == expect_field.d, f"polygon field d={f.d} does not match --field {expect_field.d}")
    tag = v["tag"]
    if tag == EMPTY:
        return SymPolygon.empty(f)
    if tag == ZERO:
        return SymPolygon.zero(f)
    _expect(tag == PROPER, f"unknown polygon tag {tag!r}")
    pts = []
    for entry in _as_list(v.get("sector", []), "sector"):
        e = _as_list(entry, "vertex")
        _expect(len(e) == 4, "vertex must be [xn, xd, yn, yd]")
        xd, yd = _as_int(e[1], "xd"), _as_int(e[3], "yd")
        _expect(xd != 0 and yd != 0, "vertex with zero denominator")
        pts.append(PlanePoint(Fraction(_as_int(e[0], "xn"), xd), Fraction(_as_int(e[2], "yn"), yd)))
    _expect(bool(pts), "proper polygon with empty sector")
    return SymPolygon.from_points(f, pts)


def envelope_to_json(e: Envelope) -> dict:
    if e.is_bottom():
        return {"tag": "bottom"}
    return {
        "lines": [
            [a.numerator, a.denominator, b.numerator, b.denominator] for a, b in e.lines
        ]
    }


def envelope_from_json(data) -> Envelope:
    v = _as_dict(data, "envelope")
    if v.get("tag") == "bottom":
        return Envelope.bottom()
    lines = []
    for entry in _as_list(v.get("lines"), "lines"):
        e = _as_list(entry, "line")
        _expect(len(e) == 4, "line must be [an, ad, bn, bd]")
        ad, bd = _as_int(e[1], "ad"), _as_int(e[3], "bd")
        _expect(ad != 0 and bd != 0, "line with zero denominator")
        lines.append((Fraction(_as_int(e[0], "an"), ad), Fraction(_as_int(e[2], "bn"), bd)))
    _expect(bool(lines), "envelope with no lines")
    return Envelope.of(lines)


def prime_to_json(p: PrimeIdeal) -> dict:
    return {"p": p.p, "kind": p.kind, "gen": quadint_to_json(p.gen)}


def prime_from_json(f: Field, data) -> PrimeIdeal:
    v = _as_dict(data, "prime")
    _expect({"p", "kind", "gen"} <= set(v), 'prime needs "p", "kind", "gen"')
    p = _as_int(v["p"], "p")
    _expect(p >= 2, "p must be >= 2")
    gen = quadint_from_json(f, v["gen"])
    _expect(not gen.is_zero(), "prime generator must be nonzero")
    try:
        above = primes_above(f, p)
    except Exception as exc:
        raise MalformedInput(str(exc)) from exc
    want = canonical_unit_rep(gen)
    for cand in above:
        if cand.kind == v["kind"] and cand.gen == want:
            return cand
    raise MalformedInput(f"no prime over {p} in d={f.d} with that kind and generator")


def vector_to_json(a: ValuationVector) -> dict:
    return {
        "exps": [[prime_to_json(p), e] for p, e in a.exps],
        "free": [prime_to_json(p) for p in a.free],
    }


def vector_from_json(f: Field, data) -> ValuationVector:
    v = _as_dict(data, "valuation vector")
    exps = []
    for entry in _as_list(v.get("exps", []), "exps"):
        e = _as_list(entry, "exponent entry")
        _expect(len(e) == 2, "exponent entry must be [prime, e]")
        exps.append((prime_from_json(f, e[0]), _as_int(e[1], "exponent")))
    free = [prime_from_json(f, entry) for entry in _as_list(v.get("free", []), "free")]
    return ValuationVector.make(f, exps, free)


def module_to_json(h: ModuleHandle) -> dict:
    if h.kind == ZERO_MODULE:
        return {"kind": ZERO_MODULE}
    out = {"kind": h.kind, "gen": quadrat_to_json(h.gen)}
    if h.kind == LOCALIZED:
        out["free"] = [prime_to_json(p) for p in h.free]
    return out


def module_from_json(f: Field, data) -> ModuleHandle:
    v = _as_dict(data, "module")
    kind = v.get("kind")
    if kind == ZERO_MODULE:
        return ModuleHandle.zero(f)
    _expect(kind in (PRINCIPAL, LOCALIZED), f"unknown module kind {kind!r}")
    gen = quadrat_from_json(f, v.get("gen"))
    free = [prime_from_json(f, entry) for entry in _as_list(v.get("free", []), "free")]
    _expect(bool(free) == (kind == LOCALIZED), "free set must match the module kind")
    return ModuleHandle.make(f, gen, free)


def section_to_json(s: FiniteSection) -> dict:
    return {
        "bound": s.prime_bound,
        "values": [[prime_to_json(p), quadrat_to_json(x)] for p, x in s.values],
    }


def section_from_json(f: Field, data) -> FiniteSection:
    v = _as_dict(data, "section")
    bound = _as_int(v.get("bound", 200), "bound")
    values = []
    for entry in _as_list(v.get("values", []), "values"):
        e = _as_list(entry, "section entry")
        _expect(len(e) == 2, "section entry must be [prime, value]")
        values.append((prime_from_json(f, e[0]), quadrat_from_json(f, e[1])))
    return FiniteSection.make(f, bound, values)


def tensor_to_json(t: FormalTensor) -> dict:
    return {"pairs": [[envelope_to_json(e), envelope_to_json(g)] for e, g in t.pairs]}


def tensor_from_json(data) -> FormalTensor:
    v = _as_dict(data, "tensor")
    pairs = []
    for entry in _as_list(v.get("pairs", []), "pairs"):
        e = _as_list(entry, "tensor pair")
        _expect(len(e) == 2, "tensor pair must be [envelope, envelope]")
        pairs.append((envelope_from_json(e[0]), envelope_from_json(e[1])))
    return FormalTensor.make(pairs)


def decomposition_to_json(dec: GeneratorDecomposition | None):
    if dec is None:
        return None
    return [[quadrat_to_json(h) for h in ms] for ms in dec.summand_sets]
