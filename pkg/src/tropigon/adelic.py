"""Prime splitting, valuation vectors, and the catalog of submodules of K.

Finitely supported data only: a vector stores its nonzero exponents plus the
set of primes where the component is zero ("free", no constraint).  Every
module of K that arises this way is principal away from the free primes, so a
single rational generator plus the free set is a faithful handle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    FieldMismatch,
    InvalidSection,
    MalformedInput,
    OutOfDomain,
    ZeroInput,
    ZeroModule,
)
from .polygeom import PROPER, SymPolygon, membership_in_generated, scale_act
from .quadfield import Field, QuadInt, QuadRat, canonical_unit_rep, gcd, plane_to_quadrat

SPLIT = "split"
INERT = "inert"
RAMIFIED = "ramified"

GENERIC = "generic"

ZERO_MODULE = "zero"
PRINCIPAL = "principal"
LOCALIZED = "localized"


@dataclass(frozen=True)
class PrimeIdeal:
    field: Field
    p: int
    kind: str
    gen: QuadInt
    index: int  # 0, or 1 for the second member of a split pair

    @property
    def residue_degree(self) -> int:
        return 2 if self.kind == INERT else 1

    @property
    def ram_index(self) -> int:
        # valuation of the rational prime p at this place
        return 2 if self.kind == RAMIFIED else 1

    def sort_key(self) -> tuple[int, int]:
        return (self.p, self.index)

    def conjugate(self) -> PrimeIdeal:
        if self.kind != SPLIT:
            return self
        pair = primes_above(self.field, self.p)
        return pair[1 - self.index]

    def __repr__(self):
        return f"PrimeIdeal(d={self.field.d}, p={self.p}, {self.kind}, gen=({self.gen.a},{self.gen.b}))"


def _is_rational_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _ideal_gen(f: Field, p: int, r: int) -> QuadInt:
    # generator of (p, omega - r); class number 1 makes it principal
    g, _, _ = gcd(QuadInt(f, p, 0), QuadInt(f, -r, 1))
    assert g.norm() == p
    return g


_PRIMES_ABOVE: dict[tuple[int, int], tuple[PrimeIdeal, ...]] = {}


def primes_above(f: Field, p: int) -> tuple[PrimeIdeal, ...]:
    key = (f.d, p)
    got = _PRIMES_ABOVE.get(key)
    if got is not None:
        return got
    if not _is_rational_prime(p):
        raise OutOfDomain(f"{p} is not a rational prime")
    tr, nm = f.trace_omega, f.norm_omega
    roots = [r for r in range(p) if (r * r - tr * r + nm) % p == 0]
    if not roots:
        out = (PrimeIdeal(f, p, INERT, canonical_unit_rep(QuadInt(f, p, 0)), 0),)
    elif f.discriminant % p == 0:
        out = (PrimeIdeal(f, p, RAMIFIED, _ideal_gen(f, p, roots[0]), 0),)
    else:
        # split: the smaller root labels the first conjugate
        out = tuple(
            PrimeIdeal(f, p, SPLIT, _ideal_gen(f, p, r), i) for i, r in enumerate(roots)
        )
    _PRIMES_ABOVE[key] = out
    return out


def _sieve(bound: int) -> list[int]:
    if bound < 2:
        return []
    flags = bytearray([1]) * (bound + 1)
    flags[0] = flags[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return [i for i in range(2, bound + 1) if flags[i]]


def primes_upto(f: Field, bound: int) -> list[PrimeIdeal]:
    out: list[PrimeIdeal] = []
    for p in _sieve(bound):
        out.extend(primes_above(f, p))
    return out


def _quo_exact(x: QuadInt, g: QuadInt) -> QuadInt | None:
    n = g.norm()
    w = x * g.conj()
    if w.a % n or w.b % n:
        return None
    return QuadInt(x.field, w.a // n, w.b // n)


def valuation(q: QuadRat, prime: PrimeIdeal) -> int:
    if q.field.d != prime.field.d:
        raise FieldMismatch(f"value over d={q.field.d}, prime over d={prime.field.d}")
    if q.is_zero():
        raise ZeroInput("valuation of 0")
    v = 0
    cur = q.num
    while True:
        nxt = _quo_exact(cur, prime.gen)
        if nxt is None:
            break
        cur = nxt
        v += 1
    den, k = q.den, 0
    while den % prime.p == 0:
        den //= prime.p
        k += 1
    return v - k * prime.ram_index


def complementary_generator(f: Field) -> QuadRat:
    # delta with (delta) = {x : tr(x*O_K) in Z}; tr(delta) = 0, tr(delta*omega) = 1
    if f.case == 1:
        return QuadRat.make(QuadInt(f, 0, -1), 2 * f.d)
    return QuadRat.make(QuadInt(f, 1, -2), f.d)


def _unit_canonical_rat(q: QuadRat) -> QuadRat:
    # unit multiplication is a GL2(Z) change of coordinates, so lowest terms survive
    return QuadRat(canonical_unit_rep(q.num), q.den)


def _prime_pow(prime: PrimeIdeal, e: int) -> QuadRat:
    return QuadRat(prime.gen, 1).pow(e)


def _sorted_primes(f: Field, primes) -> tuple[PrimeIdeal, ...]:
    out = []
    seen = set()
    for prime in primes:
        if prime.field.d != f.d:
            raise FieldMismatch(f"prime over d={prime.field.d} in a d={f.d} vector")
        if prime in seen:
            continue
        seen.add(prime)
        out.append(prime)
    out.sort(key=PrimeIdeal.sort_key)
    return tuple(out)


def _prime_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _support_primes(q: QuadRat) -> list[PrimeIdeal]:
    # every prime where v(q) could be nonzero lies above norm(num)*den
    out: list[PrimeIdeal] = []
    for p in _prime_factors(q.num.norm() * q.den):
        out.extend(primes_above(q.field, p))
    return out


@dataclass(frozen=True)
class ValuationVector:
    field: Field
    exps: tuple[tuple[PrimeIdeal, int], ...]
    free: tuple[PrimeIdeal, ...]

    @staticmethod
    def make(f: Field, exps=(), free=()) -> ValuationVector:
        free_t = _sorted_primes(f, free)
        free_set = set(free_t)
        items: list[tuple[PrimeIdeal, int]] = []
        seen: set[PrimeIdeal] = set()
        pairs = exps.items() if isinstance(exps, dict) else exps
        for prime, e in pairs:
            if prime.field.d != f.d:
                raise FieldMismatch(f"prime over d={prime.field.d} in a d={f.d} vector")
            if prime in seen:
                raise MalformedInput("duplicate prime in exponent list")
            seen.add(prime)
            if prime in free_set:
                raise MalformedInput("exponent listed at a free prime")
            if e:
                items.append((prime, int(e)))
        items.sort(key=lambda t: t[0].sort_key())
        return ValuationVector(f, tuple(items), free_t)

    def exp_of(self, prime: PrimeIdeal) -> int:
        for q, e in self.exps:
            if q == prime:
                return e
        return 0

    def __repr__(self):
        es = ", ".join(f"({p.p},{p.index}):{e}" for p, e in self.exps)
        fs = ", ".join(f"({p.p},{p.index})" for p in self.free)
        return f"ValuationVector(d={self.field.d}, exps=[{es}], free=[{fs}])"


@dataclass(frozen=True)
class ModuleHandle:
    field: Field
    kind: str
    gen: QuadRat | None
    free: tuple[PrimeIdeal, ...]

    @staticmethod
    def zero(f: Field) -> ModuleHandle:
        return ModuleHandle(f, ZERO_MODULE, None, ())

    @staticmethod
    def make(f: Field, gen: QuadRat, free=()) -> ModuleHandle:
        if gen.field.d != f.d:
            raise FieldMismatch(f"generator over d={gen.field.d} for a d={f.d} module")
        if gen.is_zero():
            raise ZeroInput("nonzero module with zero generator")
        free_t = _sorted_primes(f, free)
        # valuations at free primes carry no information: clear them so equal
        # modules compare equal as handles
        for prime in free_t:
            v = valuation(gen, prime)
            if v:
                gen = gen * _prime_pow(prime, -v)
        gen = _unit_canonical_rat(gen)
        kind = LOCALIZED if free_t else PRINCIPAL
        return ModuleHandle(f, kind, gen, free_t)

    def member(self, q: QuadRat) -> bool:
        if q.field.d != self.field.d:
            raise FieldMismatch(f"d={q.field.d} element, d={self.field.d} module")
        if self.kind == ZERO_MODULE:
            return q.is_zero()
        if q.is_zero():
            return True
        r = q / self.gen
        for prime in self.free:
            v = valuation(r, prime)
            if v < 0:
                r = r * _prime_pow(prime, -v)
        return r.is_integral()

    def __repr__(self):
        if self.kind == ZERO_MODULE:
            return f"ModuleHandle(d={self.field.d}, zero)"
        fs = ", ".join(f"({p.p},{p.index})" for p in self.free)
        return f"ModuleHandle(d={self.field.d}, {self.kind}, gen={self.gen}, free=[{fs}])"


def module_from_adele(a: ValuationVector) -> ModuleHandle:
    # H_a = {q : v(q) >= v(delta) - e at every constrained prime}
    gen = complementary_generator(a.field)
    for prime, e in a.exps:
        gen = gen * _prime_pow(prime, -e)
    return ModuleHandle.make(a.field, gen, a.free)


def adele_from_module(h: ModuleHandle) -> ValuationVector:
    if h.kind == ZERO_MODULE:
        raise ZeroModule("the zero module is not of the form H_a")
    ratio = complementary_generator(h.field) / h.gen
    free_set = set(h.free)
    exps = []
    for prime in _support_primes(ratio):
        if prime in free_set:
            continue
        e = valuation(ratio, prime)
        if e:
            exps.append((prime, e))
    return ValuationVector.make(h.field, exps, h.free)


def iso_class_equal(a: ValuationVector, b: ValuationVector) -> tuple[bool, QuadRat | None]:
    if a.field.d != b.field.d:
        raise FieldMismatch(f"d={a.field.d} vs d={b.field.d}")
    if a.free != b.free:
        return False, None
    diff: dict[PrimeIdeal, int] = {}
    for prime, e in a.exps:
        diff[prime] = diff.get(prime, 0) - e
    for prime, e in b.exps:
        diff[prime] = diff.get(prime, 0) + e
    k = QuadRat.from_int(a.field, 1)
    for prime in sorted(diff, key=PrimeIdeal.sort_key):
        if diff[prime]:
            k = k * _prime_pow(prime, diff[prime])
    return True, k


def point_over_c(a: ValuationVector, lam: QuadRat):
    """Canonical descriptor of the pair (a, lam) under the joint K* action.

    Two pairs get equal descriptors exactly when point_iso accepts them: the
    archimedean coordinate is divided by a generator realizing the exponents,
    stripped of free-prime valuations, and reduced modulo units.
    """
    if lam.field.d != a.field.d:
        raise FieldMismatch(f"d={lam.field.d} scalar, d={a.field.d} vector")
    if lam.is_zero():
        return (a.field.d, a.free, None)
    k = lam
    for prime, e in a.exps:
        k = k * _prime_pow(prime, -e)
    for prime in a.free:
        v = valuation(k, prime)
        if v:
            k = k * _prime_pow(prime, -v)
    return (a.field.d, a.free, _unit_canonical_rat(k))


def point_iso(pa: tuple[ValuationVector, QuadRat], pb: tuple[ValuationVector, QuadRat]) -> bool:
    a, lam = pa
    b, mu = pb
    if a.field.d != b.field.d or lam.field.d != a.field.d or mu.field.d != b.field.d:
        raise FieldMismatch("point comparison across fields")
    if a.free != b.free:
        return False
    if lam.is_zero() or mu.is_zero():
        # degenerate pairs compare by module class alone
        return lam.is_zero() == mu.is_zero()
    k = mu / lam
    ea = dict(a.exps)
    eb = dict(b.exps)
    support = set(ea) | set(eb) | set(_support_primes(k))
    free_set = set(a.free)
    for prime in support:
        if prime in free_set:
            continue
        if valuation(k, prime) != eb.get(prime, 0) - ea.get(prime, 0):
            return False
    return True


@dataclass(frozen=True)
class FiniteSection:
    field: Field
    prime_bound: int
    values: tuple[tuple[PrimeIdeal, QuadRat], ...]

    @staticmethod
    def make(f: Field, prime_bound: int, values=()) -> FiniteSection:
        pairs = values.items() if isinstance(values, dict) else values
        items = []
        seen: set[PrimeIdeal] = set()
        for prime, xi in pairs:
            if prime.field.d != f.d or xi.field.d != f.d:
                raise FieldMismatch("section data across fields")
            if prime in seen:
                raise MalformedInput("duplicate prime in section")
            seen.add(prime)
            if not xi.is_zero():
                items.append((prime, xi))
        items.sort(key=lambda t: t[0].sort_key())
        return FiniteSection(f, prime_bound, tuple(items))


def _section_violation(s: FiniteSection) -> PrimeIdeal | None:
    # only denominator primes can fail, and only at places other than the
    # component's own prime; the bound keeps the check finite
    for prime, xi in s.values:
        for p in _prime_factors(xi.den):
            if p > s.prime_bound:
                continue
            for q in primes_above(s.field, p):
                if q != prime and valuation(xi, q) < 0:
                    return q
    return None


def section_validate(s: FiniteSection) -> bool:
    return _section_violation(s) is None


def section_act(k: QuadInt, s: FiniteSection) -> FiniteSection:
    if k.field.d != s.field.d:
        raise FieldMismatch(f"d={k.field.d} scalar on a d={s.field.d} section")
    bad = _section_violation(s)
    if bad is not None:
        raise InvalidSection(bad)
    out = FiniteSection.make(
        s.field, s.prime_bound, [(prime, xi * k) for prime, xi in s.values]
    )
    assert _section_violation(out) is None  # integral scaling never lowers a valuation
    return out


@dataclass(frozen=True)
class GenericFiber:
    """The two-element semiring: EMPTY is additive zero, ZERO the unit."""

    elements: tuple[str, str] = ("empty", "zero")

    def _check(self, x: str):
        if x not in self.elements:
            raise OutOfDomain(f"{x!r} is not an element of the generic fiber")

    def add(self, x: str, y: str) -> str:
        self._check(x)
        self._check(y)
        return "zero" if "zero" in (x, y) else "empty"

    def mul(self, x: str, y: str) -> str:
        self._check(x)
        self._check(y)
        return "empty" if "empty" in (x, y) else "zero"


@dataclass(frozen=True)
class PrimeFiber:
    prime: PrimeIdeal
    module: ModuleHandle

    def member(self, poly: SymPolygon) -> tuple[bool, int | None]:
        """Is the polygon in the semiring generated by {h*D_K : h in H(prime)}?

        Returns (answer, n) where pi^n clears the prime from the witness: the
        scaled polygon lies in the integral semiring.  A polygon whose vertices
        have a denominator at any other place is rejected outright.
        """
        f = self.prime.field
        if poly.field.d != f.d:
            raise FieldMismatch(f"d={poly.field.d} polygon at a d={f.d} place")
        if poly.tag != PROPER:
            return True, 0
        pi = QuadRat(self.prime.gen, 1)
        n0 = 0
        for v in poly.sector:
            q = plane_to_quadrat(f, v)
            vp = valuation(q, self.prime)
            if not (q * pi.pow(-vp)).is_integral():
                return False, None
            n0 = max(n0, -vp)
        # scaling by pi is monotone, so search upward from the first integral level;
        # for d in {1, 3} integrality already decides, elsewhere scan a short window
        tries = 1 if f.d in (1, 3) else 3
        for n in range(n0, n0 + tries):
            ok, _ = membership_in_generated(scale_act(pi.pow(n), poly))
            if ok:
                return True, n
        return False, None


def pullback_fiber(at):
    if at == GENERIC:
        return GenericFiber()
    if isinstance(at, PrimeIdeal):
        one = QuadRat.from_int(at.field, 1)
        return PrimeFiber(at, ModuleHandle.make(at.field, one, (at,)))
    raise MalformedInput("expected a prime ideal or 'generic'")


def ideal_count_upto(f: Field, bound: int) -> list[int]:
    """counts[n] = number of ideals of norm exactly n, 0 <= n <= bound."""
    counts = [0] * (bound + 1)
    if bound >= 1:
        counts[1] = 1
    for prime in primes_upto(f, bound):
        q = prime.p**prime.residue_degree
        if q > bound:
            continue
        for n in range(q, bound + 1):
            if n % q == 0:
                counts[n] += counts[n // q]
    return counts
