"""Rational simplicial cones in the plane and signed sums of them.

A 2-generator cone is an open angular sector between two totally positive
directions; the half-open closure adjoins the boundary rays pulled inward by
an infinitesimal shift along Q = (1, 0).  Since Q has the smallest slope in
the closed positive quadrant, that rule always adjoins the upper boundary
ray (larger sigma2/sigma1) and drops the lower one; general flag pairs still
occur after subdivision and intersection, so both flags are carried.

All membership tests are exact rational sign computations; floats appear
only in test probes.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import DegenerateCone
from .field import FieldContext, FieldElement, det2
from .util import sign_quadratic


def sgn(x1: FieldElement, x2: FieldElement) -> int:
    """Sign of det of the embedding matrix of (x1, x2); 0 when proportional."""
    return det2(x1, x2)


def primitive_direction(v: FieldElement) -> FieldElement:
    """Canonical representative of the ray through v: primitive integral coords."""
    a, b = v.a, v.b
    den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    ai, bi = int(a * den), int(b * den)
    g = gcd(abs(ai), abs(bi))
    if g:
        ai //= g
        bi //= g
    return FieldElement(v.ctx, ai, bi)


def slope_cmp(u: FieldElement, v: FieldElement) -> int:
    """Compare slopes sigma2/sigma1 of two totally positive directions.

    Returns -1, 0, 1 for slope(u) <, =, > slope(v)."""
    return -det2(u, v)


class Ray:
    """Open ray {t*v : t > 0} through a totally positive direction."""

    __slots__ = ("v",)

    def __init__(self, v: FieldElement):
        self.v = primitive_direction(v)

    def key(self):
        return ("ray", self.v.a, self.v.b)

    def contains(self, x: FieldElement) -> bool:
        if x.is_zero():
            return False
        if det2(self.v, x) != 0:
            return False
        # proportional over Q; positive multiple iff embeddings share sign
        return x.embedding_sign(2) > 0

    def act(self, g: FieldElement) -> "Ray":
        return Ray(g * self.v)

    def __repr__(self):
        return f"Ray({self.v})"


class HalfOpenCone:
    """Sector between lo and hi (slope(lo) < slope(hi)) with inclusion flags."""

    __slots__ = ("lo", "hi", "incl_lo", "incl_hi")

    def __init__(self, lo: FieldElement, hi: FieldElement, incl_lo: bool, incl_hi: bool):
        lo = primitive_direction(lo)
        hi = primitive_direction(hi)
        if det2(lo, hi) == 0:
            raise DegenerateCone("proportional generators")
        if det2(lo, hi) < 0:
            raise DegenerateCone("generators not in slope order")
        self.lo = lo
        self.hi = hi
        self.incl_lo = incl_lo
        self.incl_hi = incl_hi

    def key(self):
        return ("cone", self.lo.a, self.lo.b, self.hi.a, self.hi.b, self.incl_lo, self.incl_hi)

    def contains(self, x: FieldElement) -> bool:
        if x.is_zero():
            return False
        s_lo = det2(self.lo, x)
        s_hi = det2(x, self.hi)
        if s_lo > 0 and s_hi > 0:
            return True
        if s_lo == 0 and s_hi > 0:
            return self.incl_lo and x.embedding_sign(2) > 0
        if s_hi == 0 and s_lo > 0:
            return self.incl_hi and x.embedding_sign(2) > 0
        return False

    def act(self, g: FieldElement) -> "HalfOpenCone":
        # g totally positive: slopes transform monotonically, flags transport.
        return HalfOpenCone(g * self.lo, g * self.hi, self.incl_lo, self.incl_hi)

    def __repr__(self):
        l = "[" if self.incl_lo else "("
        r = "]" if self.incl_hi else ")"
        return f"Cone{l}{self.lo}, {self.hi}{r}"


def cstar(v1: FieldElement, v2: FieldElement) -> "SignedConeSum":
    """Half-open cone C*(v1, v2): open sector plus the upper boundary ray."""
    if not (v1.is_totally_positive() and v2.is_totally_positive()):
        raise DegenerateCone("generators must be totally positive")
    d = det2(v1, v2)
    if d == 0:
        raise DegenerateCone("proportional generators")
    lo, hi = (v1, v2) if d > 0 else (v2, v1)
    return SignedConeSum.of([(1, HalfOpenCone(lo, hi, False, True))])


class SignedConeSum:
    """Finite integer combination of half-open cones and open rays."""

    def __init__(self):
        self.terms: dict = {}  # key -> (coeff, object)

    @staticmethod
    def empty() -> "SignedConeSum":
        return SignedConeSum()

    @staticmethod
    def of(items: list[tuple[int, object]]) -> "SignedConeSum":
        s = SignedConeSum()
        for c, obj in items:
            s._add_term(c, obj)
        return s

    def _add_term(self, coeff: int, obj):
        if coeff == 0:
            return
        k = obj.key()
        if k in self.terms:
            c0, o0 = self.terms[k]
            c0 += coeff
            if c0 == 0:
                del self.terms[k]
            else:
                self.terms[k] = (c0, o0)
        else:
            self.terms[k] = (coeff, obj)

    def items(self) -> list[tuple[int, object]]:
        return [self.terms[k] for k in sorted(self.terms.keys(), key=repr)]

    def __add__(self, other: "SignedConeSum") -> "SignedConeSum":
        s = SignedConeSum()
        for c, o in self.items():
            s._add_term(c, o)
        for c, o in other.items():
            s._add_term(c, o)
        return s

    def scale(self, n: int) -> "SignedConeSum":
        s = SignedConeSum()
        for c, o in self.items():
            s._add_term(n * c, o)
        return s

    def __sub__(self, other: "SignedConeSum") -> "SignedConeSum":
        return self + other.scale(-1)

    def indicator(self, x: FieldElement) -> int:
        return sum(c for c, o in self.items() if o.contains(x))

    def is_empty(self) -> bool:
        return not self.terms

    def act(self, g: FieldElement) -> "SignedConeSum":
        if not g.is_totally_positive():
            raise DegenerateCone("cone action requires a totally positive element")
        s = SignedConeSum()
        for c, o in self.items():
            s._add_term(c, o.act(g))
        return s

    def key(self):
        return tuple((k, self.terms[k][0]) for k in sorted(self.terms.keys(), key=repr))

    def __repr__(self):
        return "SignedConeSum[" + ", ".join(f"{c}*{o!r}" for c, o in self.items()) + "]"


def act(x: FieldElement, D: SignedConeSum) -> SignedConeSum:
    return D.act(x)


def _intersect_cone_cone(a: HalfOpenCone, b: HalfOpenCone) -> list[tuple[int, object]]:
    cl = slope_cmp(a.lo, b.lo)
    if cl < 0:
        lo, incl_lo = b.lo, b.incl_lo
    elif cl > 0:
        lo, incl_lo = a.lo, a.incl_lo
    else:
        lo, incl_lo = a.lo, a.incl_lo and b.incl_lo
    ch = slope_cmp(a.hi, b.hi)
    if ch < 0:
        hi, incl_hi = a.hi, a.incl_hi
    elif ch > 0:
        hi, incl_hi = b.hi, b.incl_hi
    else:
        hi, incl_hi = a.hi, a.incl_hi and b.incl_hi
    d = det2(lo, hi)
    if d < 0:
        return []
    if d == 0:
        if incl_lo and incl_hi:
            return [(1, Ray(lo))]
        return []
    return [(1, HalfOpenCone(lo, hi, incl_lo, incl_hi))]


def _intersect_cone_ray(a: HalfOpenCone, r: Ray) -> list[tuple[int, object]]:
    s_lo = det2(a.lo, r.v)
    s_hi = det2(r.v, a.hi)
    if s_lo > 0 and s_hi > 0:
        return [(1, r)]
    if s_lo == 0 and s_hi > 0 and a.incl_lo:
        return [(1, r)]
    if s_hi == 0 and s_lo > 0 and a.incl_hi:
        return [(1, r)]
    return []


def intersect(D1: SignedConeSum, D2: SignedConeSum) -> SignedConeSum:
    """Exact decomposition of the product of the two membership functions."""
    out = SignedConeSum()
    for c1, o1 in D1.items():
        for c2, o2 in D2.items():
            coeff = c1 * c2
            if isinstance(o1, HalfOpenCone) and isinstance(o2, HalfOpenCone):
                parts = _intersect_cone_cone(o1, o2)
            elif isinstance(o1, HalfOpenCone):
                parts = _intersect_cone_ray(o1, o2)
            elif isinstance(o2, HalfOpenCone):
                parts = _intersect_cone_ray(o2, o1)
            else:
                parts = [(1, o1)] if o1.key() == o2.key() else []
            for c, o in parts:
                out._add_term(coeff * c, o)
    return out


def shintani_domain(ctx: FieldContext, eps: FieldElement) -> SignedConeSum:
    """C*(1, eps) for the oriented generator eps of E(f); sgn(1, eps) = +1."""
    one = ctx.one()
    if sgn(one, eps) != 1:
        raise DegenerateCone("unit not oriented with sigma1 < sigma2")
    return cstar(one, eps)


def subdivide_cone(c: HalfOpenCone, mid: FieldElement | None = None) -> SignedConeSum:
    """Split a sector at an interior ray; same membership function."""
    if mid is None:
        mid = c.lo + c.hi
    mid = primitive_direction(mid)
    if not (det2(c.lo, mid) > 0 and det2(mid, c.hi) > 0):
        raise DegenerateCone("subdivision ray not interior")
    return SignedConeSum.of(
        [
            (1, HalfOpenCone(c.lo, mid, c.incl_lo, True)),
            (1, HalfOpenCone(mid, c.hi, False, c.incl_hi)),
        ]
    )


def refine_domain(D: SignedConeSum) -> SignedConeSum:
    """Subdivide every 2-dimensional term once (membership preserved)."""
    out = SignedConeSum()
    for c, o in D.items():
        if isinstance(o, HalfOpenCone):
            for cc, oo in subdivide_cone(o).items():
                out._add_term(c * cc, oo)
        else:
            out._add_term(c, o)
    return out
