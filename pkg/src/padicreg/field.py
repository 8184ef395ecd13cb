"""Exact arithmetic in a real quadratic field F = Q(sqrt(D)).

Elements are written a + b*w with w = (D + sqrt(D))/2, so Z[w] is the maximal
order.  The two real embeddings are fixed once: sigma2 sends sqrt(D) to the
positive square root, sigma1 to the negative one.  Ideals are stored in row
Hermite normal form on the basis (1, w).  The narrow ray class group of a
conductor f is built explicitly as ((O/f)^* x {+-1}^2) / (unit images), which
restricts full automation to narrow class number one; this is checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import sympy
from sympy.solvers.diophantine.diophantine import diop_DN

from .errors import (
    NegativeDiscriminant,
    NotFundamentalDiscriminant,
    PadicRegError,
    RamifiedP,
    UnsupportedClassNumber,
)
from .util import Lattice2, sign_quadratic, is_square


def is_fundamental_discriminant(D: int) -> bool:
    if D <= 0 or is_square(D):
        return False
    if D % 4 == 1:
        return sympy.factorint(D) and all(e == 1 for e in sympy.factorint(D).values())
    if D % 4 == 0:
        m = D // 4
        if m % 4 in (2, 3):
            return all(e == 1 for e in sympy.factorint(m).values()) or _squarefree(m)
        return False
    return False


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in sympy.factorint(n).values())


class FieldElement:
    """a + b*w with w = (D + sqrt(D))/2; a, b exact rationals."""

    __slots__ = ("ctx", "a", "b")

    def __init__(self, ctx: "FieldContext", a, b):
        self.ctx = ctx
        self.a = Fraction(a)
        self.b = Fraction(b)

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.ctx, self.a + o.a, self.b + o.b)

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.ctx, self.a - o.a, self.b - o.b)

    def __neg__(self):
        return FieldElement(self.ctx, -self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        D = self.ctx.D
        q = self.ctx.w_norm  # w^2 = D*w - q
        a, b, c, d = self.a, self.b, o.a, o.b
        return FieldElement(self.ctx, a * c - b * d * q, a * d + b * c + b * d * D)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.inverse()

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            return other
        return FieldElement(self.ctx, Fraction(other), 0)

    def __eq__(self, other):
        if not isinstance(other, (FieldElement, int, Fraction)):
            return NotImplemented
        o = self._coerce(other)
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.ctx.D))

    def __repr__(self):
        return f"({self.a}) + ({self.b})*w{self.ctx.D}"

    # -- field structure -------------------------------------------------
    def conj(self) -> "FieldElement":
        return FieldElement(self.ctx, self.a + self.b * self.ctx.D, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a + self.a * self.b * self.ctx.D + self.b * self.b * self.ctx.w_norm

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.ctx.D

    def inverse(self) -> "FieldElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conj()
        return FieldElement(self.ctx, c.a / n, c.b / n)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    # -- embeddings ------------------------------------------------------
    def embedding_sign(self, which: int) -> int:
        """Exact sign of sigma_which(x), which in {1, 2}."""
        # sigma(x) = a + b(D -+ sqrt D)/2 = (2a + bD)/2 -+ b sqrt(D)/2
        u = Fraction(2 * self.a + self.b * self.ctx.D, 2)
        v = Fraction(self.b, 2)
        if which == 1:
            v = -v
        return sign_quadratic(u, v, self.ctx.D)

    def is_totally_positive(self) -> bool:
        return self.embedding_sign(1) > 0 and self.embedding_sign(2) > 0

    def embedding_mpf(self, which: int, dps: int = 30):
        import mpmath

        with mpmath.workdps(dps):
            s = mpmath.sqrt(self.ctx.D)
            if which == 1:
                s = -s
            w = (self.ctx.D + s) / 2
            return mpmath.mpf(self.a.numerator) / self.a.denominator + (
                mpmath.mpf(self.b.numerator) / self.b.denominator
            ) * w

    def coords(self) -> tuple[Fraction, Fraction]:
        return (self.a, self.b)

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def pow(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inverse().pow(-n)
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    __pow__ = pow


def det2(x: FieldElement, y: FieldElement) -> int:
    """Exact sign-carrying test: sign of sigma1(x)sigma2(y) - sigma2(x)sigma1(y).

    Equals sign(B) where conj(x)*y = A + B*w, since sigma2(u)-sigma1(u) = B*sqrt(D).
    """
    u = x.conj() * y
    return (u.b > 0) - (u.b < 0)


class IdealHNF:
    """Fractional ideal as a Lattice2 over the basis (1, w), with sanity checks."""

    __slots__ = ("ctx", "lat")

    def __init__(self, ctx: "FieldContext", lat: Lattice2):
        self.ctx = ctx
        self.lat = lat

    @staticmethod
    def from_generators(ctx: "FieldContext", gens: list[FieldElement]) -> "IdealHNF":
        rows = []
        w = ctx.gen()
        for g in gens:
            rows.append(g.coords())
            rows.append((g * w).coords())
        return IdealHNF(ctx, Lattice2.from_rows(rows))

    @staticmethod
    def principal(ctx: "FieldContext", g: FieldElement) -> "IdealHNF":
        return IdealHNF.from_generators(ctx, [g])

    @staticmethod
    def unit_ideal(ctx: "FieldContext") -> "IdealHNF":
        return IdealHNF.principal(ctx, ctx.one())

    def key(self):
        return self.lat.key()

    def __eq__(self, other):
        return isinstance(other, IdealHNF) and self.key() == other.key()

    def __hash__(self):
        return hash(("ideal", self.key()))

    def __repr__(self):
        return f"IdealHNF{self.lat!r}"

    def norm(self) -> Fraction:
        return self.lat.covolume()

    def is_integral(self) -> bool:
        return self.lat.den == 1

    def contains(self, x: FieldElement) -> bool:
        return self.lat.contains(x.a, x.b)

    def __mul__(self, other: "IdealHNF") -> "IdealHNF":
        rows = []
        b_self = [FieldElement(self.ctx, x, y) for x, y in self.lat.basis()]
        b_other = [FieldElement(self.ctx, x, y) for x, y in other.lat.basis()]
        for u in b_self:
            for v in b_other:
                rows.append((u * v).coords())
        return IdealHNF(self.ctx, Lattice2.from_rows(rows))

    def scale(self, r: Fraction) -> "IdealHNF":
        return IdealHNF(self.ctx, self.lat.scale(Fraction(r)))

    def inverse(self) -> "IdealHNF":
        n = self.norm()
        conj_rows = []
        for x, y in self.lat.basis():
            e = FieldElement(self.ctx, x, y).conj()
            conj_rows.append(e.coords())
        w = self.ctx.gen()
        rows = []
        for x, y in conj_rows:
            e = FieldElement(self.ctx, x, y)
            rows.append(e.coords())
            rows.append((e * w).coords())
        conj_ideal = IdealHNF(self.ctx, Lattice2.from_rows(rows))
        return conj_ideal.scale(Fraction(1) / n)

    def add(self, other: "IdealHNF") -> "IdealHNF":
        return IdealHNF(self.ctx, self.lat.add(other.lat))

    def intersect(self, other: "IdealHNF") -> "IdealHNF":
        return IdealHNF(self.ctx, self.lat.intersect(other.lat))

    def is_coprime(self, other: "IdealHNF") -> bool:
        s = self.add(other)
        return s.lat.key() == (1, 1, 0, 1)

    def divides(self, other: "IdealHNF") -> bool:
        """self | other, i.e. other subset of self (for integral ideals)."""
        q = other * self.inverse()
        return q.is_integral()

    def valuation(self, prime: "IdealHNF") -> int:
        """ord_prime(self) for a prime ideal, self a fractional ideal."""
        v = 0
        cur = self
        inv = prime.inverse()
        while True:
            nxt = cur * inv
            if nxt.is_integral():
                v += 1
                cur = nxt
            else:
                break
        if v > 0:
            return v
        cur = self
        while not cur.is_integral() or not prime.divides(cur):
            # check negative valuation
            if cur.is_integral():
                return v
            cur = cur * prime
            v -= 1
            if prime.divides(cur) and cur.is_integral():
                return v
        return v

    def residues(self) -> list[FieldElement]:
        """Coset representatives of O mod this integral ideal."""
        assert self.is_integral()
        a, u, c = self.lat.a, self.lat.u, self.lat.c
        out = []
        for j in range(c):
            for i in range(a):
                out.append(FieldElement(self.ctx, i, j))
        return out

    def reduce(self, x: FieldElement) -> FieldElement:
        """Canonical representative of x mod this integral ideal (x integral)."""
        assert self.lat.den == 1 and x.is_integral()
        a, u, c = self.lat.a, self.lat.u, self.lat.c
        xi, yi = int(x.a), int(x.b)
        t = yi % c
        s = (xi - ((yi - t) // c) * u) % a
        return FieldElement(self.ctx, s, t)


@dataclass(frozen=True)
class FieldContext:
    D: int
    w_norm: int  # N(w) = D(D-1)/4
    fund_unit_coords: tuple[Fraction, Fraction]
    fund_unit_norm: int
    class_number: int
    narrow_class_number: int

    def one(self) -> FieldElement:
        return FieldElement(self, 1, 0)

    def zero(self) -> FieldElement:
        return FieldElement(self, 0, 0)

    def gen(self) -> FieldElement:
        return FieldElement(self, 0, 1)

    def elem(self, a, b=0) -> FieldElement:
        return FieldElement(self, a, b)

    def from_sqrtD(self, x, y) -> FieldElement:
        """Element x + y*sqrt(D) with rational x, y."""
        x = Fraction(x)
        y = Fraction(y)
        return FieldElement(self, x - y * self.D, 2 * y)

    def fundamental_unit(self) -> FieldElement:
        return FieldElement(self, *self.fund_unit_coords)

    def o_f(self) -> IdealHNF:
        return IdealHNF.unit_ideal(self)

    def __repr__(self):
        return f"FieldContext(Q(sqrt {self.D}))"


def _fundamental_unit_coords(D: int) -> tuple[tuple[Fraction, Fraction], int]:
    """Fundamental unit (x + y sqrt D)/2 > 1 via Pell x^2 - D y^2 = +-4."""
    best = None
    for rhs in (-4, 4):
        for x, y in diop_DN(D, rhs):
            x, y = abs(int(x)), abs(int(y))
            if y == 0:
                continue
            cand = (x, y, 1 if rhs == 4 else -1)
            if best is None or (x, y) < (best[0], best[1]):
                best = cand
    if best is None:
        raise PadicRegError(f"no fundamental unit found for D={D}")
    x, y, norm = best
    # (x + y sqrt D)/2 = a + b*w with b = y, a = (x - y*D)/2
    a = Fraction(x - y * D, 2)
    return (a, Fraction(y)), norm


def field_create(D: int) -> FieldContext:
    """Build the context for Q(sqrt(D)), D a fundamental discriminant."""
    if D <= 0:
        raise NegativeDiscriminant(f"D = {D} must be positive")
    if not is_fundamental_discriminant(D):
        raise NotFundamentalDiscriminant(f"D = {D} is not a fundamental discriminant")
    if D % 4 not in (0, 1):
        raise NotFundamentalDiscriminant(f"D = {D} not congruent to 0 or 1 mod 4")
    w_norm = D * (D - 1) // 4
    coords, unit_norm = _fundamental_unit_coords(D)
    ctx0 = FieldContext(D, w_norm, coords, unit_norm, 1, 1)
    h = _class_number_brute(ctx0)
    h_plus = h if unit_norm == -1 else 2 * h
    return FieldContext(D, w_norm, coords, unit_norm, h, h_plus)


def _minkowski_bound(D: int) -> int:
    return isqrt(D) // 2 + 1


def _class_number_brute(ctx: FieldContext) -> int:
    """Class number assuming small discriminant: check primes below Minkowski."""
    bound = _minkowski_bound(ctx.D)
    for q in sympy.primerange(2, bound + 1):
        for pid in prime_ideals_above(ctx, q):
            if find_generator(ctx, pid) is None:
                return 2  # not trivially h=1; exact value not needed beyond "!= 1"
    return 1


@lru_cache(maxsize=None)
def _w_minpoly_roots_mod(D: int, q: int) -> tuple[int, ...]:
    """Roots t of w^2 - D w + D(D-1)/4 mod q."""
    wn = D * (D - 1) // 4
    return tuple(t for t in range(q) if (t * t - D * t + wn) % q == 0)


def splitting_type(ctx: FieldContext, q: int) -> str:
    if ctx.D % q == 0:
        return "ramified"
    roots = _w_minpoly_roots_mod(ctx.D, q)
    return "split" if len(roots) == 2 else ("ramified" if len(roots) == 1 else "inert")


def prime_ideals_above(ctx: FieldContext, q: int) -> list[IdealHNF]:
    """Prime ideals of O_F over the rational prime q, deterministic order."""
    roots = _w_minpoly_roots_mod(ctx.D, q)
    qel = ctx.elem(q)
    w = ctx.gen()
    if not roots:
        return [IdealHNF.from_generators(ctx, [qel])]
    out = []
    for t in sorted(set(roots)):
        out.append(IdealHNF.from_generators(ctx, [qel, w - ctx.elem(t)]))
    if len(out) == 2 and out[0].key() == out[1].key():
        out = out[:1]
    return out


def find_generator(ctx: FieldContext, ideal: IdealHNF, sign_pattern=None) -> FieldElement | None:
    """Search a generator of an integral ideal; optionally force embedding signs.

    Bounded search: a generator, when it exists, can be unit-scaled so that
    both embeddings lie within sqrt(N * eps) where eps is the totally positive
    fundamental unit; we enumerate the corresponding box.
    """
    n = ideal.norm()
    assert n.denominator == 1
    n = int(n)
    if n == 1:
        cand = ctx.one()
        return _fix_signs(ctx, cand, sign_pattern)
    eps = ctx.fundamental_unit()
    eps_tp = eps if eps.norm() == 1 else eps * eps
    import mpmath

    bound = mpmath.sqrt(n * abs(eps_tp.embedding_mpf(2))) * 1.01 + 1
    b0, b1 = ideal.lat.basis()
    e0 = FieldElement(ctx, *b0)
    e1 = FieldElement(ctx, *b1)
    # Enumerate s*e0 + t*e1 with embeddings bounded by `bound`.
    s20, s21 = e0.embedding_mpf(2), e1.embedding_mpf(2)
    s10, s11 = e0.embedding_mpf(1), e1.embedding_mpf(1)
    det = s20 * s11 - s21 * s10
    tmax = int(abs((abs(s20) + abs(s10)) * bound / abs(det))) + 2
    for t in range(-tmax, tmax + 1):
        # solve |s*s20 + t*s21| <= bound for s
        lo = (-bound - t * s21) / s20
        hi = (bound - t * s21) / s20
        if lo > hi:
            lo, hi = hi, lo
        for s in range(int(mpmath.floor(lo)) - 1, int(mpmath.ceil(hi)) + 2):
            if s == 0 and t == 0:
                continue
            cand = e0 * ctx.elem(s) + e1 * ctx.elem(t)
            if abs(cand.norm()) == n:
                res = _fix_signs(ctx, cand, sign_pattern)
                if res is not None and IdealHNF.principal(ctx, res).key() == ideal.key():
                    return res
    return None


def _fix_signs(ctx: FieldContext, x: FieldElement, sign_pattern) -> FieldElement | None:
    """Multiply x by a unit to reach the requested embedding sign pattern."""
    if sign_pattern is None:
        return x
    eps = ctx.fundamental_unit()
    candidates = []
    u = ctx.one()
    for _ in range(4):
        candidates.extend([u, -u])
        u = u * eps
    for c in candidates:
        y = x * c
        if (y.embedding_sign(1), y.embedding_sign(2)) == sign_pattern:
            return y
    return None


def totally_positive_fundamental_unit(ctx: FieldContext) -> FieldElement:
    eps = ctx.fundamental_unit()
    if eps.norm() == -1:
        eps = eps * eps
    if not eps.is_totally_positive():
        eps = -eps
    return eps


def totally_positive_unit(ctx: FieldContext, f: IdealHNF) -> FieldElement:
    """Generator of E(f) = totally positive units congruent to 1 mod f,
    oriented so that sigma1(eps) < sigma2(eps)."""
    if not f.is_integral() or f.norm() == 0:
        raise PadicRegError("conductor must be a nonzero integral ideal")
    eps_plus = totally_positive_fundamental_unit(ctx)
    one = ctx.one()
    cand = eps_plus
    k = 1
    while not f.contains(cand - one):
        cand = cand * eps_plus
        k += 1
        if k > 4 * int(f.norm()) + 8:
            raise PadicRegError("could not find unit congruent to 1 (bound exceeded)")
    # orient: sigma1 < sigma2 means positive w-coefficient
    if cand.b < 0:
        cand = cand.inverse()
    assert cand.b > 0
    return cand


# ---------------------------------------------------------------------------
# Finite abelian groups given by explicit element tables

class FiniteAbelianGroup:
    """Explicit finite abelian group: hashable element keys plus a
    multiplication callback.  The invariant-factor basis (used to enumerate
    characters) is computed lazily via Smith normal form of the relation
    lattice of a greedy generating set."""

    def __init__(self, elements, mul, identity):
        self.elements = list(elements)
        self.mul = mul
        self.identity = identity
        self._basis_done = False

    def _order_of(self, g):
        n = 1
        x = g
        while x != self.identity:
            x = self.mul(x, g)
            n += 1
        return n

    def _power(self, g, e: int):
        x = self.identity
        for _ in range(e):
            x = self.mul(x, g)
        return x

    def _ensure_basis(self):
        if self._basis_done:
            return
        self._basis_done = True
        # Greedy generating set, preferring high-order elements.
        by_order = sorted(self.elements, key=self._order_of, reverse=True)
        gens = []
        generated = {self.identity}
        for e in by_order:
            if len(generated) == len(self.elements):
                break
            if e in generated:
                continue
            gens.append(e)
            closure = set(generated)
            frontier = list(generated)
            while frontier:
                x = frontier.pop()
                for g in gens:
                    y = self.mul(x, g)
                    if y not in closure:
                        closure.add(y)
                        frontier.append(y)
            generated = closure
        self.gens = gens
        t = len(gens)
        if t == 0:
            self.invariants = []
            self.basis_elements = []
            self.log_table = {self.identity: ()}
            return
        orders = [self._order_of(g) for g in gens]
        powers = [[self._power(g, e) for e in range(o)] for g, o in zip(gens, orders)]
        from itertools import product as iproduct

        rel_rows = [[orders[i] if j == i else 0 for j in range(t)] for i in range(t)]
        seen: dict = {}
        for vec in iproduct(*[range(o) for o in orders]):
            x = powers[0][vec[0]]
            for i in range(1, t):
                x = self.mul(x, powers[i][vec[i]])
            if x in seen:
                rel_rows.append([a - b for a, b in zip(vec, seen[x])])
            else:
                seen[x] = vec
        from .util import smith_normal_form

        _u, s, v = smith_normal_form(rel_rows)
        vinv = _integer_matrix_inverse(v)
        self.invariants = []
        self.basis_elements = []
        for j in range(t):
            d = s[j][j]
            if d == 1:
                continue
            # h_j = prod_i gens_i^{(V^-1)[j][i]}
            h = self.identity
            for i in range(t):
                e = vinv[j][i] % orders[i]
                h = self.mul(h, powers[i][e])
            self.invariants.append(d)
            self.basis_elements.append(h)
        table = {}
        for vec in iproduct(*[range(d) for d in self.invariants]):
            x = self.identity
            for h, e in zip(self.basis_elements, vec):
                x = self.mul(x, self._power(h, e))
            if x in table:
                raise PadicRegError("abelian group decomposition not injective")
            table[x] = vec
        if len(table) != len(self.elements):
            raise PadicRegError("abelian group decomposition failed")
        self.log_table = table

    def order(self) -> int:
        return len(self.elements)

    def exponent(self) -> int:
        self._ensure_basis()
        m = 1
        for d in self.invariants:
            m = m * d // gcd(m, d)
        return m

    def log(self, x):
        self._ensure_basis()
        return self.log_table[x]


def _integer_matrix_inverse(v: list[list[int]]) -> list[list[int]]:
    """Inverse of a unimodular integer matrix via fraction-free elimination."""
    n = len(v)
    m = [[Fraction(v[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    out = [[m[i][n + j] for j in range(n)] for i in range(n)]
    res = [[int(x) for x in row] for row in out]
    for i in range(n):
        for j in range(n):
            if out[i][j] != res[i][j]:
                raise PadicRegError("matrix not unimodular")
    return res


# ---------------------------------------------------------------------------
# Narrow ray class group

class RayClassGroup:
    """Narrow ray class group of conductor f (both infinite places included).

    Raw group: (O/f)^* x {+-1}^2; quotient by the closure of the images of
    -1 and the fundamental unit.  Requires narrow class number one.
    """

    def __init__(self, ctx: FieldContext, f: IdealHNF, _allow_h_plus=False):
        if not f.is_integral():
            raise PadicRegError("conductor must be integral")
        if ctx.narrow_class_number != 1 and not _allow_h_plus:
            raise UnsupportedClassNumber(
                f"narrow class number {ctx.narrow_class_number} != 1 unsupported"
            )
        self.ctx = ctx
        self.f = f
        self._build()

    def _build(self):
        ctx, f = self.ctx, self.f
        unit_residues = []
        for r in f.residues():
            if r.is_zero():
                if f.norm() == 1:
                    unit_residues.append((int(r.a), int(r.b)))
                continue
            if IdealHNF.principal(ctx, r).add(f).norm() == 1:
                unit_residues.append((int(r.a), int(r.b)))
        self.unit_residues = unit_residues
        raw_elements = [(ur, s1, s2) for ur in unit_residues for s1 in (1, -1) for s2 in (1, -1)]

        def raw_mul(x, y):
            (xa, xb), xs1, xs2 = x
            (ya, yb), ys1, ys2 = y
            prod = FieldElement(ctx, xa, xb) * FieldElement(ctx, ya, yb)
            red = f.reduce(prod)
            return ((int(red.a), int(red.b)), xs1 * ys1, xs2 * ys2)

        one_res = f.reduce(ctx.one())
        raw_identity = ((int(one_res.a), int(one_res.b)), 1, 1)

        # Subgroup H generated by images of -1 and the fundamental unit.
        eps = ctx.fundamental_unit()
        gens = []
        for u in (-ctx.one(), eps):
            red = f.reduce(_integral_rep_mod(ctx, f, u))
            gens.append(
                ((int(red.a), int(red.b)), u.embedding_sign(1), u.embedding_sign(2))
            )
        H = {raw_identity}
        frontier = [raw_identity]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = raw_mul(x, g)
                if y not in H:
                    H.add(y)
                    frontier.append(y)
        # Cosets.
        coset_of = {}
        cosets = []
        for e in raw_elements:
            if e in coset_of:
                continue
            cid = len(cosets)
            members = set()
            for h in H:
                m = raw_mul(e, h)
                coset_of[m] = cid
                members.add(m)
            cosets.append(min(members))  # canonical representative
        self._raw_mul = raw_mul
        self._coset_of = coset_of
        self.coset_reps = cosets
        ids = list(range(len(cosets)))

        def mul(i, j):
            return coset_of[raw_mul(cosets[i], cosets[j])]

        self.group = FiniteAbelianGroup(ids, mul, coset_of[raw_identity])
        self.identity = coset_of[raw_identity]

    def order(self) -> int:
        return self.group.order()

    def class_of_element(self, x: FieldElement) -> int:
        """Class of the principal ideal (x), x coprime to f."""
        xr = _integral_rep_mod(self.ctx, self.f, x)
        red = self.f.reduce(xr)
        raw = ((int(red.a), int(red.b)), x.embedding_sign(1), x.embedding_sign(2))
        if raw not in self._coset_of:
            raise PadicRegError("element not coprime to the conductor")
        return self._coset_of[raw]

    def class_of(self, ideal: IdealHNF) -> int:
        """Class of an integral/fractional ideal coprime to f (h+ = 1)."""
        num = ideal
        scale_elt = self.ctx.one()
        if ideal.lat.den != 1:
            d = ideal.lat.den
            num = ideal.scale(Fraction(d))
            scale_elt = self.ctx.elem(Fraction(1, d))
        g = find_generator(self.ctx, num, sign_pattern=(1, 1))
        if g is None:
            raise UnsupportedClassNumber("no totally positive generator found")
        return self.class_of_element(g * scale_elt)

    def sign_class(self, s1: int, s2: int) -> int:
        one = self.f.reduce(self.ctx.one())
        raw = ((int(one.a), int(one.b)), s1, s2)
        return self._coset_of[raw]

    def mul(self, i: int, j: int) -> int:
        return self._coset_of[self._raw_mul(self.coset_reps[i], self.coset_reps[j])]

    def inv(self, i: int) -> int:
        if i == self.identity:
            return i
        x = i
        prev = i
        while x != self.identity:
            prev = x
            x = self.mul(x, i)
        return prev

    def element_order(self, i: int) -> int:
        n = 1
        x = i
        while x != self.identity:
            x = self.mul(x, i)
            n += 1
        return n


def _integral_rep_mod(ctx: FieldContext, f: IdealHNF, x: FieldElement) -> FieldElement:
    """Integral element congruent to x mod f for x with denominator coprime to f."""
    if x.is_integral():
        return x
    d = x.a.denominator
    d = d * x.b.denominator // gcd(d, x.b.denominator)
    # need inverse of d mod f; d coprime to f required
    nf = int(f.norm())
    if gcd(d, nf) != 1:
        # denominator shares support with f only if truly non-coprime
        dd = d
        g = gcd(dd, nf)
        raise PadicRegError("element has denominator sharing support with conductor")
    dinv = pow(d, -1, nf)
    y = x * ctx.elem(d)  # integral now? maybe not if b still fractional
    if not y.is_integral():
        raise PadicRegError("unexpected non-integral element")
    return y * ctx.elem(dinv)


# ---------------------------------------------------------------------------
# Characters

class Character:
    """Character of a RayClassGroup with exact values in Z[zeta_m].

    Stored as exponent map: chi(class) = zeta_m^exp(class), m = group exponent
    (or the character order after normalization).
    """

    def __init__(self, rcg: RayClassGroup, exps: tuple[int, ...]):
        self.rcg = rcg
        g = rcg.group
        g._ensure_basis()
        m = g.exponent() if g.invariants else 1
        table = {}
        for cls, vec in g.log_table.items():
            e = 0
            for inv, c, v in zip(g.invariants, exps, vec):
                e += c * v * (m // inv)
            table[cls] = e % m if m else 0
        order = 1
        for e in table.values():
            if e:
                order = order * (m // gcd(m, e)) // gcd(order, m // gcd(m, e))
        # reduce exponents to the character order
        self.order = order
        self.exp_table = {cls: (e * order // m) % order if m else 0 for cls, e in table.items()}
        self.exps = exps

    def value_exponent(self, cls: int) -> int:
        return self.exp_table[cls]

    def value(self, cls: int) -> "CycRat":
        from .cyclotomic import CycRat

        return CycRat.root_of_unity(self.order, self.exp_table[cls])

    def on_ideal(self, ideal: IdealHNF) -> "CycRat":
        from .cyclotomic import CycRat

        if not ideal.add(self.rcg.f).norm() == 1:
            return CycRat.zero(self.order)
        return self.value(self.rcg.class_of(ideal))

    def is_totally_odd(self) -> bool:
        rcg = self.rcg
        return self._is_minus_one(rcg.sign_class(-1, 1)) and self._is_minus_one(
            rcg.sign_class(1, -1)
        )

    def _is_minus_one(self, cls: int) -> bool:
        e = self.exp_table[cls]
        return self.order % 2 == 0 and e == self.order // 2

    def is_trivial_on(self, cls: int) -> bool:
        return self.exp_table[cls] == 0

    def conductor_is(self, f: IdealHNF) -> bool:
        """True when this character does not factor through any proper divisor of f."""
        ctx = self.rcg.ctx
        for div in _proper_divisors(ctx, f):
            if self._factors_through(div):
                return False
        return True

    def _factors_through(self, div: IdealHNF) -> bool:
        """Does chi kill all classes of (alpha), alpha tot.pos., alpha = 1 mod div?

        The infinite places stay in the modulus, so only sign pattern (+,+)
        enters.  The kernel of G_f -> G_div is generated by the classes of
        residues r mod f with r = 1 mod div, r coprime to f.
        """
        ctx = self.rcg.ctx
        f = self.rcg.f
        for x in _residues_congruent_one(ctx, f, div):
            raw = ((int(x.a), int(x.b)), 1, 1)
            cls = self.rcg._coset_of.get(raw)
            if cls is None:
                continue  # residue not coprime to f
            if self.exp_table[cls] != 0:
                return False
        return True


def _residues_congruent_one(ctx: FieldContext, f: IdealHNF, div: IdealHNF) -> list[FieldElement]:
    """Residues x mod f with x = 1 mod div: the additive coset 1 + (div mod f)."""
    b0, b1 = div.lat.basis()
    gens = [FieldElement(ctx, *b0), FieldElement(ctx, *b1)]
    zero = f.reduce(ctx.zero())
    seen = {(zero.a, zero.b): zero}
    frontier = [zero]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = f.reduce(x + g)
            k = (y.a, y.b)
            if k not in seen:
                seen[k] = y
                frontier.append(y)
    one = ctx.one()
    return [f.reduce(one + y) for y in seen.values()]


def _proper_divisors(ctx: FieldContext, f: IdealHNF) -> list[IdealHNF]:
    """All integral ideals properly dividing f (excluding f itself)."""
    fact = factor_ideal(ctx, f)
    from itertools import product as iproduct

    primes = list(fact.keys())
    ranges = [range(fact[p] + 1) for p in primes]
    out = []
    for vec in iproduct(*ranges):
        if list(vec) == [fact[p] for p in primes]:
            continue
        ideal = IdealHNF.unit_ideal(ctx)
        for p, e in zip(primes, vec):
            for _ in range(e):
                ideal = ideal * p
        out.append(ideal)
    return out


def factor_ideal(ctx: FieldContext, ideal: IdealHNF) -> dict[IdealHNF, int]:
    """Factor an integral ideal into prime ideals."""
    assert ideal.is_integral()
    n = int(ideal.norm())
    out: dict[IdealHNF, int] = {}
    for q, _e in sympy.factorint(n).items():
        for pid in prime_ideals_above(ctx, q):
            v = ideal.valuation(pid)
            if v > 0:
                out[pid] = v
    return out


def enumerate_characters(rcg: RayClassGroup) -> list[Character]:
    from itertools import product as iproduct

    rcg.group._ensure_basis()
    invs = rcg.group.invariants
    out = []
    for exps in iproduct(*[range(d) for d in invs]):
        out.append(Character(rcg, tuple(exps)))
    return out


# ---------------------------------------------------------------------------
# p-classification and pi generators

def classify_p(
    ctx: FieldContext, f: IdealHNF, chi: Character, p: int
) -> tuple[list[IdealHNF], list[IdealHNF], list[IdealHNF], int]:
    """Partition primes above p into (R, R0, R1); returns (R, R0, R1, r)."""
    if splitting_type(ctx, p) == "ramified":
        raise RamifiedP(f"p = {p} ramifies in F")
    R, R0, R1 = [], [], []
    for pid in prime_ideals_above(ctx, p):
        if f.add(pid).norm() != 1 and pid.divides(f):
            R0.append(pid)
            continue
        val = chi.on_ideal(pid)
        if val.is_one():
            R.append(pid)
        else:
            R1.append(pid)
    return R, R0, R1, len(R)


def pi_generator(ctx: FieldContext, rcg: RayClassGroup, p_ideal: IdealHNF) -> tuple[int, FieldElement]:
    """(e, pi) with (pi) = p_ideal^e, pi totally positive, pi = 1 mod f."""
    f = rcg.f
    if f.add(p_ideal).norm() != 1:
        raise PadicRegError("prime not coprime to the conductor")
    e = rcg.element_order(rcg.class_of(p_ideal))
    power = IdealHNF.unit_ideal(ctx)
    for _ in range(e):
        power = power * p_ideal
    g = find_generator(ctx, power, sign_pattern=(1, 1))
    if g is None:
        raise UnsupportedClassNumber("no totally positive generator for p^e")
    # adjust by units congruent-to-1 structure: need g == 1 mod f
    eps_plus = totally_positive_fundamental_unit(ctx)
    one = ctx.one()
    cand = g
    ord_eps = 1
    probe = eps_plus
    while not f.contains(probe - one):
        probe = probe * eps_plus
        ord_eps += 1
        if ord_eps > 16 * int(f.norm()) + 16:
            raise PadicRegError("unit order bound exceeded")
    for k in range(ord_eps):
        if f.contains(cand - one):
            return e, cand
        cand = cand * eps_plus
    raise PadicRegError("no generator congruent to 1 mod f; class order inconsistent")
