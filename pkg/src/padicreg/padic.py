"""Arbitrary-precision arithmetic in Q_p and its unramified quadratic
extension, with explicit absolute-precision tracking.

Elements are coefficient vectors on a fixed basis (1,) or (1, theta) with
theta a root of a monic quadratic irreducible mod p.  Precision is absolute
and pessimistic: every operation's claimed precision is a lower bound on the
true agreement with the exact result.  The Iwasawa branch log_p(p) = 0 is
used throughout.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import NoRootInSupportedExtension, PadicRegError, ZeroInput

INF = float("inf")


class PadicField:
    """Q_p (deg=1) or the unramified quadratic extension (deg=2)."""

    def __init__(self, p: int, deg: int = 1, modulus: tuple[int, int] | None = None, prec: int = 40):
        if deg not in (1, 2):
            raise PadicRegError("only degrees 1 and 2 supported")
        self.p = p
        self.deg = deg
        self.prec = prec
        if deg == 2:
            if modulus is None:
                modulus = _default_modulus(p)
            t, n = modulus
            # theta^2 = t*theta - n, and x^2 - t x + n must be irreducible mod p
            if _has_root_mod_p(p, t, n):
                raise PadicRegError("modulus reducible mod p")
            self.mod_t = t % p**prec
            self.mod_n = n % p**prec
            self.mod_t_exact = t
            self.mod_n_exact = n
        else:
            self.mod_t = self.mod_n = 0
            self.mod_t_exact = self.mod_n_exact = 0

    def __repr__(self):
        if self.deg == 1:
            return f"Qp({self.p}, prec={self.prec})"
        return f"Qp2({self.p}, x^2-{self.mod_t_exact}x+{self.mod_n_exact}, prec={self.prec})"

    def __eq__(self, other):
        return (
            isinstance(other, PadicField)
            and (self.p, self.deg, self.mod_t_exact, self.mod_n_exact) ==
            (other.p, other.deg, other.mod_t_exact, other.mod_n_exact)
        )

    def __hash__(self):
        return hash((self.p, self.deg, self.mod_t_exact, self.mod_n_exact))

    # -- constructors ------------------------------------------------------
    def zero(self, prec=None):
        return PadicNumber(self, (0, 0), prec if prec is not None else self.prec)

    def one(self, prec=None):
        return PadicNumber(self, (1, 0), prec if prec is not None else self.prec)

    def from_int(self, n: int, prec=None):
        return PadicNumber(self, (n, 0), prec if prec is not None else self.prec)

    def from_rational(self, x: Fraction, prec=None):
        x = Fraction(x)
        prec = prec if prec is not None else self.prec
        if x == 0:
            return self.zero(prec)
        num, den = x.numerator, x.denominator
        v = 0
        while num % self.p == 0:
            num //= self.p
            v += 1
        while den % self.p == 0:
            den //= self.p
            v -= 1
        rel = prec - v
        if rel <= 0:
            return self.zero(prec)
        m = self.p**rel
        unit = num * pow(den, -1, m) % m
        if v >= 0:
            return PadicNumber(self, (unit * self.p**v, 0), prec)
        return PadicNumber(self, (unit, 0), prec, _val_shift=v)

    def from_vector(self, c0: int, c1: int = 0, prec=None):
        return PadicNumber(self, (c0, c1), prec if prec is not None else self.prec)

    def prime_field(self) -> "PadicField":
        if self.deg == 1:
            return self
        return PadicField(self.p, 1, prec=self.prec)

    def residue_card(self) -> int:
        return self.p**self.deg

    def residue_elements(self):
        """All residue-field elements as (c0, c1) pairs."""
        if self.deg == 1:
            return [(a, 0) for a in range(self.p)]
        return [(a, b) for b in range(self.p) for a in range(self.p)]


def _default_modulus(p: int) -> tuple[int, int]:
    """x^2 - n with n the smallest quadratic non-residue (p odd)."""
    if p == 2:
        return (1, 1)  # x^2 - x + 1
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return (0, -n)
    raise PadicRegError("no non-residue found")


def _has_root_mod_p(p: int, t: int, n: int) -> bool:
    return any((x * x - t * x + n) % p == 0 for x in range(p))


class PadicNumber:
    """Element with absolute precision: known modulo p^absprec.

    The vector may carry a negative-valuation shift: value = p^shift * (c0 + c1 theta)
    with c0, c1 integers; absprec refers to the TOTAL value.
    """

    __slots__ = ("parent", "vec", "absprec", "shift")

    def __init__(self, parent: PadicField, vec, absprec, _val_shift: int = 0):
        self.parent = parent
        self.shift = _val_shift
        if absprec == INF:
            self.absprec = INF
            self.vec = tuple(list(vec) + [0])[:2]
            return
        absprec_int = int(absprec)
        self.absprec = absprec_int
        m = parent.p ** max(0, absprec_int - _val_shift)
        c = list(vec) + [0]
        if m > 0:
            c = [x % m for x in c[:2]]
        self.vec = tuple(c[:2])

    # -- helpers -------------------------------------------------------------
    def _vp_int(self, n: int) -> int:
        if n == 0:
            return 1 << 60
        v = 0
        p = self.parent.p
        while n % p == 0:
            n //= p
            v += 1
        return v

    def valuation(self):
        """Exact valuation when nonzero at working precision, else +inf marker."""
        v = min(self._vp_int(self.vec[0]), self._vp_int(self.vec[1]))
        if v >= (1 << 59):
            return INF
        v += self.shift
        if v >= self.absprec:
            return INF
        return v

    def is_zero(self) -> bool:
        return self.valuation() == INF

    def precision(self):
        return self.absprec

    # -- normalization: clear negative shift against vector p-powers ---------
    def _normalized(self) -> "PadicNumber":
        if self.shift == 0:
            return self
        p = self.parent.p
        c0, c1 = self.vec
        s = self.shift
        while s < 0 and c0 % p == 0 and c1 % p == 0 and (c0 or c1):
            c0 //= p
            c1 //= p
            s += 1
        if s == 0:
            return PadicNumber(self.parent, (c0, c1), self.absprec)
        return PadicNumber(self.parent, (c0, c1), self.absprec, _val_shift=s)

    # -- ring ops --------------------------------------------------------------
    def _common(self, other: "PadicNumber"):
        assert self.parent == other.parent
        s = min(self.shift, other.shift)
        p = self.parent.p
        a = [c * p ** (self.shift - s) for c in self.vec]
        b = [c * p ** (other.shift - s) for c in other.vec]
        return a, b, s

    def __add__(self, other):
        other = self._coerce(other)
        a, b, s = self._common(other)
        prec = min(self.absprec, other.absprec)
        return PadicNumber(self.parent, (a[0] + b[0], a[1] + b[1]), prec, _val_shift=s)._normalized()

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return PadicNumber(self.parent, (-self.vec[0], -self.vec[1]), self.absprec, _val_shift=self.shift)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            return other
        if isinstance(other, int):
            return self.parent.from_int(other, INF if self.absprec == INF else self.parent.prec + 8)
        if isinstance(other, Fraction):
            return self.parent.from_rational(other, self.parent.prec + 8)
        raise TypeError(f"cannot coerce {type(other)}")

    def __mul__(self, other):
        other = self._coerce(other)
        p = self.parent
        v1, v2 = self.valuation(), other.valuation()
        if v1 == INF and self.absprec == INF:
            return p.zero(INF)
        if v2 == INF and other.absprec == INF:
            return p.zero(INF)
        ev1 = v1 if v1 != INF else self.absprec
        ev2 = v2 if v2 != INF else other.absprec
        prec = min(
            self.absprec + ev2 if self.absprec != INF else INF,
            other.absprec + ev1 if other.absprec != INF else INF,
        )
        a0, a1 = self.vec
        b0, b1 = other.vec
        if p.deg == 1:
            vec = (a0 * b0, 0)
        else:
            # (a0 + a1 th)(b0 + b1 th), th^2 = t th - n
            t, n = p.mod_t_exact, p.mod_n_exact
            vec = (a0 * b0 - a1 * b1 * n, a0 * b1 + a1 * b0 + a1 * b1 * t)
        return PadicNumber(p, vec, prec, _val_shift=self.shift + other.shift)._normalized()

    __rmul__ = __mul__

    def conj(self) -> "PadicNumber":
        """Frobenius (nontrivial automorphism) for deg 2; identity for deg 1."""
        p = self.parent
        if p.deg == 1:
            return self
        t = p.mod_t_exact
        c0, c1 = self.vec
        return PadicNumber(p, (c0 + c1 * t, -c1), self.absprec, _val_shift=self.shift)

    def norm(self) -> "PadicNumber":
        """Field norm to Q_p, returned in the prime field."""
        p = self.parent
        if p.deg == 1:
            return self
        prod = self * self.conj()
        assert prod.vec[1] == 0 or prod.is_zero(), "norm not rational"
        return PadicNumber(p.prime_field(), (prod.vec[0], 0), prod.absprec, _val_shift=prod.shift)

    def trace(self) -> "PadicNumber":
        p = self.parent
        if p.deg == 1:
            return self + self
        s = self + self.conj()
        return PadicNumber(p.prime_field(), (s.vec[0], 0), s.absprec, _val_shift=s.shift)

    def inverse(self) -> "PadicNumber":
        v = self.valuation()
        if v == INF:
            raise ZeroInput("inverse of (numerical) zero")
        p = self.parent
        rel = self.absprec - v if self.absprec != INF else p.prec
        # strip valuation: self = p^v * u
        u = self.unit_part()
        workprec = rel + 2
        m = p.p**workprec
        if p.deg == 1:
            inv0 = pow(u.vec[0], -1, m)
            uinv = PadicNumber(p, (inv0, 0), rel)
        else:
            nrm = u * u.conj()
            ninv = pow(nrm.vec[0], -1, m)
            c = u.conj()
            uinv = PadicNumber(p, (c.vec[0] * ninv, c.vec[1] * ninv), rel)
        return uinv * PadicNumber(p, (1, 0), rel - v if rel != INF else INF, _val_shift=-v)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.parent.one(INF)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def unit_part(self) -> "PadicNumber":
        """u with self = p^v u; valuation must be finite."""
        v = self.valuation()
        if v == INF:
            raise ZeroInput("unit part of zero")
        p = self.parent.p
        k = v - self.shift  # p-power inside the vector
        c0, c1 = self.vec
        c0 //= p**k
        c1 //= p**k
        rel = self.absprec - v if self.absprec != INF else INF
        return PadicNumber(self.parent, (c0, c1), rel)

    # -- comparisons -----------------------------------------------------------
    def agrees_with(self, other, prec=None) -> bool:
        other = self._coerce(other)
        d = self - other
        target = prec if prec is not None else min(self.absprec, other.absprec)
        v = d.valuation()
        return v == INF or v >= target

    def __eq__(self, other):
        if not isinstance(other, (PadicNumber, int, Fraction)):
            return NotImplemented
        return self.agrees_with(other)

    def __hash__(self):
        raise TypeError("inexact p-adic numbers are unhashable")

    def __repr__(self):
        v = self.valuation()
        if v == INF:
            return f"O({self.parent.p}^{self.absprec})"
        return f"{self.digits_str()} + O({self.parent.p}^{self.absprec})"

    def digits_str(self, limit: int = 12) -> str:
        p = self.parent.p
        v = self.valuation()
        if v == INF:
            return "0"
        u = self.unit_part()
        c0, c1 = u.vec
        n = min(limit, u.absprec if u.absprec != INF else limit)
        ds = []
        for i in range(int(n)):
            d0 = c0 % p
            d1 = c1 % p
            ds.append(f"{d0}" if self.parent.deg == 1 or d1 == 0 else f"({d0},{d1})")
            c0 //= p
            c1 //= p
        body = ",".join(ds)
        return f"{p}^{v}*[{body}]"

    def to_json(self):
        v = self.valuation()
        if v == INF:
            return {"zero_mod": f"{self.parent.p}^{self.absprec}"}
        u = self.unit_part()
        return {
            "p": self.parent.p,
            "val": v,
            "unit_vec": [str(u.vec[0]), str(u.vec[1])],
            "prec": str(self.absprec),
        }


# ---------------------------------------------------------------------------
# transcendental-ish operations

def teichmuller(x: PadicNumber) -> PadicNumber:
    """Teichmuller representative of the unit x (root of unity of order
    dividing p^d - 1 congruent to x mod p)."""
    if x.valuation() != 0:
        raise ZeroInput("teichmuller needs a unit")
    par = x.parent
    n = par.prec if x.absprec == INF else min(x.absprec, par.prec)
    y = PadicNumber(par, x.vec, n)
    q = par.p**par.deg
    # y -> y^q gains one digit of agreement with the Teichmuller lift per step
    for _ in range(int(n) + 2):
        y2 = y**q
        y2 = PadicNumber(par, y2.vec, n, _val_shift=y2.shift)
        if y2.agrees_with(y, n):
            return y2
        y = y2
    raise PadicRegError("teichmuller iteration did not stabilize")


def iwasawa_log(x: PadicNumber) -> PadicNumber:
    """log_p with the branch log_p(p) = 0; kills Teichmuller parts."""
    if x.is_zero():
        raise ZeroInput("log of zero")
    u = x.unit_part()
    t = teichmuller(u)
    one_unit = u * t.inverse()
    return _log_one_unit(one_unit)


def _log_one_unit(x: PadicNumber) -> PadicNumber:
    par = x.parent
    z = x - par.one(x.absprec)
    if z.is_zero():
        return par.zero(x.absprec)
    v = z.valuation()
    if v < 1:
        raise PadicRegError("not a 1-unit")
    n = x.absprec if x.absprec != INF else par.prec
    # terms z^j/j: valuation >= j*v - v_p(j); stop when beyond n
    import math

    acc = par.zero(n)
    term = par.one(INF)
    j = 0
    while True:
        j += 1
        # all terms from j onward have valuation >= j*v - log_p(j') for j' >= j
        if j * v - math.floor(math.log(2 * j + 2, par.p)) - 1 >= n + 1:
            break
        term = term * z
        acc = acc + term * Fraction((-1) ** (j + 1), j)
    return PadicNumber(par, acc.vec, n, _val_shift=acc.shift)


def exp_p(x: PadicNumber) -> PadicNumber:
    """p-adic exponential; requires v(x) > 1/(p-1)."""
    par = x.parent
    if x.is_zero():
        return par.one(x.absprec)
    v = x.valuation()
    if v < 1 or (par.p == 2 and v < 2):
        raise PadicRegError("exp_p outside convergence domain")
    n = x.absprec if x.absprec != INF else par.prec
    acc = par.one(n)
    term = par.one(INF)
    j = 0
    while True:
        j += 1
        term = term * x * Fraction(1, j)
        # v(x^j/j!) >= j v - (j-1)/(p-1)
        lower = j * v - (j - 1) // (par.p - 1) - 1
        acc = acc + term
        if lower >= n + 1:
            break
    return PadicNumber(par, acc.vec, n, _val_shift=acc.shift)


def newton_root(parent: PadicField, poly: list, x0: PadicNumber, prec: int) -> PadicNumber:
    """Root of a polynomial (coefficients int/Fraction/PadicNumber) by Newton
    iteration from a simple residue root x0."""

    def ev(x):
        acc = parent.zero(INF)
        for c in reversed(poly):
            acc = acc * x + (c if isinstance(c, PadicNumber) else parent.from_rational(Fraction(c), prec + 8))
        return acc

    dpoly = [i * c for i, c in enumerate(poly)][1:]

    def dev(x):
        acc = parent.zero(INF)
        for c in reversed(dpoly):
            acc = acc * x + (c if isinstance(c, PadicNumber) else parent.from_rational(Fraction(c), prec + 8))
        return acc

    x = PadicNumber(parent, x0.vec, prec + 4, _val_shift=x0.shift)
    for _ in range(prec.bit_length() + 4):
        fx = ev(x)
        if fx.is_zero() or fx.valuation() >= prec + 2:
            break
        x = x - fx / dev(x)
    fx = ev(x)
    if not (fx.is_zero() or fx.valuation() >= prec):
        raise NoRootInSupportedExtension("Newton iteration failed to converge")
    return PadicNumber(parent, x.vec, prec, _val_shift=x.shift)


def cyclotomic_roots_residue(parent: PadicField, m: int) -> list[tuple[int, int]]:
    """Residue-field roots of Phi_m, sorted canonically by (c0, c1)."""
    from .cyclotomic import cyclotomic_coeffs

    coeffs = cyclotomic_coeffs(m)
    roots = []
    for c0, c1 in parent.residue_elements():
        x = PadicNumber(parent, (c0, c1), 1)
        acc = parent.zero(1)
        for c in reversed(coeffs):
            acc = acc * x + parent.from_int(c, 1)
        if acc.is_zero():
            roots.append((c0, c1))
    return sorted(roots)


def embed_cyclotomic(parent: PadicField, m: int, prec: int, residue_choice=None) -> PadicNumber:
    """Image of zeta_m under the declared embedding into the parent field."""
    from .cyclotomic import cyclotomic_coeffs

    if m <= 2:
        return parent.from_int(1 if m == 1 else -1, prec)
    roots = cyclotomic_roots_residue(parent, m)
    if not roots:
        raise NoRootInSupportedExtension(
            f"no root of the {m}-th cyclotomic polynomial in Q_p^{parent.deg} (p={parent.p})"
        )
    pick = roots[0] if residue_choice is None else tuple(residue_choice)
    if pick not in roots:
        raise NoRootInSupportedExtension(f"declared residue {pick} is not a root")
    x0 = PadicNumber(parent, pick, 1)
    return newton_root(parent, list(cyclotomic_coeffs(m)), x0, prec)


def embed_cycrat(parent: PadicField, value, zeta_image: PadicNumber | None, prec: int) -> PadicNumber:
    """Embed a CycRat using a fixed image of its root of unity."""
    acc = parent.zero(prec + 4)
    powz = parent.one(INF)
    for k, c in enumerate(value.vec):
        if c:
            acc = acc + powz * parent.from_rational(c, prec + 4)
        if k + 1 < len(value.vec):
            if zeta_image is None:
                raise PadicRegError("nontrivial cyclotomic value needs a zeta image")
            powz = powz * zeta_image
    return PadicNumber(parent, acc.vec, prec, _val_shift=acc.shift)


def teich_digit_representative(parent: PadicField, x: PadicNumber, level: int) -> PadicNumber:
    """Canonical class representative: Teichmuller digit expansion truncated
    at p^level (digits in mu_{p^d-1} union {0})."""
    if x.valuation() < 0:
        raise PadicRegError("representative needs an integral element")
    acc = parent.zero(INF)
    cur = PadicNumber(parent, x.vec, max(level + 2, int(x.absprec if x.absprec != INF else level + 2)), _val_shift=x.shift)
    ppow = parent.one(INF)
    for i in range(level):
        if cur.is_zero() or cur.valuation() > 0:
            digit = parent.zero(INF)
        else:
            digit = teichmuller(cur)
            digit = PadicNumber(parent, digit.vec, INF)
        acc = acc + ppow * digit
        cur = (cur - digit) * Fraction(1, parent.p)
        ppow = ppow * parent.from_int(parent.p, INF)
    return PadicNumber(parent, acc.vec, INF)
