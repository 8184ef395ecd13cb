"""Exact arithmetic in Q(zeta_m): vectors of rationals modulo Phi_m(x).

Character values and chi-weighted zeta sums stay in this representation
until the final p-adic (or complex) embedding, so cyclotomic identities can
be asserted exactly.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

import sympy


@lru_cache(maxsize=None)
def cyclotomic_coeffs(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m(x), ascending degree."""
    poly = sympy.cyclotomic_poly(m, sympy.Symbol("x"))
    p = sympy.Poly(poly, sympy.Symbol("x"))
    return tuple(int(c) for c in reversed(p.all_coeffs()))


@lru_cache(maxsize=None)
def _reduction_table(m: int) -> tuple[tuple[Fraction, ...], ...]:
    """x^(d+k) mod Phi_m as vectors of length d, for k = 0..d-1."""
    coeffs = cyclotomic_coeffs(m)
    d = len(coeffs) - 1
    rows = []
    # x^d = -sum_{i<d} c_i x^i  (Phi_m monic)
    base = [Fraction(-coeffs[i]) for i in range(d)]
    cur = base[:]
    rows.append(tuple(cur))
    for _ in range(1, d):
        nxt = [Fraction(0)] * d
        for i in range(d - 1):
            nxt[i + 1] += cur[i]
        top = cur[d - 1]
        if top:
            for i in range(d):
                nxt[i] += top * base[i]
        rows.append(tuple(nxt))
        cur = nxt
    return tuple(rows)


class CycRat:
    """Element of Q(zeta_m)."""

    __slots__ = ("m", "vec")

    def __init__(self, m: int, vec):
        self.m = m
        d = phi_deg(m)
        v = list(vec) + [Fraction(0)] * (d - len(vec))
        self.vec = tuple(Fraction(x) for x in v[:d])

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zero(m: int = 1) -> "CycRat":
        return CycRat(m, [])

    @staticmethod
    def one(m: int = 1) -> "CycRat":
        return CycRat(m, [Fraction(1)])

    @staticmethod
    def from_rational(x, m: int = 1) -> "CycRat":
        return CycRat(m, [Fraction(x)])

    @staticmethod
    def root_of_unity(m: int, k: int) -> "CycRat":
        k %= m
        d = phi_deg(m)
        if k < d:
            vec = [Fraction(0)] * k + [Fraction(1)]
            return CycRat(m, vec)
        out = CycRat(m, [Fraction(1)])
        gen = CycRat(m, [Fraction(0), Fraction(1)]) if d > 1 else CycRat(m, [_root_rational(m)])
        for _ in range(k):
            out = out * gen
        return out

    # -- ring ops ------------------------------------------------------------
    def lift(self, m2: int) -> "CycRat":
        """Image under zeta_m -> zeta_{m2}^{m2/m}; m must divide m2."""
        if self.m == m2:
            return self
        assert m2 % self.m == 0
        step = m2 // self.m
        out = CycRat.zero(m2)
        for k, c in enumerate(self.vec):
            if c:
                out = out + CycRat.root_of_unity(m2, k * step).scale(c)
        return out

    def _pair(self, other: "CycRat") -> tuple["CycRat", "CycRat"]:
        if self.m == other.m:
            return self, other
        m2 = self.m * other.m // gcd(self.m, other.m)
        return self.lift(m2), other.lift(m2)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycRat.from_rational(other, self.m)
        a, b = self._pair(other)
        return CycRat(a.m, [x + y for x, y in zip(a.vec, b.vec)])

    __radd__ = __add__

    def __neg__(self):
        return CycRat(self.m, [-x for x in self.vec])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycRat.from_rational(other, self.m)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "CycRat":
        c = Fraction(c)
        return CycRat(self.m, [c * x for x in self.vec])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        a, b = self._pair(other)
        d = len(a.vec)
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a.vec):
            if not x:
                continue
            for j, y in enumerate(b.vec):
                if y:
                    prod[i + j] += x * y
        red = _reduction_table(a.m)
        out = list(prod[:d])
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                row = red[k - d]
                for i in range(d):
                    out[i] += c * row[i]
        return CycRat(a.m, out)

    __rmul__ = __mul__

    def inverse(self) -> "CycRat":
        """Inverse via exact linear algebra on the multiplication matrix."""
        d = len(self.vec)
        cols = []
        basis = [CycRat(self.m, [Fraction(int(i == j)) for i in range(d)]) for j in range(d)]
        for b in basis:
            cols.append((self * b).vec)
        # Solve M x = e0 where M[i][j] = cols[j][i].
        mat = [[cols[j][i] for j in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
        for col in range(d):
            piv = next((r for r in range(col, d) if mat[r][col] != 0), None)
            if piv is None:
                raise ZeroDivisionError("non-invertible cyclotomic element")
            mat[col], mat[piv] = mat[piv], mat[col]
            pv = mat[col][col]
            mat[col] = [x / pv for x in mat[col]]
            for r in range(d):
                if r != col and mat[r][col] != 0:
                    f = mat[r][col]
                    mat[r] = [x - f * y for x, y in zip(mat[r], mat[col])]
        return CycRat(self.m, [mat[i][d] for i in range(d)])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        a, b = self._pair(other)
        return a * b.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycRat.from_rational(other, self.m)
        if not isinstance(other, CycRat):
            return NotImplemented
        a, b = self._pair(other)
        return a.vec == b.vec

    def __hash__(self):
        return hash((self.m, self.vec))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.vec)

    def is_one(self) -> bool:
        return self == CycRat.one(self.m)

    def is_rational(self) -> bool:
        return all(x == 0 for x in self.vec[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return self.vec[0]

    def __repr__(self):
        if self.m == 1 or self.is_rational():
            return f"CycRat({self.vec[0]})"
        terms = [f"{c}*z{self.m}^{k}" for k, c in enumerate(self.vec) if c]
        return "CycRat(" + " + ".join(terms) + ")"

    # -- embeddings ------------------------------------------------------------
    def to_complex(self, dps: int = 30):
        import mpmath

        with mpmath.workdps(dps):
            z = mpmath.exp(2j * mpmath.pi / self.m)
            acc = mpmath.mpc(0)
            for k, c in enumerate(self.vec):
                if c:
                    acc += (mpmath.mpf(c.numerator) / c.denominator) * z**k
            return acc


def phi_deg(m: int) -> int:
    if m == 1:
        return 1
    return len(cyclotomic_coeffs(m)) - 1


def _root_rational(m: int) -> Fraction:
    # zeta_1 = 1, zeta_2 = -1: the only cases with phi(m) = 1.
    if m == 1:
        return Fraction(1)
    if m == 2:
        return Fraction(-1)
    raise ValueError(f"no rational primitive root for m={m}")
