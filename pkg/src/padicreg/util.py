"""Exact integer/rational helpers shared across the package.

Everything here is plain 2x2 lattice linear algebra over Z, Bernoulli
polynomial tables and Faulhaber-style power sums over rational arithmetic
progressions.  All arithmetic is exact (int / Fraction); floats never enter.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import sympy


# ---------------------------------------------------------------------------
# Bernoulli numbers and polynomials

@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    # minus convention: B_1 = -1/2 (recent sympy defaults to +1/2)
    if n == 1:
        return Fraction(-1, 2)
    b = sympy.bernoulli(n)
    return Fraction(b.p, b.q)


@lru_cache(maxsize=None)
def bernoulli_poly_coeffs(n: int) -> tuple[Fraction, ...]:
    """Coefficients of B_n(x), ascending degree: B_n(x) = sum_k C(n,k) B_{n-k} x^k."""
    from math import comb

    return tuple(Fraction(comb(n, k)) * bernoulli_number(n - k) for k in range(n + 1))


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    coeffs = bernoulli_poly_coeffs(n)
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def hurwitz_zeta_nonpos(k: int, a: Fraction) -> Fraction:
    """zeta_H(-k, a) = -B_{k+1}(a)/(k+1) for integer k >= 0, exact."""
    if k < 0:
        raise ValueError("nonpositive-argument Hurwitz value needs k >= 0")
    return -bernoulli_poly(k + 1, a) / (k + 1)


def power_sum_progression(i: int, beta: Fraction, count: int) -> Fraction:
    """sum_{t=0}^{count-1} (t + beta)^i, exact via Bernoulli polynomials."""
    if count <= 0:
        return Fraction(0)
    if i == 0:
        return Fraction(count)
    return (bernoulli_poly(i + 1, beta + count) - bernoulli_poly(i + 1, beta)) / (i + 1)


# ---------------------------------------------------------------------------
# Perfect squares, sign of u + v*sqrt(D)

def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def sign_quadratic(u: Fraction, v: Fraction, D: int) -> int:
    """Exact sign of u + v*sqrt(D) for rational u, v and non-square D > 0."""
    if v == 0:
        return (u > 0) - (u < 0)
    if u == 0:
        return (v > 0) - (v < 0)
    if u > 0 and v > 0:
        return 1
    if u < 0 and v < 0:
        return -1
    # Opposite signs: compare u^2 against v^2 D.
    diff = u * u - v * v * D
    if diff == 0:
        raise ArithmeticError("sqrt(D) rational; D must be a non-square")
    if u > 0:
        return 1 if diff > 0 else -1
    return -1 if diff > 0 else 1


# ---------------------------------------------------------------------------
# 2-column integer lattices in row HNF
#
# A lattice L of rank 2 inside Q^2 is stored as (den, a, u, c): the rows of
# the integer matrix [[a, 0], [u, c]] divided by den span L, with a, c > 0 and
# 0 <= u < a.  Row (x, y) represents the vector (x, y)/den.

def _hnf_rows(rows: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Row HNF [[a,0],[u,c]] of the lattice spanned by integer rows (x, y).

    Returns (a, u, c) with a, c > 0, 0 <= u < a.  Raises if rank < 2.
    """
    rows = [r for r in rows if r != (0, 0)]
    if not rows:
        raise ValueError("zero lattice")
    # Reduce on the second coordinate to find the minimal positive y.
    work = list(rows)
    while True:
        nz = [r for r in work if r[1] != 0]
        if not nz:
            raise ValueError("lattice has rank < 2")
        piv = min(nz, key=lambda r: abs(r[1]))
        done = True
        new_work = [piv]
        for r in work:
            if r is piv:
                continue
            if r[1] != 0:
                q = r[1] // piv[1]
                r = (r[0] - q * piv[0], r[1] - q * piv[1])
                if r[1] != 0:
                    done = False
            if r != (0, 0):
                new_work.append(r)
        work = new_work
        if done:
            break
    piv = next(r for r in work if r[1] != 0)
    if piv[1] < 0:
        piv = (-piv[0], -piv[1])
    xs = [abs(r[0]) for r in work if r[1] == 0 and r[0] != 0]
    if not xs:
        raise ValueError("lattice has rank < 2")
    a = 0
    for x in xs:
        a = gcd(a, x)
    u, c = piv
    u %= a
    return a, u, c


class Lattice2:
    """Full-rank lattice in Q^2 with canonical HNF basis (immutable)."""

    __slots__ = ("den", "a", "u", "c")

    def __init__(self, den: int, a: int, u: int, c: int):
        g = gcd(gcd(a, u), gcd(c, den))
        self.den = den // g
        self.a = a // g
        self.u = u // g
        self.c = c // g

    @staticmethod
    def from_rows(rows: list[tuple[Fraction, Fraction]]) -> "Lattice2":
        den = 1
        for x, y in rows:
            den = den * x.denominator // gcd(den, x.denominator)
            den = den * y.denominator // gcd(den, y.denominator)
        int_rows = [(int(x * den), int(y * den)) for x, y in rows]
        a, u, c = _hnf_rows(int_rows)
        return Lattice2(den, a, u, c)

    def key(self) -> tuple[int, int, int, int]:
        return (self.den, self.a, self.u, self.c)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice2) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Lattice2(1/{self.den} * [[{self.a},0],[{self.u},{self.c}]])"

    def basis(self) -> list[tuple[Fraction, Fraction]]:
        d = self.den
        return [(Fraction(self.a, d), Fraction(0)), (Fraction(self.u, d), Fraction(self.c, d))]

    def covolume(self) -> Fraction:
        return Fraction(self.a * self.c, self.den * self.den)

    def contains(self, x: Fraction, y: Fraction) -> bool:
        xi = x * self.den
        yi = y * self.den
        if xi.denominator != 1 or yi.denominator != 1:
            return False
        xi, yi = int(xi), int(yi)
        if yi % self.c:
            return False
        t = yi // self.c
        return (xi - t * self.u) % self.a == 0

    def coords(self, x: Fraction, y: Fraction) -> tuple[int, int] | None:
        """Integer coordinates (s, t) with (x,y) = s*row0 + t*row1, or None."""
        xi = x * self.den
        yi = y * self.den
        if xi.denominator != 1 or yi.denominator != 1:
            return None
        xi, yi = int(xi), int(yi)
        if yi % self.c:
            return None
        t = yi // self.c
        rem = xi - t * self.u
        if rem % self.a:
            return None
        return rem // self.a, t

    def add(self, other: "Lattice2") -> "Lattice2":
        return Lattice2.from_rows(self.basis() + other.basis())

    def intersect(self, other: "Lattice2") -> "Lattice2":
        # Solve s*B1 = t*B2 over Z via the kernel of the 2x4 stacked system.
        d1, d2 = self.den, other.den
        r1 = [(self.a * d2, 0), (self.u * d2, self.c * d2)]
        r2 = [(other.a * d1, 0), (other.u * d1, other.c * d1)]
        # Vectors v in L1 cap L2: v = x*r1[0]+y*r1[1] with v in L2.
        # Enumerate via index: [L1 : L1 cap L2] divides idx = index of L2 den-cleared.
        # Use the standard kernel computation on the 4x2 matrix [r1; -r2]^T.
        from itertools import product as iproduct

        # Solve with linear algebra: want integer (x, y, z, w) with
        # x*r1[0] + y*r1[1] = z*r2[0] + w*r2[1].  Kernel of M (2 eqs, 4 unks).
        m = [
            [r1[0][0], r1[1][0], -r2[0][0], -r2[1][0]],
            [r1[0][1], r1[1][1], -r2[0][1], -r2[1][1]],
        ]
        ker = _integer_kernel_2x4(m)
        rows = []
        for x, y, _z, _w in ker:
            vx = x * r1[0][0] + y * r1[1][0]
            vy = x * r1[0][1] + y * r1[1][1]
            rows.append((Fraction(vx, d1 * d2), Fraction(vy, d1 * d2)))
        return Lattice2.from_rows(rows)

    def scale(self, r: Fraction) -> "Lattice2":
        return Lattice2.from_rows([(r * x, r * y) for x, y in self.basis()])

    def index_in(self, super_lat: "Lattice2") -> Fraction:
        return self.covolume() / super_lat.covolume()


def _integer_kernel_2x4(m: list[list[int]]) -> list[tuple[int, int, int, int]]:
    """Basis of the integer kernel of a 2x4 integer matrix (rank assumed 2)."""
    # Column-style HNF on the transpose: track unimodular column operations.
    cols = [[m[0][j], m[1][j]] for j in range(4)]
    trans = [[1 if i == j else 0 for i in range(4)] for j in range(4)]

    def colop(j, k, q):  # col_j -= q * col_k
        cols[j][0] -= q * cols[k][0]
        cols[j][1] -= q * cols[k][1]
        for t in range(4):
            trans[j][t] -= q * trans[k][t]

    def swap(j, k):
        cols[j], cols[k] = cols[k], cols[j]
        trans[j], trans[k] = trans[k], trans[j]

    # Clear first row.
    r = 0
    pivot_cols = []
    for row in range(2):
        nz = [j for j in range(r, 4) if cols[j][row] != 0]
        while len(nz) > 1:
            nz.sort(key=lambda j: abs(cols[j][row]))
            pj = nz[0]
            for j in nz[1:]:
                q = cols[j][row] // cols[pj][row]
                colop(j, pj, q)
            nz = [j for j in range(r, 4) if cols[j][row] != 0]
        if nz:
            swap(r, nz[0])
            pivot_cols.append(r)
            r += 1
    kernel = []
    for j in range(4):
        if cols[j][0] == 0 and cols[j][1] == 0:
            kernel.append(tuple(trans[j]))
    return kernel


def solve_crt_pair(
    z1: tuple[Fraction, Fraction],
    l1: Lattice2,
    z2: tuple[Fraction, Fraction],
    l2: Lattice2,
) -> tuple[tuple[Fraction, Fraction], Lattice2] | None:
    """Intersect cosets z1 + L1 and z2 + L2; None when empty."""
    dx = z2[0] - z1[0]
    dy = z2[1] - z1[1]
    # Need dx,dy in L1 + L2 along with an explicit decomposition.
    b1 = l1.basis()
    b2 = l2.basis()
    den = 1
    vecs = b1 + b2 + [(dx, dy)]
    for x, y in vecs:
        den = den * x.denominator // gcd(den, x.denominator)
        den = den * y.denominator // gcd(den, y.denominator)
    iv = [(int(x * den), int(y * den)) for x, y in vecs]
    sol = _solve_integer_combination(iv[:4], iv[4])
    if sol is None:
        return None
    s, t, _, _ = sol
    # z = z1 + s*b1[0] + t*b1[1] lies in both cosets.
    zx = z1[0] + s * b1[0][0] + t * b1[1][0]
    zy = z1[1] + s * b1[0][1] + t * b1[1][1]
    return (zx, zy), l1.intersect(l2)


def _solve_integer_combination(
    gens: list[tuple[int, int]], target: tuple[int, int]
) -> tuple[int, ...] | None:
    """Integer solution x of sum x_i gens_i = target, or None."""
    n = len(gens)
    cols = [list(g) for g in gens]
    trans = [[1 if i == j else 0 for i in range(n)] for j in range(n)]

    def colop(j, k, q):
        cols[j][0] -= q * cols[k][0]
        cols[j][1] -= q * cols[k][1]
        for t in range(n):
            trans[j][t] -= q * trans[k][t]

    def swap(j, k):
        cols[j], cols[k] = cols[k], cols[j]
        trans[j], trans[k] = trans[k], trans[j]

    r = 0
    piv = []
    for row in range(2):
        nz = [j for j in range(r, n) if cols[j][row] != 0]
        while len(nz) > 1:
            nz.sort(key=lambda j: abs(cols[j][row]))
            pj = nz[0]
            for j in nz[1:]:
                q = cols[j][row] // cols[pj][row]
                colop(j, pj, q)
            nz = [j for j in range(r, n) if cols[j][row] != 0]
        if nz:
            swap(r, nz[0])
            piv.append((r, row))
            r += 1
    # Back-substitute target over the triangular pivot columns.
    t = list(target)
    combo = [0] * n
    for j, row in piv:
        if cols[j][row] == 0:
            return None
        q, rem = divmod(t[row], cols[j][row])
        if rem:
            return None
        combo[j] = q
        t[0] -= q * cols[j][0]
        t[1] -= q * cols[j][1]
    if t != [0, 0]:
        return None
    out = [0] * n
    for j in range(n):
        for i in range(n):
            out[i] += combo[j] * trans[j][i]
    return tuple(out)


# ---------------------------------------------------------------------------
# Smith normal form with transforms (small matrices only)

def smith_normal_form(mat: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (U, S, V) with U*mat*V = S diagonal, U, V unimodular."""
    import copy

    a = copy.deepcopy(mat)
    n = len(a)
    m = len(a[0]) if n else 0
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(m)] for i in range(m)]

    def row_op(i, j, q):  # row_i -= q row_j
        for k in range(m):
            a[i][k] -= q * a[j][k]
        for k in range(n):
            u[i][k] -= q * u[j][k]

    def col_op(i, j, q):  # col_i -= q col_j
        for k in range(n):
            a[k][i] -= q * a[k][j]
        for k in range(m):
            v[k][i] -= q * v[k][j]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for k in range(n):
            a[k][i], a[k][j] = a[k][j], a[k][i]
        for k in range(m):
            v[k][i], v[k][j] = v[k][j], v[k][i]

    t = 0
    while t < min(n, m):
        # Find pivot of least absolute value.
        entries = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, m) if a[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        row_swap(t, pi)
        col_swap(t, pj)
        again = False
        for i in range(t + 1, n):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                row_op(i, t, q)
                if a[i][t]:
                    again = True
        for j in range(t + 1, m):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                col_op(j, t, q)
                if a[t][j]:
                    again = True
        if again:
            continue
        # Divisibility fix-up.
        bad = False
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if a[i][j] % a[t][t]:
                    row_op(t, i, -1)
                    bad = True
                    break
            if bad:
                break
        if bad:
            continue
        if a[t][t] < 0:
            for k in range(m):
                a[t][k] = -a[t][k]
            for k in range(n):
                u[t][k] = -u[t][k]
        t += 1
    return u, a, v
