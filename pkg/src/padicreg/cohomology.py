"""Bar-resolution cup/cap pairing engine on the J-unit group.

The group is E(f)_J, free abelian with basis (pi_1, ..., pi_s, eps).  The
measure class omega is the 1-cocycle a -> nu(1, a) with the transport
(x . mu)(U) = mu(x^{-1} U) folded into cone actions.  A pairing

    c_{g_1} cup ... cup c_{g_s}  cap  (omega cap theta')

is evaluated on the antisymmetrized shuffle theta' = sum_{perm} sgn(perm)
[a_1 | ... | a_{s+1}] through the Alexander-Whitney splitting: the front
s-face feeds the cup of the z-cocycles, the back slot feeds omega, twisted
by the front product:

    term = integral of  (z_{g_1}(a_1) cup twisted z-values)  d((a_1...a_s) . nu(1, a_{s+1})).

Signs are anchored by two facts checked in the tests: the s = 1 case must
reproduce the explicit two-integral formula for g(U_p(b, lambda, D)), and
the all-ord pairing must land on +-(1 - chi(lambda) ell) L(chi, 0) times the
ramified Euler factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb

from .cones import SignedConeSum, act, cstar, sgn
from .cyclotomic import CycRat
from .errors import PadicRegError, UnsupportedRank, ZeroDenominator
from .field import FieldElement, IdealHNF
from .measure import (
    ConeMeasure,
    Conditions,
    LocalClass,
    LocalPrime,
    integral_log_norm_class,
    shell_classes,
)
from .padic import INF, PadicNumber, iwasawa_log


# ---------------------------------------------------------------------------
# Homomorphisms F_p^* -> K

@dataclass
class Homomorphism:
    """g = ord_coeff * ord_p + log_coeff * log_p(N_{F_p/Q_p})."""

    lp: LocalPrime
    ord_coeff: object = 0  # Fraction / int / PadicNumber
    log_coeff: object = 0

    @property
    def tag(self) -> str:
        if self.log_coeff == 0 and self.ord_coeff == 1:
            return "ord"
        if self.ord_coeff == 0 and self.log_coeff == 1:
            return "log-norm"
        if self.log_coeff == 0:
            return "ord-multiple"
        return "affine"

    def is_exact(self) -> bool:
        return self.log_coeff == 0 and not isinstance(self.ord_coeff, PadicNumber)

    def value_exact(self, x: FieldElement) -> Fraction:
        assert self.is_exact()
        return Fraction(self.ord_coeff) * self.lp.ord(x)

    def value_padic(self, x: FieldElement, prec: int) -> PadicNumber:
        par = self.lp.parent
        out = par.zero(INF)
        if self.ord_coeff != 0:
            oc = self.ord_coeff if isinstance(self.ord_coeff, PadicNumber) else par.from_rational(
                Fraction(self.ord_coeff), prec + 4
            )
            out = out + oc * self.lp.ord(x)
        if self.log_coeff != 0:
            lc = self.log_coeff if isinstance(self.log_coeff, PadicNumber) else par.from_rational(
                Fraction(self.log_coeff), prec + 4
            )
            nx = self.lp.norm_embed(x, prec + 6)
            out = out + lc * iwasawa_log(nx)
        return out


def hom_ord(lp: LocalPrime) -> Homomorphism:
    return Homomorphism(lp, 1, 0)


def hom_log(lp: LocalPrime) -> Homomorphism:
    return Homomorphism(lp, 0, 1)


def hom_affine(lp: LocalPrime, t) -> Homomorphism:
    """t * ord + log-norm."""
    return Homomorphism(lp, t, 1)


# ---------------------------------------------------------------------------
# Piecewise local functions supported near 0-centered classes
#
# A piece is (coeff_kind, region) with region the annulus
# {k1 <= ord < k2} (k2 = None means the single class p^k1 O_p) and
# coeff_kind either ("const", scalar-tag) or ("g",).  Scalars are kept as
# exact group elements evaluated late so the exact mode stays exact.

@dataclass(frozen=True)
class Annulus:
    k1: int
    k2: int | None  # None: full class {ord >= k1}

    def shift(self, m: int) -> "Annulus":
        return Annulus(self.k1 + m, None if self.k2 is None else self.k2 + m)


@dataclass(frozen=True)
class Piece:
    region: Annulus
    kind: str  # "const" | "g"
    const_elt: FieldElement | None = None  # g(const_elt) multiplies a const piece
    const_scalar: Fraction = Fraction(1)


class LocalFunc:
    """Finite combination of pieces at one prime (values via a Homomorphism)."""

    def __init__(self, pieces: list[tuple[Fraction, Piece]]):
        self.pieces = [(Fraction(c), p) for c, p in pieces if c != 0]

    def translate(self, a: FieldElement, lp: LocalPrime) -> "LocalFunc":
        """(a . h)(x) = h(a^{-1} x): shift regions by ord(a); g-pieces pick up
        a constant -g(a) on the shifted region."""
        m = lp.ord(a)
        out = []
        for c, p in self.pieces:
            r = p.region.shift(m)
            if p.kind == "const":
                out.append((c, Piece(r, "const", p.const_elt, p.const_scalar)))
            else:
                out.append((c, Piece(r, "g")))
                out.append((c, Piece(r, "const", a, Fraction(-1))))
        return LocalFunc(out)


def z_cocycle(lp: LocalPrime, e_pi: int, a: FieldElement, support_pi_level: int | None = None) -> LocalFunc:
    """z_{f,g}(a) with f = 1_{pi O_p} (support level e = ord_p(pi)); the
    homomorphism g is supplied only at integration time.

    z(a) = (af) g(a) + (f - af) g; af = 1_{a pi O_p}.
    """
    e = e_pi if support_pi_level is None else support_pi_level
    m = lp.ord(a)
    pieces: list[tuple[Fraction, Piece]] = []
    # (af) * g(a): constant g(a) on the class ord >= e + m
    pieces.append((Fraction(1), Piece(Annulus(e + m, None), "const", a, Fraction(1))))
    # (f - af) * g
    if m > 0:
        pieces.append((Fraction(1), Piece(Annulus(e, e + m), "g")))
    elif m < 0:
        pieces.append((Fraction(-1), Piece(Annulus(e + m, e), "g")))
    return LocalFunc(pieces)


def z_cocycle_unit_support(lp: LocalPrime, a: FieldElement) -> LocalFunc:
    """Same with the cohomologous choice f = 1_{O_p} (f(0) = 1)."""
    return z_cocycle(lp, 0, a, support_pi_level=0)


# ---------------------------------------------------------------------------
# Fundamental cycles on the bar complex (trivial coefficients)

class FundamentalCycle:
    """Antisymmetrized shuffle sum_{perm} sgn(perm) [b_{perm(1)}|...|b_{perm(m)}]."""

    def __init__(self, basis: list[FieldElement]):
        self.basis = list(basis)
        self.m = len(basis)
        self.chain: dict[tuple[int, ...], int] = {}
        for perm in permutations(range(self.m)):
            s = _perm_sign(perm)
            self.chain[perm] = s

    def terms(self):
        for perm, s in self.chain.items():
            yield s, [self.basis[i] for i in perm]

    def boundary_is_zero(self) -> bool:
        """Bar differential with trivial coefficients (group abelian, written
        multiplicatively on exponent tuples)."""
        if self.m > 3:
            raise UnsupportedRank("cycle check implemented for m <= 3")
        # represent group elements by exponent tuples on the basis
        def key(elts):
            from collections import Counter

            vec = [0] * self.m
            for e in elts:
                for i, b in enumerate(self.basis):
                    if e is b:
                        vec[i] += 1
                        break
                else:
                    raise PadicRegError("boundary check supports basis products only")
            return tuple(vec)

        bnd: dict[tuple, int] = {}

        def add(word, coeff):
            k = tuple(tuple(w) for w in word)
            bnd[k] = bnd.get(k, 0) + coeff
            if bnd[k] == 0:
                del bnd[k]

        for perm, s in self.chain.items():
            word = [_unit_vec(self.m, i) for i in perm]
            # d[g1|...|gm] = [g2|..] + sum (-1)^i [..|gi gi+1|..] + (-1)^m [..|gm-1]
            add(word[1:], s)
            for i in range(self.m - 1):
                merged = word[: i] + [_vec_add(word[i], word[i + 1])] + word[i + 2 :]
                add(merged, s * (-1) ** (i + 1))
            add(word[:-1], s * (-1) ** self.m)
        return not bnd


def _unit_vec(m, i):
    v = [0] * m
    v[i] = 1
    return v


def _vec_add(a, b):
    return [x + y for x, y in zip(a, b)]


def _perm_sign(perm) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


# ---------------------------------------------------------------------------
# Integration of piece products against a cone measure

class PairingData:
    """Everything fixed for one instance: field, conductor, classes, primes."""

    def __init__(
        self,
        ctx,
        f: IdealHNF,
        rcg,
        chi,
        smoothing,
        b_reps: list[IdealHNF],
        eps: FieldElement,
        D: SignedConeSum,
        local_primes: list[LocalPrime],
        pis: list[tuple[int, FieldElement]],
        exclusions: list[IdealHNF],
        prec: int,
        zeta_image=None,
    ):
        self.ctx = ctx
        self.f = f
        self.rcg = rcg
        self.chi = chi
        self.smoothing = smoothing
        self.b_reps = b_reps
        self.eps = eps
        self.D = D
        self.local_primes = local_primes
        self.pis = pis
        self.exclusions = exclusions
        self.prec = prec
        self.zeta_image = zeta_image

    def parent(self):
        return self.local_primes[0].parent


def _annulus_classes(pd: PairingData, lp_index: int, region: Annulus):
    """Decompose an annulus into (sign, LocalClass) mass parts: the class
    {ord >= k} is p^k O_p; bounded annuli difference two of those."""
    ctx = pd.ctx
    lp = pd.local_primes[lp_index]
    out = [(1, _full_class(ctx, lp, region.k1))]
    if region.k2 is not None:
        out.append((-1, _full_class(ctx, lp, region.k2)))
    return out


def _full_class(ctx, lp: LocalPrime, k: int) -> LocalClass:
    if k < 0:
        raise PadicRegError("negative-level full classes unsupported in pairings")
    if k == 0:
        # O_p: the empty condition; encode as level-0 marker handled downstream
        return LocalClass(lp.ideal.key(), (Fraction(0), Fraction(0)), 0)
    return LocalClass.of(lp.ideal, ctx.zero(), k)


def _conds_of(classes: list[LocalClass]) -> Conditions:
    real = [c for c in classes if c.level != 0]
    return Conditions(real)


def _measure_mass(measure: ConeMeasure, classes) -> Fraction:
    return measure.rational_value(_conds_of(classes))


def _integral_ord_annulus(pd, measure, lp_index, region: Annulus, fixed) -> Fraction:
    """integral of ord over a bounded annulus (exact rational)."""
    if region.k2 is None:
        raise PadicRegError("ord integral needs a bounded annulus")
    total = Fraction(0)
    ctx = pd.ctx
    lp = pd.local_primes[lp_index]
    for j in range(region.k1, region.k2):
        mj = _measure_mass(measure, [_full_class(ctx, lp, j)] + fixed)
        mj1 = _measure_mass(measure, [_full_class(ctx, lp, j + 1)] + fixed)
        total += j * (mj - mj1)
    return total


def _integral_log_annulus(pd, measure, lp_index, region: Annulus, fixed, prec) -> PadicNumber:
    """integral of log_p N over a bounded annulus."""
    if region.k2 is None:
        raise PadicRegError("log integral needs a bounded annulus")
    lp = pd.local_primes[lp_index]
    par = lp.parent
    total = par.zero(INF)
    for j in range(region.k1, region.k2):
        for rep, level in shell_classes(pd.ctx, lp.ideal, lp.p, j):
            cls = LocalClass.of(lp.ideal, rep, level)
            total = total + integral_log_norm_class(
                measure, lp, cls, [c for c in fixed if c.level != 0], prec
            )
    return total


def _integral_gg_classes(pd, measure, lps, clss, gs, prec) -> PadicNumber:
    """integral of prod_i log N_i(x_i) over a product of classes (each bearing
    its own prime); len 1 or 2."""
    if len(lps) == 1:
        return integral_log_norm_class(measure, lps[0], clss[0], [], prec)
    lp1, lp2 = lps
    c1, c2 = clss
    ctx = pd.ctx
    par = lp1.parent
    z1 = FieldElement(ctx, *c1.z)
    z2 = FieldElement(ctx, *c2.z)
    o1, o2 = lp1.ord(z1), lp2.ord(z2)
    gap1, gap2 = c1.level - o1, c2.level - o2
    if gap1 < 1 or gap2 < 1:
        raise PadicRegError("class too coarse for double log expansion")
    jmax1 = 1
    while jmax1 * gap1 - _vp_bound2(jmax1, lp1.p) < prec + 2:
        jmax1 += 1
    jmax2 = 1
    while jmax2 * gap2 - _vp_bound2(jmax2, lp2.p) < prec + 2:
        jmax2 += 1
    if lp1.deg != 1 or lp2.deg != 1:
        raise UnsupportedRank("double log integrals need split primes")
    conds = Conditions([c1, c2])
    mons = sorted({(v, u) for u in range(jmax1 + 1) for v in range(jmax2 + 1)})
    vals = measure.moments(conds, mons)
    # F-moments of (alpha - z1)^i (conj(alpha) - conj(z2))^j
    # series for log(x1/z1): sum_i (-1)^(i+1)/i ((x1-z1)/z1)^i, same at 2
    mass = measure.rational_value(conds)
    l1 = iwasawa_log(lp1.embed(z1, prec + 6 + 2 * abs(o1)))
    l2 = iwasawa_log(lp2.embed(z2, prec + 6 + 2 * abs(o2)))
    # S[i][j] = integral ((x1-z1)/z1)^i ((x2-z2)/z2)^j, exact F then embed at p1
    z1inv = z1.inverse()
    z2c = z2.conj()
    z2cinv = z2c.inverse()
    total = l1 * l2 * par.from_rational(mass, prec + 4)
    seriesA = par.zero(prec + 4)  # sum over i>=1 only (j = 0)
    seriesB = par.zero(prec + 4)  # j >= 1, i = 0
    seriesAB = par.zero(prec + 4)
    # precompute binomial-recentred moments T[i][j] in F
    T = {}
    for i in range(jmax1 + 1):
        for j in range(jmax2 + 1):
            acc = ctx.zero()
            for u in range(i + 1):
                cu = comb(i, u) * (-1) ** (i - u)
                zu = z1.pow(i - u)
                for v in range(j + 1):
                    cv = comb(j, v) * (-1) ** (j - v)
                    zv = z2c.pow(j - v)
                    acc = acc + vals[(v, u)] * zu * zv * ctx.elem(cu * cv)
            T[(i, j)] = acc * z1inv.pow(i) * z2cinv.pow(j)
    for i in range(1, jmax1 + 1):
        ci = Fraction((-1) ** (i + 1), i)
        seriesA = seriesA + lp1.embed(T[(i, 0)] * ctx.elem(ci), prec + 4)
        for j in range(1, jmax2 + 1):
            cj = Fraction((-1) ** (j + 1), j)
            seriesAB = seriesAB + lp1.embed(T[(i, j)] * ctx.elem(ci * cj), prec + 4)
    for j in range(1, jmax2 + 1):
        cj = Fraction((-1) ** (j + 1), j)
        seriesB = seriesB + lp1.embed(T[(0, j)] * ctx.elem(cj), prec + 4)
    total = total + l2 * seriesA + l1 * seriesB + seriesAB
    return PadicNumber(par, total.vec, prec, _val_shift=total.shift)


def _vp_bound2(j: int, p: int) -> int:
    import math

    return math.floor(math.log(max(2 * j, 2), p)) + 1


# ---------------------------------------------------------------------------
# Product integration

def _integrate_term(
    pd: PairingData,
    measure: ConeMeasure,
    funcs: list[tuple[int, LocalFunc]],
    gs: list[Homomorphism],
    mode: str,
    prec: int,
):
    """integral of the product of the slot functions against the measure.

    funcs: list of (local-prime index into pd.local_primes, LocalFunc) -- one
    per cup slot, at pairwise distinct primes.  gs: the slot homomorphisms.
    Exact mode requires every slot homomorphism to be an ord multiple.
    """
    ctx = pd.ctx
    par = pd.parent()
    exact = mode == "exact"
    total_exact = Fraction(0)
    total_padic = par.zero(INF)

    from itertools import product as iproduct

    piece_lists = [f.pieces for _i, f in funcs]
    lp_idx = [i for i, _f in funcs]
    for combo in iproduct(*piece_lists):
        coeff = Fraction(1)
        for c, _p in combo:
            coeff *= c
        g_slots = [i for i, (_c, p) in enumerate(combo) if p.kind == "g"]
        const_slots = [i for i, (_c, p) in enumerate(combo) if p.kind == "const"]
        # evaluate constant scalars g_slot(elt)
        if exact:
            scal = Fraction(1)
            for i in const_slots:
                p = combo[i][1]
                if p.const_elt is not None:
                    scal *= gs[i].value_exact(p.const_elt) * p.const_scalar
            if scal == 0:
                continue
        else:
            scal = par.one(INF)
            for i in const_slots:
                p = combo[i][1]
                if p.const_elt is not None:
                    v = gs[i].value_padic(p.const_elt, prec + 4)
                    scal = scal * (v * par.from_rational(p.const_scalar, INF))
        if len(g_slots) == 0:
            val = _mass_of_regions(pd, measure, lp_idx, [p.region for _c, p in combo])
            if exact:
                total_exact += coeff * scal * val
            else:
                total_padic = total_padic + scal * par.from_rational(coeff * val, prec + 4)
        elif len(g_slots) == 1:
            gi = g_slots[0]
            g = gs[gi]
            region = combo[gi][1].region
            fixed_regions = [
                (lp_idx[i], combo[i][1].region) for i in range(len(combo)) if i != gi
            ]
            if exact:
                if g.log_coeff != 0:
                    raise PadicRegError("exact mode needs ord-type homomorphisms")
                val = _ord_int_regions(pd, measure, lp_idx[gi], region, fixed_regions)
                total_exact += coeff * scal * Fraction(g.ord_coeff) * val
            else:
                acc = par.zero(INF)
                if g.ord_coeff != 0:
                    v = _ord_int_regions(pd, measure, lp_idx[gi], region, fixed_regions)
                    oc = g.ord_coeff if isinstance(g.ord_coeff, PadicNumber) else par.from_rational(
                        Fraction(g.ord_coeff), prec + 4
                    )
                    acc = acc + oc * par.from_rational(v, prec + 4)
                if g.log_coeff != 0:
                    v = _log_int_regions(pd, measure, lp_idx[gi], region, fixed_regions, prec)
                    lc = g.log_coeff if isinstance(g.log_coeff, PadicNumber) else par.from_rational(
                        Fraction(g.log_coeff), prec + 4
                    )
                    acc = acc + lc * v
                total_padic = total_padic + scal * acc * par.from_rational(coeff, INF)
        elif len(g_slots) == 2:
            if exact:
                raise PadicRegError("exact mode cannot carry two g slots")
            i1, i2 = g_slots
            val = _gg_int_regions(
                pd,
                measure,
                (lp_idx[i1], combo[i1][1].region, gs[i1]),
                (lp_idx[i2], combo[i2][1].region, gs[i2]),
                prec,
            )
            total_padic = total_padic + scal * val * par.from_rational(coeff, INF)
        else:
            raise UnsupportedRank("more than two g slots")
    return total_exact if exact else total_padic


def _mass_of_regions(pd, measure, lp_idx, regions) -> Fraction:
    from itertools import product as iproduct

    expansions = [_annulus_classes(pd, i, r) for i, r in zip(lp_idx, regions)]
    total = Fraction(0)
    for combo in iproduct(*expansions):
        sign = 1
        classes = []
        for s, cls in combo:
            sign *= s
            classes.append(cls)
        total += sign * _measure_mass(measure, classes)
    return total


def _ord_int_regions(pd, measure, lp_i, region: Annulus, fixed_regions) -> Fraction:
    from itertools import product as iproduct

    expansions = [_annulus_classes(pd, i, r) for i, r in fixed_regions]
    total = Fraction(0)
    for combo in iproduct(*expansions) if expansions else [()]:
        sign = 1
        classes = []
        for s, cls in combo:
            sign *= s
            classes.append(cls)
        total += sign * _integral_ord_annulus(pd, measure, lp_i, region, classes)
    return total


def _log_int_regions(pd, measure, lp_i, region: Annulus, fixed_regions, prec) -> PadicNumber:
    from itertools import product as iproduct

    par = pd.parent()
    expansions = [_annulus_classes(pd, i, r) for i, r in fixed_regions]
    total = par.zero(INF)
    for combo in iproduct(*expansions) if expansions else [()]:
        sign = 1
        classes = []
        for s, cls in combo:
            sign *= s
            classes.append(cls)
        v = _integral_log_annulus(pd, measure, lp_i, region, classes, prec)
        total = total + v * sign
    return total


def _gg_int_regions(pd, measure, slot1, slot2, prec) -> PadicNumber:
    """Both slots carry a g piece: expand the g = a ord + b logN split."""
    i1, r1, g1 = slot1
    i2, r2, g2 = slot2
    par = pd.parent()
    lp1 = pd.local_primes[i1]
    lp2 = pd.local_primes[i2]
    ctx = pd.ctx

    def coeffs(g):
        oc = g.ord_coeff if isinstance(g.ord_coeff, PadicNumber) else par.from_rational(
            Fraction(g.ord_coeff), prec + 4
        ) if g.ord_coeff != 0 else None
        lc = g.log_coeff if isinstance(g.log_coeff, PadicNumber) else par.from_rational(
            Fraction(g.log_coeff), prec + 4
        ) if g.log_coeff != 0 else None
        return oc, lc

    oc1, lc1 = coeffs(g1)
    oc2, lc2 = coeffs(g2)
    total = par.zero(INF)
    if r1.k2 is None or r2.k2 is None:
        raise PadicRegError("gg integral needs bounded annuli")
    # ord x ord
    if oc1 is not None and oc2 is not None:
        acc = Fraction(0)
        for j1 in range(r1.k1, r1.k2):
            for j2 in range(r2.k1, r2.k2):
                m = _shell_shell_mass(pd, measure, i1, j1, i2, j2)
                acc += j1 * j2 * m
        total = total + oc1 * oc2 * par.from_rational(acc, prec + 4)
    # ord x log and log x ord
    if oc1 is not None and lc2 is not None:
        acc = par.zero(INF)
        for j1 in range(r1.k1, r1.k2):
            v = _log_int_shell_fixed(pd, measure, i2, r2, i1, j1, prec)
            acc = acc + v * j1
        total = total + oc1 * lc2 * acc
    if lc1 is not None and oc2 is not None:
        acc = par.zero(INF)
        for j2 in range(r2.k1, r2.k2):
            v = _log_int_shell_fixed(pd, measure, i1, r1, i2, j2, prec)
            acc = acc + v * j2
        total = total + lc1 * oc2 * acc
    # log x log
    if lc1 is not None and lc2 is not None:
        acc = par.zero(INF)
        for j1 in range(r1.k1, r1.k2):
            for cls1 in _shell_cover(pd, i1, j1):
                for j2 in range(r2.k1, r2.k2):
                    for cls2 in _shell_cover(pd, i2, j2):
                        acc = acc + _integral_gg_classes(
                            pd, measure, [lp1, lp2], [cls1, cls2], [g1, g2], prec
                        )
        total = total + lc1 * lc2 * acc
    return total


def _shell_cover(pd, lp_i, j) -> list[LocalClass]:
    lp = pd.local_primes[lp_i]
    return [LocalClass.of(lp.ideal, rep, level) for rep, level in shell_classes(pd.ctx, lp.ideal, lp.p, j)]


def _shell_shell_mass(pd, measure, i1, j1, i2, j2) -> Fraction:
    ctx = pd.ctx
    lp1 = pd.local_primes[i1]
    lp2 = pd.local_primes[i2]
    out = Fraction(0)
    for s1, k1 in ((1, j1), (-1, j1 + 1)):
        for s2, k2 in ((1, j2), (-1, j2 + 1)):
            out += s1 * s2 * _measure_mass(
                measure, [_full_class(ctx, lp1, k1), _full_class(ctx, lp2, k2)]
            )
    return out


def _log_int_shell_fixed(pd, measure, lp_log, region, lp_shell, j, prec) -> PadicNumber:
    """log integral over region at lp_log with the shell {ord = j} fixed at lp_shell."""
    ctx = pd.ctx
    par = pd.parent()
    shell_prime = pd.local_primes[lp_shell]
    total = par.zero(INF)
    for s, k in ((1, j), (-1, j + 1)):
        v = _integral_log_annulus(
            pd, measure, lp_log, region, [_full_class(ctx, shell_prime, k)], prec
        )
        total = total + v * s
    return total


# ---------------------------------------------------------------------------
# The pairings

def _perm_terms(basis: list[FieldElement]):
    m = len(basis)
    for perm in permutations(range(m)):
        yield _perm_sign(perm), [basis[i] for i in perm]


def pair_general(
    pd: PairingData,
    J: list[int],
    gs: list[Homomorphism],
    mode: str = "padic",
    f_choice: str = "pi",
    chi_weight: bool = True,
):
    """One chi-weighted cup/cap pairing; J lists indices into pd.local_primes
    and gs the slot homomorphisms (same length and order as J)."""
    s = len(J)
    if s not in (1, 2):
        raise UnsupportedRank(f"rank {s} unsupported")
    ctx = pd.ctx
    par = pd.parent()
    exact = mode == "exact"
    basis = [pd.pis[j][1] for j in J] + [pd.eps]
    e_levels = [pd.pis[j][0] for j in J]
    total_exact = CycRat.zero(pd.chi.order if pd.chi else 1)
    total_padic = par.zero(INF)
    prec = pd.prec
    for b in pd.b_reps:
        if chi_weight:
            chiv = pd.chi.on_ideal(b)
            if chiv.is_zero():
                continue
        for sign, word in _perm_terms(basis):
            a_last = word[-1]
            front = word[:-1]
            sg = sgn(ctx.one(), a_last)
            if sg == 0:
                continue
            cone = cstar(ctx.one(), a_last).scale(sg)
            transport = ctx.one()
            for a in front:
                transport = transport * a
            cone = cone.act(transport)
            measure = ConeMeasure(ctx, pd.f, b, pd.smoothing, cone, pd.exclusions)
            funcs = []
            lead = ctx.one()
            for i in range(s):
                lp = pd.local_primes[J[i]]
                if f_choice == "pi":
                    zf = z_cocycle(lp, e_levels[i], front[i])
                else:
                    zf = z_cocycle_unit_support(lp, front[i])
                if i > 0:
                    zf = zf.translate(lead, lp)
                funcs.append((J[i], zf))
                lead = lead * front[i]
            val = _integrate_term(pd, measure, funcs, gs, mode, prec)
            if exact:
                term = CycRat.from_rational(Fraction(sign) * val, 1)
                if chi_weight:
                    term = chiv * term
                total_exact = total_exact + term
            else:
                if chi_weight:
                    from .padic import embed_cycrat

                    w = embed_cycrat(par, chiv, pd.zeta_image, prec + 4)
                else:
                    w = par.one(INF)
                total_padic = total_padic + w * val * sign
    return total_exact if exact else total_padic


def pair_r1(pd: PairingData, g: Homomorphism, b: IdealHNF, j_index: int = 0):
    """Literal two-integral formula (independent route from pair_general):

    int z(pi)(x) d(pi . nu(1, eps))(x)  -  int z(eps)(x) d(eps . nu(1, pi))(x)

    with f = 1_{pi O_p}; returns g(U_p(b, lambda, D)) as a PadicNumber (or an
    exact Fraction for an ord-type g).
    """
    ctx = pd.ctx
    par = pd.parent()
    lp = pd.local_primes[j_index]
    e, pi = pd.pis[j_index]
    eps = pd.eps
    exact = g.is_exact()
    prec = pd.prec

    # term 1: measure pi . nu(1, eps) = sgn(1,eps) zeta(pi C*(1,eps))
    sg1 = sgn(ctx.one(), eps)
    m1 = ConeMeasure(ctx, pd.f, b, pd.smoothing, cstar(ctx.one(), eps).scale(sg1).act(pi), pd.exclusions)
    # z(pi) = g(pi) 1_{pi^2 O} + g 1_{annulus [e, 2e)}
    ann = Annulus(e, 2 * e)
    cls2e = _full_class(ctx, lp, 2 * e)
    if exact:
        t1 = g.value_exact(pi) * _measure_mass(m1, [cls2e])
        t1 += Fraction(g.ord_coeff) * _integral_ord_annulus(pd, m1, j_index, ann, [])
    else:
        t1 = g.value_padic(pi, prec + 4) * par.from_rational(_measure_mass(m1, [cls2e]), prec + 4)
        if g.ord_coeff != 0:
            oc = g.ord_coeff if isinstance(g.ord_coeff, PadicNumber) else par.from_rational(
                Fraction(g.ord_coeff), prec + 4
            )
            t1 = t1 + oc * par.from_rational(_integral_ord_annulus(pd, m1, j_index, ann, []), prec + 4)
        if g.log_coeff != 0:
            lc = g.log_coeff if isinstance(g.log_coeff, PadicNumber) else par.from_rational(
                Fraction(g.log_coeff), prec + 4
            )
            t1 = t1 + lc * _integral_log_annulus(pd, m1, j_index, ann, [], prec)
    # term 2: measure eps . nu(1, pi); z(eps) = g(eps) 1_{pi O}
    sg2 = sgn(ctx.one(), pi)
    if sg2 == 0:
        t2 = Fraction(0) if exact else par.zero(INF)
    else:
        m2 = ConeMeasure(ctx, pd.f, b, pd.smoothing, cstar(ctx.one(), pi).scale(sg2).act(eps), pd.exclusions)
        mass = _measure_mass(m2, [_full_class(ctx, lp, e)])
        if exact:
            t2 = g.value_exact(eps) * mass
        else:
            t2 = g.value_padic(eps, prec + 4) * par.from_rational(mass, prec + 4)
    return t1 - t2


def r_an(pd: PairingData, J: list[int], prec_report: bool = False):
    """R_p(chi)_{J,an} = (-1)^{#J} (ell-pairing) / (ord-pairing)."""
    if not J:
        return pd.parent().one(pd.prec)
    gs_l = [hom_log(pd.local_primes[j]) for j in J]
    gs_o = [hom_ord(pd.local_primes[j]) for j in J]
    num = pair_general(pd, J, gs_l, mode="padic")
    den_exact = pair_general(pd, J, gs_o, mode="exact")
    par = pd.parent()
    from .padic import embed_cycrat

    den = embed_cycrat(par, den_exact, pd.zeta_image, pd.prec + 4)
    if den.is_zero():
        raise ZeroDenominator("ord pairing vanishes")
    val = num / den
    if len(J) % 2:
        val = -val
    return val


def char_poly_pairing(pd: PairingData, t, R_indices: list[int]):
    """Pairing with the affine homomorphisms t*ord + log at every prime of R,
    divided by the all-ord pairing: equals det(t - M_p(chi)) conjecturally."""
    r = len(R_indices)
    if r not in (1, 2):
        raise UnsupportedRank("char poly needs r in {1, 2}")
    par = pd.parent()
    gs_a = [hom_affine(pd.local_primes[j], t) for j in R_indices]
    gs_o = [hom_ord(pd.local_primes[j]) for j in R_indices]
    num = pair_general(pd, R_indices, gs_a, mode="padic")
    den_exact = pair_general(pd, R_indices, gs_o, mode="exact")
    from .padic import embed_cycrat

    den = embed_cycrat(par, den_exact, pd.zeta_image, pd.prec + 4)
    if den.is_zero():
        raise ZeroDenominator("ord pairing vanishes")
    return num / den
