"""Integer-valued cone measures on products of local fields.

nu_{b,lambda,D}(U) = sum_i a_i zeta_lambda(C_i, b, U, 0) for a signed Shintani
cone sum D; the J-variant cocycle nu(x1,x2)(U) = sgn(x) zeta_lambda(C*(x1,x2),
b, U, 0).  Group transport folds into the cone: for x in E(f)_J one has
(x . nu_D)(U) = nu_D(x^{-1} U) = nu_{xD}(U), which the implementation uses
directly so that all lattice conditions stay integral.

Log-type integrals against the measures are computed through exact moments:
on a class c + p^k the function log N(x) expands as log N(c) plus a p-adically
convergent series whose coefficients are exact rational moment values
(regularized sums of (N(alpha) - N(c))^j), embedded only at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .cones import SignedConeSum, cstar, sgn, shintani_domain
from .errors import (
    BadSmoothingPrime,
    NonIntegerMass,
    NormalizationRequired,
    PadicRegError,
    SmoothingUnit,
    UnboundedSupport,
)
from .field import (
    Character,
    FieldContext,
    FieldElement,
    IdealHNF,
    RayClassGroup,
    classify_p,
    enumerate_characters,
    factor_ideal,
    find_generator,
    pi_generator,
    prime_ideals_above,
    splitting_type,
    totally_positive_unit,
)
from .padic import INF, PadicField, PadicNumber, embed_cyclotomic, iwasawa_log
from .zeta import (
    LatticeCoset,
    LatticeCosetSet,
    build_coset,
    cone_sum_moments,
    merge_prime_conditions,
    zeta_at,
)


# ---------------------------------------------------------------------------
# Local embeddings of F at primes above p

class LocalPrime:
    """A prime above p with its completion data inside the ambient parent."""

    def __init__(self, ctx: FieldContext, p_ideal: IdealHNF, p: int, parent: PadicField):
        self.ctx = ctx
        self.ideal = p_ideal
        self.p = p
        self.parent = parent
        self.deg = 1 if p_ideal.norm() == p else 2
        if self.deg == 1:
            # w = t0 mod the prime; Hensel-lift the root of the w-minimal poly
            t0 = self._residue_root()
            from .padic import newton_root

            qp = parent if parent.deg == 1 else PadicField(p, 1, prec=parent.prec)
            self.qp = qp
            wn = ctx.w_norm
            self.w_image = newton_root(
                qp, [Fraction(wn), Fraction(-ctx.D), Fraction(1)], qp.from_int(t0, 1), parent.prec
            )
        else:
            # parent must have the w minimal polynomial as modulus
            assert parent.deg == 2 and parent.mod_t_exact == ctx.D and parent.mod_n_exact == ctx.w_norm
            self.qp = parent
            self.w_image = parent.from_vector(0, 1, INF)

    def _residue_root(self) -> int:
        # p_ideal = (p, w - t0)
        for t0 in range(self.p):
            if self.ideal.contains(self.ctx.gen() - self.ctx.elem(t0)):
                return t0
        raise PadicRegError("could not identify the residue root of the prime")

    def embed(self, x: FieldElement, prec=None) -> PadicNumber:
        """Image of x in the completion, as an element of the ambient parent."""
        par = self.parent
        prec = prec if prec is not None else par.prec
        a = self.qp.from_rational(x.a, prec + 4)
        b = self.qp.from_rational(x.b, prec + 4)
        img = a + b * self.w_image
        if par.deg == self.qp.deg:
            return PadicNumber(par, img.vec, prec, _val_shift=img.shift)
        # deg-1 completion inside a deg-2 parent
        return PadicNumber(par, (img.vec[0], 0), prec, _val_shift=img.shift)

    def ord(self, x: FieldElement) -> int:
        """Exact valuation ord_p(x) for nonzero x in F."""
        if x.is_zero():
            raise PadicRegError("ord of zero")
        return IdealHNF.principal(self.ctx, x).valuation(self.ideal)

    def norm_embed(self, x: FieldElement, prec=None) -> PadicNumber:
        """N_{F_p/Q_p}(iota(x)) as an element of Q_p inside the parent."""
        if self.deg == 1:
            return self.embed(x, prec)
        par = self.parent
        n = self.qp.from_rational(x.norm(), prec if prec is not None else par.prec)
        return PadicNumber(par, (n.vec[0], 0), n.absprec, _val_shift=n.shift)


# ---------------------------------------------------------------------------
# Local conditions

@dataclass(frozen=True)
class LocalClass:
    """Compact open a + p^k O_p at a prime, a given by a global element."""

    prime_key: tuple
    z: tuple  # (Fraction, Fraction) coordinates of a global representative
    level: int

    @staticmethod
    def of(prime: IdealHNF, z: FieldElement, level: int) -> "LocalClass":
        return LocalClass(prime.key(), (z.a, z.b), level)


class Conditions:
    """Finite product of local classes over distinct primes."""

    def __init__(self, classes: list[LocalClass]):
        keys = [c.prime_key for c in classes]
        if len(set(keys)) != len(keys):
            raise PadicRegError("conditions must be at distinct primes (pre-merge)")
        self.classes = tuple(sorted(classes, key=lambda c: (c.prime_key, c.level, c.z)))

    def key(self):
        return tuple((c.prime_key, c.z, c.level) for c in self.classes)

    def __repr__(self):
        return f"Conditions({self.key()})"


# ---------------------------------------------------------------------------
# The measure

class ConeMeasure:
    """nu_{b, lambda, D} as a lazy, exact, integer-valued measure.

    `exclusions` lists primes where coprimality is imposed by
    inclusion-exclusion (the S - R coprimality conditions not already forced
    by the conductor congruence).
    """

    def __init__(
        self,
        ctx: FieldContext,
        f: IdealHNF,
        b: IdealHNF,
        smoothing: tuple[int, IdealHNF] | None,
        D: SignedConeSum,
        exclusions: list[IdealHNF] = (),
    ):
        self.ctx = ctx
        self.f = f
        self.b = b
        self.smoothing = smoothing
        self.D = D
        self.exclusions = list(exclusions)
        self._f_conds = [
            (ctx.one(), prime, e) for prime, e in sorted(factor_ideal(ctx, f).items(), key=lambda kv: kv[0].key())
        ] if f.norm() != 1 else []

    def translated(self, x: FieldElement) -> "ConeMeasure":
        """(x . nu)(U) = nu(x^{ -1} U), realized as the xD cone measure."""
        return ConeMeasure(self.ctx, self.f, self.b, self.smoothing, self.D.act(x), self.exclusions)

    # -- coset assembly ------------------------------------------------------
    def _coset_set(self, conds: Conditions, use_lambda: bool) -> LatticeCosetSet:
        ctx = self.ctx
        ambient = self.b.inverse()
        if use_lambda:
            ell, lam = self.smoothing
            ambient = ambient * lam
        cond_list = []
        for z1, prime, e in self._f_conds:
            cond_list.append((z1, prime, e))
        excl_here = []
        cls_primes = set()
        for c in conds.classes:
            prime = _ideal_from_key(ctx, c.prime_key)
            z = FieldElement(ctx, *c.z)
            if not z.is_integral() or c.level < 1:
                raise PadicRegError("conditions must be normalized to integral classes")
            cond_list.append((z, prime, c.level))
            cls_primes.add(c.prime_key)
        for q in self.exclusions:
            if q.key() not in cls_primes:
                excl_here.append(q)
        parts = []
        from itertools import combinations

        for r in range(len(excl_here) + 1):
            for subset in combinations(excl_here, r):
                lst = list(cond_list) + [(ctx.zero(), q, 1) for q in subset]
                merged = merge_prime_conditions(ctx, lst)
                if merged is None:
                    continue
                coset = build_coset(ctx, ambient, merged)
                if coset is None:
                    continue
                parts.append(((-1) ** r, coset))
        return LatticeCosetSet(parts)

    # -- values ----------------------------------------------------------------
    def moments(self, conds: Conditions, monomials: list[tuple[int, int]]):
        """Smoothed weighted values: dict monomial -> FieldElement."""
        ctx = self.ctx
        main = cone_sum_moments(ctx, self.D, self._coset_set(conds, False), monomials)
        if self.smoothing is None:
            return main
        ell, lam = self.smoothing
        lamv = cone_sum_moments(ctx, self.D, self._coset_set(conds, True), monomials)
        return {d: main[d] - lamv[d] * ctx.elem(ell) for d in monomials}

    def value(self, conds: Conditions) -> int:
        v = self.moments(conds, [(0, 0)])[(0, 0)]
        if v.b != 0 or v.a.denominator != 1:
            if self.smoothing is not None:
                raise NonIntegerMass(f"smoothed measure value not an integer: {v!r}")
        if v.b != 0:
            raise NonIntegerMass(f"measure value not rational: {v!r}")
        if self.smoothing is not None and v.a.denominator != 1:
            raise NonIntegerMass(f"smoothed measure value not integral: {v}")
        return int(v.a) if v.a.denominator == 1 else v.a

    def rational_value(self, conds: Conditions) -> Fraction:
        v = self.moments(conds, [(0, 0)])[(0, 0)]
        if v.b != 0:
            raise NonIntegerMass(f"measure value not rational: {v!r}")
        return v.a


def _ideal_from_key(ctx: FieldContext, key) -> IdealHNF:
    from .util import Lattice2

    return IdealHNF(ctx, Lattice2(*key))


# ---------------------------------------------------------------------------
# measure-level operations of the spec

def nu_domain(
    ctx, f, b, smoothing, D: SignedConeSum, conds: Conditions, exclusions=()
) -> int:
    return ConeMeasure(ctx, f, b, smoothing, D, exclusions).value(conds)


def nu_cocycle(
    ctx,
    f,
    b,
    smoothing,
    x1: FieldElement,
    x2: FieldElement,
    conds: Conditions,
    exclusions=(),
) -> int:
    s = sgn(x1, x2)
    if s == 0:
        return 0
    m = ConeMeasure(ctx, f, b, smoothing, cstar(x1, x2), exclusions)
    return s * m.value(conds)


def epsilon_factor_exponent(
    ctx,
    f,
    b,
    smoothing,
    D: SignedConeSum,
    eps: FieldElement,
    pi: FieldElement,
    o_p_conds: Conditions,
    exclusions=(),
    window: int = 8,
) -> int:
    """Exponent m with epsilon-factor = eps^m: sum over n of
    n * nu_{b,lambda, eps^n D cap pi^{-1} D}(O_p)."""
    from .cones import act, intersect

    if D.indicator(pi) != 1:
        raise NormalizationRequired("pi must lie in the Shintani domain")
    piinv = pi.inverse()
    piD = act(piinv, D)
    total = 0
    nonempty = []
    for n in range(-window, window + 1):
        inter = intersect(act(eps.pow(n), D), piD)
        if inter.is_empty():
            continue
        nonempty.append(n)
        if n == 0:
            continue
        val = ConeMeasure(ctx, f, b, smoothing, inter, exclusions).value(o_p_conds)
        total += n * val
    if nonempty and (min(nonempty) <= -window + 1 or max(nonempty) >= window - 1):
        raise PadicRegError("epsilon-factor window too small")
    return total


# ---------------------------------------------------------------------------
# log-norm integrals via exact moments

def integral_log_norm_class(
    measure: ConeMeasure,
    lp: LocalPrime,
    cls: LocalClass,
    fixed: list[LocalClass],
    prec: int,
) -> PadicNumber:
    """integral of log_p N_{F_p/Q_p}(x_p) over the class (times fixed
    conditions at other primes) against the measure, to absolute precision
    prec in the ambient parent.

    Split prime: the local norm is the identity, so the integrand is
    log_p(iota(alpha)) and the series runs over exact single-sided moments
    of (alpha - c)^j.  Inert prime: the local norm agrees with the global
    norm, so the series runs over rational moments of (N(alpha) - N(c))^j.
    """
    ctx = measure.ctx
    par = lp.parent
    z = FieldElement(ctx, *cls.z)
    ordc = lp.ord(z)
    k = cls.level
    if ordc >= k:
        raise UnboundedSupport("class contains 0; log integral unbounded")
    gap = k - ordc
    jmax = 1
    while jmax * gap - _vp_bound(jmax, lp.p) < prec + 2:
        jmax += 1
    conds = Conditions([cls] + list(fixed))
    mass = measure.rational_value(conds)
    if lp.deg == 1:
        mons = [(0, j) for j in range(jmax + 1)]
        vals = measure.moments(conds, mons)
        # exact F-valued moments of (alpha - z)^j / z^j, embedded at p last
        series = par.zero(prec + 4)
        zinv_pows = [ctx.one()]
        zinv = z.inverse()
        for _ in range(jmax):
            zinv_pows.append(zinv_pows[-1] * zinv)
        for j in range(1, jmax + 1):
            Tj = ctx.zero()
            for i in range(j + 1):
                Tj = Tj + vals[(0, i)] * ctx.elem(comb(j, i)) * (-z).pow(j - i)
            contrib = Tj * zinv_pows[j] * ctx.elem(Fraction((-1) ** (j + 1), j))
            series = series + lp.embed(contrib, prec + 4)
        logc = iwasawa_log(lp.embed(z, prec + 6 + 2 * abs(ordc)))
    else:
        nz = z.norm()
        mons = [(j, j) for j in range(jmax + 1)]
        vals = measure.moments(conds, mons)
        M = []
        for i in range(jmax + 1):
            v = vals[(i, i)]
            if v.b != 0:
                raise NonIntegerMass("norm moment not rational")
            M.append(v.a)
        series = par.zero(prec + 4)
        nz_pow = [Fraction(1)]
        for _ in range(jmax):
            nz_pow.append(nz_pow[-1] * nz)
        for j in range(1, jmax + 1):
            Tj = Fraction(0)
            for i in range(j + 1):
                Tj += comb(j, i) * (-nz) ** (j - i) * M[i]
            coeff = Fraction((-1) ** (j + 1), j) / nz_pow[j]
            series = series + par.from_rational(coeff * Tj, prec + 4)
        logc = iwasawa_log(par.from_rational(nz, prec + 6 + 2 * abs(ordc)))
    total = logc * par.from_rational(mass, prec + 4) + series
    return PadicNumber(par, total.vec, prec, _val_shift=total.shift)


def _vp_bound(j: int, p: int) -> int:
    import math

    return math.floor(math.log(max(2 * j, 2), p)) + 1


def unit_classes_level_one(ctx: FieldContext, prime: IdealHNF, p: int) -> list[FieldElement]:
    """Representatives of (O/p)^* as global integral elements."""
    reps = []
    for r in prime.residues():
        if r.is_zero():
            continue
        if IdealHNF.principal(ctx, r).add(prime).norm() == 1:
            reps.append(r)
    return reps


def shell_classes(
    ctx: FieldContext, prime: IdealHNF, p: int, shell: int
) -> list[tuple[FieldElement, int]]:
    """Classes c + p^(shell+1) covering the shell {ord = shell}: returns
    (representative, level)."""
    gen = None
    # representative of valuation exactly `shell`: use a generator power times units
    units = unit_classes_level_one(ctx, prime, p)
    if shell == 0:
        return [(u, 1) for u in units]
    # element of valuation exactly shell: build from the prime's HNF basis
    pw = prime
    for _ in range(shell - 1):
        pw = pw * prime
    # find element of pw with ord exactly shell
    base = None
    b0, b1 = pw.lat.basis()
    for cand in (FieldElement(ctx, *b0), FieldElement(ctx, *b1), FieldElement(ctx, *b0) + FieldElement(ctx, *b1)):
        if IdealHNF.principal(ctx, cand).valuation(prime) == shell:
            base = cand
            break
    if base is None:
        raise PadicRegError("no shell representative found")
    return [(base * u, shell + 1) for u in units]
