"""Classical L-values at 0, -1, -2 and the p-adic L-function from the
extended cone measures.

The Iwasawa-algebra layer is never materialized: writing <y> for the
projection y/omega(y) to 1-units, the smoothed p-adic L-function is
evaluated directly as

  (1 - chi(lambda) ell <ell>^-s) L_p(chi omega, s)
      = sum over ray classes  chi(b) <N b>^-s
        * integral over prod_{p | p} O_p^* of <N_p(x)>^-s d nu~_{b,lambda,D}(x)

with nu~ the conductor-level measure extended by unit classes at the primes
above p outside R.  At integer s every integrand reduces to exact rational
moments, so values enter p-adically only through the final embedding;
omega on ideals is teich(N a mod p).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from fractions import Fraction
from math import comb

from .cyclotomic import CycRat
from .errors import PadicRegError, RouteDisagreement, SmoothingUnit
from .field import FieldContext, IdealHNF, RayClassGroup, factor_ideal
from .measure import ConeMeasure, Conditions, LocalClass, LocalPrime, unit_classes_level_one
from .padic import INF, PadicField, PadicNumber, embed_cycrat, iwasawa_log, teichmuller
from .zeta import partial_zeta


@dataclass
class LSeriesValue:
    value: object  # CycRat (classical) or PadicNumber (p-adic)
    s: object
    euler_removed: tuple = ()
    meta: dict = dfield(default_factory=dict)


def classical_L(
    ctx: FieldContext,
    rcg: RayClassGroup,
    chi,
    D,
    b_reps: list[IdealHNF],
    k: int,
    euler_primes: list[IdealHNF] = (),
    smoothing=None,
) -> LSeriesValue:
    """L(chi, k) (or the smoothed assembly) as an exact cyclotomic number,
    with the requested Euler factors removed: L_S = prod (1 - chi(q) Nq^-k) L."""
    total = CycRat.zero(chi.order)
    for b in b_reps:
        chiv = chi.on_ideal(b)
        if chiv.is_zero():
            continue
        z = partial_zeta(ctx, rcg.f, D, b, k, smoothing)
        total = total + chiv * CycRat.from_rational(z.value, chi.order)
    removed = []
    for q in euler_primes:
        nq = q.norm()
        factor = CycRat.one(chi.order) - chi.on_ideal(q) * CycRat.from_rational(
            Fraction(nq) ** (-k), chi.order
        )
        total = total * factor
        removed.append(q.key())
    return LSeriesValue(total, k, tuple(removed), {"smoothed": smoothing is not None})


# ---------------------------------------------------------------------------
# p-adic L-function

class PadicLMachine:
    """Evaluates (1 - chi(lambda) ell <ell>^-s) L_p(chi omega, s) at integer
    arguments via exact norm moments on the unit-class cover."""

    def __init__(
        self,
        ctx: FieldContext,
        f: IdealHNF,
        rcg: RayClassGroup,
        chi,
        smoothing: tuple[int, IdealHNF],
        D,
        b_reps: list[IdealHNF],
        all_primes: list[LocalPrime],
        exclusions,
        parent: PadicField,
        zeta_image,
        prec: int,
    ):
        self.ctx = ctx
        self.f = f
        self.rcg = rcg
        self.chi = chi
        self.smoothing = smoothing
        self.D = D
        self.b_reps = b_reps
        self.all_primes = all_primes
        self.parent = parent
        self.zeta_image = zeta_image
        self.prec = prec
        self.exclusions = exclusions
        self._covers = None
        self._moment_tables = {}

    # -- class cover of prod O_p^* ------------------------------------------
    def _unit_cover(self):
        """Level-one unit classes with a single global center each: the
        residues of O/(p) that are units at every prime above p."""
        if self._covers is not None:
            return self._covers
        ctx = self.ctx
        p = self.parent.p
        p_ideal = IdealHNF.principal(ctx, ctx.elem(p))
        covers = []
        for r in p_ideal.residues():
            if r.is_zero():
                continue
            if any(lp.ideal.contains(r) for lp in self.all_primes):
                continue
            classes = [LocalClass.of(lp.ideal, r, 1) for lp in self.all_primes]
            covers.append((r, classes))
        self._covers = covers
        return covers

    def _norm_moments(self, b: IdealHNF, center, classes, jmax: int):
        """Exact recentered moments T_i = integral (N alpha - N c)^i over the
        class combo with global center c."""
        key = (b.key(), (center.a, center.b), jmax)
        if key in self._moment_tables:
            return self._moment_tables[key]
        ctx = self.ctx
        measure = ConeMeasure(ctx, self.f, b, self.smoothing, self.D, self.exclusions)
        conds = Conditions(classes)
        mons = [(i, i) for i in range(jmax + 1)]
        vals = measure.moments(conds, mons)
        M = []
        for i in range(jmax + 1):
            v = vals[(i, i)]
            if v.b != 0:
                raise PadicRegError("norm moment not rational")
            M.append(v.a)
        nc = center.norm()
        T = []
        for i in range(jmax + 1):
            acc = Fraction(0)
            for j in range(i + 1):
                acc += comb(i, j) * (-nc) ** (i - j) * M[j]
            T.append(acc)
        self._moment_tables[key] = T
        return T

    def smoothing_factor(self, s: int) -> PadicNumber:
        """1 - chi(lambda) ell <ell>^-s."""
        ell, lam = self.smoothing
        par = self.parent
        chil = embed_cycrat(par, self.chi.on_ideal(lam), self.zeta_image, self.prec + 6)
        ell_el = par.from_int(ell, self.prec + 6)
        proj = ell_el / teichmuller(ell_el)
        return par.one(INF) - chil * ell_el * proj ** (-s)

    def raw_value(self, s: int) -> PadicNumber:
        """Phi(s): the smoothed-interpolated value before dividing."""
        par = self.parent
        prec = self.prec
        jmax = 1
        while jmax - _vpb(jmax, par.p) < prec + 2:
            jmax += 1
        total = par.zero(INF)
        for b in self.b_reps:
            chiv = self.chi.on_ideal(b)
            if chiv.is_zero():
                continue
            w_chi = embed_cycrat(par, chiv, self.zeta_image, prec + 6)
            nb = par.from_rational(b.norm(), prec + 6)
            nb_proj = nb / teichmuller(nb)
            acc = par.zero(INF)
            for center, classes in self._unit_cover():
                T = self._norm_moments(b, center, classes, jmax)
                nc = center.norm()
                # integral <N_p x>^-s = <N_p c>^-s sum_i C(-s,i) Nc^-i T_i
                series = Fraction(0)
                for i in range(jmax + 1):
                    series += Fraction(_binom_int(-s, i)) * T[i] / nc**i
                ncp = par.from_rational(nc, prec + 6)
                proj = ncp / teichmuller(ncp)
                acc = acc + proj ** (-s) * par.from_rational(series, prec + 4)
            total = total + w_chi * nb_proj ** (-s) * acc
        return PadicNumber(par, total.vec, prec, _val_shift=total.shift)

    def value(self, s: int) -> LSeriesValue:
        """L_p(chi omega, s)."""
        fac = self.smoothing_factor(s)
        if fac.is_zero():
            raise SmoothingUnit("smoothing factor vanishes at this s")
        v = self.raw_value(s) / fac
        return LSeriesValue(v, s, (), {"smoothing_valuation": fac.valuation()})

    def derivative_finite_difference(self, r: int, a: int | None = None) -> LSeriesValue:
        """L_p^(r)(chi omega, 0)/r! by divided differences on nodes j p^a."""
        par = self.parent
        p = par.p
        if a is None:
            a = self.prec + 2
        h = p**a
        nodes = [j * h for j in range(r + 1)]
        vals = [self.value(sn).value for sn in nodes]
        # divided differences
        dd = list(vals)
        for lvl in range(1, r + 1):
            dd = [
                (dd[i + 1] - dd[i]) / par.from_int(nodes[i + lvl] - nodes[i], INF)
                for i in range(len(dd) - 1)
            ]
        return LSeriesValue(dd[0], 0, (), {"route": "finite-difference", "h": f"{p}^{a}", "order": r})


def _binom_int(n: int, k: int) -> int:
    """C(n, k) for integer n (possibly negative), k >= 0."""
    num = 1
    for i in range(k):
        num *= n - i
    den = 1
    for i in range(1, k + 1):
        den *= i
    assert num % den == 0
    return num // den


def _vpb(j: int, p: int) -> int:
    import math

    return math.floor(math.log(max(2 * j, 2), p)) + 1
