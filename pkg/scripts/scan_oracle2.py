"""Tune the oracle on a narrow-sector, small-covolume case."""
from fractions import Fraction
import mpmath, time
from padicreg.field import *
from padicreg.cones import *
from padicreg.zeta import *
from padicreg.oracle import sector_moment_numeric
from padicreg.util import Lattice2

ctx = field_create(5)
eps = totally_positive_fundamental_unit(ctx)
one = ctx.one()
# narrow subsector: two mediant subdivisions of (1, eps)
m1 = one + eps            # between
m2 = one + m1             # narrower
cone = HalfOpenCone(one, m2, False, False)
lat = Lattice2(1, 1, 0, 1)
coset = LatticeCoset((Fraction(1, 3), Fraction(1, 2)), lat)
vals = sector_moments(cone, coset, [(0, 0), (1, 1), (2, 2)])

for (scale, emax, dps, rl2) in [
    (0.5, 8, 45, 0.5),
    (0.35, 10, 50, 0.5),
    (0.25, 12, 55, 0.5),
]:
    line = f"scale={scale} emax={emax} dps={dps} rl2={rl2}:"
    for (d1, d2) in [(0, 0), (1, 1), (2, 2)]:
        t0 = time.time()
        try:
            num = sector_moment_numeric(
                ctx, one, m2, coset, d1, d2, dps=dps, scale=scale, emax=emax, ratio_log2=rl2
            )
            exact = vals[(d1, d2)].embedding_mpf(2, dps)
            line += f"  k={d1}: err={mpmath.nstr(abs(num - exact), 2)} ({round(time.time() - t0, 1)}s)"
        except Exception as ex:
            line += f"  k={d1}: EXC {type(ex).__name__} {ex}"
    print(line, flush=True)
print("done")
