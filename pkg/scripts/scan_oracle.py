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
lat = Lattice2(1, 1, 0, 1)
coset = LatticeCoset((Fraction(1, 2), Fraction(1, 3)), lat)
cone = HalfOpenCone(one, eps, False, False)
vals = sector_moments(cone, coset, [(0, 0), (1, 1), (2, 2)])

for (scale, emax, dps, rl2) in [
    (0.12, 10, 50, 0.5),
    (0.08, 9, 45, 0.5),
    (0.06, 8, 42, 0.5),
    (0.12, 12, 55, 0.5),
    (0.08, 12, 50, 0.5),
]:
    line = f"scale={scale} emax={emax} dps={dps} rl2={rl2}:"
    for (d1, d2) in [(0, 0), (1, 1), (2, 2)]:
        t0 = time.time()
        try:
            num = sector_moment_numeric(
                ctx, one, eps, coset, d1, d2, dps=dps, scale=scale, emax=emax, ratio_log2=rl2
            )
            exact = vals[(d1, d2)].embedding_mpf(2, dps)
            line += f"  k={d1}: err={mpmath.nstr(abs(num - exact), 2)} ({round(time.time() - t0, 1)}s)"
        except Exception as ex:
            line += f"  k={d1}: EXC {ex}"
    print(line, flush=True)
print("done")
