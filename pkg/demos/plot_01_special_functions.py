"""
Bessel functions of order zero
==============================

J0, Y0 and the outgoing Hankel function H0 are evaluated with a power series
for small arguments and the Hankel asymptotic expansion for large ones.  This
script compares both regimes against scipy and shows the switchover point.
"""

import numpy as np
from scipy import special

from phaserec import bessel_j0, bessel_y0, hankel1_0
from phaserec.special_functions import SWITCHOVER

x = np.linspace(0.05, 30.0, 600)

# absolute errors against scipy's Cephes-based routines
err_j = np.abs(bessel_j0(x) - special.j0(x))
err_y = np.abs(bessel_y0(x) - special.y0(x))
print(f"max |J0 error| on (0, 30]: {err_j.max():.2e}")
print(f"max |Y0 error| on (0, 30]: {err_y.max():.2e}")

# the two branches meet at the switchover argument
below, above = x < SWITCHOVER, x >= SWITCHOVER
print(f"switchover at x = {SWITCHOVER}")
print(f"  series branch max error:     {max(err_j[below].max(), err_y[below].max()):.2e}")
print(f"  asymptotic branch max error: {max(err_j[above].max(), err_y[above].max()):.2e}")

# H0 = J0 + i Y0 decays like sqrt(2 / (pi x)) in modulus
big = np.array([10.0, 100.0, 1000.0])
print("|H0(x)| sqrt(pi x / 2):", np.abs(hankel1_0(big)) * np.sqrt(np.pi * big / 2))

# first zero of J0, located by a simple bracket search
lo, hi = 2.0, 3.0
for _ in range(60):
    mid = 0.5 * (lo + hi)
    lo, hi = (mid, hi) if bessel_j0(lo) * bessel_j0(mid) > 0 else (lo, mid)
print(f"first zero of J0: {lo:.12f}")
