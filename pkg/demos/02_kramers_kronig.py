"""From measured absorption to the dielectric function at imaginary frequency.

Optical tables give Im ε(ω) on a finite grid. The Lifshitz formula needs
ε(iξ), which follows from a Kramers-Kronig integral over the table plus
tail models outside it. Here the table is synthesised from models whose
ε(iξ) is known in closed form, so the transform can be checked directly.
"""

import numpy as np

from casimirlab import DrudeParams, Oscillator, kk_transform
from casimirlab.dielectric import sample_table

xi = np.geomspace(1e13, 1e17, 9)

drude = DrudeParams(1.371e16, 4.05e13)
table = sample_table(drude.im_eps, 1e10, 1e20, 10_000, extrapolation="truncate")
exact = 1 + drude.omega_p ** 2 / (xi * (xi + drude.gamma))
got = kk_transform(table, xi)
print("Drude metal, 10^4-row table")
for x, g, e in zip(xi, got, exact):
    print(f"  xi = {x:8.2e}  eps = {g:12.6e}  closed form {e:12.6e}  rel dev {g / e - 1:+.1e}")

# a resonance needs enough rows across its width
w0 = 1e16
print("\nLorentz line at 1e16 rad/s: accuracy versus width and table size")
for rel_g in (0.05, 0.01):
    line = Oscillator(1.0, w0, rel_g * w0)
    exact = 1 + w0 ** 2 / (w0 ** 2 + xi ** 2 + rel_g * w0 * xi)
    for n in (2_000, 10_000, 40_000):
        tab = sample_table(line.im_eps, 1e10, 1e20, n, extrapolation="truncate")
        dev = np.max(np.abs(kk_transform(tab, xi) / exact - 1))
        print(f"  width {rel_g:4.2f} w0, {n:6d} rows: max rel dev {dev:.1e}")
print("Rows per line width, not total rows, set the accuracy.")
