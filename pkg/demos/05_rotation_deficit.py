"""A systematic effect: the plate tilts under load.

The torsional plate rotates by an angle proportional to the total force, so
the true gap is a little smaller than the piezo reading implies. An analysis
that ignores this attributes the extra electrostatic pull to the
calibration, and the extracted Casimir force comes out low at short range.
"""

import numpy as np

from casimirlab import MtbParams, SweepPlan, analyze, ideal_metal_force, jump_to_contact_distance
from casimirlab import simulate_dataset

params = MtbParams(noise_sigma_a=0.0)


def law(d):
    return -ideal_metal_force(params.radius, d)


print(f"jump to contact at {jump_to_contact_distance(params, law) * 1e9:.1f} nm")
plan = SweepPlan(np.linspace(100e-9, 420e-9, 9), tuple(np.linspace(-0.3, -0.1, 9)))
for rotation in (False, True):
    res = analyze(simulate_dataset(params, plan, law, rotation=rotation), params.radius)
    ratio = res.f_c / ideal_metal_force(params.radius, res.d)
    print(f"\nrotation={rotation}: d0 = {res.d0 * 1e9:.3f} nm")
    for d, r in zip(res.d, ratio):
        print(f"  d = {d * 1e9:6.1f} nm   extracted/injected = {r:.5f}")
