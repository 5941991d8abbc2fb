"""
Cross sections of a Yukawa potential
====================================

Partial waves (Numerov) against the eikonal, quantum-mean and unitary
forms.  The quantum-mean and unitary schemes each fix a cutoff k_c first.
"""

import math

import numpy as np

from pathscatter import Yukawa
from pathscatter.eikonal import eikonal_cross_section
from pathscatter.exact import numerov_scattering_length, yukawa_cross_section
from pathscatter.quantum_mean import calibrate_kc_sigma, qma_sigma
from pathscatter.unitary import solve_unitary, unitary_sigma

pot = Yukawa(5.0)
a = numerov_scattering_length(pot)
cal = calibrate_kc_sigma(pot, 1.0)
sol = solve_unitary(pot)
print(f"a = {a:.6f}, 4 pi a^2 = {4 * math.pi * a * a:.4f}")
print(f"k_c: quantum mean {cal.k_c:.5f}, unitary {sol.k_c:.5f}")

print()
print(f"{'k':>7} {'numerov':>10} {'eikonal':>10} {'qma':>10} {'unitary':>10}")
for k in np.geomspace(0.05, 20, 8):
    print(
        f"{k:7.3f} {yukawa_cross_section(pot, k)[0]:10.4f} {eikonal_cross_section(pot, k):10.4f}"
        f" {qma_sigma(pot, k, cal.k_c):10.4f} {unitary_sigma(pot, k, sol):10.4f}"
    )

# the eikonal form is built for large k; it fails at threshold
# the two calibrated forms carry the right k -> 0 limit by construction
