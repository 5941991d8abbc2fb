"""
Scattering lengths of a square barrier
======================================

Exact length, the Born value and the Jensen lower bound, then the
quantum-mean estimate for two spreads b.  Lengths are in units of R.
"""

import numpy as np

from pathscatter import SquareBarrier
from pathscatter.exact import square_scattering_length
from pathscatter.perturbation import born_length, jensen_length_bound
from pathscatter.quantum_mean import qma_scattering_length

Gs = np.geomspace(0.5, 50, 8)

# bounds first: Jensen < exact < Born for every coupling
print(f"{'G':>8} {'jensen':>10} {'exact':>10} {'born':>10}")
for G in Gs:
    p = SquareBarrier(G)
    print(f"{G:8.3f} {jensen_length_bound(p):10.5f} {square_scattering_length(G):10.5f} {born_length(p):10.5f}")

# the quantum-mean length overshoots, less so for the narrower spread
print()
print(f"{'G':>8} {'exact':>10} {'qma b=1':>10} {'qma b=0.8':>10}")
for G in Gs:
    p = SquareBarrier(G)
    print(f"{G:8.3f} {square_scattering_length(G):10.5f} {qma_scattering_length(p, 1.0):10.5f} {qma_scattering_length(p, 0.8):10.5f}")

# at strong coupling the barrier acts as a hard sphere, a -> R
print()
print("a(1e4) =", square_scattering_length(1e4))
