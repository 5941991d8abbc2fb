"""
Brownian paths and the zero-energy wavefunction
===============================================

psi(r) is the average of exp(-m int V dnu) over paths started at r.  For a
square barrier it is known in closed form, so the Monte Carlo can be read
off against it directly.
"""

import math

from pathscatter import SquareBarrier, Yukawa
from pathscatter.exact import numerov_scattering_length, square_scattering_length
from pathscatter.path_mc import McConfig, mc_phi, mc_scattering_length

G = 1.0
pot = SquareBarrier(G)
a = square_scattering_length(G)
cfg = McConfig(n_paths=1024, d_nu=0.01, nu_max=10.0, n_nodes=8)

# inside: sinh(sqrt(G) r)/(r sqrt(G) cosh(sqrt(G))); outside: 1 - a/r
print(f"{'r':>5} {'psi_mc':>9} {'stderr':>8} {'psi':>9}")
for r in (0.25, 0.5, 0.75, 1.5, 3.0):
    est = mc_phi(pot, r, cfg, tail_length=a)
    exact = math.sinh(r) / (r * math.cosh(1.0)) if r < 1 else 1 - a / r
    print(f"{r:5.2f} {est.mean:9.5f} {est.stderr:8.5f} {exact:9.5f}")

# the length itself, for a Yukawa potential
est = mc_scattering_length(Yukawa(1.0), cfg)
print()
print(f"a_MC = {est.mean:.4f} +- {est.stderr:.4f}   numerov {numerov_scattering_length(Yukawa(1.0)):.4f}   ess {est.ess:.0f}")
