"""Growth of t -> e^{tA} T e^{-tA} for a nilpotent generator, and what it says about AT - TA.

With A = [[0,0],[1,0]] and T = diag(1, 0), the conjugation orbit is [[1,0],[t,0]],
so its norm is sqrt(1 + t^2): linear growth, and Delta_A^2(T) = 0.

Run with: python3 demos/conjugation_growth.py
"""

import numpy as np

from speclab import DerivationContext, conjugation_orbit, deddens_membership, derivation_power
from speclab.local import symmetric_grid

A = np.array([[0, 0], [1, 0]], dtype=complex)
T = np.diag([1, 0]).astype(complex)
ctx = DerivationContext(A)

orb = conjugation_orbit(ctx, T, symmetric_grid(20.0, 0.5))
gap = np.max(np.abs(orb.norms - np.sqrt(1 + orb.ts ** 2)))
print(f"fitted exponent {orb.fitted_alpha:.3f}, max gap to sqrt(1+t^2): {gap:.1e}")
for n in range(3):
    print(f"Delta_A^{n}(T) =\n{np.real_if_close(derivation_power(ctx, T, n))}")

for alpha in (1.0, 0.5):
    rep = deddens_membership(ctx, T, alpha)
    # the growth test and the kernel test Delta_A^{floor(alpha)+1}(T) = 0 must agree
    d = rep.details
    print(f"alpha = {alpha}: growth member {d['empirical_member']}, kernel member {d['exact_member']} ({rep.status})")
