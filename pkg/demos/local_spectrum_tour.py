"""Local spectrum, local spectral radius and orbit growth for a small defective matrix.

Run with: python3 demos/local_spectrum_tour.py
"""

import numpy as np

from speclab import local_spectral_radius_exact, local_spectral_radius_power, local_spectrum, orbit_growth

# a 2x2 Jordan block at i next to a simple eigenvalue -2i
T = np.array([[1j, 1, 0], [0, 1j, 0], [0, 0, -2j]])

for label, x in [("e1", np.array([1, 0, 0])), ("e2", np.array([0, 1, 0])), ("e3", np.array([0, 0, 1])),
                 ("e1+e3", np.array([1, 0, 1]))]:
    loc = local_spectrum(T, x)
    est = local_spectral_radius_power(T, x)
    cert = orbit_growth(T, x)
    print(f"x = {label:6s} sigma_T(x) = {[complex(np.round(p, 12)) for p in loc.points]}")
    print(f"           r_T(x) exact {local_spectral_radius_exact(T, x):.6f}, power estimate {est.estimate:.6f}")
    # e2 sits at the top of the Jordan chain: its orbit grows linearly and the power
    # estimate carries an n^(1/n) factor that fades slowly
    print(f"           growth exponent {cert.exact_alpha} (fitted {cert.fitted_alpha:.3f}), "
          f"constant {cert.fitted_C:.3f}")
