"""Explore the tunable-preprocessing parameter space (b, m).

Shows why m = 1 is special (unit feedback gains, minimum variance product),
where the symmetric point b = sqrt2 sits, and how the admissible b interval
widens as the data qubit gets noisier than the ancillas.
"""

import numpy as np

from gkpsim import (
    NoiseModel,
    SchemeSpec,
    admissible_b_interval,
    me_scaling,
    p_steane_scaling,
    small_noise_variances,
    variance_product,
)

sa = 0.1
print("feedback gains at sigma_D = 2 sigma_A (k = 4):")
noise = NoiseModel(2 * sa, sa)
eta = me_scaling(noise)
print(f"  ME-Steane:           eta_q={eta.c_q:.4f}  eta_p={eta.c_p:.4f}")
for b, m in [(1.0, 2), (np.sqrt(2), 1), (np.sqrt(3), 1), (1.0, 3)]:
    f = p_steane_scaling(SchemeSpec.p_steane(b, m), noise)
    print(f"  P-Steane(b={b:.3f}, m={m}): c_q={f.c_q:.4f}  c_p={f.c_p:.4f}")
print("  (m = 1 always gives unit gains; b = 1, m = 2 reproduces the ME gains)")
print()

print("small-noise output variances relative to sigma_A^2, k = 3:")
noise = NoiseModel.from_ratio(3.0, sa)
va = sa * sa
for label, spec in [
    ("original", SchemeSpec.original()),
    ("ME-Steane", SchemeSpec.me()),
    ("P(sqrt2, 1)", SchemeSpec.p_steane(np.sqrt(2), 1)),
    ("P(sqrt(5/2), 1)", SchemeSpec.p_steane(np.sqrt(2.5), 1)),
    ("teleportation", SchemeSpec.teleportation()),
]:
    vq, vp = small_noise_variances(spec, noise)
    print(f"  {label:16s} sigma_q^2={vq / va:5.3f}  sigma_p^2={vp / va:5.3f}  product={vq * vp / va**2:5.3f}")
print()

print("variance product sigma_q^2 sigma_p^2 in units of sigma_A^4 (k = 3):")
bs = [0.8, 1.2, np.sqrt(2), 2.0]
print("            " + "".join(f"b={b:4.2f}  " for b in bs))
for m in (1, 2, 3):
    row = "".join(f"{variance_product(b, m, noise) / va**2:6.3f}  " for b in bs)
    print(f"  m={m}:     {row}")
print("  (the floor 1.000 is reached exactly at m = 1 for every b)")
print()

print("admissible b interval where P-Steane(m=1) dominates ME-Steane:")
for k in (1.0, 2.0, 3.0, 5.0, 10.0, np.inf):
    lo, hi = admissible_b_interval(k)
    label = "inf" if np.isinf(k) else f"{k:3.0f}"
    print(f"  k={label}: b in [{lo:.4f}, {hi:.4f}]  (width {hi - lo:.4f})")
