"""The closed-form output density of the symmetric scheme vs simulation.

The residual shift of P-Steane(sqrt2, 1) follows a lattice mixture: a narrow
Gaussian of width sigma_A on each sqrt(pi) lattice point, weighted by the
probability that the measurement shift falls in the corresponding rounding
band.  The side lobes are exactly the logical-error events.
"""

import numpy as np

from gkpsim import (
    SQRT_PI,
    NoiseModel,
    PdfSpec,
    RngStream,
    SchemeSpec,
    band_weights,
    chi2_vs_samples,
    output_shift_variance,
    p_steane,
    p_steane_sym_pdf,
    sample_shifts,
)

sd, sa = 0.2, 0.15
spec = PdfSpec(sigma_D=sd, sigma_A=sa)
print(f"PdfSpec(sigma_D={sd}, sigma_A={sa}): n_max={spec.n_max}, tail bound {spec.tail_bound():.1e}")

n, w = band_weights(spec)
center = np.where(n == 0)[0][0]
print("band weights (probability of landing n lattice sites off):")
for i in range(center - 2, center + 3):
    print(f"  n={n[i]:+d}: {w[i]:.6f}")
print(f"distribution std: {np.sqrt(output_shift_variance(spec)):.4f} (vs sigma_A = {sa})")
print()

noise = NoiseModel(sd, sa)
shifts = sample_shifts(noise, RngStream(99), 2_000_000)
out = p_steane(shifts, SchemeSpec.p_steane(np.sqrt(2), 1), noise)

print("ASCII density, analytic (#) vs simulated (o) where they differ:")
edges = np.linspace(-2.5, 2.5, 61)
hist = np.histogram(out.u_out, edges, density=True)[0]
centers = 0.5 * (edges[:-1] + edges[1:])
f = p_steane_sym_pdf(centers, spec)
scale = 55.0 / f.max()
for x, fa, fs in zip(centers, f, hist):
    bar_a, bar_s = int(round(fa * scale)), int(round(fs * scale))
    line = ["#"] * min(bar_a, bar_s) + ["o"] * max(0, bar_s - bar_a)
    marks = "".join(line)
    lobe = "  <- logical lobe" if abs(abs(x) - SQRT_PI) < 0.05 and fa > 1e-4 else ""
    print(f"  {x:+5.2f} |{marks}{lobe}")

res = chi2_vs_samples(np.asarray(out.u_out), spec)
print()
print(f"chi^2 against the closed form: stat={res.statistic:.1f}, dof={res.dof}, p={res.p_value:.3f}")
