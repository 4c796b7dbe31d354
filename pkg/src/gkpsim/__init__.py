"""gkpsim: simulator and analytics for GKP shift-error correction schemes.

Modules: ``core`` (lattice arithmetic, noise model, sampler), ``symplectic``
(Gaussian gates as quadrature maps, preprocessing identity), ``schemes``
(the four correction schemes and their parameter analysis), ``analytics``
(closed-form PDF, deterministic Delta oracle, comparison statistics),
``montecarlo`` (seeded chunk-parallel estimators), ``cli`` (command line).
"""

from .core import (
    HBAR,
    SQRT_PI,
    TWO_SQRT_PI,
    NoiseModel,
    RngStream,
    ShiftVector,
    binary_shift,
    lattice_split,
    round_residual,
    sample_shifts,
    symmetric_mod,
)
from .schemes import (
    CorrectionOutcome,
    ScalingFactors,
    SchemeKind,
    SchemeSpec,
    admissible_b_interval,
    correct,
    generic_mle_factor,
    me_scaling,
    me_steane,
    measurement_variances,
    original_steane,
    p_steane,
    p_steane_scaling,
    small_noise_variances,
    teleportation,
    teleportation_equiv_form,
    variance_product,
)
from .symplectic import (
    PreprocessingReport,
    StabilizerLattice,
    SymplecticMap,
    compose,
    gate_bs50,
    gate_squeeze,
    gate_sum,
    gate_sum_inv,
    identity_map,
    p_steane_circuit,
    preprocessing_map,
    propagate_displacement,
    steane_circuit,
    symplectic_form,
    teleportation_circuit,
    verify_preprocessing_identity,
)
from .analytics import (
    Chi2Result,
    PdfSpec,
    QuadratureGrid,
    QuadratureRefinementError,
    band_weights,
    chi2_vs_samples,
    delta_oracle,
    gaussian_axis_rule,
    ks_critical_value,
    ks_statistic,
    output_shift_variance,
    p_steane_sym_cdf,
    p_steane_sym_pdf,
    triangle_wave_mean,
)
from .montecarlo import (
    InsufficientSamplesError,
    McConfig,
    MetricEstimate,
    StreamingMoments,
    SweepRow,
    estimate_delta,
    estimate_logical_rate,
    estimate_output_variance,
    run_sweep,
)

__version__ = "0.1.0"
