"""Closed-form single-round correction schemes and their parameter analysis.

Output-shift conventions (all per sample, exact formulas, no simulation of
the underlying wavefunctions):

original Steane     u' = u1 + u3 - R(u1 + u2)
                    v' = v1 - v2 - R(v1 - v2 - v3)
ME-Steane           same measurement shifts, feedback rescaled by
                    eta_q = sD^2/(sD^2+sA^2), eta_p = (sD^2+sA^2)/(sD^2+2 sA^2)
P-Steane(b, m)      xi_q = u1 + b u3,            m_q = u1 + (b m/2) u2 + (b(2-m)/2) u3
                    xi_p = v1 - 2 v2/(b m),      m_p = v1 - (v2 + v3)/b
                    u' = xi_q - c_q R(m_q),      v' = xi_p - c_p R(m_p)
teleportation       u' = (u2+u3)/sqrt2 + pi(u1 - (u2-u3)/sqrt2), analogously in v

where R is ``round_residual`` and pi is ``binary_shift``.  The logical-error
integers satisfy u' = xi_q - c_q*m_q - c_q*n_q*sqrt(pi) exactly, i.e. n_q is
minus the sqrt(pi)-band index of m_q; (n_q, n_p) = (0, 0) exactly when both
measurement shifts fall in [-sqrt(pi)/2, sqrt(pi)/2).

All correction functions accept scalar or array-valued ShiftVectors and
broadcast elementwise, so they serve directly as Monte Carlo kernels.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import SQRT_PI, NoiseModel, ShiftVector, lattice_split

_SQRT2 = float(np.sqrt(2.0))


class SchemeKind(enum.Enum):
    ORIGINAL_STEANE = "original"
    ME_STEANE = "me"
    P_STEANE = "p_steane"
    TELEPORTATION = "teleportation"


@dataclass(frozen=True)
class SchemeSpec:
    """A correction scheme plus its tunable parameters.

    Only P-Steane carries parameters: the squeezing parameter b > 0 and the
    positive integer m = 2a/b (a is derived as m*b/2).  m = 0 is rejected
    because it makes xi_p and c_p singular.
    """

    kind: SchemeKind
    b: float | None = None
    m: int | None = None

    def __post_init__(self):
        if self.kind is SchemeKind.P_STEANE:
            if self.b is None or not (np.isfinite(self.b) and self.b > 0):
                raise ValueError("P-Steane requires b > 0")
            if self.m is None or int(self.m) != self.m or self.m < 1:
                raise ValueError("P-Steane requires integer m >= 1")
            object.__setattr__(self, "b", float(self.b))
            object.__setattr__(self, "m", int(self.m))
        elif self.b is not None or self.m is not None:
            raise ValueError(f"{self.kind.value} carries no (b, m) parameters")

    @property
    def a(self) -> float:
        if self.kind is not SchemeKind.P_STEANE:
            raise ValueError("a is defined only for P-Steane")
        return self.m * self.b / 2.0

    @property
    def label(self) -> str:
        if self.kind is SchemeKind.P_STEANE:
            return f"p_steane(b={self.b:.12g},m={self.m})"
        return self.kind.value

    @classmethod
    def original(cls) -> "SchemeSpec":
        return cls(SchemeKind.ORIGINAL_STEANE)

    @classmethod
    def me(cls) -> "SchemeSpec":
        return cls(SchemeKind.ME_STEANE)

    @classmethod
    def p_steane(cls, b: float, m: int) -> "SchemeSpec":
        return cls(SchemeKind.P_STEANE, b=b, m=m)

    @classmethod
    def teleportation(cls) -> "SchemeSpec":
        return cls(SchemeKind.TELEPORTATION)


@dataclass(frozen=True)
class ScalingFactors:
    """Feedback rescaling pair; both factors lie in (0, 1] and -> 1 as sigma_A -> 0."""

    c_q: float
    c_p: float


@dataclass(frozen=True)
class CorrectionOutcome:
    """Residual output shifts, measurement shifts and logical-error integers."""

    u_out: float | np.ndarray
    v_out: float | np.ndarray
    m_q: float | np.ndarray
    m_p: float | np.ndarray
    n_q: int | np.ndarray
    n_p: int | np.ndarray

    def any_logical_error(self):
        return (np.asarray(self.n_q) != 0) | (np.asarray(self.n_p) != 0)


def me_scaling(noise: NoiseModel) -> ScalingFactors:
    """Maximum-likelihood feedback factors of the ME-Steane scheme."""
    vd, va = noise.var_D, noise.var_A
    return ScalingFactors(c_q=vd / (vd + va), c_p=(vd + va) / (vd + 2.0 * va))


def p_steane_scaling(spec: SchemeSpec, noise: NoiseModel) -> ScalingFactors:
    """Maximum-likelihood feedback factors of the P-Steane scheme.

    c_q = (2 sD^2 + b^2 (2-m) sA^2) / (2 sD^2 + b^2 (m^2-2m+2) sA^2)
    c_p = (b^2 m sD^2 + 2 sA^2) / (b^2 m sD^2 + 2 m sA^2)

    At (b, m) = (1, 2) these reduce to the ME-Steane factors; at m = 1 both
    equal 1 for every b and noise level.
    """
    if spec.kind is not SchemeKind.P_STEANE:
        raise ValueError("p_steane_scaling requires a P-Steane spec")
    b2 = spec.b * spec.b
    m = spec.m
    vd, va = noise.var_D, noise.var_A
    c_q = (2.0 * vd + b2 * (2 - m) * va) / (2.0 * vd + b2 * (m * m - 2 * m + 2) * va)
    c_p = (b2 * m * vd + 2.0 * va) / (b2 * m * vd + 2.0 * m * va)
    return ScalingFactors(c_q=c_q, c_p=c_p)


def generic_mle_factor(cov_xm: float, var_m: float) -> float:
    """Optimal linear-feedback gain Cov(xi, m) / Var(m)."""
    if not var_m > 0:
        raise ValueError("var_m must be > 0")
    return cov_xm / var_m


def _steane_outcome(shifts: ShiftVector, c_q: float, c_p: float) -> CorrectionOutcome:
    m_q = shifts.u1 + shifts.u2
    m_p = shifts.v1 - shifts.v2 - shifts.v3
    n_q, r_q = lattice_split(m_q)
    n_p, r_p = lattice_split(m_p)
    u_out = shifts.u1 + shifts.u3 - c_q * r_q
    v_out = shifts.v1 - shifts.v2 - c_p * r_p
    return CorrectionOutcome(u_out, v_out, m_q, m_p, -n_q, -n_p)


def original_steane(shifts: ShiftVector, noise: NoiseModel | None = None) -> CorrectionOutcome:
    """Original Steane correction; the noise argument is accepted but unused."""
    return _steane_outcome(shifts, 1.0, 1.0)


def me_steane(shifts: ShiftVector, noise: NoiseModel) -> CorrectionOutcome:
    """ME-Steane correction: Steane syndrome with rescaled feedback."""
    f = me_scaling(noise)
    return _steane_outcome(shifts, f.c_q, f.c_p)


def p_steane(shifts: ShiftVector, spec: SchemeSpec, noise: NoiseModel) -> CorrectionOutcome:
    """P-Steane correction with preprocessing parameters (b, m)."""
    if spec.kind is not SchemeKind.P_STEANE:
        raise ValueError("p_steane requires a P-Steane spec")
    b, m = spec.b, spec.m
    f = p_steane_scaling(spec, noise)
    xi_q = shifts.u1 + b * shifts.u3
    m_q = shifts.u1 + (b * m / 2.0) * shifts.u2 + ((2.0 * b - b * m) / 2.0) * shifts.u3
    xi_p = shifts.v1 - (2.0 / (b * m)) * shifts.v2
    m_p = shifts.v1 - (shifts.v2 + shifts.v3) / b
    n_q, r_q = lattice_split(m_q)
    n_p, r_p = lattice_split(m_p)
    u_out = xi_q - f.c_q * r_q
    v_out = xi_p - f.c_p * r_p
    return CorrectionOutcome(u_out, v_out, m_q, m_p, -n_q, -n_p)


def teleportation(shifts: ShiftVector, noise: NoiseModel | None = None) -> CorrectionOutcome:
    """Teleportation-based correction; feedback is the binary sqrt(pi) shift.

    The logical-error integers are the activation bits of the binary shift
    (1 when the sqrt(pi) branch fires), since the scheme applies one of the
    four Pauli corrections rather than a lattice index.
    """
    m_q = shifts.u1 - (shifts.u2 - shifts.u3) / _SQRT2
    m_p = shifts.v1 + (shifts.v2 - shifts.v3) / _SQRT2
    n_q = lattice_split(m_q)[0] % 2
    n_p = lattice_split(m_p)[0] % 2
    u_out = (shifts.u2 + shifts.u3) / _SQRT2 + n_q * SQRT_PI
    v_out = (shifts.v2 + shifts.v3) / _SQRT2 + n_p * SQRT_PI
    return CorrectionOutcome(u_out, v_out, m_q, m_p, n_q, n_p)


def teleportation_equiv_form(shifts: ShiftVector, noise: NoiseModel | None = None) -> CorrectionOutcome:
    """R-based form of the teleportation outputs, equal to them mod 2 sqrt(pi)."""
    m_q = shifts.u1 - (shifts.u2 - shifts.u3) / _SQRT2
    m_p = shifts.v1 + (shifts.v2 - shifts.v3) / _SQRT2
    n_q, r_q = lattice_split(m_q)
    n_p, r_p = lattice_split(m_p)
    u_out = shifts.u1 + _SQRT2 * shifts.u3 - r_q
    v_out = shifts.v1 + _SQRT2 * shifts.v2 - r_p
    return CorrectionOutcome(u_out, v_out, m_q, m_p, -n_q, -n_p)


def correct(shifts: ShiftVector, spec: SchemeSpec, noise: NoiseModel) -> CorrectionOutcome:
    """Apply the correction scheme selected by ``spec``."""
    if spec.kind is SchemeKind.ORIGINAL_STEANE:
        return original_steane(shifts, noise)
    if spec.kind is SchemeKind.ME_STEANE:
        return me_steane(shifts, noise)
    if spec.kind is SchemeKind.P_STEANE:
        return p_steane(shifts, spec, noise)
    return teleportation(shifts, noise)


# ---------------------------------------------------------------------------
# small-noise analysis
# ---------------------------------------------------------------------------

def small_noise_variances(spec: SchemeSpec, noise: NoiseModel) -> tuple[float, float]:
    """Closed-form output variances (sigma_q^2, sigma_p^2) in the small-noise regime.

    Original Steane: (2 sA^2, sA^2).  ME-Steane: the correlated-feedback
    values.  P-Steane: the (b, m) family forms.  Teleportation: (sA^2, sA^2),
    matching P-Steane at (b, m) = (sqrt2, 1).
    """
    vd, va = noise.var_D, noise.var_A
    if spec.kind is SchemeKind.ORIGINAL_STEANE:
        return 2.0 * va, va
    if spec.kind is SchemeKind.ME_STEANE:
        return va * (va + 2.0 * vd) / (va + vd), va * (va + vd) / (2.0 * va + vd)
    if spec.kind is SchemeKind.TELEPORTATION:
        return va, va
    b2 = spec.b * spec.b
    m = spec.m
    mm = m * m - 2 * m + 2
    var_q = va * m * m * (b2 * b2 * va + 2.0 * b2 * vd) / (2.0 * b2 * mm * va + 4.0 * vd)
    var_p = (4.0 * va * va + 2.0 * b2 * mm * va * vd) / (b2 * m * m * (2.0 * va + b2 * vd))
    return var_q, var_p


def variance_product(b: float, m: int, noise: NoiseModel) -> float:
    """Product sigma_q^2 * sigma_p^2 of the P-Steane small-noise variances.

    Equals sA^4 * [1 + 2 b^2 (m-1)^2 (sD^4 - sA^4) / ((b^2 (m^2-2m+2) sA^2 +
    2 sD^2)(2 sA^2 + b^2 sD^2))]; the minimum sA^4 is attained iff m = 1 or
    sD = sA (for sD >= sA).
    """
    if not (np.isfinite(b) and b > 0):
        raise ValueError("b must be finite and > 0")
    if int(m) != m or m < 1:
        raise ValueError("m must be a positive integer")
    vd, va = noise.var_D, noise.var_A
    b2 = b * b
    mm = m * m - 2 * m + 2
    excess = (
        2.0 * b2 * (m - 1) ** 2 * (vd * vd - va * va)
        / ((b2 * mm * va + 2.0 * vd) * (2.0 * va + b2 * vd))
    )
    return va * va * (1.0 + excess)


def measurement_variances(spec: SchemeSpec, noise: NoiseModel) -> tuple[float, float]:
    """Variances (Sigma_q^2, Sigma_p^2) of the measurement shift errors.

    Defined for ME-Steane and for P-Steane with m = 1 (the large-noise
    analysis of the paper covers exactly these).
    """
    vd, va = noise.var_D, noise.var_A
    if spec.kind is SchemeKind.ME_STEANE:
        return vd + va, vd + 2.0 * va
    if spec.kind is SchemeKind.P_STEANE and spec.m == 1:
        b2 = spec.b * spec.b
        return vd + b2 * va / 2.0, vd + 2.0 * va / b2
    raise ValueError("measurement_variances supports ME-Steane or P-Steane with m = 1")


def admissible_b_interval(k: float) -> tuple[float, float]:
    """Interval of b where P-Steane(m=1) dominates ME-Steane componentwise.

    Endpoints sqrt(3 -+ (k-1)/(k+1)); requires k >= 1.  k = inf gives the
    limiting interval (sqrt 2, 2).
    """
    if np.isnan(k) or k < 1.0:
        raise ValueError("k must be >= 1")
    ratio = 1.0 if np.isinf(k) else (k - 1.0) / (k + 1.0)
    return float(np.sqrt(3.0 - ratio)), float(np.sqrt(3.0 + ratio))
