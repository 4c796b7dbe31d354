"""Lattice arithmetic on quadrature values and the Gaussian shift sampler.

Everything downstream builds on three scalar operations: the residual of a
value to its nearest multiple of sqrt(pi) (``round_residual``), the binary
sqrt(pi)-or-0 feedback used by the teleportation scheme (``binary_shift``),
and a symmetric modular reduction (``symmetric_mod``).  All work in units
with hbar = 1, where the stabilizer lattice pitch is 2*sqrt(pi) and logical
displacements live on the sqrt(pi) half lattice.

All operations accept scalars or numpy arrays and broadcast elementwise.
Accuracy note: the lattice index is computed in double precision, so the
functions are exact-to-roundoff while |z| stays far below 2**53 * sqrt(pi);
the property-tested domain is |z| <= 1e6.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HBAR = 1.0
SQRT_PI = float(np.sqrt(np.pi))
TWO_SQRT_PI = 2.0 * SQRT_PI
HALF_SQRT_PI = 0.5 * SQRT_PI

_UINT64_MASK = (1 << 64) - 1


def _check_finite(z, name: str) -> np.ndarray:
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


def lattice_split(z):
    """Split z into (n, r) with z = n*sqrt(pi) + r and r in [-sqrt(pi)/2, sqrt(pi)/2).

    The band convention is half-open: z = (n + 1/2)*sqrt(pi) belongs to band
    n + 1.  A single fix-up pass guarantees the residual range even when the
    floor-based index lands on the wrong side of a band edge by one ulp.
    """
    arr = _check_finite(z, "z")
    n = np.floor(arr / SQRT_PI + 0.5)
    r = arr - n * SQRT_PI
    high = r >= HALF_SQRT_PI
    low = r < -HALF_SQRT_PI
    n = n + high - low
    r = np.where(high, r - SQRT_PI, np.where(low, r + SQRT_PI, r))
    if np.ndim(z) == 0:
        return int(n), float(r)
    return n.astype(np.int64), r


def round_residual(z):
    """Distance from z to its nearest integer multiple of sqrt(pi).

    Result lies in [-sqrt(pi)/2, sqrt(pi)/2); raises ValueError on non-finite
    input.
    """
    return lattice_split(z)[1]


def binary_shift(z):
    """Binary feedback of the teleportation scheme: 0 or sqrt(pi).

    Returns 0 when z sits within sqrt(pi)/2 of an even multiple of sqrt(pi)
    (i.e. a 2*sqrt(pi) lattice point) and sqrt(pi) otherwise.  Implemented as
    the parity of the band index so that (z - round_residual(z)) -
    binary_shift(z) is an even multiple of sqrt(pi) for every input,
    including the half-open band edges.
    """
    n, _ = lattice_split(z)
    return (np.asarray(n) % 2) * SQRT_PI if np.ndim(z) else float((n % 2) * SQRT_PI)


def symmetric_mod(z, period):
    """Representative of z modulo period lying in [-period/2, period/2)."""
    if not (np.ndim(period) == 0 and np.isfinite(period) and period > 0):
        raise ValueError("period must be a finite positive scalar")
    arr = _check_finite(z, "z")
    n = np.floor(arr / period + 0.5)
    r = arr - n * period
    r = np.where(r >= 0.5 * period, r - period, r)
    r = np.where(r < -0.5 * period, r + period, r)
    return float(r) if np.ndim(z) == 0 else r


@dataclass(frozen=True)
class NoiseModel:
    """Standard deviations of the twirled Gaussian shift channel.

    ``sigma_D`` acts on the data mode, ``sigma_A`` on each fresh ancilla.
    Degenerate values (sigma = 0) are accepted so noiseless limits can be
    sampled; operations that need the variance ratio k enforce sigma_A > 0
    themselves.
    """

    sigma_D: float
    sigma_A: float

    def __post_init__(self):
        for name in ("sigma_D", "sigma_A"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")

    @property
    def var_D(self) -> float:
        return self.sigma_D**2

    @property
    def var_A(self) -> float:
        return self.sigma_A**2

    @property
    def k(self) -> float:
        """Noise ratio sigma_D^2 / sigma_A^2."""
        if self.sigma_A <= 0.0:
            raise ValueError("k requires sigma_A > 0")
        return (self.sigma_D / self.sigma_A) ** 2

    @classmethod
    def from_ratio(cls, k: float, sigma_A: float) -> "NoiseModel":
        """Build the model with sigma_D = sqrt(k) * sigma_A."""
        if not (np.isfinite(k) and k >= 0.0):
            raise ValueError("k must be finite and >= 0")
        return cls(sigma_D=float(np.sqrt(k) * sigma_A), sigma_A=float(sigma_A))


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream identified by (seed, stream_index).

    Uses Philox, so every (seed, stream_index) pair is an independent stream
    and ``generator(jumps=i)`` yields independent substreams for parallel
    chunking: chunk results do not depend on which worker draws them.
    """

    seed: int
    stream_index: int = 0

    def generator(self, jumps: int = 0) -> np.random.Generator:
        bg = np.random.Philox(
            key=[self.seed & _UINT64_MASK, self.stream_index & _UINT64_MASK]
        )
        if jumps:
            bg = bg.jumped(jumps)
        return np.random.Generator(bg)

    def substream(self, stream_index: int) -> "RngStream":
        return RngStream(self.seed, stream_index)


@dataclass(frozen=True)
class ShiftVector:
    """The six displacement errors (u1, v1) data, (u2, v2), (u3, v3) ancillas.

    Fields hold floats or equal-length numpy arrays (struct-of-arrays form
    for vectorized Monte Carlo).
    """

    u1: float | np.ndarray
    v1: float | np.ndarray
    u2: float | np.ndarray
    v2: float | np.ndarray
    u3: float | np.ndarray
    v3: float | np.ndarray

    def __post_init__(self):
        for name in ("u1", "v1", "u2", "v2", "u3", "v3"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"{name} must be finite")

    def to_quadrature_vector(self) -> np.ndarray:
        """Stack as (u1, v1, u2, v2, u3, v3) matching the (q, p) mode ordering."""
        return np.stack(
            [np.asarray(f, dtype=float) for f in (self.u1, self.v1, self.u2, self.v2, self.u3, self.v3)]
        )


def sample_shifts(
    noise: NoiseModel,
    rng: RngStream | np.random.Generator,
    n: int | None = None,
) -> ShiftVector:
    """Draw shift errors: (u1, v1) ~ N(0, sigma_D^2), ancillas ~ N(0, sigma_A^2).

    All six entries are mutually independent.  ``n=None`` gives scalar fields,
    otherwise arrays of length n.  Passing the same RngStream (or a generator
    in the same state) reproduces the same draws bitwise.
    """
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    u1 = gen.normal(0.0, noise.sigma_D, n)
    v1 = gen.normal(0.0, noise.sigma_D, n)
    u2 = gen.normal(0.0, noise.sigma_A, n)
    v2 = gen.normal(0.0, noise.sigma_A, n)
    u3 = gen.normal(0.0, noise.sigma_A, n)
    v3 = gen.normal(0.0, noise.sigma_A, n)
    return ShiftVector(u1, v1, u2, v2, u3, v3)
