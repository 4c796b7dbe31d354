"""Seeded, chunk-parallel Monte Carlo estimation of the performance metrics.

Sampling is organized in fixed-size chunks; chunk i draws from the
independent Philox substream ``RngStream(seed, stream_index).generator(jumps=i)``,
so results are bitwise independent of how chunks are distributed over
workers.  Per-chunk central moments are merged in chunk order with the
pairwise update formulas, which avoids catastrophic cancellation at small
sigma and keeps the reduction deterministic.

Comparisons between schemes use common random numbers by default: passing
the same (seed, stream_index) to two estimators feeds both schemes the
identical ShiftVector stream, which sharpens ordering comparisons at equal
sample count.  Pass distinct stream indices for independent runs (required
e.g. for two-sample KS tests).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import NoiseModel, RngStream, lattice_split, sample_shifts, symmetric_mod, TWO_SQRT_PI
from .schemes import CorrectionOutcome, SchemeSpec, correct


class InsufficientSamplesError(RuntimeError):
    """Raised when conditioning rejects every sample."""


@dataclass(frozen=True)
class McConfig:
    """Sample budget, base seed and chunking of a Monte Carlo run."""

    n_samples: int
    seed: int
    chunk_size: int = 250_000

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")

    def chunks(self) -> list[int]:
        """Chunk lengths covering n_samples."""
        full, rest = divmod(self.n_samples, self.chunk_size)
        return [self.chunk_size] * full + ([rest] if rest else [])


@dataclass(frozen=True)
class MetricEstimate:
    """A reported statistic with its standard error and sample count.

    For mean-type metrics std_error = sample_std / sqrt(n); for variance
    estimates it is the asymptotic SE of the sample variance (via the fourth
    central moment).
    """

    mean: float
    std_error: float
    n: int


class StreamingMoments:
    """Streaming central moments up to order four, mergeable across chunks."""

    __slots__ = ("n", "mean", "m2", "m3", "m4")

    def __init__(self):
        self.n = 0
        self.mean = 0.0
        self.m2 = 0.0
        self.m3 = 0.0
        self.m4 = 0.0

    def add_array(self, x: np.ndarray) -> "StreamingMoments":
        x = np.asarray(x, dtype=float)
        if x.size:
            other = StreamingMoments()
            other.n = x.size
            other.mean = float(x.mean())
            d = x - other.mean
            d2 = d * d
            other.m2 = float(d2.sum())
            other.m3 = float((d2 * d).sum())
            other.m4 = float((d2 * d2).sum())
            self.merge(other)
        return self

    def merge(self, other: "StreamingMoments") -> "StreamingMoments":
        if other.n == 0:
            return self
        if self.n == 0:
            self.n, self.mean = other.n, other.mean
            self.m2, self.m3, self.m4 = other.m2, other.m3, other.m4
            return self
        na, nb = self.n, other.n
        n = na + nb
        d = other.mean - self.mean
        d2 = d * d
        m2 = self.m2 + other.m2 + d2 * na * nb / n
        m3 = (
            self.m3
            + other.m3
            + d * d2 * na * nb * (na - nb) / (n * n)
            + 3.0 * d * (na * other.m2 - nb * self.m2) / n
        )
        m4 = (
            self.m4
            + other.m4
            + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n**3)
            + 6.0 * d2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * d * (na * other.m3 - nb * self.m3) / n
        )
        self.n, self.mean = n, self.mean + d * nb / n
        self.m2, self.m3, self.m4 = m2, m3, m4
        return self

    def mean_estimate(self) -> MetricEstimate:
        if self.n == 0:
            raise InsufficientSamplesError("no samples accumulated")
        se = np.sqrt(self.m2 / max(self.n - 1, 1)) / np.sqrt(self.n)
        return MetricEstimate(self.mean, float(se), self.n)

    def variance_estimate(self) -> MetricEstimate:
        if self.n < 2:
            raise InsufficientSamplesError("variance needs at least two samples")
        var = self.m2 / (self.n - 1)
        m2b, m4b = self.m2 / self.n, self.m4 / self.n
        se = np.sqrt(max(m4b - m2b * m2b, 0.0) / self.n)
        return MetricEstimate(float(var), float(se), self.n)


def _map_chunks(fn, cfg: McConfig, n_workers: int):
    """Evaluate fn(chunk_index, chunk_length) for all chunks, merge-ready in order."""
    lengths = cfg.chunks()
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            return list(pool.map(fn, range(len(lengths)), lengths))
    return [fn(i, ln) for i, ln in zip(range(len(lengths)), lengths)]


def _delta_pair(outcome: CorrectionOutcome, shifts) -> tuple[np.ndarray, np.ndarray]:
    ideal_q = shifts.u1 - lattice_split(shifts.u1)[1]
    ideal_p = shifts.v1 - lattice_split(shifts.v1)[1]
    dq = np.abs(symmetric_mod(outcome.u_out - ideal_q, TWO_SQRT_PI))
    dp = np.abs(symmetric_mod(outcome.v_out - ideal_p, TWO_SQRT_PI))
    return dq, dp


def estimate_delta(
    spec: SchemeSpec,
    noise: NoiseModel,
    cfg: McConfig,
    stream_index: int = 0,
    n_workers: int = 1,
) -> tuple[MetricEstimate, MetricEstimate]:
    """Monte Carlo (Delta_q, Delta_p): mean |mod-2sqrt(pi) deviation| from the
    ideal-ancilla correction, with standard errors."""
    stream = RngStream(cfg.seed, stream_index)

    def run(i: int, n: int):
        shifts = sample_shifts(noise, stream.generator(jumps=i), n)
        dq, dp = _delta_pair(correct(shifts, spec, noise), shifts)
        return StreamingMoments().add_array(dq), StreamingMoments().add_array(dp)

    acc_q, acc_p = StreamingMoments(), StreamingMoments()
    for mq, mp in _map_chunks(run, cfg, n_workers):
        acc_q.merge(mq)
        acc_p.merge(mp)
    return acc_q.mean_estimate(), acc_p.mean_estimate()


def estimate_logical_rate(
    spec: SchemeSpec,
    noise: NoiseModel,
    cfg: McConfig,
    stream_index: int = 0,
    n_workers: int = 1,
) -> MetricEstimate:
    """Fraction of samples with (n_q, n_p) != (0, 0), with binomial standard error."""
    stream = RngStream(cfg.seed, stream_index)

    def run(i: int, n: int):
        shifts = sample_shifts(noise, stream.generator(jumps=i), n)
        return int(np.count_nonzero(correct(shifts, spec, noise).any_logical_error()))

    hits = sum(_map_chunks(run, cfg, n_workers))
    n = cfg.n_samples
    p = hits / n
    return MetricEstimate(p, float(np.sqrt(p * (1.0 - p) / n)), n)


def estimate_output_variance(
    spec: SchemeSpec,
    noise: NoiseModel,
    cfg: McConfig,
    condition_no_wrap: bool = False,
    stream_index: int = 0,
    n_workers: int = 1,
) -> tuple[MetricEstimate, MetricEstimate]:
    """Empirical variances of (u_out, v_out), optionally conditioned on no wrap.

    With ``condition_no_wrap`` only samples with (n_q, n_p) = (0, 0) enter,
    which is the defining event of the small-noise regime.  Raises
    InsufficientSamplesError if conditioning rejects everything.
    """
    stream = RngStream(cfg.seed, stream_index)

    def run(i: int, n: int):
        shifts = sample_shifts(noise, stream.generator(jumps=i), n)
        out = correct(shifts, spec, noise)
        u, v = np.atleast_1d(out.u_out), np.atleast_1d(out.v_out)
        if condition_no_wrap:
            keep = ~np.atleast_1d(out.any_logical_error())
            u, v = u[keep], v[keep]
        return StreamingMoments().add_array(u), StreamingMoments().add_array(v)

    acc_u, acc_v = StreamingMoments(), StreamingMoments()
    for mu, mv in _map_chunks(run, cfg, n_workers):
        acc_u.merge(mu)
        acc_v.merge(mv)
    if acc_u.n == 0:
        raise InsufficientSamplesError("conditioning rejected all samples")
    return acc_u.variance_estimate(), acc_v.variance_estimate()


@dataclass(frozen=True)
class SweepRow:
    """One (scheme, sigma_A) grid point of a sweep; field order matches the CSV."""

    scheme: str
    b: float | None
    m: int | None
    k: float
    sigma_A: float
    sigma_D: float
    delta_q: float
    delta_q_se: float
    delta_p: float
    delta_p_se: float
    logical_rate: float
    logical_rate_se: float
    n_samples: int
    seed: int


def run_sweep(
    specs: list[SchemeSpec],
    k: float | None,
    sigma_A_grid,
    cfg: McConfig,
    sigma_D: float | None = None,
    common_random_numbers: bool = True,
    n_workers: int = 1,
) -> list[SweepRow]:
    """Estimate Delta_q, Delta_p and the logical-error rate over a noise grid.

    Exactly one of ``k`` (sigma_D = sqrt(k) sigma_A per point) and ``sigma_D``
    must be given.  With ``common_random_numbers`` every scheme at grid point
    i shares stream index i; otherwise each (scheme, point) pair gets its own
    stream.  Rows come back sorted by (scheme label, sigma_A) and the whole
    sweep is a pure function of its arguments.
    """
    sigma_A_grid = [float(s) for s in sigma_A_grid]
    if not specs or not sigma_A_grid:
        raise ValueError("specs and sigma_A_grid must be nonempty")
    if (k is None) == (sigma_D is None):
        raise ValueError("exactly one of k and sigma_D must be given")
    if k is not None and k < 1.0:
        raise ValueError("k must be >= 1")
    if any(s <= 0 for s in sigma_A_grid):
        raise ValueError("sigma_A grid values must be > 0")

    rows = []
    for j, spec in enumerate(specs):
        for i, sigma_a in enumerate(sigma_A_grid):
            noise = (
                NoiseModel.from_ratio(k, sigma_a)
                if k is not None
                else NoiseModel(sigma_D=sigma_D, sigma_A=sigma_a)
            )
            stream = i if common_random_numbers else j * len(sigma_A_grid) + i
            dq, dp = estimate_delta(spec, noise, cfg, stream_index=stream, n_workers=n_workers)
            rate = estimate_logical_rate(spec, noise, cfg, stream_index=stream, n_workers=n_workers)
            rows.append(
                SweepRow(
                    scheme=spec.kind.value,
                    b=spec.b,
                    m=spec.m,
                    k=noise.k,
                    sigma_A=noise.sigma_A,
                    sigma_D=noise.sigma_D,
                    delta_q=dq.mean,
                    delta_q_se=dq.std_error,
                    delta_p=dp.mean,
                    delta_p_se=dp.std_error,
                    logical_rate=rate.mean,
                    logical_rate_se=rate.std_error,
                    n_samples=cfg.n_samples,
                    seed=cfg.seed,
                )
            )
    rows.sort(key=lambda r: (r.scheme, r.b or 0.0, r.m or 0, r.sigma_A))
    return rows
