"""Estimator reproducibility, moment merging, and statistical oracles."""

import numpy as np
import pytest
from scipy.special import erfc

from gkpsim import (
    SQRT_PI,
    InsufficientSamplesError,
    McConfig,
    NoiseModel,
    RngStream,
    SchemeSpec,
    StreamingMoments,
    correct,
    estimate_delta,
    estimate_logical_rate,
    estimate_output_variance,
    measurement_variances,
    run_sweep,
    sample_shifts,
    small_noise_variances,
)

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)


class TestStreamingMoments:
    def test_merge_matches_numpy(self):
        rng = np.random.default_rng(17)
        chunks = [rng.normal(3.0, 2.0, n) for n in (1, 7, 1000, 313, 2)]
        acc = StreamingMoments()
        for c in chunks:
            acc.add_array(c)
        full = np.concatenate(chunks)
        d = full - full.mean()
        assert acc.n == full.size
        assert acc.mean == pytest.approx(full.mean(), rel=1e-12)
        assert acc.m2 == pytest.approx(np.sum(d**2), rel=1e-9)
        assert acc.m3 == pytest.approx(np.sum(d**3), rel=1e-6, abs=1e-6)
        assert acc.m4 == pytest.approx(np.sum(d**4), rel=1e-9)

    def test_merge_order_of_operations(self):
        rng = np.random.default_rng(3)
        a, b, c = (rng.normal(size=n) for n in (10, 20, 30))
        left = StreamingMoments().add_array(a).add_array(b).add_array(c)
        right = StreamingMoments().add_array(np.concatenate([a, b, c]))
        assert left.mean == pytest.approx(right.mean, rel=1e-12)
        assert left.m4 == pytest.approx(right.m4, rel=1e-9)

    def test_empty_raises(self):
        with pytest.raises(InsufficientSamplesError):
            StreamingMoments().mean_estimate()

    def test_constant_chunk(self):
        acc = StreamingMoments().add_array(np.full(100, 2.5))
        est = acc.mean_estimate()
        assert est.mean == 2.5 and est.std_error == 0.0


class TestMcConfig:
    def test_chunks_cover(self):
        cfg = McConfig(n_samples=1_000_001, seed=1, chunk_size=250_000)
        assert sum(cfg.chunks()) == 1_000_001
        assert cfg.chunks()[-1] == 1

    def test_validation(self):
        with pytest.raises(ValueError):
            McConfig(n_samples=0, seed=1)
        with pytest.raises(ValueError):
            McConfig(n_samples=10, seed=1, chunk_size=0)


class TestEstimateDelta:
    def test_bitwise_reproducibility(self):
        noise = NoiseModel(0.2, 0.15)
        cfg = McConfig(n_samples=200_000, seed=11, chunk_size=50_000)
        a = estimate_delta(SchemeSpec.me(), noise, cfg)
        b = estimate_delta(SchemeSpec.me(), noise, cfg)
        assert a[0].mean == b[0].mean and a[1].std_error == b[1].std_error

    def test_worker_count_invariance(self):
        noise = NoiseModel(0.2, 0.15)
        cfg = McConfig(n_samples=200_000, seed=12, chunk_size=25_000)
        serial = estimate_delta(SchemeSpec.teleportation(), noise, cfg, n_workers=1)
        threaded = estimate_delta(SchemeSpec.teleportation(), noise, cfg, n_workers=4)
        assert serial[0].mean == threaded[0].mean
        assert serial[1].mean == threaded[1].mean

    def test_ideal_ancilla_limit(self):
        noise = NoiseModel(0.2, 1e-6)
        cfg = McConfig(n_samples=100_000, seed=13)
        for spec in (SchemeSpec.original(), SchemeSpec.p_steane(SQRT2, 1)):
            dq, dp = estimate_delta(spec, noise, cfg)
            assert dq.mean < 1e-4 and dp.mean < 1e-4

    def test_se_scaling(self):
        noise = NoiseModel(0.2, 0.2)
        base = estimate_delta(SchemeSpec.me(), noise, McConfig(n_samples=250_000, seed=14))
        double = estimate_delta(SchemeSpec.me(), noise, McConfig(n_samples=500_000, seed=14))
        ratio = base[0].std_error / double[0].std_error
        assert ratio == pytest.approx(np.sqrt(2.0), rel=0.1)

    def test_original_worse_than_me(self):
        # beyond 3 combined standard errors in both quadratures
        noise = NoiseModel(0.2, 0.2)
        cfg = McConfig(n_samples=1_000_000, seed=15)
        oq, op = estimate_delta(SchemeSpec.original(), noise, cfg)
        mq, mp = estimate_delta(SchemeSpec.me(), noise, cfg)
        assert oq.mean - mq.mean > 3.0 * np.hypot(oq.std_error, mq.std_error)
        assert op.mean - mp.mean > 3.0 * np.hypot(op.std_error, mp.std_error)

    def test_symmetric_point_matches_teleportation(self):
        noise = NoiseModel(0.15, 0.15)
        cfg = McConfig(n_samples=1_000_000, seed=16)
        pq, pp = estimate_delta(SchemeSpec.p_steane(SQRT2, 1), noise, cfg)
        tq, tp = estimate_delta(SchemeSpec.teleportation(), noise, cfg)
        assert abs(pq.mean - tq.mean) < 3.0 * np.hypot(pq.std_error, tq.std_error)
        assert abs(pp.mean - tp.mean) < 3.0 * np.hypot(pp.std_error, tp.std_error)


class TestLogicalRate:
    def test_vanishes_at_small_noise(self):
        rate = estimate_logical_rate(
            SchemeSpec.me(), NoiseModel(0.01, 0.01), McConfig(n_samples=100_000, seed=17)
        )
        assert rate.mean == 0.0

    def test_gaussian_tail_oracle_me(self):
        # wrap events in q and p are independent; the joint rate follows from
        # the measurement variances via the Gaussian tail
        noise = NoiseModel(0.2, 0.2)
        var_q, var_p = measurement_variances(SchemeSpec.me(), noise)
        p_q = erfc(SQRT_PI / 2.0 / np.sqrt(2.0 * var_q))
        p_p = erfc(SQRT_PI / 2.0 / np.sqrt(2.0 * var_p))
        expect = 1.0 - (1.0 - p_q) * (1.0 - p_p)
        est = estimate_logical_rate(
            SchemeSpec.me(), noise, McConfig(n_samples=1_000_000, seed=18)
        )
        assert abs(est.mean - expect) < 3.0 * est.std_error

    def test_p_wrap_rate_ordering_inside_interval(self):
        # b = sqrt3 at k = 1: Sigma_p^2 < Sigma_Mp^2, so fewer p wraps than ME
        noise = NoiseModel(0.25, 0.25)
        shifts = sample_shifts(noise, RngStream(19), 1_000_000)
        p_rate = np.mean(correct(shifts, SchemeSpec.p_steane(SQRT3, 1), noise).n_p != 0)
        me_rate = np.mean(correct(shifts, SchemeSpec.me(), noise).n_p != 0)
        assert p_rate < me_rate


class TestOutputVariance:
    def test_conditioned_small_noise_original(self):
        noise = NoiseModel(0.05, 0.05)
        est_u, est_v = estimate_output_variance(
            SchemeSpec.original(), noise, McConfig(n_samples=1_000_000, seed=20),
            condition_no_wrap=True,
        )
        vq, vp = small_noise_variances(SchemeSpec.original(), noise)
        assert abs(est_u.mean - vq) < 3.0 * est_u.std_error
        assert abs(est_v.mean - vp) < 3.0 * est_v.std_error

    def test_unconditioned_exceeds_conditioned_at_large_noise(self):
        noise = NoiseModel(0.3, 0.3)
        cfg = McConfig(n_samples=500_000, seed=21)
        cond_u, _ = estimate_output_variance(
            SchemeSpec.original(), noise, cfg, condition_no_wrap=True
        )
        raw_u, _ = estimate_output_variance(
            SchemeSpec.original(), noise, cfg, condition_no_wrap=False
        )
        assert raw_u.mean > cond_u.mean

    def test_conditioning_can_reject_everything(self):
        noise = NoiseModel(500.0, 500.0)
        with pytest.raises(InsufficientSamplesError):
            estimate_output_variance(
                SchemeSpec.original(), noise, McConfig(n_samples=200, seed=22),
                condition_no_wrap=True,
            )


class TestRunSweep:
    def test_single_point_matches_direct_estimate(self):
        noise = NoiseModel(0.2, 0.2)
        cfg = McConfig(n_samples=100_000, seed=23)
        rows = run_sweep([SchemeSpec.me()], 1.0, [0.2], cfg)
        dq, dp = estimate_delta(SchemeSpec.me(), noise, cfg, stream_index=0)
        assert rows[0].delta_q == dq.mean and rows[0].delta_p == dp.mean

    def test_shape_order_and_determinism(self):
        cfg = McConfig(n_samples=20_000, seed=24)
        specs = [SchemeSpec.teleportation(), SchemeSpec.original(), SchemeSpec.me()]
        rows = run_sweep(specs, 3.0, [0.1, 0.2, 0.15], cfg)
        assert len(rows) == 9
        keys = [(r.scheme, r.sigma_A) for r in rows]
        assert keys == sorted(keys)
        again = run_sweep(specs, 3.0, [0.1, 0.2, 0.15], cfg)
        assert rows == again

    def test_sigma_d_fixed_mode(self):
        cfg = McConfig(n_samples=10_000, seed=25)
        rows = run_sweep([SchemeSpec.original()], None, [0.1, 0.2], cfg, sigma_D=0.3)
        assert rows[0].sigma_D == 0.3
        assert rows[0].k == pytest.approx(9.0)

    def test_common_random_numbers(self):
        # CRN: both schemes consume the same stream at a grid point, so the
        # original-vs-ME gap is reproduced exactly by direct paired estimates
        cfg = McConfig(n_samples=50_000, seed=26)
        rows = run_sweep([SchemeSpec.original(), SchemeSpec.me()], 1.0, [0.2], cfg)
        noise = NoiseModel.from_ratio(1.0, 0.2)
        d_orig = estimate_delta(SchemeSpec.original(), noise, cfg, stream_index=0)
        d_me = estimate_delta(SchemeSpec.me(), noise, cfg, stream_index=0)
        by_scheme = {r.scheme: r for r in rows}
        assert by_scheme["original"].delta_q == d_orig[0].mean
        assert by_scheme["me"].delta_q == d_me[0].mean

    def test_validation(self):
        cfg = McConfig(n_samples=10, seed=1)
        with pytest.raises(ValueError):
            run_sweep([], 1.0, [0.1], cfg)
        with pytest.raises(ValueError):
            run_sweep([SchemeSpec.me()], 1.0, [], cfg)
        with pytest.raises(ValueError):
            run_sweep([SchemeSpec.me()], None, [0.1], cfg)
        with pytest.raises(ValueError):
            run_sweep([SchemeSpec.me()], 1.0, [0.1], cfg, sigma_D=0.2)
        with pytest.raises(ValueError):
            run_sweep([SchemeSpec.me()], 0.5, [0.1], cfg)
