import math

import numpy as np
import pytest
from scipy import stats as sps

import layerwalk as lw
from layerwalk import limit


class TestStableSampler:
    def test_gaussian_branch_variance(self):
        rng = np.random.default_rng(0)
        z = lw.sample_stable(lw.StableSpec(2.0, 0.5), 1.0, rng, 1_000_000)
        assert z.var() == pytest.approx(1.0, abs=0.005)

    def test_gaussian_branch_ks(self):
        rng = np.random.default_rng(1)
        z = lw.sample_stable(lw.StableSpec(2.0, 0.5), 1.0, rng, 1_000_000)
        assert sps.kstest(z, "norm").statistic <= 0.002

    def test_symmetric_median(self):
        rng = np.random.default_rng(2)
        z = lw.sample_stable(lw.StableSpec(1.5, 1.0), 1.0, rng, 1_000_000)
        se = 1.0 / (2 * math.sqrt(len(z)) * 0.2)  # conservative density bound
        assert abs(np.median(z)) < 3 * se

    def test_characteristic_function(self):
        rng = np.random.default_rng(3)
        z = lw.sample_stable(lw.StableSpec(1.5, 1.0), 1.0, rng, 1_000_000)
        for theta in (0.25, 0.5, 1.0, 2.0):
            emp = np.cos(theta * z).mean()
            assert emp == pytest.approx(math.exp(-abs(theta) ** 1.5), abs=0.01)

    def test_length_scaling(self):
        rng = np.random.default_rng(4)
        z = lw.sample_stable(lw.StableSpec(1.5, 2.0), 0.5, rng, 500_000)
        # scale is (a1 * length)^(1/beta) = 1: standard symmetric stable
        emp = np.cos(z).mean()
        assert emp == pytest.approx(math.exp(-1.0), abs=0.01)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            lw.StableSpec(0.9, 1.0)
        with pytest.raises(ValueError):
            lw.StableSpec(2.0, -1.0)
        with pytest.raises(ValueError):
            lw.sample_stable(lw.StableSpec(2.0, 1.0), 0.0, np.random.default_rng(0))


class TestBrownianLocalTime:
    def test_occupation_identity_exact(self):
        for seed in range(5):
            rng = np.random.default_rng(seed)
            _, lt = lw.simulate_brownian_local_time(1.0, 1e-3, 0.05, rng)
            assert lt.occupation_total() == pytest.approx(1.0, abs=1e-12)

    def test_endpoint_variance(self):
        rng = np.random.default_rng(5)
        ends = np.array(
            [lw.simulate_brownian_local_time(1.0, 1e-2, 0.1, rng)[0] for _ in range(20_000)]
        )
        assert ends.var() == pytest.approx(1.0, abs=0.03)

    def test_mean_local_time_at_origin(self):
        # E[L_1(0)] = integral of the Gaussian density over time = sqrt(2/pi)
        dt, h, runs = 2.5e-5, 0.02, 20_000
        steps = round(1.0 / dt)
        rng = np.random.default_rng(6)
        total = 0.0
        chunk = 500
        for _ in range(runs // chunk):
            b = np.cumsum(rng.normal(0.0, math.sqrt(dt), (chunk, steps)), axis=1)
            occ = np.empty_like(b)
            occ[:, 0] = 0.0
            occ[:, 1:] = b[:, :-1]
            in_bin = (occ >= 0.0) & (occ < h)
            total += (in_bin.sum(axis=1) * dt / h).sum()
        assert total / runs == pytest.approx(math.sqrt(2 / math.pi), abs=0.02)

    def test_grid_validation(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            lw.simulate_brownian_local_time(1.0, 3e-4, 0.05, rng)
        with pytest.raises(ValueError):
            lw.simulate_brownian_local_time(1.0, -0.1, 0.05, rng)


class TestDelta:
    def test_zero_horizon(self):
        rng = np.random.default_rng(0)
        assert lw.simulate_delta(0.0, lw.StableSpec(2.0, 0.5), 1e-3, 0.05, rng) == (0.0, 0.0)

    def test_linearity_in_noise(self):
        rng = np.random.default_rng(7)
        _, lt = lw.simulate_brownian_local_time(1.0, 1e-3, 0.05, rng)
        dz = lw.sample_stable(lw.StableSpec(2.0, 0.5), 0.05, rng, size=len(lt.bins))
        once = lw.integrate_against_noise(lt, dz)
        twice = lw.integrate_against_noise(lt, 2.0 * dz)
        assert twice == pytest.approx(2.0 * once, rel=1e-12)

    def test_symmetry_sign_flip(self):
        s = lw.sample_delta_ensemble(1.0, lw.StableSpec(2.0, 0.5), 1e-3, 0.05, 10_000, 8)
        ks = sps.ks_2samp(s.values, -s.values).statistic
        assert ks <= 0.02

    def test_skewness_near_zero(self):
        s = lw.sample_delta_ensemble(1.0, lw.StableSpec(2.0, 0.5), 1e-3, 0.05, 20_000, 9)
        skew = sps.skew(s.values)
        se = math.sqrt(6.0 / len(s.values))
        assert abs(skew) < 5 * se

    def test_self_similarity_two_horizons(self):
        # matched relative resolution: dt ~ t, h ~ sqrt(t)
        beta = 1.5
        delta = 0.5 + 0.5 / beta
        spec = lw.StableSpec(beta, 1.0)
        s1 = lw.sample_delta_ensemble(1.0, spec, 1e-4, 0.02, 10_000, 10)
        s2 = lw.sample_delta_ensemble(2.0, spec, 2e-4, 0.02 * math.sqrt(2), 10_000, 11)
        ks = sps.ks_2samp(s2.values, 2.0**delta * s1.values).statistic
        assert ks <= 0.02

    def test_refinement_stability(self):
        spec = lw.StableSpec(2.0, 0.5)
        coarse = lw.sample_delta_ensemble(1.0, spec, 1e-4, 0.02, 4000, 12)
        fine = lw.sample_delta_ensemble(1.0, spec, 5e-5, 0.01, 4000, 13)
        for q in (0.05, 0.25, 0.5, 0.75, 0.95):
            a = np.quantile(coarse.values, q)
            b = np.quantile(fine.values, q)
            se = _quantile_se(coarse.values, q) + _quantile_se(fine.values, q)
            assert abs(a - b) < 4 * se


def _quantile_se(x, q, boot=200, seed=0):
    rng = np.random.default_rng(seed)
    est = [np.quantile(rng.choice(x, len(x)), q) for _ in range(boot)]
    return float(np.std(est))


class TestCompare:
    def test_identical(self):
        x = np.arange(100.0)
        ks, table = lw.compare_distributions(x, x)
        assert ks == 0.0
        assert all(a == b for _, a, b in table)

    def test_disjoint(self):
        ks, _ = lw.compare_distributions(np.zeros(50), np.ones(50))
        assert ks == 1.0

    def test_same_law_ks_small(self):
        rng = np.random.default_rng(14)
        ks, _ = lw.compare_distributions(rng.normal(size=10_000), rng.normal(size=10_000))
        assert ks <= 0.027  # 95% critical value 1.36 sqrt(2/n)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            lw.compare_distributions([], [1.0])


class TestRescaledWalk:
    def test_degenerate_sigma_errors(self):
        with pytest.raises(ValueError, match="degenerate"):
            lw.rescaled_walk_sample(lw.Constant(0.5), lw.Alternating(), 64, 100, 0)

    def test_degenerate_case_contracts(self):
        # constant p, alternating: sd(M^(1)) ~ sqrt(n), so n^(-3/4)-rescaled
        # samples shrink with log-log slope about -1/4
        pts = []
        for i, n in enumerate((256, 1024, 4096, 16384)):
            xs, _ = lw.rescaled_walk_sample(
                lw.Constant(0.5), lw.Alternating(), n, 3000, 20 + i, normalize_sigma=False
            )
            pts.append((n, float(xs.std()), 0.0))
        fit = lw.fit_exponent(pts)
        assert fit.slope == pytest.approx(-0.25, abs=0.06)

    def test_vertical_marginal_variance(self):
        _, ys = lw.rescaled_walk_sample(
            lw.TwoPoint(1 / 3, 2 / 3, 0.5), lw.IidRademacher(), 4096, 8000, 24
        )
        assert ys.var() == pytest.approx(1.0, abs=0.06)
