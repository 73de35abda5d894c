import numpy as np
import pytest

import layerwalk as lw
from layerwalk import stats


class TestLocalTimeProfile:
    def test_small_example(self):
        p = lw.local_time_profile(np.array([0, 1, 0]), 3)
        assert p.counts == {0: 2, 1: 1}

    def test_empty(self):
        assert lw.local_time_profile(np.array([0]), 0).counts == {}

    def test_mass_conservation(self):
        env = lw.make_environment(lw.Alternating(), lw.Constant(0.5), 1)
        path = lw.simulate_embedded(env, 400, np.random.default_rng(0))
        for m in (0, 1, 17, 400):
            assert lw.local_time_profile(path.S, m).total() == m

    def test_range_error(self):
        with pytest.raises(IndexError):
            lw.local_time_profile(np.array([0, 1]), 5)


class TestDecompose:
    @pytest.mark.parametrize(
        "scheme,law",
        [
            (lw.Alternating(), lw.Constant(0.5)),
            (lw.Alternating(), lw.TwoPoint(0.2, 0.7, 0.4)),
            (lw.IidRademacher(), lw.BetaLaw(2, 5)),
            (lw.IidRademacher(), lw.StableTail(1.5, 1.0)),
        ],
    )
    def test_identity_on_every_law(self, scheme, law):
        env = lw.make_environment(scheme, law, 21)
        path = lw.simulate_embedded(env, 500, np.random.default_rng(1))
        d = lw.decompose(path, env, 500)
        assert d.X == pytest.approx(d.D + d.S_bar, rel=1e-9, abs=1e-9)

    def test_zero_horizon(self):
        env = lw.make_environment(lw.Alternating(), lw.Constant(0.5), 2)
        path = lw.simulate_embedded(env, 10, np.random.default_rng(2))
        d = lw.decompose(path, env, 0)
        assert (d.D, d.S_bar, d.X) == (0.0, 0.0, 0)

    def test_constant_half_drift_counts_signed_local_time(self):
        # p/(1-p) = 1, so D is the signed local-time sum
        env = lw.make_environment(lw.Alternating(), lw.Constant(0.5), 3)
        path = lw.simulate_embedded(env, 200, np.random.default_rng(3))
        prof = lw.local_time_profile(path.S, 200)
        expected = sum(env.level(y).epsilon * c for y, c in prof.counts.items())
        d = lw.decompose(path, env, 200)
        assert d.D == pytest.approx(expected)

    def test_martingale_part_is_centered(self):
        env_seed, n_rep, m = 31, 800, 200
        vals = []
        for r in range(n_rep):
            env = lw.make_environment(lw.Alternating(), lw.TwoPoint(1 / 3, 2 / 3, 0.5), env_seed + r)
            path = lw.simulate_embedded(env, m, np.random.default_rng(r))
            vals.append(lw.decompose(path, env, m).S_bar)
        vals = np.array(vals)
        se = vals.std() / np.sqrt(n_rep)
        assert abs(vals.mean()) < 3 * se


class TestFitExponent:
    def test_exact_power_law(self):
        pts = [(n, 3.0 * n**0.75, 0.0) for n in (10, 100, 1000, 10000)]
        fit = lw.fit_exponent(pts)
        assert fit.slope == pytest.approx(0.75, abs=1e-12)
        assert fit.slope_se < 1e-10

    def test_constant_statistic(self):
        fit = lw.fit_exponent([(n, 5.0, 0.0) for n in (10, 100, 1000)])
        assert fit.slope == pytest.approx(0.0, abs=1e-12)

    def test_noisy_power_law(self):
        rng = np.random.default_rng(4)
        pts = [
            (n, 2.0 * n**1.3 * (1 + 0.01 * rng.standard_normal()), 0.0)
            for n in np.geomspace(10, 1e5, 12).astype(int)
        ]
        fit = lw.fit_exponent(pts)
        assert fit.slope == pytest.approx(1.3, abs=0.02)

    def test_scale_equivariance(self):
        pts = [(n, float(n) ** 0.6 + 0.1, 0.0) for n in (8, 64, 512, 4096)]
        base = lw.fit_exponent(pts)
        scaled = lw.fit_exponent([(n, 7.5 * s, se) for n, s, se in pts])
        assert scaled.slope == pytest.approx(base.slope, abs=1e-12)
        assert scaled.intercept != pytest.approx(base.intercept, abs=1e-3)

    def test_errors(self):
        with pytest.raises(ValueError):
            lw.fit_exponent([(10, 1.0, 0.0), (20, 2.0, 0.0)])
        with pytest.raises(ValueError):
            lw.fit_exponent([(10, 1.0, 0.0), (20, -2.0, 0.0), (30, 3.0, 0.0)])


class TestVariance:
    def test_constant_half_ratio(self):
        pts = lw.estimate_variance(
            lw.Constant(0.5), lw.Alternating(), [1000], 20_000, 5
        )
        n, var, se = pts[0]
        assert var / n == pytest.approx(4.0, abs=3 * se / n)

    def test_linear_exponent_any_constant_p(self):
        pts = lw.estimate_variance(
            lw.Constant(0.7), lw.Alternating(), [256, 512, 1024, 2048, 4096], 8000, 6
        )
        fit = lw.fit_exponent(pts)
        assert fit.slope == pytest.approx(1.0, abs=0.05)

    def test_heavy_tail_refusal(self):
        with pytest.raises(lw.InfiniteVarianceError, match="quantile"):
            lw.estimate_variance(lw.StableTail(1.5, 1.0), lw.Alternating(), [100], 100, 0)

    def test_replica_floor(self):
        with pytest.raises(ValueError):
            lw.estimate_variance(lw.Constant(0.5), lw.Alternating(), [100], 1, 0)


class TestQuantileSpread:
    def test_definition_on_symmetric_sample(self):
        x = np.array([-1.0, 0.0, 1.0] * 100)
        assert stats.quantile_spread_of(x, 0.25) == pytest.approx(2.0)

    def test_gaussian_iqr_constant(self):
        rng = np.random.default_rng(7)
        x = rng.normal(0.0, 2.5, 400_000)
        # central 50% width of a normal is 2 * 0.67449 sigma
        assert stats.quantile_spread_of(x, 0.25) / 2.5 == pytest.approx(1.349, rel=0.02)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            lw.quantile_spread(lw.Constant(0.5), lw.Alternating(), [10], 100, 0, q=0.7)
        with pytest.raises(ValueError):
            lw.quantile_spread(lw.Constant(0.5), lw.Alternating(), [10], 50, 0)


class TestReturns:
    def test_zero_horizon_equivalent(self):
        r = lw.count_returns(lw.Constant(0.5), lw.Alternating(), [1], 200, 8)
        assert r.mean_returns[0] >= 0.0

    def test_monotone_in_horizon(self):
        r = lw.count_returns(lw.Constant(0.5), lw.Alternating(), [100, 1000, 5000], 400, 9)
        assert r.mean_returns == sorted(r.mean_returns)

    def test_horizons_must_increase(self):
        with pytest.raises(ValueError):
            lw.count_returns(lw.Constant(0.5), lw.Alternating(), [100, 10], 100, 0)

    def test_matches_direct_simulation_counting(self):
        # brute-force count of origin visits along direct paths
        law, scheme, horizon, reps = lw.Constant(0.5), lw.Alternating(), 200, 3000
        r = lw.count_returns(law, scheme, [horizon], reps, 10)
        brute = []
        for seed in range(800):
            env = lw.make_environment(scheme, law, 7000 + seed)
            path = lw.simulate_direct(env, horizon, np.random.default_rng(seed))
            brute.append(sum(1 for s in path[1:] if s.x == 0 and s.y == 0))
        brute = np.array(brute)
        se = np.hypot(r.std_error[0], brute.std() / np.sqrt(len(brute)))
        assert abs(r.mean_returns[0] - brute.mean()) < 3 * se


def test_annealed_mean_is_zero_for_iid_signs():
    from layerwalk import ensembles

    for scheme in (lw.IidRademacher(), lw.Alternating()):
        x = ensembles.embedded_endpoints(
            lw.TwoPoint(1 / 3, 2 / 3, 0.5), scheme, 2000, 20_000, 11
        )
        se = x.std() / np.sqrt(len(x))
        assert abs(x.mean()) < 3 * se
