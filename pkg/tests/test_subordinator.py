import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import erfc, erfcinv, gamma

from mehler import (DivergentMomentError, StableSubordinator, eta_density,
                    eta_density_scaled, fractional_moment,
                    sample_positive_stable)


def levy_half_density(sigma):
    """Independent oracle: closed-form density with Laplace transform exp(-sqrt(lam))."""
    sigma = np.asarray(sigma, dtype=float)
    return sigma ** -1.5 * np.exp(-1.0 / (4.0 * sigma)) / (2.0 * np.sqrt(np.pi))


def levy_half_cdf(sigma):
    return erfc(1.0 / (2.0 * np.sqrt(np.asarray(sigma, dtype=float))))


def mellin_moment(s, q):
    """Independent oracle: E[tau**q] = Gamma(1 - q/s) / Gamma(1 - q) for q < s."""
    return gamma(1.0 - q / s) / gamma(1.0 - q)


class TestDensity:
    def test_levy_half_pointwise(self):
        sig = np.geomspace(0.05, 10.0, 60)
        got = eta_density(0.5, sig)
        np.testing.assert_allclose(got, levy_half_density(sig), rtol=1e-6)

    def test_levy_half_frozen_values(self):
        # e^{-1/4} / (2 sqrt(pi)) and the sigma = 1/4 value from the same oracle
        assert eta_density(0.5, 1.0) == pytest.approx(0.2196956447343462, rel=1e-8)
        assert eta_density(0.5, 0.25) == pytest.approx(0.8302149948410512, rel=1e-8)

    def test_tail_decay(self):
        assert eta_density(0.7, 1e3) < 1e-8
        assert eta_density(0.7, 1e4) < eta_density(0.7, 1e3)

    def test_rejects_bad_exponent(self):
        for s in (0.0, 1.0, -0.2, 1.3):
            with pytest.raises(ValueError):
                StableSubordinator(s)

    def test_rejects_nonpositive_sigma(self):
        with pytest.raises(ValueError):
            eta_density(0.5, 0.0)
        with pytest.raises(ValueError):
            eta_density(0.5, np.array([1.0, -2.0]))

    @pytest.mark.parametrize("s", [0.3, 0.5, 0.7, 0.9])
    def test_nonnegative_on_log_grid(self, s):
        sig = np.geomspace(1e-3, 1e3, 121)
        assert np.all(eta_density(s, sig) >= -1e-10)

    @pytest.mark.parametrize("s", [0.3, 0.5, 0.7, 0.9])
    def test_normalization(self, s):
        sub = StableSubordinator(s)
        tau, w = sub.mixture_nodes(tail_tol=1e-12, per_decade=4, order=32)
        mass = float(np.sum(w)) + sub.tail_mass(tau[-1])
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_oscillatory_and_angular_paths_agree(self):
        sub = StableSubordinator(0.7)
        for sig in (0.6, 1.0, 2.5):
            a = sub._density_oscillatory(sig)
            b = sub._density_angular(sig)
            assert a == pytest.approx(b, rel=1e-9, abs=1e-12)

    def test_series_matches_quadrature(self):
        sub = StableSubordinator(0.35)
        for sig in (5.0, 20.0, 60.0):
            assert float(sub.tail_series(sig)[0]) == pytest.approx(
                sub.density_exact(sig), rel=1e-9)


class TestScaledDensity:
    def test_t_one_is_identity(self):
        sig = np.geomspace(0.1, 5.0, 7)
        np.testing.assert_array_equal(eta_density_scaled(0.5, 1.0, sig),
                                      eta_density(0.5, sig))

    def test_frozen_scaled_value(self):
        # t^{-2} * eta_{1/2}(1/16) with the closed-form oracle:
        # (1/16) * (1/(2 sqrt(pi))) * 64 * e^{-4}
        expected = float(levy_half_density(1.0 / 16.0)) / 16.0
        assert expected == pytest.approx(0.02066489555938399, rel=1e-12)
        assert eta_density_scaled(0.5, 4.0, 1.0) == pytest.approx(expected, rel=1e-6)

    def test_scaled_normalization(self):
        # int eta_t = 1 for s = 0.3, t = 2 via substitution onto the base nodes
        sub = StableSubordinator(0.3)
        tau, w = sub.mixture_nodes(tail_tol=1e-12, per_decade=4, order=32)
        t = 2.0
        scale = t ** (1.0 / 0.3)
        sigma = scale * tau
        vals = eta_density_scaled(0.3, t, sigma)
        base = eta_density(0.3, tau)
        mass = float(np.sum(w / base * vals * scale)) + sub.tail_mass(tau[-1])
        assert mass == pytest.approx(1.0, abs=1e-6)

    @given(st.floats(0.25, 0.9), st.floats(0.2, 8.0), st.floats(0.05, 50.0))
    @settings(max_examples=25, deadline=None)
    def test_scaling_identity(self, s, t, sigma):
        scale = t ** (-1.0 / s)
        lhs = eta_density_scaled(s, t, sigma) / scale
        rhs = eta_density(s, scale * sigma)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)

    def test_scaling_against_independent_quadrature(self):
        # two independently quadratured sides of the scaling relation
        sub = StableSubordinator(0.4)
        t, sigma = 3.0, 1.7
        lhs = t ** (1.0 / 0.4) * sub.density_exact(t ** (-1.0 / 0.4) * sigma) \
            * t ** (-1.0 / 0.4)
        rhs = sub.density_scaled(t, sigma)
        assert lhs == pytest.approx(rhs, rel=1e-7, abs=1e-8)


class TestSampler:
    def test_kolmogorov_distance_levy_half(self):
        rng = np.random.default_rng(2024)
        x = np.sort(sample_positive_stable(0.5, 1.0, 10 ** 6, rng))
        emp = np.arange(1, x.size + 1) / x.size
        ks = np.max(np.abs(levy_half_cdf(x) - emp))
        assert ks < 0.003

    def test_median(self):
        rng = np.random.default_rng(7)
        x = sample_positive_stable(0.5, 1.0, 10 ** 6, rng)
        expected = 1.0 / (4.0 * erfcinv(0.5) ** 2)  # invert erfc(1/(2 sqrt(s))) = 1/2
        assert expected == pytest.approx(1.0990546691588662, rel=1e-12)
        assert np.median(x) == pytest.approx(expected, rel=5e-3)

    @pytest.mark.parametrize("s,t", [(0.5, 1.0), (0.3, 2.0), (0.8, 0.5)])
    def test_determinism(self, s, t):
        a = sample_positive_stable(s, t, 1000, np.random.default_rng(99))
        b = sample_positive_stable(s, t, 1000, np.random.default_rng(99))
        np.testing.assert_array_equal(a, b)

    def test_time_zero_is_dirac(self):
        assert np.all(sample_positive_stable(0.5, 0.0, 16, np.random.default_rng(1)) == 0.0)

    @pytest.mark.parametrize("s", [0.35, 0.5, 0.75])
    def test_sampler_matches_fractional_moment(self, s):
        rng = np.random.default_rng(5)
        x = sample_positive_stable(s, 1.0, 10 ** 6, rng)
        emp = np.mean(x ** -0.5)
        se = np.std(x ** -0.5) / np.sqrt(x.size)
        assert abs(emp - fractional_moment(s, -0.5)) < 3.0 * se


class TestMoments:
    def test_levy_half_inverse_sqrt(self):
        # substitution u = 1/(4 tau) in the closed form gives 2/sqrt(pi)
        assert fractional_moment(0.5, -0.5) == pytest.approx(2.0 / np.sqrt(np.pi), rel=1e-7)

    @pytest.mark.parametrize("s", [0.3, 0.5, 0.7, 0.9])
    def test_zeroth_moment_is_one(self, s):
        assert fractional_moment(s, 0.0) == pytest.approx(1.0, abs=1e-7)

    @pytest.mark.parametrize("s,q", [(0.5, -0.5), (0.7, -0.5), (0.35, 0.2), (0.9, 0.4)])
    def test_mellin_oracle(self, s, q):
        assert fractional_moment(s, q) == pytest.approx(mellin_moment(s, q), rel=1e-6)

    def test_stability_under_node_doubling(self):
        sub = StableSubordinator(0.7)
        tau1, w1 = sub.mixture_nodes(tail_tol=1e-11, per_decade=4, order=32, power=-0.5)
        tau2, w2 = sub.mixture_nodes(tail_tol=1e-11, per_decade=8, order=32, power=-0.5)
        a = float(np.dot(w1, tau1 ** -0.5))
        b = float(np.dot(w2, tau2 ** -0.5))
        assert abs(a - b) < 1e-5

    def test_divergent_requests_rejected(self):
        with pytest.raises(DivergentMomentError):
            fractional_moment(0.5, 0.5)
        with pytest.raises(DivergentMomentError):
            fractional_moment(0.5, -0.7)
