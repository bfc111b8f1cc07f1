import numpy as np
import pytest

from bsboot.data import SurvivalDataset
from bsboot.distributions import (ConstantPrecision, Discrete, PriorSpec,
                                  exp_with_median)
from bsboot.errors import UnsupportedConfigurationError
from bsboot.numerics import RngStream, bisect
from bsboot.oracle import ks_one_sample
from bsboot.posterior import compute_posterior
from bsboot.sampler import (discrete_component_batch, invert_continuous_batch,
                            sample_continuous, sample_discrete, sample_fstar,
                            sample_fstar_batch, sample_fstar_discrete_prior)

KS99 = 1.63  # asymptotic 99% one-sample Kolmogorov-Smirnov quantile


def exp_prior(c=1.0, median=10.0):
    return PriorSpec(ConstantPrecision(c), exp_with_median(median))


class TestDiscreteComponent:
    def test_no_events_always_infinite(self):
        ds = SurvivalDataset.from_arrays([2.0, 4.0], [False, False])
        post = compute_posterior(exp_prior(), ds)
        draws = [sample_discrete(post, RngStream(0, i)).value for i in range(50)]
        assert all(np.isinf(draws))

    def test_near_unit_atom_mass_always_hits_atom(self):
        ds = SurvivalDataset.from_arrays([1.0], [True])
        post = compute_posterior(exp_prior(c=1e-8), ds)
        assert post.atom_masses[0] > 1 - 1e-7
        draws = np.array([sample_discrete(post, RngStream(1, i)).value for i in range(500)])
        assert np.all(draws == 1.0)

    def test_atom_frequencies_match_masses(self, pbc_placebo_posterior):
        post = pbc_placebo_posterior
        gen = RngStream(7).generator()
        n = 100_000
        draws = discrete_component_batch(post, gen.random(n))
        for t, mass in zip(post.atom_times, post.atom_masses):
            freq = np.mean(draws == t)
            se = np.sqrt(mass * (1 - mass) / n)
            assert abs(freq - mass) < 4 * se

    def test_residual_mass_frequency(self, pbc_placebo_posterior):
        post = pbc_placebo_posterior
        gen = RngStream(9).generator()
        n = 100_000
        draws = discrete_component_batch(post, gen.random(n))
        residual = 1.0 - post.atom_masses.sum()
        se = np.sqrt(residual * (1 - residual) / n)
        assert abs(np.isinf(draws).mean() - residual) < 4 * se

    def test_requires_continuous_prior(self):
        prior = PriorSpec(ConstantPrecision(1.0), Discrete([1.0], [1.0]))
        post = compute_posterior(prior, SurvivalDataset())
        with pytest.raises(UnsupportedConfigurationError):
            sample_discrete(post, RngStream(0))


class TestContinuousComponent:
    def test_empty_dataset_matches_prior(self):
        post = compute_posterior(exp_prior(), SurvivalDataset())
        gen = RngStream(3).generator()
        n = 100_000
        draws = invert_continuous_batch(post, -np.log1p(-gen.random(n)))
        d = ks_one_sample(draws, post.prior.F.cdf)
        assert d < KS99 / np.sqrt(n)

    def test_zero_uniform_boundary(self):
        post = compute_posterior(exp_prior(), SurvivalDataset.from_arrays([5.0], [False]))
        x = invert_continuous_batch(post, np.array([0.0]))[0]
        assert 0 < x < post.prior.F.quantile(1e-8)

    def test_censored_config_against_riemann_oracle(self):
        ds = SurvivalDataset.from_arrays([5.0], [False])
        post = compute_posterior(exp_prior(), ds)
        F = post.prior.F
        # independent cumulative-hazard table by midpoint Riemann sum
        edges = np.linspace(0.0, 250.0, 2_500_001)
        mid = 0.5 * (edges[1:] + edges[:-1])
        at_risk = (mid <= 5.0).astype(float)
        dh = F.pdf(mid) / (F.survival(mid) + at_risk) * (edges[1] - edges[0])
        h_table = np.concatenate(([0.0], np.cumsum(dh)))
        def oracle_cdf(x):
            h = np.interp(x, edges, h_table)
            return -np.expm1(-h)
        gen = RngStream(5).generator()
        n = 100_000
        draws = invert_continuous_batch(post, -np.log1p(-gen.random(n)))
        assert ks_one_sample(draws, oracle_cdf) < 0.01

    def test_scalar_bisection_matches_batch(self):
        ds = SurvivalDataset.from_arrays([1.0, 2.5, 4.0, 4.0], [True, False, True, False])
        post = compute_posterior(exp_prior(c=0.7), ds)
        rs = np.linspace(1e-6, post.h_end, 150)
        batch = invert_continuous_batch(post, rs)
        scalar = np.array([bisect(post.cumulative_hazard_continuous, r, 0.0, post.y_max)
                           for r in rs])
        assert np.abs(batch - scalar).max() < 1e-7

    def test_sources_labelled(self):
        ds = SurvivalDataset.from_arrays([5.0], [False])
        post = compute_posterior(exp_prior(), ds)
        sources = {sample_continuous(post, RngStream(11, i)).source for i in range(200)}
        assert sources <= {"continuous", "tail"}
        assert "tail" in sources  # most mass lies beyond the single censoring time


class TestMinCombination:
    def test_min_of_components(self):
        ds = SurvivalDataset.from_arrays([1.0, 2.0], [True, False])
        post = compute_posterior(exp_prior(), ds)
        for i in range(50):
            gen = RngStream(21, i).generator()
            x = sample_fstar(post, gen)
            gen2 = RngStream(21, i).generator()
            xd = sample_discrete(post, gen2).value
            xc = sample_continuous(post, gen2).value
            assert x == min(xd, xc)
            assert np.isfinite(x) and x > 0

    def test_empirical_cdf_matches_posterior(self, pbc_placebo_posterior):
        post = pbc_placebo_posterior
        gen = RngStream(123).generator()
        n = 100_000
        draws = sample_fstar_batch(post, gen.random(n), gen.random(n))
        d = ks_one_sample(draws, post.cdf, post.cdf_left)
        # two-sided Dvoretzky-Kiefer-Wolfowitz bound at 99%
        assert d < np.sqrt(np.log(2 / 0.01) / (2 * n))

    def test_tail_fraction(self, pbc_placebo_posterior):
        post = pbc_placebo_posterior
        gen = RngStream(321).generator()
        n = 100_000
        draws = sample_fstar_batch(post, gen.random(n), gen.random(n))
        expected = 1.0 - post.cdf(post.y_max)
        se = np.sqrt(expected * (1 - expected) / n)
        assert abs((draws > post.y_max).mean() - expected) < 4 * se

    def test_scalar_path_same_law_as_batch(self):
        ds = SurvivalDataset.from_arrays([1.0, 3.0, 6.0], [True, True, False])
        post = compute_posterior(exp_prior(), ds)
        scalar = np.array([sample_fstar(post, RngStream(77, i)) for i in range(3000)])
        gen = RngStream(78).generator()
        batch = sample_fstar_batch(post, gen.random(3000), gen.random(3000))
        from bsboot.oracle import ks_two_sample
        assert ks_two_sample(scalar, batch) < 1.63 * np.sqrt(2 / 3000)


class TestDiscretePriorSampling:
    def test_two_equal_atoms_no_data(self):
        prior = PriorSpec(ConstantPrecision(1.0), Discrete([1.0, 2.0], [0.5, 0.5]))
        post = compute_posterior(prior, SurvivalDataset())
        gen = RngStream(31).generator()
        n = 100_000
        draws = discrete_component_batch(post, gen.random(n))
        freq = np.mean(draws == 1.0)
        assert abs(freq - 0.5) < 4 * np.sqrt(0.25 / n)
        assert np.isfinite(draws).all()

    def test_single_atom_always(self):
        prior = PriorSpec(ConstantPrecision(2.0), Discrete([1.0], [1.0]))
        post = compute_posterior(prior, SurvivalDataset())
        draws = [sample_fstar_discrete_prior(post, RngStream(32, i)) for i in range(100)]
        assert all(d == 1.0 for d in draws)

    def test_posterior_masses_with_data(self):
        # hand-rolled hazards: h(1) = 0.75, h(2) = 1 -> masses 0.75 / 0.25
        prior = PriorSpec(ConstantPrecision(1.0), Discrete([1.0, 2.0], [0.5, 0.5]))
        post = compute_posterior(prior, SurvivalDataset.from_arrays([1.0], [True]))
        gen = RngStream(33).generator()
        n = 100_000
        draws = discrete_component_batch(post, gen.random(n))
        for atom, mass in ((1.0, 0.75), (2.0, 0.25)):
            se = np.sqrt(mass * (1 - mass) / n)
            assert abs(np.mean(draws == atom) - mass) < 4 * se

    def test_wrong_prior_kind_rejected(self):
        post = compute_posterior(exp_prior(), SurvivalDataset())
        with pytest.raises(UnsupportedConfigurationError):
            sample_fstar_discrete_prior(post, RngStream(0))
