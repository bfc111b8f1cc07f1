import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsboot.data import SurvivalDataset, kaplan_meier
from bsboot.distributions import (ConstantPrecision, Discrete,
                                  PiecewiseConstantPrecision, PriorSpec,
                                  exp_with_median)
from bsboot.errors import DegenerateConfigurationError
from bsboot.posterior import compute_posterior

from conftest import random_dataset


def exp_prior(c=1.0, median=10.0):
    return PriorSpec(ConstantPrecision(c), exp_with_median(median))


class TestEmptyDataset:
    def test_posterior_mean_is_prior(self):
        post = compute_posterior(exp_prior(), SurvivalDataset())
        grid = np.linspace(0.0, 40.0, 400)
        F = post.prior.F
        assert np.abs(post.cdf(grid) - F.cdf(grid)).max() < 1e-10

    def test_posterior_precision_is_prior(self):
        post = compute_posterior(exp_prior(c=2.5), SurvivalDataset())
        xs = np.array([0.5, 3.0, 17.0])
        np.testing.assert_allclose(post.c_star(xs), 2.5, atol=1e-12)

    def test_continuous_part_carries_everything(self):
        post = compute_posterior(exp_prior(), SurvivalDataset())
        assert post.atom_times.size == 0
        assert post.cdf_discrete(100.0) == 0.0


class TestAtoms:
    def test_atoms_are_event_times_only(self):
        ds = SurvivalDataset.from_arrays([1.0, 2.0], [True, False])
        post = compute_posterior(exp_prior(), ds)
        np.testing.assert_array_equal(post.atom_times, [1.0])

    def test_hazards_in_unit_interval(self, pbc_placebo_posterior):
        h = pbc_placebo_posterior.atom_hazards
        assert np.all(h > 0)
        assert np.all(h <= 1)

    def test_single_atom_mass(self):
        # c chosen so the single event-time hazard is exactly 0.3
        F = exp_with_median(np.log(2.0))  # rate 1
        c = (7.0 / 3.0) * np.exp(1.0)
        ds = SurvivalDataset.from_arrays([1.0], [True])
        post = compute_posterior(PriorSpec(ConstantPrecision(c), F), ds)
        assert post.cdf_discrete(1.0) == pytest.approx(0.3, abs=1e-12)
        assert post.cdf_discrete(0.999) == 0.0
        assert post.cdf_discrete(50.0) == pytest.approx(0.3, abs=1e-12)

    def test_vanishing_precision_reaches_km_product(self):
        ds = SurvivalDataset.from_arrays([1.0, 3.0], [True, True])
        post = compute_posterior(exp_prior(c=1e-8), ds)
        km = kaplan_meier(ds)
        assert km.cdf(3.0) == 1.0
        assert post.cdf_discrete(3.0) == pytest.approx(1.0, abs=1e-6)


class TestContinuousPart:
    def test_discrete_prior_has_no_continuous_part(self):
        prior = PriorSpec(ConstantPrecision(1.0), Discrete([1.0, 2.0], [0.5, 0.5]))
        ds = SurvivalDataset.from_arrays([1.0], [True])
        post = compute_posterior(prior, ds)
        assert post.cdf_continuous(5.0) == 0.0

    def test_empty_dataset_reduces_to_prior_hazard(self):
        post = compute_posterior(exp_prior(), SurvivalDataset())
        F = post.prior.F
        xs = np.linspace(0.1, 30, 100)
        assert np.abs(post.cdf_continuous(xs) - F.cdf(xs)).max() < 1e-10

    def test_against_riemann_sum_oracle(self):
        # single censored observation at 5, exponential median-10 centering, c == 1
        ds = SurvivalDataset.from_arrays([5.0], [False])
        post = compute_posterior(exp_prior(), ds)
        F = post.prior.F
        edges = np.linspace(0.0, 5.0, 1_000_001)
        mid = 0.5 * (edges[1:] + edges[:-1])
        oracle = float(np.sum(F.pdf(mid) / (F.survival(mid) + 1.0)) * (edges[1] - edges[0]))
        assert oracle == pytest.approx(0.15834718382037488, abs=1e-10)  # frozen
        assert post.cumulative_hazard_continuous(5.0) == pytest.approx(oracle, abs=1e-8)

    def test_piecewise_precision_against_riemann_sum(self):
        c = PiecewiseConstantPrecision([2.0], [0.5, 3.0])
        ds = SurvivalDataset.from_arrays([5.0], [False])
        post = compute_posterior(PriorSpec(c, exp_with_median(10.0)), ds)
        F = post.prior.F
        edges = np.linspace(0.0, 5.0, 1_000_001)
        mid = 0.5 * (edges[1:] + edges[:-1])
        cm = np.where(mid < 2.0, 0.5, 3.0)
        oracle = float(np.sum(cm * F.pdf(mid) / (cm * F.survival(mid) + 1.0))
                       * (edges[1] - edges[0]))
        assert post.cumulative_hazard_continuous(5.0) == pytest.approx(oracle, abs=1e-8)


class TestCombinedCdf:
    def test_combination_rule(self):
        post = compute_posterior(exp_prior(), SurvivalDataset.from_arrays([1.0], [True]))
        x = 2.0
        fd, fc = post.cdf_discrete(x), post.cdf_continuous(x)
        assert post.cdf(x) == pytest.approx(1 - (1 - fd) * (1 - fc), abs=1e-15)

    def test_monotone_right_continuous_on_grid(self, pbc_placebo_posterior):
        grid = np.linspace(0.0, 14.0, 10_000)
        vals = pbc_placebo_posterior.cdf(grid)
        assert vals[0] == 0.0
        assert np.all(np.diff(vals) >= -1e-12)
        # right continuity at atoms: approaching from the right reproduces the value
        t = pbc_placebo_posterior.atom_times[:5]
        np.testing.assert_allclose(pbc_placebo_posterior.cdf(t + 1e-12),
                                   pbc_placebo_posterior.cdf(t), atol=1e-9)

    def test_left_limit_excludes_atom(self):
        ds = SurvivalDataset.from_arrays([1.0], [True])
        post = compute_posterior(exp_prior(), ds)
        assert post.cdf_left(1.0) < post.cdf(1.0)
        assert post.cdf_left(1.0) == pytest.approx(post.cdf_continuous(1.0), abs=1e-15)

    def test_pbc_sup_distances(self, trial_prior, pbc_placebo, pbc_treatment):
        from bsboot.oracle import sup_distance_to_km
        post0 = compute_posterior(trial_prior, pbc_placebo)
        post1 = compute_posterior(trial_prior, pbc_treatment)
        d0 = sup_distance_to_km(post0, kaplan_meier(pbc_placebo), 0.0, 12.0)
        d1 = sup_distance_to_km(post1, kaplan_meier(pbc_treatment), 0.0, 12.0)
        assert d0 == pytest.approx(0.004, abs=0.002)
        assert d1 == pytest.approx(0.005, abs=0.002)


class TestLimitIdentities:
    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=10, deadline=None)
    def test_kaplan_meier_limit(self, seed):
        ds = random_dataset(np.random.default_rng(seed), 30)
        post = compute_posterior(exp_prior(c=1e-8), ds)
        km = kaplan_meier(ds)
        ev = np.unique(ds.times[ds.events])
        if ev.size:
            assert np.abs(post.cdf(ev) - km.cdf(ev)).max() < 1e-6

    @given(st.integers(0, 2 ** 31 - 1), st.floats(0.1, 20.0))
    @settings(max_examples=10, deadline=None)
    def test_dirichlet_process_identity(self, seed, k):
        ds = random_dataset(np.random.default_rng(seed), 20, censor_fraction=0.0)
        post = compute_posterior(exp_prior(c=k), ds)
        F = post.prior.F
        grid = np.linspace(0.01, ds.times.max() + 5, 200)
        ecdf = np.searchsorted(ds.times, grid, side="right") / ds.n
        closed = (k * F.cdf(grid) + ds.n * ecdf) / (k + ds.n)
        assert np.abs(post.cdf(grid) - closed).max() < 1e-8

    def test_dirichlet_posterior_precision(self):
        # uncensored + constant precision k: the posterior precision is k + n everywhere
        ds = SurvivalDataset.from_arrays([1.0, 2.0, 3.0], [True] * 3)
        post = compute_posterior(exp_prior(c=2.0), ds)
        xs = np.array([0.5, 1.0, 1.7, 2.0, 3.0, 8.0])
        np.testing.assert_allclose(post.c_star(xs), 5.0, atol=1e-10)


class TestPosteriorPrecision:
    def test_beyond_data_formula(self):
        ds = SurvivalDataset.from_arrays([1.0, 2.0], [True, False])
        post = compute_posterior(exp_prior(), ds)
        F = post.prior.F
        x = 9.0
        expected = F.survival(x) / (1.0 - post.cdf(x))
        assert post.c_star(x) == pytest.approx(expected, rel=1e-10)
        assert post.c_star(x) > 0

    def test_requires_positive_x(self, pbc_placebo_posterior):
        with pytest.raises(DegenerateConfigurationError):
            pbc_placebo_posterior.c_star(0.0)

    def test_exhausted_mass_is_hard_error(self):
        prior = PriorSpec(ConstantPrecision(1.0), Discrete([1.0], [1.0]))
        post = compute_posterior(prior, SurvivalDataset())
        with pytest.raises(DegenerateConfigurationError):
            post.c_star(2.0)


class TestDiscretePrior:
    def test_hand_computed_hazards(self):
        # prior atoms {1: .5, 2: .5}, c == 1, one event at 1:
        # h(1) = (0.5 + 1)/(1 + 1) = 0.75, h(2) = 0.5/0.5 = 1
        prior = PriorSpec(ConstantPrecision(1.0), Discrete([1.0, 2.0], [0.5, 0.5]))
        ds = SurvivalDataset.from_arrays([1.0], [True])
        post = compute_posterior(prior, ds)
        np.testing.assert_allclose(post.atom_hazards, [0.75, 1.0], atol=1e-15)
        np.testing.assert_allclose(post.atom_masses, [0.75, 0.25], atol=1e-15)
        assert post.cdf(2.0) == pytest.approx(1.0, abs=1e-15)

    def test_event_outside_prior_support(self):
        prior = PriorSpec(ConstantPrecision(1.0), Discrete([1.0], [1.0]))
        ds = SurvivalDataset.from_arrays([0.5, 0.5], [True, False])
        post = compute_posterior(prior, ds)
        # new atom at the event time 0.5 with hazard 1/(c*1 + 2)
        np.testing.assert_array_equal(post.atom_times, [0.5, 1.0])
        assert post.atom_hazards[0] == pytest.approx(1.0 / 3.0)
