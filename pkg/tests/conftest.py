import numpy as np
import pytest

from bsboot.data import SurvivalDataset
from bsboot.datasets import load_pbc
from bsboot.distributions import ConstantPrecision, PriorSpec, exp_with_median
from bsboot.posterior import compute_posterior


@pytest.fixture(scope="session")
def pbc():
    return load_pbc()


@pytest.fixture(scope="session")
def pbc_placebo(pbc):
    return pbc.subset(0)


@pytest.fixture(scope="session")
def pbc_treatment(pbc):
    return pbc.subset(1)


@pytest.fixture(scope="session")
def trial_prior():
    """Exponential centering with a 10-year median, unit precision."""
    return PriorSpec(ConstantPrecision(1.0), exp_with_median(10.0))


@pytest.fixture(scope="session")
def pbc_placebo_posterior(trial_prior, pbc_placebo):
    return compute_posterior(trial_prior, pbc_placebo)


def random_dataset(rng: np.random.Generator, n: int, censor_fraction: float = 0.4):
    """Mixed right-censored dataset with occasional ties."""
    times = np.round(rng.exponential(5.0, size=n), 2) + 0.01
    events = rng.random(n) > censor_fraction
    return SurvivalDataset.from_arrays(times, events)
