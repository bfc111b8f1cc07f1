"""Bundled example data."""

from importlib import resources

from .data import SurvivalDataset, load_csv

DAYS_TO_YEARS = 1.0 / 365.25

# Mayo Clinic primary biliary cirrhosis trial (as distributed with the R
# ``survival`` package): the 312 randomized patients, with time on study in
# days, status 0 = censored / 1 = transplant / 2 = death, and group
# 1 = D-penicillamine, 0 = placebo.
PBC_EVENT_CODES = (2,)
PBC_CENSOR_CODES = (0, 1)


def pbc_path() -> str:
    """Filesystem path of the bundled PBC trial CSV."""
    return str(resources.files("bsboot").joinpath("data/pbc.csv"))


def load_pbc(time_unit: float = DAYS_TO_YEARS) -> SurvivalDataset:
    """The PBC trial as a dataset, times in years by default."""
    return load_csv(pbc_path(), time_unit=time_unit,
                    event_codes=PBC_EVENT_CODES, censor_codes=PBC_CENSOR_CODES)
