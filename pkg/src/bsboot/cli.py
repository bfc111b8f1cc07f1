"""Command-line front end: fit, bootstrap, compare, validate.

Every run is reproducible from its flags: the seed is explicit (default 0)
and identical configurations produce byte-identical sample CSVs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import bootstrap as bs
from .data import SurvivalDataset, kaplan_meier, load_csv
from .distributions import PriorSpec, parse_centering, parse_precision
from .errors import BsbootError, IngestionError
from .functionals import parse_functional
from .numerics import RngStream
from .oracle import GridPosteriorSampler, ks_two_sample, sup_distance_to_km
from .posterior import compute_posterior

DEFAULT_PRIOR = "exp:median=10"
DEFAULT_PRECISION = "const:1"


@dataclass
class RunConfig:
    command: str
    data: str | None = None
    data2: str | None = None
    group: int | None = None
    groups: tuple = (1, 0)
    group_col: str = "group"
    time_unit: float = 1.0
    event_codes: tuple = (1,)
    censor_codes: tuple = (0,)
    prior: str | None = None
    precision: str = DEFAULT_PRECISION
    functional: str = "mean"
    m: int = bs.DEFAULT_M
    m_list: tuple = (10, 100, 1000)
    draws: int = bs.DEFAULT_DRAWS
    oracle_draws: int | None = None
    seed: int = 0
    mode: str = "bsb"
    k: float = 1.0
    grid: str = "0:12:121"
    horizon: float = 12.0
    mesh: int = 2000
    out: str | None = None
    fmt: str = "csv"
    plot: str | None = None
    _argv: tuple = field(default=(), repr=False)

    def validate(self) -> None:
        if self.m < 1 or self.draws < 1:
            raise IngestionError("m and draws must be at least 1")
        if self.command in ("fit", "bootstrap", "compare", "validate") and not self.data:
            raise IngestionError(f"{self.command} requires --data")
        if self.fmt not in ("csv", "json"):
            raise IngestionError(f"format must be csv or json, got {self.fmt!r}")
        if self.mode not in ("bsb", "rubin", "lo", "proper"):
            raise IngestionError(f"unknown mode {self.mode!r}")


def _load_dataset(config: RunConfig, path: str) -> SurvivalDataset:
    return load_csv(path, time_unit=config.time_unit, event_codes=config.event_codes,
                    censor_codes=config.censor_codes, group_column=config.group_col)


def _select_group(dataset: SurvivalDataset, group: int | None) -> SurvivalDataset:
    return dataset if group is None else dataset.subset(group)


def _prior(config: RunConfig) -> PriorSpec:
    text = config.prior if config.prior is not None else DEFAULT_PRIOR
    return PriorSpec(parse_precision(config.precision), parse_centering(text))


def _parse_grid(text: str) -> np.ndarray:
    try:
        lo, hi, points = text.split(":")
        grid = np.linspace(float(lo), float(hi), int(points))
    except ValueError:
        raise IngestionError(f"grid spec must be min:max:points, got {text!r}") from None
    if grid.size < 2 or grid[0] < 0 or grid[-1] <= grid[0]:
        raise IngestionError(f"bad grid range {text!r}")
    return grid


def _format_float(v: float) -> str:
    return repr(float(v))


def _write_lines(out: str | None, lines: list) -> None:
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _summary(values: np.ndarray) -> dict:
    q = np.percentile(values, [2.5, 50.0, 97.5])
    return {
        "n": int(values.size),
        "mean": float(values.mean()),
        "sd": float(values.std(ddof=1)) if values.size > 1 else 0.0,
        "p2.5": float(q[0]),
        "p50": float(q[1]),
        "p97.5": float(q[2]),
    }


def _emit_samples(config: RunConfig, values: np.ndarray, excluded: int,
                  started: float) -> None:
    summary = _summary(values)
    diagnostics = {"excluded_draws": excluded,
                   "runtime_ms": int(1000 * (time.perf_counter() - started))}
    if config.fmt == "csv":
        lines = ["sample"] + [_format_float(v) for v in values]
        _write_lines(config.out, lines)
        for key, val in summary.items():
            print(f"{key}: {val}")
        if excluded:
            print(f"excluded_draws: {excluded}")
    else:
        payload = {"config": _echo_config(config), "samples": [float(v) for v in values],
                   "summary": summary, "diagnostics": diagnostics}
        text = json.dumps(payload, indent=2)
        if config.out is None:
            sys.stdout.write(text + "\n")
        else:
            with open(config.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
    if config.plot:
        _write_density_plot(values, config.plot)


def _echo_config(config: RunConfig) -> dict:
    echo = {k: v for k, v in vars(config).items() if not k.startswith("_")}
    echo["event_codes"] = list(config.event_codes)
    echo["censor_codes"] = list(config.censor_codes)
    echo["groups"] = list(config.groups)
    echo["m_list"] = list(config.m_list)
    return echo


def _write_density_plot(values: np.ndarray, path: str) -> None:
    """Kernel-density curve of the samples as a standalone vector graphic."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from scipy.stats import gaussian_kde

    fig, ax = plt.subplots(figsize=(6, 4))
    if np.ptp(values) > 0:
        kde = gaussian_kde(values)
        pad = 0.1 * np.ptp(values)
        xs = np.linspace(values.min() - pad, values.max() + pad, 512)
        ax.plot(xs, kde(xs))
        ax.fill_between(xs, kde(xs), alpha=0.2)
    else:
        ax.axvline(values[0])
    ax.set_xlabel("functional value")
    ax.set_ylabel("density")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


# --- subcommands --------------------------------------------------------------

def _run_fit(config: RunConfig) -> int:
    dataset = _select_group(_load_dataset(config, config.data), config.group)
    post = compute_posterior(_prior(config), dataset)
    km = kaplan_meier(dataset) if dataset.n else None
    grid = _parse_grid(config.grid)
    eval_x = np.maximum(grid, 1e-12)  # c* needs x > 0
    rows = zip(grid, np.atleast_1d(post.cdf_discrete(grid)),
               np.atleast_1d(post.cdf_continuous(grid)),
               np.atleast_1d(post.cdf(grid)),
               np.atleast_1d(post.c_star(eval_x)),
               np.atleast_1d(km.cdf(grid)) if km else np.full(grid.shape, np.nan))
    header = "x,cdf_discrete,cdf_continuous,cdf,c_star,km"
    lines = [header] + [",".join(_format_float(v) for v in row) for row in rows]
    if config.fmt == "json":
        cols = [line.split(",") for line in lines[1:]]
        payload = {"config": _echo_config(config),
                   "table": {name: [float(c[i]) for c in cols]
                             for i, name in enumerate(header.split(","))}}
        if km:
            payload["sup_distance_to_km"] = sup_distance_to_km(
                post, km, float(grid[0]), float(grid[-1]))
        _write_lines(config.out, [json.dumps(payload, indent=2)])
    else:
        _write_lines(config.out, lines)
        if km:
            d = sup_distance_to_km(post, km, float(grid[0]), float(grid[-1]))
            print(f"sup|F* - KM| on [{grid[0]:g}, {grid[-1]:g}]: {d:.6f}")
    return 0


def _run_bootstrap(config: RunConfig) -> int:
    started = time.perf_counter()
    dataset = _select_group(_load_dataset(config, config.data), config.group)
    phi = parse_functional(config.functional)
    rng = RngStream(config.seed)
    if config.mode == "bsb":
        post = compute_posterior(_prior(config), dataset)
        result = bs.bsb_functional_sample(post, phi, m=config.m, B=config.draws, rng=rng)
    elif config.mode == "rubin":
        result = bs.rubin_bootstrap(dataset, config.draws, phi, rng=rng)
    elif config.mode == "lo":
        centering = parse_centering(config.prior) if config.prior else None
        result = bs.lo_bootstrap(dataset, config.draws, phi, m=config.m, rng=rng,
                                 centering=centering)
    else:  # proper
        centering = parse_centering(config.prior if config.prior else DEFAULT_PRIOR)
        result = bs.proper_bayesian_bootstrap(config.k, centering, dataset,
                                              config.draws, phi, m=config.m, rng=rng)
    _emit_samples(config, result.values, result.excluded, started)
    return 0


def _run_compare(config: RunConfig) -> int:
    started = time.perf_counter()
    phi = parse_functional(config.functional)
    if phi.arity != 2:
        raise IngestionError(f"compare requires a two-sample functional, got {phi.name}")
    dataset = _load_dataset(config, config.data)
    if config.data2:
        data_a, data_b = dataset, _load_dataset(config, config.data2)
    else:
        labels = dataset.group_labels()
        if labels.size < 2:
            raise IngestionError("compare needs --data2 or a group column with two groups")
        ga, gb = config.groups
        data_a, data_b = dataset.subset(ga), dataset.subset(gb)
        if data_a.n == 0 or data_b.n == 0:
            raise IngestionError(f"empty comparison group among {config.groups}")
    prior = _prior(config)
    post_a = compute_posterior(prior, data_a)
    post_b = compute_posterior(prior, data_b)
    result = bs.two_sample_bsb(post_a, post_b, phi, m=config.m, B=config.draws,
                               rng=RngStream(config.seed))
    _emit_samples(config, result.values, result.excluded, started)
    return 0


def _run_validate(config: RunConfig) -> int:
    dataset = _select_group(_load_dataset(config, config.data), config.group)
    phi = parse_functional(config.functional)
    if phi.arity != 1:
        raise IngestionError("validate requires a one-sample functional")
    post = compute_posterior(_prior(config), dataset)
    rng = RngStream(config.seed)
    n_oracle = config.oracle_draws if config.oracle_draws else config.draws
    oracle = GridPosteriorSampler(post, config.horizon, mesh_points=config.mesh)
    reference = oracle.functional_sample(phi, n_oracle, rng)
    lines = ["m,delta"]
    for m in config.m_list:
        sample = bs.bsb_functional_sample(post, phi, m=m, B=config.draws, rng=rng)
        delta = ks_two_sample(sample.values, reference)
        lines.append(f"{m},{_format_float(delta)}")
        print(f"m={m}: delta={delta:.4f}")
    _write_lines(config.out, lines)
    return 0


def run(config: RunConfig) -> int:
    """Execute one command; raises package errors on invalid configurations."""
    config.validate()
    handler = {"fit": _run_fit, "bootstrap": _run_bootstrap,
               "compare": _run_compare, "validate": _run_validate}[config.command]
    return handler(config)


# --- argument parsing ----------------------------------------------------------

def _int_list(text: str) -> tuple:
    return tuple(int(tok) for tok in text.split(","))


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True, help="CSV with columns time,status[,group]")
    p.add_argument("--group", type=int, default=None, help="restrict to one group label")
    p.add_argument("--group-col", default="group", help="name of the group column")
    p.add_argument("--time-unit", type=float, default=1.0,
                   help="multiply times by this factor (days to years: 0.00273785...)")
    p.add_argument("--event-codes", type=_int_list, default=(1,),
                   help="status codes meaning an observed event (comma-separated)")
    p.add_argument("--censor-codes", type=_int_list, default=(0,),
                   help="status codes meaning right-censoring")
    p.add_argument("--prior", default=None,
                   help=f"centering distribution, e.g. {DEFAULT_PRIOR!r}, "
                        "'weibull:shape=2,scale=10', 'discrete:file=atoms.csv'")
    p.add_argument("--c", dest="precision", default=DEFAULT_PRECISION,
                   help="precision function: 'const:K' or 'piecewise:file=steps.csv'")
    p.add_argument("--seed", type=int, default=0, help="master seed (printed; default 0)")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bsboot",
        description="Bayesian bootstrap inference for right-censored survival data")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="tabulate the posterior mean and precision")
    _add_common(p_fit)
    p_fit.add_argument("--grid", default="0:12:121", help="evaluation grid min:max:points")

    p_boot = sub.add_parser("bootstrap", help="sample a one-sample functional")
    _add_common(p_boot)
    p_boot.add_argument("--functional", default="mean",
                        help="mean | variance | rmst:tau=T | surv:t=T")
    p_boot.add_argument("--m", type=int, default=bs.DEFAULT_M)
    p_boot.add_argument("--draws", type=int, default=bs.DEFAULT_DRAWS)
    p_boot.add_argument("--mode", choices=("bsb", "rubin", "lo", "proper"), default="bsb")
    p_boot.add_argument("--k", type=float, default=1.0, help="prior mass for --mode proper")
    p_boot.add_argument("--plot", default=None, help="write a KDE curve (svg/pdf)")

    p_cmp = sub.add_parser("compare", help="sample a two-sample functional")
    _add_common(p_cmp)
    p_cmp.add_argument("--data2", default=None, help="second dataset (else group column)")
    p_cmp.add_argument("--groups", type=_int_list, default=(1, 0),
                       help="group labels compared as first,second")
    p_cmp.add_argument("--functional", default="diff_mean",
                       help="diff_mean | diff_rmst:tau=T | ratio_surv:t=T")
    p_cmp.add_argument("--m", type=int, default=bs.DEFAULT_M)
    p_cmp.add_argument("--draws", type=int, default=bs.DEFAULT_DRAWS)
    p_cmp.add_argument("--plot", default=None)

    p_val = sub.add_parser("validate", help="bootstrap-vs-grid-simulation distances")
    _add_common(p_val)
    p_val.add_argument("--functional", default="surv:t=10")
    p_val.add_argument("--m-list", type=_int_list, default=(10, 100, 1000))
    p_val.add_argument("--draws", type=int, default=bs.DEFAULT_DRAWS)
    p_val.add_argument("--oracle-draws", type=int, default=None)
    p_val.add_argument("--horizon", type=float, default=12.0)
    p_val.add_argument("--mesh", type=int, default=2000)
    return parser


def config_from_args(argv=None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    args["_argv"] = tuple(argv) if argv is not None else tuple(sys.argv[1:])
    known = {f.name for f in RunConfig.__dataclass_fields__.values()}  # type: ignore[attr-defined]
    return RunConfig(**{k: v for k, v in args.items() if k in known})


def main(argv=None) -> int:
    try:
        config = config_from_args(argv)
        print(f"seed: {config.seed}")
        return run(config)
    except BsbootError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
