"""Monte Carlo MISE tables, pointwise bands and empirical convergence rates.

All experiments draw replication ``r`` at sample size ``n`` from
``RngStream(master_seed, r).child(n)``, so every estimator sees the same
sample paths and results do not depend on the worker count.

Defaults reproduce the published simulation set-up: unit innovation
variance, a linearly detrended series before the periodogram, and the
error of one replication measured as

    2 pi * sqrt( (1/n) * sum_k (est(lambda_k) - f(lambda_k))^2 ),

k = 1..floor((n-1)/2), i.e. the root sum of squares of the 2 pi-scaled
spectra over the half grid, divided by sqrt(n).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial

import numpy as np

from ._parallel import ordered_map
from .errors import HardAssertionError, ParameterError
from .estimators import estimate_fhat, estimate_ftilde, evaluate
from .simgen import RngStream, SpectralModel, is_decreasing, simulate, spectral_density
from .spectrum import periodogram, step_periodogram_at

ESTIMATOR_NAMES = ("raw", "fhat", "ftilde")

# published MISE values, keyed by example -> estimator -> n
PUBLISHED_MISE = {
    1: {
        "raw": {100: 9.59, 500: 12.96, 1000: 13.67, 5000: 14.25},
        "fhat": {100: 6.38, 500: 5.48, 1000: 4.76, 5000: 2.95},
        "ftilde": {100: 9.11, 500: 8.52, 1000: 7.27, 5000: 4.26},
    },
    2: {
        "raw": {100: 1.80, 500: 1.99, 1000: 2.02, 5000: 2.07},
        "fhat": {100: 0.710, 500: 0.520, 1000: 0.432, 5000: 0.305},
        "ftilde": {100: 1.12, 500: 0.803, 1000: 0.659, 5000: 0.472},
    },
}

_CONTRACTION_TOL = 1e-9


@dataclass(frozen=True)
class MiseRow:
    estimator: str
    n: int
    reps: int
    mise: float
    mc_se: float


def canonical_estimator(name: str) -> str:
    name = {"raw_periodogram": "raw", "periodogram": "raw"}.get(name, name)
    if name not in ESTIMATOR_NAMES:
        raise ParameterError(f"estimator must be one of {ESTIMATOR_NAMES}, got {name!r}")
    return name


def mise_error(est, truth, n: int) -> float:
    est = np.asarray(est, dtype=float)
    truth = np.asarray(truth, dtype=float)
    return 2 * math.pi * math.sqrt(float(np.sum((est - truth) ** 2)) / n)


def _check_setup(model, n):
    if not is_decreasing(model):
        raise ParameterError("benchmark model must have a strictly decreasing spectral density")
    if int(n) != n or n < 8:
        raise ParameterError(f"need integer n >= 8, got {n}")


def _fits(model, n, estimators, stream, detrend, arfima_truncation):
    """Simulate once and return (periodogram, truth, {name: grid values})."""
    x = simulate(model, n, stream, arfima_truncation)
    pg = periodogram(x, detrend=detrend)
    truth = spectral_density(model, pg.freqs)
    out = {}
    for name in estimators:
        if name == "raw":
            out[name] = pg.ordinates
            continue
        levels = (estimate_fhat if name == "fhat" else estimate_ftilde)(pg).levels
        if np.any(np.diff(levels) > 0):
            raise HardAssertionError(f"{name} output is not non-increasing (n={n}, stream={stream})")
        out[name] = levels
    if "fhat" in out:
        lhs = float(np.sum((out["fhat"] - truth) ** 2))
        rhs = float(np.sum((pg.ordinates - truth) ** 2))
        if lhs > rhs + _CONTRACTION_TOL * (1 + rhs):
            raise HardAssertionError(f"projection failed to contract toward f (n={n}, stream={stream})")
    return pg, truth, out


def _rep_errors(model, n, estimators, detrend, arfima_truncation, stream):
    pg, truth, fits = _fits(model, n, estimators, stream, detrend, arfima_truncation)
    return tuple(mise_error(fits[e], truth, n) for e in estimators)


def mise_one_rep(model: SpectralModel, n: int, estimator: str, rng: RngStream,
                 detrend: str = "linear", arfima_truncation=None) -> float:
    _check_setup(model, n)
    est = canonical_estimator(estimator)
    return _rep_errors(model, n, (est,), detrend, arfima_truncation, rng)[0]


def rep_stream(master_seed: int, n: int, rep: int) -> RngStream:
    return RngStream(master_seed, rep).child(n)


def mise_table(model: SpectralModel, n_list, reps: int, estimators=ESTIMATOR_NAMES,
               master_seed: int = 0, detrend: str = "linear", threads=1,
               arfima_truncation=None) -> list[MiseRow]:
    """Mean replication error for every (estimator, n), rows ordered estimator-major."""
    estimators = tuple(canonical_estimator(e) for e in estimators)
    if int(reps) != reps or reps < 2:
        raise ParameterError("reps must be an integer >= 2 (Monte Carlo SE needs two replications)")
    for n in n_list:
        _check_setup(model, n)
    tasks = [(n, r) for n in n_list for r in range(reps)]
    results = ordered_map(
        partial(_task_errors, model, estimators, detrend, arfima_truncation, master_seed),
        tasks, threads)
    errs = {}
    for (n, _), row in zip(tasks, results):
        errs.setdefault(n, []).append(row)
    rows = []
    for j, est in enumerate(estimators):
        for n in n_list:
            e = np.array([r[j] for r in errs[n]])
            rows.append(MiseRow(est, int(n), int(reps), float(e.mean()), float(e.std(ddof=1) / math.sqrt(reps))))
    return rows


def _task_errors(model, estimators, detrend, arfima_truncation, master_seed, task):
    n, r = task
    return _rep_errors(model, n, estimators, detrend, arfima_truncation, rep_stream(master_seed, n, r))


@dataclass(frozen=True)
class PointwiseStats:
    t: np.ndarray
    mean: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    truth: np.ndarray


def _evaluate_on(model, n, estimator, t_grid, detrend, arfima_truncation, stream):
    x = simulate(model, n, stream, arfima_truncation)
    pg = periodogram(x, detrend=detrend)
    if estimator == "raw":
        return np.array([step_periodogram_at(pg, t) for t in t_grid])
    fit = (estimate_fhat if estimator == "fhat" else estimate_ftilde)(pg)
    if np.any(np.diff(fit.levels) > 0):
        raise HardAssertionError(f"{estimator} output is not non-increasing")
    return evaluate(fit, np.asarray(t_grid, dtype=float))


def pointwise_stats(model: SpectralModel, n: int, reps: int, estimator: str, t_grid,
                    master_seed: int = 0, detrend: str = "linear", threads=1,
                    arfima_truncation=None, level: float = 0.95) -> PointwiseStats:
    """Pointwise mean and empirical central ``level`` band across replications."""
    _check_setup(model, n)
    estimator = canonical_estimator(estimator)
    t_grid = np.asarray(t_grid, dtype=float)
    vals = np.array(ordered_map(
        partial(_evaluate_on, model, n, estimator, t_grid, detrend, arfima_truncation),
        [rep_stream(master_seed, n, r) for r in range(reps)], threads))
    alpha = (1 - level) / 2
    lo, hi = np.quantile(vals, [alpha, 1 - alpha], axis=0)
    return PointwiseStats(t_grid, vals.mean(axis=0), lo, hi, spectral_density(model, t_grid))


def rate_rmse(model: SpectralModel, t0: float, n_list, reps: int, estimator: str,
              master_seed: int = 0, detrend: str = "linear", threads=1,
              arfima_truncation=None) -> np.ndarray:
    """Root mean squared error of the estimate at ``t0`` for each n."""
    estimator = canonical_estimator(estimator)
    truth = spectral_density(model, t0)
    out = []
    for n in n_list:
        _check_setup(model, n)
        vals = ordered_map(
            partial(_evaluate_on, model, n, estimator, np.array([t0]), detrend, arfima_truncation),
            [rep_stream(master_seed, n, r) for r in range(reps)], threads)
        err = np.concatenate(vals) - truth
        out.append(math.sqrt(float(np.mean(err**2))))
    return np.array(out)


def rate_slope(model: SpectralModel, t0: float, n_list, reps: int, estimator: str,
               master_seed: int = 0, detrend: str = "linear", threads=1,
               arfima_truncation=None) -> float:
    """Least-squares slope of log RMSE(t0) against log n."""
    n_arr = np.asarray(n_list, dtype=float)
    if len(n_arr) < 4:
        raise ParameterError("rate_slope needs at least four sample sizes")
    ratios = n_arr[1:] / n_arr[:-1]
    if np.any(ratios <= 1) or np.ptp(np.log(ratios)) > 0.05:
        raise ParameterError("sample sizes must form an increasing geometric sequence")
    rmse = rate_rmse(model, t0, n_list, reps, estimator, master_seed, detrend, threads, arfima_truncation)
    return float(np.polyfit(np.log(n_arr), np.log(rmse), 1)[0])
