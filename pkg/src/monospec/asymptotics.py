"""Cube-root limit laws: Chernoff sampling, scaling constants, finite-n checks."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy import stats

from ._parallel import ordered_map
from .errors import HypothesisError, ParameterError
from .estimators import ESTIMATORS, evaluate
from .simgen import RngStream, SpectralModel, simulate, spectral_density, spectral_density_deriv
from .spectrum import periodogram

#: ratio of the f-tilde and f-hat limit constants
EFFICIENCY_RATIO = 3 ** (-1 / 3) * math.pi


@dataclass(frozen=True)
class ChernoffSamplerConfig:
    """Grid {-L, -L+h, ..., L} for the discretized argmax of W(s) - s^2."""

    sample_count: int
    half_width: float = 4.0
    step: float = 0.005

    def __post_init__(self):
        if int(self.sample_count) != self.sample_count or self.sample_count < 1:
            raise ParameterError("sample_count must be a positive integer")
        if not (0 < self.step <= 0.01):
            raise ParameterError("grid step must lie in (0, 0.01]")
        if self.half_width < 3:
            raise ParameterError("half width must be at least 3")
        ratio = self.half_width / self.step
        if abs(ratio - round(ratio)) > 1e-9 * ratio:
            raise ParameterError("half width must be an integer multiple of the step")

    @property
    def half_points(self) -> int:
        return int(round(self.half_width / self.step))


def chernoff_sample(cfg: ChernoffSamplerConfig, rng: RngStream, chunk: int = 1000) -> np.ndarray:
    """Draw approximate Chernoff variables by grid argmax.

    Two independent Gaussian random walks with N(0, h) increments are glued
    at W(0) = 0. Block j of ``chunk`` samples uses ``rng.child(j)``.
    Increments are drawn outward from 0, so widening the grid on the same
    stream keeps the inner part of every path unchanged.
    """
    m = cfg.half_points
    h = cfg.step
    s = np.arange(-m, m + 1) * h
    drift = s**2
    out = np.empty(cfg.sample_count)
    for j, start in enumerate(range(0, cfg.sample_count, chunk)):
        size = min(chunk, cfg.sample_count - start)
        g = rng.child(j).generator()
        steps = g.standard_normal((m, 2, size)) * math.sqrt(h)
        walk = np.empty((size, 2 * m + 1))
        walk[:, m] = 0.0
        walk[:, m + 1:] = np.cumsum(steps[:, 0, :], axis=0).T
        walk[:, :m] = np.cumsum(steps[:, 1, :], axis=0).T[:, ::-1]
        out[start:start + size] = s[np.argmax(walk - drift, axis=1)]
    return out


def _f_and_deriv(model, t0):
    if not (0 < t0 < math.pi):
        raise ParameterError(f"t0 must lie in (0, pi), got {t0}")
    f0 = spectral_density(model, t0)
    d0 = spectral_density_deriv(model, t0)
    if not d0 < 0:
        raise HypothesisError(f"need f'(t0) < 0, got f'({t0}) = {d0}")
    return f0, d0


def fhat_scale(f0: float, d0: float) -> float:
    """2 (-pi f0^2 d0)^(1/3) for density value f0 and slope d0 < 0."""
    return 2 * (-math.pi * f0 * f0 * d0) ** (1 / 3)


def ftilde_log_scale(f0: float, d0: float) -> float:
    return 2 * (-math.pi**4 * d0 / (3 * f0)) ** (1 / 3)


def ftilde_scale(f0: float, d0: float) -> float:
    return 2 * (-math.pi**4 * f0 * f0 * d0 / 3) ** (1 / 3)


def limit_constant_fhat(model: SpectralModel, t0: float) -> float:
    """Limit scale of n^(1/3) (fhat(t0) - f(t0)) in units of a Chernoff variable."""
    return fhat_scale(*_f_and_deriv(model, t0))


def limit_constant_ftilde_log(model: SpectralModel, t0: float) -> float:
    """Limit scale of n^(1/3) (log ftilde(t0) - log f(t0))."""
    return ftilde_log_scale(*_f_and_deriv(model, t0))


def limit_constant_ftilde(model: SpectralModel, t0: float) -> float:
    """Limit scale of n^(1/3) (ftilde(t0) - f(t0)); equals ``EFFICIENCY_RATIO`` times the fhat one."""
    return ftilde_scale(*_f_and_deriv(model, t0))


@dataclass(frozen=True)
class LimitExperiment:
    model: SpectralModel
    t0: float = 1.0
    n: int = 1000
    reps: int = 500
    estimator: str = "fhat"
    detrend: str = "none"
    arfima_truncation: int | None = None

    def __post_init__(self):
        if self.estimator not in ESTIMATORS:
            raise ParameterError(f"estimator must be one of {sorted(ESTIMATORS)}")
        if self.n < 8 or self.reps < 1:
            raise ParameterError("need n >= 8 and reps >= 1")
        _f_and_deriv(self.model, self.t0)

    @property
    def normalizer(self) -> float:
        if self.estimator == "fhat":
            return limit_constant_fhat(self.model, self.t0)
        return limit_constant_ftilde_log(self.model, self.t0)


def _one_error(exp: LimitExperiment, rng: RngStream):
    x = simulate(exp.model, exp.n, rng, exp.arfima_truncation)
    fit = ESTIMATORS[exp.estimator](periodogram(x, detrend=exp.detrend))
    est = evaluate(fit, exp.t0)
    truth = spectral_density(exp.model, exp.t0)
    if exp.estimator == "fhat":
        return est - truth
    return math.log(est) - math.log(truth)


def normalized_error_samples(exp: LimitExperiment, rng: RngStream, threads=1) -> np.ndarray:
    """n^(1/3) (estimate(t0) - f(t0)) / constant, one value per replication.

    f-tilde errors are taken on the log scale. Replication r uses
    ``rng.child(r)``.
    """
    errs = ordered_map(partial(_one_error, exp), [rng.child(r) for r in range(exp.reps)], threads)
    return exp.n ** (1 / 3) * np.asarray(errs) / exp.normalizer


def ks_distance(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ParameterError("KS distance needs two nonempty samples")
    return float(stats.ks_2samp(a, b).statistic)


def iqr(x) -> float:
    q75, q25 = np.percentile(x, [75, 25])
    return float(q75 - q25)


def limit_summary(errors, chernoff) -> dict:
    """KS distance, median, and IQR(errors) / IQR(chernoff) (ideal 1)."""
    return {
        "ks": ks_distance(errors, chernoff),
        "median": float(np.median(errors)),
        "iqr_ratio": iqr(errors) / iqr(chernoff),
    }
