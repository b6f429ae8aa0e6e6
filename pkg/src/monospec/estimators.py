"""Order-restricted spectral density estimators built on the periodogram.

``estimate_fhat``
    antitonic L2 projection of the periodogram ordinates;
``estimate_ftilde``
    exp of the antitonic projection of ``log I_n + gamma``;
``estimate_Fhat``
    least concave majorant of the empirical spectral distribution, whose
    slopes reproduce ``estimate_fhat``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError
from .isotonic import ConcaveMajorant, concave_majorant, lcm_slopes, pava_antitonic
from .spectrum import Periodogram, log_periodogram, step_index


@dataclass(frozen=True)
class MonotoneStepFit:
    """Non-increasing step function on (0, pi] indexed by the Fourier grid."""

    n: int
    freqs: np.ndarray
    levels: np.ndarray

    def __call__(self, t):
        return evaluate(self, t)


@dataclass(frozen=True)
class ConcaveFit:
    """Concave piecewise-linear estimate of the spectral distribution function."""

    knots: np.ndarray
    values: np.ndarray
    slopes: np.ndarray
    grid_slopes: np.ndarray  # slope over each Fourier cell k = 1..k_max
    majorant: ConcaveMajorant

    def __call__(self, t):
        return self.majorant(t)


def estimate_fhat(pg: Periodogram) -> MonotoneStepFit:
    fit = pava_antitonic(pg.ordinates)
    return MonotoneStepFit(pg.n, pg.freqs, fit.levels)


def estimate_ftilde(pg: Periodogram) -> MonotoneStepFit:
    """Exponentiated antitonic fit of the gamma-centred log-periodogram."""
    logpg = log_periodogram(pg)
    levels = np.exp(pava_antitonic(logpg.values).levels)
    if np.any(levels <= 0):
        raise DegenerateInputError("log-scale fit underflowed to zero")
    return MonotoneStepFit(pg.n, pg.freqs, levels)


def empirical_distribution(pg: Periodogram) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative periodogram diagram F_n at 0, lambda_1, ..., lambda_kmax.

    Cell k covers (lambda_{k-1}, lambda_k] with width 2 pi / n, so F_n is the
    integral of the step periodogram.
    """
    width = 2 * np.pi / pg.n
    x = np.concatenate(([0.0], pg.freqs))
    F = np.concatenate(([0.0], np.cumsum(pg.ordinates) * width))
    return x, F


def estimate_Fhat(pg: Periodogram) -> ConcaveFit:
    x, F = empirical_distribution(pg)
    cm = concave_majorant(x, F)
    return ConcaveFit(cm.knots_x, cm.knots_h, cm.slopes, lcm_slopes(cm, pg.k_max), cm)


def evaluate(fit: MonotoneStepFit, t):
    """Level of the grid cell containing ``t``; constant beyond the grid."""
    if np.ndim(t) == 0:
        return float(fit.levels[step_index(fit.n, len(fit.levels), float(t)) - 1])
    return np.array([evaluate(fit, float(s)) for s in np.asarray(t).ravel()]).reshape(np.shape(t))


ESTIMATORS = {"fhat": estimate_fhat, "ftilde": estimate_ftilde}
