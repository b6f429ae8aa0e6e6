"""Periodogram on the Fourier grid and the gamma-centred log-periodogram."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .errors import DegenerateInputError, ParameterError

EULER_GAMMA = 0.57721566490153286

DETREND_MODES = ("none", "mean", "linear")


@dataclass(frozen=True)
class Periodogram:
    """Ordinates I_n(lambda_k) for k = 1..floor((n-1)/2)."""

    n: int
    freqs: np.ndarray
    ordinates: np.ndarray

    @property
    def k_max(self) -> int:
        return len(self.freqs)


@dataclass(frozen=True)
class LogPeriodogram:
    n: int
    freqs: np.ndarray
    values: np.ndarray

    @property
    def k_max(self) -> int:
        return len(self.freqs)


def fourier_frequencies(n) -> np.ndarray:
    if int(n) != n or n < 3:
        raise ParameterError(f"need n >= 3 for a nonempty Fourier grid, got {n}")
    n = int(n)
    return 2 * np.pi * np.arange(1, (n - 1) // 2 + 1) / n


def _prepare(x, detrend):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ParameterError("time series must be one-dimensional")
    if not np.all(np.isfinite(x)):
        raise ParameterError("time series contains non-finite values")
    if detrend not in DETREND_MODES:
        raise ParameterError(f"detrend must be one of {DETREND_MODES}, got {detrend!r}")
    if detrend == "mean":
        x = x - x.mean()
    elif detrend == "linear":
        x = signal.detrend(x, type="linear")
    return x


def dft_ordinates(x, method="fft") -> np.ndarray:
    """(2 pi n)^-1 |sum_j x_j exp(-i j lambda_k)|^2 for every k = 0..n-1."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if method == "fft":
        # the phase factor exp(-i lambda_k) from 1-based indexing has modulus one
        return np.abs(np.fft.fft(x)) ** 2 / (2 * np.pi * n)
    if method == "direct":
        return _direct(x, np.arange(n))
    raise ParameterError(f"unknown periodogram method {method!r}")


def _direct(x, ks, chunk=256):
    n = len(x)
    j = np.arange(1, n + 1)
    out = np.empty(len(ks))
    for start in range(0, len(ks), chunk):
        lam = 2 * np.pi * ks[start:start + chunk] / n
        phase = np.outer(lam, j)
        re = np.cos(phase) @ x
        im = np.sin(phase) @ x
        out[start:start + chunk] = (re * re + im * im) / (2 * np.pi * n)
    return out


def periodogram(x, detrend="none", method="fft") -> Periodogram:
    """Periodogram of ``x`` on the Fourier frequencies in (0, pi).

    Parameters
    ----------
    x : array_like
        The observed series X_1..X_n, n >= 3.
    detrend : {"none", "mean", "linear"}
        Optional preprocessing. Mean removal leaves ordinates with k >= 1
        unchanged; linear detrending does not.
    method : {"fft", "direct"}
        FFT or O(n^2) direct summation.
    """
    x = _prepare(x, detrend)
    n = len(x)
    freqs = fourier_frequencies(n)
    ks = np.arange(1, len(freqs) + 1)
    if method == "fft":
        ords = dft_ordinates(x)[ks]
    elif method == "direct":
        ords = _direct(x, ks)
    else:
        raise ParameterError(f"unknown periodogram method {method!r}")
    return Periodogram(n, freqs, ords)


def log_periodogram(pg: Periodogram) -> LogPeriodogram:
    if np.any(~(pg.ordinates > 0)):
        raise DegenerateInputError("periodogram has a zero ordinate; the log-periodogram is undefined")
    return LogPeriodogram(pg.n, pg.freqs, np.log(pg.ordinates) + EULER_GAMMA)


def step_index(n: int, k_max: int, t: float) -> int:
    """1-based grid index of the step cell containing ``t`` in (0, pi]."""
    if not (0 < t <= math.pi):
        raise ParameterError(f"t must lie in (0, pi], got {t}")
    k = math.floor(n * t / (2 * math.pi))
    # exact grid points can land one cell low through rounding of t itself
    if k < k_max and math.isclose(n * t / (2 * math.pi), k + 1, rel_tol=1e-12):
        k += 1
    return min(max(k, 1), k_max)


def step_periodogram_at(pg: Periodogram, t: float) -> float:
    """Step-function periodogram I_n(2 pi [n t / 2 pi] / n), clamped to the grid."""
    return float(pg.ordinates[step_index(pg.n, pg.k_max, t) - 1])
