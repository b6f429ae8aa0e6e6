"""Sample paths and exact spectral densities of the test processes.

Models are small frozen dataclasses: :class:`WhiteNoise`, :class:`AR1`,
:class:`ARFIMA` (the ARFIMA(0, d, 0) process) and :class:`Sum` of
independent components. Every generator takes an :class:`RngStream` so
that a path depends only on ``(master_seed, stream_index, subkey)`` and
never on call order or the number of worker processes.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.signal import fftconvolve, lfilter
from scipy.special import gammaln

from .errors import ParameterError, SingularityError


@dataclass(frozen=True)
class RngStream:
    """Addressable Gaussian innovation stream.

    ``generator()`` always returns a fresh ``numpy.random.Generator`` seeded
    from ``SeedSequence(master_seed, spawn_key=(stream_index, *subkey))``,
    so two equal streams produce identical draws wherever they are used.
    """

    master_seed: int
    stream_index: int = 0
    subkey: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2**64:
            raise ParameterError("master_seed must be a 64-bit unsigned integer")
        if int(self.stream_index) < 0:
            raise ParameterError("stream_index must be nonnegative")

    def child(self, *keys: int) -> "RngStream":
        return RngStream(self.master_seed, self.stream_index, self.subkey + tuple(int(k) for k in keys))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.master_seed), spawn_key=(int(self.stream_index),) + self.subkey)
        return np.random.Generator(np.random.PCG64(ss))


# --------------------------------------------------------------------- models

@dataclass(frozen=True)
class WhiteNoise:
    sigma: float = 1.0

    def __post_init__(self):
        _check_sigma(self.sigma)


@dataclass(frozen=True)
class AR1:
    a: float
    sigma: float = 1.0

    def __post_init__(self):
        _check_sigma(self.sigma)
        if not abs(self.a) < 1:
            raise ParameterError(f"AR(1) coefficient must satisfy |a| < 1, got {self.a}")


@dataclass(frozen=True)
class ARFIMA:
    """ARFIMA(0, d, 0) with innovation standard deviation ``sigma``."""

    d: float
    sigma: float = 1.0

    def __post_init__(self):
        _check_sigma(self.sigma)
        if not abs(self.d) < 0.5:
            raise ParameterError(f"memory parameter must satisfy |d| < 1/2, got {self.d}")


@dataclass(frozen=True)
class Sum:
    components: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ParameterError("Sum model needs at least one component")


SpectralModel = Union[WhiteNoise, AR1, ARFIMA, Sum]


def _check_sigma(sigma):
    if not (math.isfinite(sigma) and sigma > 0):
        raise ParameterError(f"sigma must be positive and finite, got {sigma}")


EXAMPLE1 = Sum((AR1(0.5), AR1(0.7), AR1(0.9)))
EXAMPLE2 = Sum((ARFIMA(0.2), AR1(0.5)))
ALIASES = {"example1": EXAMPLE1, "example2": EXAMPLE2}


def model_from_dict(doc) -> SpectralModel:
    """Build a model from its JSON document form."""
    if isinstance(doc, str):
        if doc in ALIASES:
            return ALIASES[doc]
        raise ParameterError(f"unknown model alias {doc!r}")
    if not isinstance(doc, dict) or "type" not in doc:
        raise ParameterError("model document must be an object with a 'type' field")
    kind = str(doc["type"]).lower()
    try:
        if kind in ("whitenoise", "white_noise", "wn"):
            return WhiteNoise(float(doc.get("sigma", 1.0)))
        if kind == "ar1":
            return AR1(float(doc["a"]), float(doc.get("sigma", 1.0)))
        if kind in ("arfima", "arfima0d0"):
            return ARFIMA(float(doc["d"]), float(doc.get("sigma", 1.0)))
        if kind == "sum":
            return Sum(tuple(model_from_dict(c) for c in doc["components"]))
    except (KeyError, TypeError) as exc:
        raise ParameterError(f"malformed {kind} model: {exc}") from exc
    raise ParameterError(f"unknown model type {doc['type']!r}")


def model_to_dict(model: SpectralModel) -> dict:
    if isinstance(model, WhiteNoise):
        return {"type": "whitenoise", "sigma": model.sigma}
    if isinstance(model, AR1):
        return {"type": "ar1", "a": model.a, "sigma": model.sigma}
    if isinstance(model, ARFIMA):
        return {"type": "arfima", "d": model.d, "sigma": model.sigma}
    return {"type": "sum", "components": [model_to_dict(c) for c in model.components]}


def parse_model(text: str) -> SpectralModel:
    """Parse a model from an alias (``example1``/``example2``) or JSON text."""
    text = text.strip()
    if text in ALIASES:
        return ALIASES[text]
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"invalid model JSON: {exc}") from exc
    return model_from_dict(doc)


def is_decreasing(model: SpectralModel) -> bool:
    """True when the model's spectral density is strictly decreasing on (0, pi]."""
    if isinstance(model, WhiteNoise):
        return False
    if isinstance(model, AR1):
        return model.a > 0
    if isinstance(model, ARFIMA):
        return model.d > 0
    flat_or_down = all(isinstance(c, WhiteNoise) or is_decreasing(c) for c in model.components)
    return flat_or_down and any(is_decreasing(c) for c in model.components)


def process_variance(model: SpectralModel) -> float:
    if isinstance(model, WhiteNoise):
        return model.sigma**2
    if isinstance(model, AR1):
        return model.sigma**2 / (1 - model.a**2)
    if isinstance(model, ARFIMA):
        d = model.d
        return model.sigma**2 * math.exp(gammaln(1 - 2 * d) - 2 * gammaln(1 - d))
    return sum(process_variance(c) for c in model.components)


# ----------------------------------------------------------------- generators

def _check_n(n):
    if int(n) != n or n < 2:
        raise ParameterError(f"series length must be an integer >= 2, got {n}")
    return int(n)


def gen_white_noise(n, sigma, rng: RngStream) -> np.ndarray:
    n = _check_n(n)
    _check_sigma(sigma)
    return sigma * rng.generator().standard_normal(n)


def gen_ar1(n, a, sigma, rng: RngStream) -> np.ndarray:
    """Stationary AR(1) path X_1..X_n.

    The n innovations are drawn first and the stationary initial value
    X_0 ~ N(0, sigma^2 / (1 - a^2)) last, so ``a = 0`` reproduces
    :func:`gen_white_noise` on the same stream.
    """
    n = _check_n(n)
    AR1(a, sigma)
    g = rng.generator()
    eps = g.standard_normal(n)
    x0 = sigma * g.standard_normal() / math.sqrt(1 - a * a)
    y, _ = lfilter([sigma], [1.0, -a], eps, zi=[a * x0])
    return y


def arfima_ma_coefficients(d, M) -> np.ndarray:
    """MA(infinity) weights of (1 - B)^(-d), truncated after lag M."""
    if not abs(d) < 0.5:
        raise ParameterError(f"memory parameter must satisfy |d| < 1/2, got {d}")
    if int(M) != M or M < 1:
        raise ParameterError(f"truncation M must be a positive integer, got {M}")
    j = np.arange(1, int(M) + 1, dtype=float)
    return np.concatenate(([1.0], np.cumprod((j - 1 + d) / j)))


def default_truncation(n: int) -> int:
    return max(10 * int(n), 10_000)


def gen_arfima(n, d, sigma, rng: RngStream, M=None) -> np.ndarray:
    """Truncated MA(infinity) simulation of ARFIMA(0, d, 0).

    X_k = sigma * sum_{j=0}^{M} psi_j eps_{k-j}. The in-sample innovations
    eps_1..eps_n come first on the stream, the M pre-sample ones after.
    """
    n = _check_n(n)
    _check_sigma(sigma)
    M = default_truncation(n) if M is None else M
    if M < n:
        raise ParameterError(f"ARFIMA truncation M={M} is shorter than n={n}")
    psi = arfima_ma_coefficients(d, M)
    g = rng.generator()
    inner = g.standard_normal(n)
    pre = g.standard_normal(int(M))
    u = np.concatenate((pre, inner))
    return sigma * fftconvolve(u, psi, mode="valid")


def gen_sum(model: Sum, n, rng: RngStream, arfima_truncation=None) -> np.ndarray:
    """Sum of independent component paths; component i uses ``rng.child(i)``."""
    if not isinstance(model, Sum):
        raise ParameterError("gen_sum expects a Sum model")
    n = _check_n(n)
    out = np.zeros(n)
    for i, comp in enumerate(model.components):
        out += simulate(comp, n, rng.child(i), arfima_truncation)
    return out


def simulate(model: SpectralModel, n, rng: RngStream, arfima_truncation=None) -> np.ndarray:
    if isinstance(model, WhiteNoise):
        return gen_white_noise(n, model.sigma, rng)
    if isinstance(model, AR1):
        return gen_ar1(n, model.a, model.sigma, rng)
    if isinstance(model, ARFIMA):
        return gen_arfima(n, model.d, model.sigma, rng, arfima_truncation)
    if isinstance(model, Sum):
        return gen_sum(model, n, rng, arfima_truncation)
    raise ParameterError(f"not a spectral model: {model!r}")


# ---------------------------------------------------------- spectral density

def spectral_density(model: SpectralModel, lam):
    """Exact spectral density at frequency ``lam`` (scalar or array) in [0, pi]."""
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(~np.isfinite(lam_arr)) or np.any(lam_arr < 0) or np.any(lam_arr > np.pi):
        raise ParameterError("frequency must lie in (0, pi]")
    out = _density(model, lam_arr)
    return float(out) if out.ndim == 0 else out


def _density(model, lam):
    if isinstance(model, WhiteNoise):
        return np.full_like(lam, model.sigma**2 / (2 * np.pi))
    if isinstance(model, AR1):
        a = model.a
        return model.sigma**2 / (2 * np.pi * (1 - 2 * a * np.cos(lam) + a * a))
    if isinstance(model, ARFIMA):
        if model.d > 0 and np.any(lam == 0):
            raise SingularityError("ARFIMA spectral density diverges at frequency 0")
        with np.errstate(divide="ignore"):
            return model.sigma**2 / (2 * np.pi) * (2 * np.sin(lam / 2)) ** (-2 * model.d)
    return sum(_density(c, lam) for c in model.components)


def spectral_density_deriv(model: SpectralModel, lam):
    """Exact derivative of :func:`spectral_density` on the open interval (0, pi)."""
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(~np.isfinite(lam_arr)) or np.any(lam_arr <= 0) or np.any(lam_arr >= np.pi):
        raise ParameterError("derivative is defined for frequencies in the open interval (0, pi)")
    out = _deriv(model, lam_arr)
    return float(out) if out.ndim == 0 else out


def _deriv(model, lam):
    if isinstance(model, WhiteNoise):
        return np.zeros_like(lam)
    if isinstance(model, AR1):
        a = model.a
        return -model.sigma**2 * a * np.sin(lam) / (np.pi * (1 - 2 * a * np.cos(lam) + a * a) ** 2)
    if isinstance(model, ARFIMA):
        return -model.d / np.tan(lam / 2) * _density(model, lam)
    return sum(_deriv(c, lam) for c in model.components)
