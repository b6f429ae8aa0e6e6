"""Antitonic least-squares regression and its concave-majorant characterizations.

Three independent routes compute the same non-increasing fit:

* :func:`pava_antitonic` -- pool adjacent violators on the data;
* :func:`lcm_slopes` -- left derivatives of the least concave majorant of
  the cumulative sum diagram;
* :func:`minmax_slope` / :func:`minmax_slopes` -- the min-max chord formula
  ``min_{u<t} max_{v>=t} (h(v) - h(u)) / (v - u)``.

:func:`brute_force_projection` enumerates all block partitions and serves
as a test oracle for small inputs.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import ParameterError, SizeError


@dataclass(frozen=True)
class AntitonicFit:
    """Non-increasing fit. ``blocks`` holds half-open 0-based index runs."""

    levels: np.ndarray
    blocks: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ConcaveMajorant:
    """Piecewise-linear least concave majorant of a cumulative diagram."""

    knots_x: np.ndarray
    knots_h: np.ndarray
    abscissae: np.ndarray  # every diagram abscissa, origin included

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.knots_h) / np.diff(self.knots_x)

    def __call__(self, x):
        return np.interp(x, self.knots_x, self.knots_h)


def _validate(y, w):
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or len(y) < 1:
        raise ParameterError("need a nonempty one-dimensional response")
    if not np.all(np.isfinite(y)):
        raise ParameterError("response contains non-finite values")
    if w is None:
        w = np.ones_like(y)
    else:
        w = np.asarray(w, dtype=float)
        if w.shape != y.shape:
            raise ParameterError("weights and response differ in length")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ParameterError("weights must be positive and finite")
    return y, w


def pava_antitonic(y, w=None) -> AntitonicFit:
    """Weighted least-squares projection of ``y`` onto non-increasing sequences.

    Blocks are merged while the newer block's mean is >= the older one, so
    the returned block means are strictly decreasing (canonical blocks).
    """
    y, w = _validate(y, w)
    means: list[float] = []
    weights: list[float] = []
    starts: list[int] = []
    for i, (yi, wi) in enumerate(zip(y.tolist(), w.tolist())):
        mean, weight, start = yi, wi, i
        while means and means[-1] <= mean:
            pm, pw = means.pop(), weights.pop()
            start = starts.pop()
            total = pw + weight
            # running weighted mean
            mean = pm + (mean - pm) * (weight / total)
            weight = total
        means.append(mean)
        weights.append(weight)
        starts.append(start)
    stops = starts[1:] + [len(y)]
    levels = np.repeat(means, np.diff(starts + [len(y)]))
    return AntitonicFit(levels, tuple(zip(starts, stops)))


def cumulative_diagram(y, w=None) -> tuple[np.ndarray, np.ndarray]:
    """Points (sum_{i<=j} w_i, sum_{i<=j} w_i y_i), j = 0..m, origin first."""
    y, w = _validate(y, w)
    x = np.concatenate(([0.0], np.cumsum(w)))
    h = np.concatenate(([0.0], np.cumsum(w * y)))
    return x, h


def concave_majorant(x, h) -> ConcaveMajorant:
    """Upper convex hull of the points (x_j, h_j), scanned left to right."""
    x = np.asarray(x, dtype=float)
    h = np.asarray(h, dtype=float)
    if x.shape != h.shape or x.ndim != 1 or len(x) < 2:
        raise ParameterError("need at least two diagram points")
    if np.any(np.diff(x) <= 0):
        raise ParameterError("diagram abscissae must be strictly increasing")
    hull: list[int] = []
    xs, hs = x.tolist(), h.tolist()
    for j in range(len(xs)):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (xs[a] - xs[o]) * (hs[j] - hs[o]) - (hs[a] - hs[o]) * (xs[j] - xs[o])
            if cross >= 0:  # a is on or below chord o-j
                hull.pop()
            else:
                break
        hull.append(j)
    idx = np.array(hull)
    return ConcaveMajorant(x[idx], h[idx], x)


def lcm_slopes(cm: ConcaveMajorant, m: int) -> np.ndarray:
    """Majorant slope over each of the m diagram steps (left derivative at knots)."""
    right = cm.abscissae[1:m + 1]
    if len(right) != m:
        raise ParameterError("majorant was built from fewer than m steps")
    seg = np.searchsorted(cm.knots_x, right, side="left") - 1
    return cm.slopes[seg]


def minmax_slope(x, h, i: int) -> float:
    """Min-max chord slope for step ``i`` (1-based); O(m^2) reference."""
    m = len(x) - 1
    if not 1 <= i <= m:
        raise ParameterError(f"step index must be in 1..{m}, got {i}")
    best = np.inf
    for u in range(i):
        worst = -np.inf
        for v in range(i, m + 1):
            worst = max(worst, (h[v] - h[u]) / (x[v] - x[u]))
        best = min(best, worst)
    return float(best)


def minmax_slopes(x, h) -> np.ndarray:
    """Vectorized :func:`minmax_slope` for every step i = 1..m."""
    x = np.asarray(x, dtype=float)
    h = np.asarray(h, dtype=float)
    m = len(x) - 1
    u = np.arange(m + 1)[:, None]
    v = np.arange(m + 1)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        chord = (h[None, :] - h[:, None]) / (x[None, :] - x[:, None])
    chord = np.where(v > u, chord, -np.inf)
    # suffix max over v >= i, for each u
    tail_max = np.maximum.accumulate(chord[:, ::-1], axis=1)[:, ::-1]
    tail_max = np.where(u < v, tail_max, np.inf)
    return tail_max.min(axis=0)[1:]


def brute_force_projection(y, w=None) -> np.ndarray:
    """Exhaustive projection over all 2^(m-1) consecutive-block partitions."""
    y, w = _validate(y, w)
    m = len(y)
    if m > 12:
        raise SizeError(f"brute force limited to m <= 12, got {m}")
    best, best_cost = None, np.inf
    for cuts in product((False, True), repeat=m - 1):
        bounds = [0] + [k + 1 for k, c in enumerate(cuts) if c] + [m]
        z = np.empty(m)
        for a, b in zip(bounds[:-1], bounds[1:]):
            z[a:b] = np.dot(w[a:b], y[a:b]) / w[a:b].sum()
        if np.any(np.diff(z) > 1e-12 * (1 + np.abs(z[:-1]))):
            continue
        cost = float(np.dot(w, (y - z) ** 2))
        if cost < best_cost:
            best, best_cost = z, cost
    return best
