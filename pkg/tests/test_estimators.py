import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monospec.errors import DegenerateInputError, ParameterError
from monospec.estimators import (empirical_distribution, estimate_Fhat, estimate_fhat,
                                 estimate_ftilde, evaluate)
from monospec.isotonic import brute_force_projection
from monospec.simgen import EXAMPLE1, EXAMPLE2, RngStream, simulate
from monospec.spectrum import EULER_GAMMA, Periodogram, fourier_frequencies, periodogram


def make_pg(ords):
    ords = np.asarray(ords, dtype=float)
    n = 2 * len(ords) + 1
    return Periodogram(n, fourier_frequencies(n), ords)


positive_ords = st.lists(st.floats(1e-6, 1e3), min_size=1, max_size=40)


class TestFhat:
    def test_feasible(self):
        ords = [4.0, 3.0, 3.0, 0.5]
        assert np.array_equal(estimate_fhat(make_pg(ords)).levels, ords)

    def test_constant(self):
        assert np.array_equal(estimate_fhat(make_pg([1.7] * 9)).levels, [1.7] * 9)

    def test_brute_force_small(self):
        ords = [0.2, 1.0, 0.4, 0.9, 0.1, 0.3]
        assert np.allclose(estimate_fhat(make_pg(ords)).levels, brute_force_projection(ords), atol=1e-12)

    @given(positive_ords, st.floats(0.01, 100))
    def test_scale_equivariance(self, ords, c):
        a = estimate_fhat(make_pg(np.array(ords) * c)).levels
        assert np.allclose(a, c * estimate_fhat(make_pg(ords)).levels, rtol=1e-12)

    def test_simulated_monotone(self):
        pg = periodogram(simulate(EXAMPLE1, 512, RngStream(1)))
        assert np.all(np.diff(estimate_fhat(pg).levels) <= 0)


class TestFtilde:
    def test_constant(self):
        lv = estimate_ftilde(make_pg([2.0] * 5)).levels
        assert np.allclose(lv, 2.0 * math.exp(EULER_GAMMA), rtol=1e-14)

    @given(positive_ords)
    @settings(max_examples=200)
    def test_positive_monotone(self, ords):
        lv = estimate_ftilde(make_pg(ords)).levels
        assert np.all(lv > 0) and np.all(np.diff(lv) <= 0)

    @given(positive_ords, st.floats(0.01, 100))
    def test_scale_equivariance(self, ords, c):
        a = estimate_ftilde(make_pg(np.array(ords) * c)).levels
        assert np.allclose(a, c * estimate_ftilde(make_pg(ords)).levels, rtol=1e-12)

    def test_geometric_pooling(self):
        # violating pair pools to the geometric mean, then shifts by e^gamma
        lv = estimate_ftilde(make_pg([1.0, 4.0])).levels
        assert np.allclose(lv, 2.0 * math.exp(EULER_GAMMA))

    def test_zero_ordinate(self):
        with pytest.raises(DegenerateInputError):
            estimate_ftilde(make_pg([1.0, 0.0, 2.0]))


class TestFhatDistribution:
    def test_anchor_and_endpoint(self):
        pg = periodogram(simulate(EXAMPLE2, 300, RngStream(2)))
        fit = estimate_Fhat(pg)
        x, F = empirical_distribution(pg)
        assert fit(0.0) == 0.0
        assert fit(x[-1]) == pytest.approx(F[-1], rel=1e-14)
        assert np.all(fit.slopes >= 0)
        assert np.all(np.diff(fit.slopes) < 0)

    def test_distribution_is_integral_of_step(self):
        pg = make_pg([3.0, 1.0, 2.0])
        x, F = empirical_distribution(pg)
        w = 2 * math.pi / pg.n
        assert np.allclose(F, [0, 3 * w, 4 * w, 6 * w])

    @pytest.mark.parametrize("seed", range(5))
    def test_slopes_equal_fhat(self, seed):
        pg = periodogram(simulate(EXAMPLE1, 1000 + seed, RngStream(seed)))
        lv = estimate_fhat(pg).levels
        assert np.allclose(estimate_Fhat(pg).grid_slopes, lv, rtol=0, atol=1e-9 * lv.max())

    @given(positive_ords)
    def test_slopes_equal_fhat_random(self, ords):
        pg = make_pg(ords)
        assert np.allclose(estimate_Fhat(pg).grid_slopes, estimate_fhat(pg).levels, rtol=1e-9, atol=1e-9)


class TestEvaluate:
    fit = estimate_fhat(make_pg([5.0, 4.0, 3.0, 2.0]))

    def test_grid(self):
        for k, lam in enumerate(self.fit.freqs):
            assert evaluate(self.fit, lam) == self.fit.levels[k]

    def test_clamps(self):
        assert evaluate(self.fit, 1e-6) == 5.0
        assert evaluate(self.fit, math.pi) == 2.0

    def test_vectorized(self):
        t = np.array([[0.1, 1.0], [2.0, 3.0]])
        out = evaluate(self.fit, t)
        assert out.shape == (2, 2) and out[0, 0] == 5.0

    @pytest.mark.parametrize("t", [0.0, 4.0])
    def test_domain(self, t):
        with pytest.raises(ParameterError):
            evaluate(self.fit, t)
