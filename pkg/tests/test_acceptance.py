"""Exit criteria for the package, one test per criterion.

Run with ``pytest tests/test_acceptance.py -s`` (or plain ``pytest``); a
PASS/FAIL line per criterion is printed in the terminal summary.
"""
import math
import time

import numpy as np
import pytest

from monospec import bench
from monospec.asymptotics import (EFFICIENCY_RATIO, ChernoffSamplerConfig, LimitExperiment,
                                  chernoff_sample, ks_distance, limit_constant_fhat,
                                  limit_constant_ftilde, normalized_error_samples)
from monospec.cli import main
from monospec.errors import HardAssertionError
from monospec.isotonic import (brute_force_projection, concave_majorant, cumulative_diagram,
                               lcm_slopes, minmax_slope, minmax_slopes, pava_antitonic)
from monospec.simgen import AR1, ARFIMA, EXAMPLE1, EXAMPLE2, RngStream, Sum, gen_white_noise
from monospec.spectrum import dft_ordinates, log_periodogram, periodogram

pytestmark = pytest.mark.slow

TABLE_NS = [100, 500, 1000, 5000]
TABLE_REPS = 1000


@pytest.fixture(scope="module")
def tables():
    out = {}
    for ex, model in ((1, EXAMPLE1), (2, EXAMPLE2)):
        try:
            rows = bench.mise_table(model, TABLE_NS, TABLE_REPS, master_seed=20260101 + ex, threads=0)
        except HardAssertionError as exc:
            out[ex] = exc
            continue
        out[ex] = {(r.estimator, r.n): r for r in rows}
    return out


def _table(tables, ex):
    t = tables[ex]
    if isinstance(t, Exception):
        pytest.fail(f"hard assertion during Example {ex} bench: {t}")
    return t


def test_c01_projection_oracle(report):
    g = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        m = int(g.integers(1, 11))
        y = g.normal(size=m) * g.choice([0.01, 1, 100])
        w = g.uniform(0.1, 5, size=m) if g.random() < 0.5 else np.ones(m)
        worst = max(worst, float(np.max(np.abs(pava_antitonic(y, w).levels - brute_force_projection(y, w)))))
    elapsed = time.perf_counter() - start
    report(1, "PAVA == brute-force projection (1e3 inputs, m<=10)", worst <= 1e-10 and elapsed < 10,
           f"max abs diff {worst:.2e} (tol 1e-10), {elapsed:.1f}s (limit 10s)")


def test_c02_three_routes(report):
    g = np.random.default_rng(2)
    sizes = list(range(1, 11)) + [100, 1000]
    start = time.perf_counter()
    worst = 0.0
    for trial in range(200):
        m = sizes[trial % len(sizes)]
        y = g.normal(size=m) + g.choice([0.0, 1.0]) * np.linspace(0, 3, m)
        w = g.uniform(0.2, 3, size=m)
        p = pava_antitonic(y, w).levels
        x, h = cumulative_diagram(y, w)
        lcm = lcm_slopes(concave_majorant(x, h), m)
        mm = minmax_slopes(x, h)
        if m <= 10:
            ref = np.array([minmax_slope(x, h, i) for i in range(1, m + 1)])
            worst = max(worst, float(np.max(np.abs(ref - p))))
        worst = max(worst, float(np.max(np.abs(lcm - p))), float(np.max(np.abs(mm - p))))
    elapsed = time.perf_counter() - start
    report(2, "PAVA == LCM slopes == min-max slopes (200 trials)", worst <= 1e-9 and elapsed < 30,
           f"max abs diff {worst:.2e} (tol 1e-9), {elapsed:.1f}s (limit 30s)")


def test_c03_parseval_and_fft(report):
    g = np.random.default_rng(3)
    worst_parseval = worst_fft = 0.0
    for n in (8, 64, 1000, 4096):
        x = g.standard_normal(n) * 2 + 0.3
        lhs = (2 * math.pi / n) * dft_ordinates(x).sum()
        worst_parseval = max(worst_parseval, abs(lhs / np.mean(x**2) - 1))
        a = periodogram(x, method="fft").ordinates
        b = periodogram(x, method="direct").ordinates
        worst_fft = max(worst_fft, float(np.max(np.abs(a - b) / b)))
    report(3, "Parseval 1e-8 rel; FFT vs direct 1e-10 rel", worst_parseval <= 1e-8 and worst_fft <= 1e-10,
           f"Parseval rel err {worst_parseval:.1e}, FFT/direct rel err {worst_fft:.1e}")


def test_c04_log_periodogram_moments(report):
    start = time.perf_counter()
    vals = []
    for r in range(200):
        x = gen_white_noise(4096, 1.0, RngStream(4, r))
        vals.append(log_periodogram(periodogram(x)).values)
    vals = np.concatenate(vals)
    target = math.log(1 / (2 * math.pi))
    se = vals.std(ddof=1) / math.sqrt(vals.size)
    z = (vals.mean() - target) / se
    var_ratio = vals.var(ddof=1) / (math.pi**2 / 6)
    elapsed = time.perf_counter() - start
    ok = abs(z) <= 3 and abs(var_ratio - 1) <= 0.10 and elapsed < 60
    report(4, "log-periodogram: mean log f within 3 SE, var pi^2/6 within 10%", ok,
           f"z={z:+.2f}, var/(pi^2/6)={var_ratio:.4f}, {elapsed:.1f}s")


def _cells(tables, ex, cells):
    t = _table(tables, ex)
    lines, ok = [], True
    for est, n in cells:
        got, want = t[(est, n)].mise, bench.PUBLISHED_MISE[ex][est][n]
        rel = got / want - 1
        ok &= abs(rel) <= 0.15
        lines.append(f"{est}@{n}: {got:.3f} vs {want} ({rel:+.1%})")
    return ok, "; ".join(lines)


def test_c05_table1(tables, report):
    ok, detail = _cells(tables, 1, [("raw", 1000), ("fhat", 1000), ("ftilde", 1000)])
    report(5, "published MISE, Example 1, n=1000, +-15%", ok, detail)


def test_c06_table2(tables, report):
    ok, detail = _cells(tables, 2, [("raw", 1000), ("fhat", 1000), ("ftilde", 1000), ("fhat", 5000)])
    report(6, "published MISE, Example 2, n=1000 and fhat@5000, +-15%", ok, detail)


def test_c07_ordering_and_contraction(tables, report):
    bad = []
    for ex in (1, 2):
        t = _table(tables, ex)  # hard contraction/monotonicity checks ran for every replication
        for n in TABLE_NS:
            fh, ft, raw = (t[(e, n)].mise for e in ("fhat", "ftilde", "raw"))
            if not fh < ft < raw:
                bad.append(f"ex{ex} n={n}: {fh:.3f}, {ft:.3f}, {raw:.3f}")
    report(7, "MISE fhat < ftilde < raw at every n; per-rep contraction", not bad,
           "all 8 cells ordered, contraction held in 16000 replications" if not bad else "; ".join(bad))


def test_c08_rate(report):
    ns = [500, 1000, 2000, 4000, 8000]
    start = time.perf_counter()
    fh = bench.rate_slope(EXAMPLE1, 1.0, ns, 500, "fhat", master_seed=8, threads=0)
    raw = bench.rate_slope(EXAMPLE1, 1.0, ns, 500, "raw", master_seed=8, threads=0)
    elapsed = time.perf_counter() - start
    ok = -0.41 <= fh <= -0.25 and -0.08 <= raw <= 0.08 and elapsed < 600
    report(8, "rate slope fhat in [-0.41,-0.25], raw in [-0.08,0.08]", ok,
           f"fhat {fh:+.3f}, raw {raw:+.3f}, {elapsed:.0f}s")


def test_c09_limit_distribution(report):
    exp = LimitExperiment(EXAMPLE1, t0=1.0, n=8192, reps=500, estimator="fhat")
    errs = normalized_error_samples(exp, RngStream(9), threads=0)
    zeta = chernoff_sample(ChernoffSamplerConfig(10_000), RngStream(90))
    ks = ks_distance(errs, zeta)
    report(9, "KS(normalized fhat errors, Chernoff) <= 0.15", ks <= 0.15, f"KS = {ks:.4f}")


def test_c10_constant_ratio(report):
    g = np.random.default_rng(10)
    worst = 0.0
    for _ in range(20):
        parts = [AR1(g.uniform(0.05, 0.95), g.uniform(0.2, 3)) for _ in range(g.integers(0, 3))]
        if g.random() < 0.5 or not parts:
            parts.append(ARFIMA(g.uniform(0.01, 0.49), g.uniform(0.2, 3)))
        model = Sum(tuple(parts)) if len(parts) > 1 else parts[0]
        t0 = g.uniform(0.05, math.pi - 0.05)
        ratio = limit_constant_ftilde(model, t0) / limit_constant_fhat(model, t0)
        worst = max(worst, abs(ratio / EFFICIENCY_RATIO - 1))
    report(10, "ftilde/fhat constant = 3^(-1/3) pi (20 pairs)", worst <= 1e-12, f"max rel err {worst:.1e}")


def test_c11_bench_determinism(tmp_path, report):
    args = ["bench", "--example", "1", "--n-list", "100,500", "--reps", "25", "--seed", "77"]
    a, b = tmp_path / "t1.csv", tmp_path / "t4.csv"
    codes = (main(args + ["--threads", "1", "--out", str(a)]), main(args + ["--threads", "4", "--out", str(b)]))
    same = codes == (0, 0) and a.read_bytes() == b.read_bytes()
    report(11, "bench CSV byte-identical across --threads", same, f"exit codes {codes}, identical={same}")
