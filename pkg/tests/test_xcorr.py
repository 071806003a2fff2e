import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrxcorr.analytic import asymptotic_xcorr_theta0, bracket
from lrxcorr.moving_average import WindowSpec
from lrxcorr.series import Series
from lrxcorr.xcorr import (
    arithmetic_windows,
    auto_scaling_curve,
    collapse_transform,
    cross_correlation,
    cross_correlation_fft,
    ensemble_cross_correlation,
    geometric_windows,
    lag_grid,
)


def brownian(rng, n):
    return Series(np.concatenate(([0.0], np.cumsum(rng.standard_normal(n - 1)))))


def brute_force(x, y, w, tau):
    """Literal double loop over t with explicit windows; no prefix sums, no slicing tricks."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    ks = range(-w.forward, w.backward + 1)
    acc, cnt = 0.0, 0
    for t in range(len(x)):
        u = t + tau
        idx_x = [t - k for k in ks]
        idx_y = [u - k for k in ks]
        if min(idx_x) < 0 or max(idx_x) >= len(x) or min(idx_y) < 0 or max(idx_y) >= len(y):
            continue
        dx = x[t] - sum(x[i] for i in idx_x) / w.size
        dy = y[u] - sum(y[i] for i in idx_y) / w.size
        acc += dx * dy
        cnt += 1
    return acc / cnt, cnt


def brownian_expectation(w, tau):
    """Exact E[C_xx(tau; n)] for a unit-step random walk.

    Residual weights sum to zero, so only the -|a - b| / 2 part of
    min(a, b) survives.
    """
    offs = np.arange(-w.backward, w.forward + 1)
    pos = np.concatenate(([0], offs))
    wts = np.concatenate(([1.0], -np.ones(offs.size) / w.size))
    d = np.abs(tau + pos[None, :] - pos[:, None])
    return -0.5 * wts @ d @ wts


class TestDirect:
    @pytest.mark.parametrize("w", [WindowSpec(3), WindowSpec(4, 0.5), WindowSpec(5, 1.0)])
    @pytest.mark.parametrize("tau", [-6, 0, 2, 7])
    def test_matches_brute_force(self, w, tau):
        rng = np.random.default_rng(5)
        x = rng.standard_normal(40).cumsum()
        y = rng.standard_normal(40).cumsum()
        res = cross_correlation(Series(x), Series(y), w, [tau], min_count=1)
        v, c = brute_force(x, y, w, tau)
        assert res.counts[0, 0] == c
        assert res.values[0, 0] == pytest.approx(v, rel=1e-12, abs=1e-14)

    def test_constant_x_gives_zero(self):
        rng = np.random.default_rng(0)
        res = cross_correlation(Series(np.full(500, 3.0)), brownian(rng, 500),
                                arithmetic_windows(10, 50, 20), lag_grid(-20, 20), min_count=1)
        assert np.all(res.values == 0.0)

    def test_auto_curve_is_tau0_diagonal(self):
        x = brownian(np.random.default_rng(1), 3000)
        ws = arithmetic_windows(10, 60, 10)
        curve = auto_scaling_curve(x, ws)
        res = cross_correlation(x, x, ws, [0])
        assert [v for _, v in curve] == res.values[:, 0].tolist()
        assert all(v >= 0 for _, v in curve)

    def test_constant_auto_curve(self):
        assert all(v == 0.0 for _, v in auto_scaling_curve(Series([1.0] * 400), arithmetic_windows(5, 25, 10)))

    def test_min_count_marks_absent(self):
        x = brownian(np.random.default_rng(2), 150)
        res = cross_correlation(x, x, WindowSpec(20), [0, 60], min_count=100)
        assert res.counts[0].tolist() == [130, 70]
        assert np.isfinite(res.values[0, 0]) and np.isnan(res.values[0, 1])
        assert [r[1] for r in res.rows()] == [0]

    def test_empty_range_raises(self):
        x = brownian(np.random.default_rng(3), 50)
        with pytest.raises(ValueError, match="empty valid range"):
            cross_correlation(x, x, WindowSpec(10), [45])
        with pytest.raises(ValueError, match="shorter than window"):
            cross_correlation(x, x, WindowSpec(60), [0])

    def test_lag_validation(self):
        x = brownian(np.random.default_rng(3), 50)
        with pytest.raises(ValueError, match="increasing"):
            cross_correlation(x, x, WindowSpec(3), [2, 1])
        with pytest.raises(ValueError, match="integers"):
            cross_correlation(x, x, WindowSpec(3), [0.5])

    def test_origin_alignment(self):
        rng = np.random.default_rng(4)
        full = rng.standard_normal(800).cumsum()
        x = Series(full)
        y = Series(full[100:], origin_index=100)
        w = WindowSpec(20)
        # for tau <= 0 every jointly valid t lies inside y's block as well
        res = cross_correlation(x, y, w, [-5, 0])
        for j, tau in enumerate([-5, 0]):
            ref = cross_correlation(Series(full[100:]), Series(full[100:]), w, [tau])
            assert res.values[0, j] == pytest.approx(ref.values[0, 0], rel=1e-12)
            assert res.counts[0, j] == ref.counts[0, 0]

    def test_threads_do_not_change_output(self, monkeypatch):
        rng = np.random.default_rng(6)
        x, y = brownian(rng, 2000), brownian(rng, 2000)
        ws = arithmetic_windows(10, 90, 20)
        a = cross_correlation(x, y, ws, lag_grid(-30, 30, 5), workers=1)
        monkeypatch.setenv("LRXCORR_THREADS", "4")
        b = cross_correlation(x, y, ws, lag_grid(-30, 30, 5))
        assert np.array_equal(a.values, b.values)


class TestInvariants:
    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(-5, 5).filter(lambda a: abs(a) > 1e-3),
           st.integers(2, 15), st.sampled_from([0.0, 0.5, 1.0]))
    def test_bilinearity(self, seed, a, n, theta):
        rng = np.random.default_rng(seed)
        x, y = brownian(rng, 300), brownian(rng, 300)
        w, lags = WindowSpec(n, theta), lag_grid(-10, 10, 2)
        lhs = cross_correlation(Series(a * x.values), y, w, lags, min_count=1).values
        rhs = a * cross_correlation(x, y, w, lags, min_count=1).values
        np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-12 * np.abs(rhs).max())

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 15), st.sampled_from([0.0, 0.3, 0.5, 1.0]))
    def test_swap_symmetry(self, seed, n, theta):
        rng = np.random.default_rng(seed)
        x, y = brownian(rng, 300), brownian(rng, 300)
        w, lags = WindowSpec(n, theta), lag_grid(-12, 12, 3)
        xy = cross_correlation(x, y, w, lags, min_count=1)
        yx = cross_correlation(y, x, w, -lags[::-1], min_count=1)
        np.testing.assert_array_equal(xy.counts[0], yx.counts[0][::-1])
        np.testing.assert_allclose(xy.values[0], yx.values[0][::-1], rtol=1e-12, atol=1e-14)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 30))
    def test_auto_nonnegative(self, seed, n):
        x = Series(np.random.default_rng(seed).standard_normal(200) * 10)
        assert cross_correlation(x, x, WindowSpec(n), [0], min_count=1).values[0, 0] >= 0


class TestFFT:
    def test_matches_direct_large(self):
        rng = np.random.default_rng(10)
        x, y = brownian(rng, 4096), brownian(rng, 4096)
        w = WindowSpec(64)
        direct = cross_correlation(x, y, w, lag_grid(-512, 512))
        fast = cross_correlation_fft(x, y, w, max_lag=512)
        np.testing.assert_array_equal(direct.counts, fast.counts)
        np.testing.assert_allclose(fast.values, direct.values, rtol=1e-9,
                                   atol=1e-9 * np.nanmax(np.abs(direct.values)))

    def test_constant(self):
        rng = np.random.default_rng(11)
        res = cross_correlation_fft(Series(np.full(300, 2.0)), brownian(rng, 300), WindowSpec(8), max_lag=20)
        np.testing.assert_allclose(res.values, 0.0, atol=1e-12)

    def test_single_lag(self):
        rng = np.random.default_rng(12)
        x, y = brownian(rng, 500), brownian(rng, 500)
        w = WindowSpec(9, 0.5)
        a = cross_correlation(x, y, w, [17])
        b = cross_correlation_fft(x, y, w, lags=[17])
        assert b.values[0, 0] == pytest.approx(a.values[0, 0], rel=1e-9)

    def test_unequal_lengths_and_origins(self):
        rng = np.random.default_rng(13)
        x = brownian(rng, 700)
        y = Series(rng.standard_normal(500).cumsum(), origin_index=150)
        w = WindowSpec(12, 0.25)
        lags = lag_grid(-200, 200, 7)
        a = cross_correlation(x, y, w, lags, min_count=1)
        b = cross_correlation_fft(x, y, w, lags=lags, min_count=1)
        np.testing.assert_array_equal(a.counts, b.counts)
        np.testing.assert_allclose(b.values, a.values, rtol=1e-9, atol=1e-9 * np.abs(a.values).max())

    def test_needs_lags(self):
        x = Series(np.arange(50.0))
        with pytest.raises(ValueError):
            cross_correlation_fft(x, x, WindowSpec(3))


class TestMonteCarlo:
    def test_independent_paths_average_to_zero(self):
        rng = np.random.default_rng(20)
        pairs = [(brownian(rng, 1000), brownian(rng, 1000)) for _ in range(1000)]
        res = ensemble_cross_correlation(pairs, [WindowSpec(20), WindowSpec(50)], [-25, 0, 25])
        assert res.realizations == 1000
        z = res.values / res.stderr
        assert np.all(np.abs(z) < 3), z

    def test_brownian_matches_exact_finite_n_expectation(self):
        rng = np.random.default_rng(21)
        paths = [brownian(rng, 2000) for _ in range(400)]
        w = WindowSpec(40)
        lags = np.array([0, 10, 20, 30])
        res = ensemble_cross_correlation([(p, p) for p in paths], w, lags)
        expected = np.array([brownian_expectation(w, t) for t in lags])
        z = (res.values[0] - expected) / res.stderr[0]
        assert np.all(np.abs(z) < 3.5), z

    def test_exact_expectation_tends_to_asymptotic_form(self):
        # unit-step walk: covariance min(t, u) = (1/2) D_1 (t + u - |t - u|)
        for n in (100, 400, 1600):
            w = WindowSpec(n)
            for th in (0.0, 0.25, 0.5):
                tau = int(th * n)
                exact = brownian_expectation(w, tau)
                asym = 0.5 * asymptotic_xcorr_theta0(tau / n, 0.5, 0.5, n)
                assert exact == pytest.approx(asym, rel=3.0 / n)

    def test_stationarity_drop_first_tenth(self):
        rng = np.random.default_rng(22)
        w, lags = WindowSpec(30), [0, 15]
        diffs = []
        for _ in range(300):
            x = brownian(rng, 3000)
            full = cross_correlation(x, x, w, lags).values[0]
            # dropping leading samples removes the first 10% of valid positions
            cut = w.backward + (len(x) - w.size + 1) // 10
            tail = Series(x.values[cut - w.backward:], origin_index=cut - w.backward)
            diffs.append(cross_correlation(tail, tail, w, lags).values[0] - full)
        diffs = np.array(diffs)
        z = diffs.mean(axis=0) / (diffs.std(axis=0, ddof=1) / np.sqrt(len(diffs)))
        assert np.all(np.abs(z) < 3), z

    def test_zero_crossing_scales_with_n(self):
        rng = np.random.default_rng(23)
        paths = [brownian(rng, 6000) for _ in range(100)]
        crossings = []
        for n in (40, 80, 160):
            lags = lag_grid(0, n - 1)
            res = ensemble_cross_correlation([(p, p) for p in paths], WindowSpec(n, 0.5), lags)
            v = res.values[0]
            first = int(np.flatnonzero(v < 0)[0])
            crossings.append(first / n)
        # analytic zero of the centred-window bracket at s = 1
        grid = np.linspace(0, 0.999, 2000)
        ana = grid[np.flatnonzero([bracket(t, 0.5, .5, .5) < 0 for t in grid])[0]]
        np.testing.assert_allclose(crossings, ana, atol=0.05)


class TestCollapseAndGrids:
    def test_identity_at_zero_exponents(self):
        x = brownian(np.random.default_rng(30), 1000)
        res = cross_correlation(x, x, arithmetic_windows(10, 30, 10), lag_grid(0, 10))
        out = collapse_transform(res, 0.0, 0.0)
        assert np.array_equal(out.values, res.values)
        assert out.collapse_exponent == 0.0

    def test_scalar_multiple(self):
        x = brownian(np.random.default_rng(31), 1000)
        res = cross_correlation(x, x, WindowSpec(25), lag_grid(-10, 10))
        out = collapse_transform(res, 0.4, 0.6)
        np.testing.assert_allclose(out.values, res.values * 25.0**-1.0, rtol=1e-15)
        (n, axis, vals), = out.curves(scaled_lags=True)
        np.testing.assert_allclose(axis, np.arange(-10, 11) / 25)

    def test_window_helpers(self):
        assert [w.n for w in arithmetic_windows(100, 500, 100)] == [100, 200, 300, 400, 500]
        g = [w.n for w in geometric_windows(16, 1024, 1.3)]
        assert g[0] == 16 and g[-1] <= 1024 and g == sorted(set(g))
        ratios = np.diff(np.log(g))
        assert np.all(np.abs(ratios - np.log(1.3)) < 0.05)

    def test_result_accessors(self):
        x = brownian(np.random.default_rng(32), 500)
        res = cross_correlation(x, x, arithmetic_windows(10, 20, 10), [0, 5])
        assert res.value(20, 5) == res.values[1, 1]
        np.testing.assert_allclose(res.tau_hat, [[0, 0.5], [0, 0.25]])
        with pytest.raises(KeyError):
            res.row(99)
        rows = list(res.rows())
        assert rows[0][:3] == (10, 0, 0.0) and len(rows) == 4
