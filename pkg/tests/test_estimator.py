import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclocorr.core import CyclicFrame, EstimatorConfig, SetLayout, flat_index, full_bin_to_alpha
from cyclocorr.errors import ConfigError, DataError, UsageError
from cyclocorr.estimator import (
    CyclicCorrelator,
    average_frames,
    compute_full_window,
    compute_set_window,
    create,
    dft,
    expected_frames,
    frame_grid,
    run,
)
from cyclocorr.impair import CfoSpec, apply_cfo
from cyclocorr.reference import cyclic_xcorr_direct
from cyclocorr.siggen import awgn, tone

from conftest import random_complex


def naive_dft(v):
    n = len(v)
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) @ v


class TestCreate:
    def test_set_buffer(self):
        est = create(EstimatorConfig.set_mode(8, 2, [0.125]))
        assert est.buffer_need == 12
        assert est.consumed == 0 and est.frames_emitted == 0
        assert np.all(est.phase_acc == 1)

    def test_full_buffer_holds_both_lag_margins(self):
        # lags -3 and +5 must both be resident: 16 + 3 + 5
        assert create(EstimatorConfig.full_mode(16, [-3, 5])).buffer_need == 24

    @pytest.mark.parametrize("lags, need", [([0, 5], 21), ([-3, 0], 19), ([2], 18)])
    def test_full_buffer_one_sided(self, lags, need):
        # one-sided lag sets need N + max(M+, M-)
        assert create(EstimatorConfig.full_mode(16, lags)).buffer_need == need

    def test_window_must_exceed_twice_the_lag(self):
        with pytest.raises(ConfigError, match="win_len too small"):
            create(EstimatorConfig.full_mode(8, [-3, 5]))

    def test_invalid_config(self):
        with pytest.raises(ConfigError) as err:
            create(EstimatorConfig.set_mode(8, 2, []))
        assert "empty alpha list" in err.value.violations


class TestPush:
    def test_tone_acf(self):
        x = tone(0.125, 0.0, 200)
        frames = run(EstimatorConfig.set_mode(64, 2, [0.0]), x)
        assert frames
        for fr in frames:
            assert fr.values[flat_index(fr.layout, 0, 2)] == pytest.approx(1j, abs=1e-12)

    def test_tone_ccf(self):
        x = tone(0.125, 0.0, 200)
        frames = run(EstimatorConfig.set_mode(64, 2, [0.25], conj=True), x)
        for fr in frames:
            assert fr.values[flat_index(fr.layout, 0, 1)] == pytest.approx(
                np.exp(1j * np.pi / 4), abs=1e-12)

    def test_chunked_equals_whole(self):
        cfg = EstimatorConfig.set_mode(16, 3, [0.1, -0.3])
        x, y = random_complex(128, 1), random_complex(128, 2)
        whole = run(cfg, x, y)
        est = CyclicCorrelator(cfg)
        parts = []
        for a, b in ((0, 3), (3, 8), (8, 128)):
            parts += est.push(x[a:b], y[a:b])
        assert len(whole) == len(parts) == expected_frames(cfg, 128)
        for p, q in zip(whole, parts):
            assert p.start_abs == q.start_abs
            np.testing.assert_array_equal(p.values, q.values)

    def test_mismatched_chunks(self):
        est = create(EstimatorConfig.set_mode(8, 1, [0.0]))
        with pytest.raises(UsageError):
            est.push(np.ones(4), np.ones(3))

    def test_non_finite_names_absolute_index(self):
        est = create(EstimatorConfig.set_mode(8, 1, [0.0]))
        est.push(np.ones(5))
        bad = np.ones(4, complex)
        bad[2] = np.nan
        with pytest.raises(DataError, match="absolute index 7") as err:
            est.push(bad)
        assert err.value.index == 7

    def test_empty_chunk(self):
        est = create(EstimatorConfig.set_mode(8, 1, [0.0]))
        assert est.push(np.zeros(0)) == []

    def test_output_delay(self):
        cfg = EstimatorConfig.set_mode(32, 4, [0.0])
        est = create(cfg)
        assert est.push(np.ones(est.buffer_need - 1)) == []
        frames = est.push(np.ones(1))
        assert len(frames) == 1 and frames[0].start_abs == 4

    def test_start_indices(self):
        cfg = EstimatorConfig.full_mode(16, [-2, 3])
        frames = run(cfg, random_complex(100, 0))
        assert [f.start_abs for f in frames] == [2 + 16 * i for i in range(len(frames))]
        assert [f.frame_index for f in frames] == list(range(len(frames)))


class TestSetWindow:
    def test_ones_dc(self):
        v = compute_set_window(np.ones(10), np.ones(6), [0.0], 2, False)
        np.testing.assert_allclose(v, 1.0, atol=1e-15)

    def test_ones_full_period_cancels(self):
        n = 16
        v = compute_set_window(np.ones(n + 4), np.ones(n), [1 / n], 2, False)
        np.testing.assert_allclose(v, 0.0, atol=1e-12)

    @pytest.mark.parametrize("conj", [False, True])
    @pytest.mark.parametrize("method", ["direct", "fft"])
    def test_matches_direct_sum(self, conj, method):
        n, m, k0 = 64, 3, 37
        x, y = random_complex(200, 3), random_complex(200, 4)
        a = 3 / 64
        got = compute_set_window(x[k0 - m:k0 + n + m], y[k0:k0 + n], [a], m, conj, k0,
                                 method=method)
        for lag in range(-m, m + 1):
            want = cyclic_xcorr_direct(x, y, a, lag, conj, k0, n)
            assert abs(got[lag + m] - want) <= 1e-12

    def test_bad_window(self):
        with pytest.raises(UsageError):
            compute_set_window(np.ones(9), np.ones(6), [0.0], 2, False)


class TestFullWindow:
    def test_ones_lag0(self):
        v = compute_full_window(np.ones(8), np.ones(8), [0], 8, False)
        np.testing.assert_allclose(v, [1, 0, 0, 0, 0, 0, 0, 0], atol=1e-15)

    def test_ones_lag1(self):
        v1 = compute_full_window(np.ones(9), np.ones(8), [1], 8, False)
        v0 = compute_full_window(np.ones(8), np.ones(8), [0], 8, False)
        np.testing.assert_allclose(v1, v0, atol=1e-15)

    @pytest.mark.parametrize("conj", [False, True])
    def test_matches_set_mode(self, conj):
        n, lags, k0 = 64, [-3, 0, 5], 5
        x, y = random_complex(100, 5), random_complex(100, 6)
        full = compute_full_window(x[k0 - 3:k0 + n + 5], y[k0:k0 + n], lags, n, conj, k0)
        full = full.reshape(len(lags), n)
        for k in range(n):
            a = full_bin_to_alpha(k, n)
            s = compute_set_window(x[k0 - 5:k0 + n + 5], y[k0:k0 + n], [a], 5, conj, k0)
            for i, m in enumerate(lags):
                np.testing.assert_allclose(full[i, k], s[m + 5], rtol=1e-10)

    def test_insufficient_coverage(self):
        with pytest.raises(UsageError):
            compute_full_window(np.ones(12), np.ones(8), [-3, 5], 8, False)


class TestDft:
    def test_delta(self):
        np.testing.assert_allclose(dft([1, 0, 0, 0]), [1, 1, 1, 1])

    def test_ones(self):
        np.testing.assert_allclose(dft([1, 1, 1, 1]), [4, 0, 0, 0], atol=1e-15)

    def test_parseval(self):
        v = random_complex(64, 7)
        big_v = dft(v)
        assert np.sum(np.abs(v) ** 2) == pytest.approx(np.sum(np.abs(big_v) ** 2) / 64, rel=1e-10)

    @pytest.mark.parametrize("n", [1, 7, 12, 64, 100])
    def test_matches_matrix_dft(self, n):
        v = random_complex(n, n)
        np.testing.assert_allclose(dft(v), naive_dft(v), atol=1e-10 * n)

    def test_empty(self):
        with pytest.raises(UsageError):
            dft([])


class TestAverage:
    def _frames(self, *vals):
        return [CyclicFrame(i, 1, np.asarray(v, complex), SetLayout(1, 1))
                for i, v in enumerate(vals)]

    def test_single_frame(self):
        v = np.array([1 + 1j, 2, -3j])
        np.testing.assert_array_equal(average_frames(self._frames(v), "coherent"), v)

    def test_cancellation(self):
        v = np.array([1 + 1j, 2, -3j])
        frames = self._frames(v, -v)
        np.testing.assert_allclose(average_frames(frames, "coherent"), 0)
        np.testing.assert_allclose(average_frames(frames, "magnitude"), np.abs(v))

    def test_errors(self):
        with pytest.raises(UsageError):
            average_frames([])
        with pytest.raises(UsageError):
            average_frames(self._frames([1, 2, 3]), "median")
        a = run(EstimatorConfig.set_mode(8, 1, [0.0]), np.ones(20))
        b = run(EstimatorConfig.set_mode(8, 2, [0.0]), np.ones(20))
        with pytest.raises(UsageError):
            average_frames(a + b)

    def test_white_noise(self):
        n = 1024
        cfg = EstimatorConfig.set_mode(n, 8, [0.125])
        frames = run(cfg, awgn(64 * n + 16, 1.0, seed=11))
        assert len(frames) == 64
        mag = average_frames(frames, "magnitude")
        assert np.all(mag <= 5 / np.sqrt(n))
        single = np.sqrt(np.mean(np.abs(frames[0].values) ** 2))
        coherent = np.sqrt(np.mean(np.abs(average_frames(frames, "coherent")) ** 2))
        assert 0.5 / 8 <= coherent / single <= 2 / 8


class TestInvariants:
    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(0, 90), min_size=1, max_size=12),
           st.sampled_from(["set", "full"]))
    def test_chunking_invariance(self, cuts, mode):
        total = 300
        x, y = random_complex(total, 8), random_complex(total, 9)
        if mode == "set":
            cfg = EstimatorConfig.set_mode(32, 4, [0.1234, -0.25], conj=True)
        else:
            cfg = EstimatorConfig.full_mode(32, [-2, 0, 7])
        ref = run(cfg, x, y)
        est = CyclicCorrelator(cfg)
        bounds = sorted({0, total, *(min(c * 3, total) for c in cuts)})
        got = []
        for a, b in zip(bounds, bounds[1:]):
            got += est.push(x[a:b], y[a:b])
            assert est.frames_emitted == expected_frames(cfg, b)
        assert len(got) == len(ref)
        for p, q in zip(ref, got):
            np.testing.assert_allclose(q.values, p.values, rtol=0, atol=1e-12)

    def test_phase_acc_unit_magnitude(self):
        cfg = EstimatorConfig.set_mode(16, 1, [0.1234567, 0.3, -0.4999])
        est = CyclicCorrelator(cfg)
        for _ in range(50):
            est.push(random_complex(37, 1))
            assert np.max(np.abs(np.abs(est.phase_acc) - 1)) <= 1e-12

    @pytest.mark.parametrize("conj", [False, True])
    def test_oracle_agreement_across_frames(self, conj):
        n, m = 64, 3
        alphas = [3 / 64, 0.1234567, -0.3]
        x, y = random_complex(10 * n, 12), random_complex(10 * n, 13)
        frames = run(EstimatorConfig.set_mode(n, m, alphas, conj), x, y, chunk_size=50)
        assert len(frames) == 9
        for fr in frames:
            grid = frame_grid(fr)
            for i, a in enumerate(alphas):
                for lag in range(-m, m + 1):
                    want = cyclic_xcorr_direct(x, y, a, lag, conj, fr.start_abs, n)
                    assert abs(grid[i, lag + m] - want) <= 1e-12

    def test_set_full_agree_in_stream(self):
        n = 32
        x, y = random_complex(5 * n, 14), random_complex(5 * n, 15)
        full = run(EstimatorConfig.full_mode(n, [-2, 0, 2]), x, y)
        set_ = run(EstimatorConfig.set_mode(n, 2, [full_bin_to_alpha(k, n) for k in range(n)]),
                   x, y)
        assert [f.start_abs for f in full] == [f.start_abs for f in set_]
        for f, s in zip(full, set_):
            fg, sg = frame_grid(f), frame_grid(s)
            for i, m in enumerate([-2, 0, 2]):
                np.testing.assert_allclose(fg[i], sg[:, m + 2], rtol=1e-10)

    def test_cfo_acf_factor(self):
        eps, n, m = 0.003, 256, 8
        x = random_complex(6 * n, 16)
        xs = apply_cfo(x, CfoSpec(eps))
        cfg = EstimatorConfig.set_mode(n, m, [0.125, 0.0])
        a, b = run(cfg, x), run(cfg, xs)
        lags = np.arange(-m, m + 1)
        for fa, fb in zip(a, b):
            ratio = frame_grid(fb) / frame_grid(fa)
            np.testing.assert_allclose(ratio, np.broadcast_to(np.exp(2j * np.pi * eps * lags),
                                                              ratio.shape), atol=1e-9)
            np.testing.assert_allclose(np.abs(fb.values), np.abs(fa.values), atol=1e-9)

    def test_cfo_ccf_peak_shift(self):
        n, eps = 256, 0.02
        x = tone(0.05, 0.3, 8 * n)
        cfg = EstimatorConfig.full_mode(n, [0], conj=True)
        base = average_frames(run(cfg, x), "magnitude")
        moved = average_frames(run(cfg, apply_cfo(x, CfoSpec(eps))), "magnitude")
        assert int(np.argmax(moved)) - int(np.argmax(base)) == round(2 * eps * n)
