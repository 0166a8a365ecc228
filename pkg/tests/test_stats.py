import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hazevid import Frame, MotionField, TransmissionMap
from hazevid.errors import ShapeMismatchError, UndefinedTestError
from hazevid.stats import (CRITICAL_P05, IDENTICAL, Histogram, chi_square, critical_value, is_consistent,
                           min_channel_histogram, psnr, psnr_sequence, sequence_tmap_diff_stats,
                           tmap_diff_stats)
from hazevid.synth import lowlight_scene, pan_sequence, static_sequence

from conftest import random_frame, uniform_frame

counts8 = st.lists(st.integers(1, 10_000), min_size=8, max_size=8)


def test_histogram_uniform_40():
    h = min_channel_histogram([uniform_frame(40)])
    assert h.counts.tolist() == [0, 256 * 4, 0, 0, 0, 0, 0, 0]


def test_histogram_half_black_half_white():
    px = np.zeros((16, 16, 3), dtype=np.uint8)
    px[8:] = 255
    assert min_channel_histogram([Frame(px)]).counts.tolist() == [128, 0, 0, 0, 0, 0, 0, 128]


def test_histogram_bins_and_conservation(rng):
    f = random_frame(rng, 24, 40)
    h = min_channel_histogram([f, f])
    assert h.total == 2 * 24 * 40
    mins = f.pixels.min(axis=2).ravel()
    brute = [2 * int(((mins >= 32 * k) & (mins <= 32 * k + 31)).sum()) for k in range(8)]
    assert h.counts.tolist() == brute
    assert h.bin_edges == (0, 32, 64, 96, 128, 160, 192, 224, 256)


def test_histogram_parallel_merge(rng):
    frames = [random_frame(rng, index=i) for i in range(6)]
    merged = min_channel_histogram(frames[:2]) + min_channel_histogram(frames[2:])
    assert merged == min_channel_histogram(frames)


def test_chi_square_examples():
    h = Histogram.of([5, 9, 20, 3, 7, 1, 8, 2])
    r = chi_square(h, h)
    assert r.statistic == 0 and r.degrees_of_freedom == 7 and r.consistent_at_p05
    r = chi_square(Histogram.of([12, 8, 0, 0, 0, 0, 0, 0]), Histogram.of([10, 10, 0, 0, 0, 0, 0, 0]))
    assert r.statistic == pytest.approx(0.8, abs=1e-12) and r.degrees_of_freedom == 1


def test_critical_values_against_scipy():
    chi2 = pytest.importorskip("scipy.stats").chi2
    for df, v in CRITICAL_P05.items():
        assert v == pytest.approx(chi2.ppf(0.95, df), abs=0.006)
    assert critical_value(7) == 14.07
    assert is_consistent(13.21, 7) and is_consistent(11.53, 7)
    assert not is_consistent(14.07, 7)


@given(counts8, counts8)
def test_chi_square_against_scipy(o, e):
    stats = pytest.importorskip("scipy.stats")
    o, e = np.array(o), np.array(e)
    expect = stats.chisquare(o, e * o.sum() / e.sum()).statistic
    assert chi_square(Histogram.of(o), Histogram.of(e)).statistic == pytest.approx(expect, rel=1e-9)


@given(counts8)
def test_chi_square_self_is_zero(c):
    assert chi_square(Histogram.of(c), Histogram.of(c)).statistic == pytest.approx(0, abs=1e-9)


def test_chi_square_asymmetric():
    a, b = Histogram.of([10, 10, 10, 10, 10, 10, 10, 10]), Histogram.of([1, 2, 4, 8, 16, 32, 64, 128])
    assert chi_square(a, b).statistic != pytest.approx(chi_square(b, a).statistic)


def test_chi_square_scaling_and_zero_bins():
    r = chi_square(Histogram.of([6, 4, 9, 0, 0, 0, 0, 0]), Histogram.of([60, 40, 0, 0, 0, 0, 0, 0]))
    # third bin excluded: expected rescaled to 19 total -> (11.4, 7.6)
    assert r.degrees_of_freedom == 1
    assert r.statistic == pytest.approx((6 - 11.4) ** 2 / 11.4 + (4 - 7.6) ** 2 / 7.6)
    with pytest.raises(UndefinedTestError):
        chi_square(Histogram.of([1] * 8), Histogram.of([0] * 8))
    with pytest.raises(UndefinedTestError):
        chi_square(Histogram.of([1] * 8), Histogram.of([5, 0, 0, 0, 0, 0, 0, 0]))


def test_psnr(rng):
    f = random_frame(rng, hi=255)
    assert psnr(f, f) == IDENTICAL
    g = Frame(f.pixels + 1)
    assert psnr(f, g) == pytest.approx(20 * math.log10(255), abs=1e-12)
    assert round(psnr(f, g), 2) == 48.13


def test_psnr_oracle_and_symmetry(rng):
    a, b = random_frame(rng), random_frame(rng)
    s = 0
    for y in range(a.height):
        for x in range(a.width):
            for c in range(3):
                s += (int(a.pixels[y, x, c]) - int(b.pixels[y, x, c])) ** 2
    expect = 10 * math.log10(255 ** 2 / (s / (a.height * a.width * 3)))
    assert psnr(a, b) == pytest.approx(expect, abs=1e-9)
    assert psnr(a, b) == psnr(b, a)


def test_psnr_errors(rng):
    with pytest.raises(ShapeMismatchError):
        psnr(random_frame(rng, 16, 16), random_frame(rng, 16, 32))
    with pytest.raises(ShapeMismatchError):
        psnr_sequence([random_frame(rng)], [])


def _field(skipped):
    s = np.asarray(skipped, dtype=bool)
    return MotionField(np.zeros((*s.shape, 2), np.int32), np.zeros(s.shape, np.int32), s)


def test_tmap_diff_static_and_empty(rng):
    t = TransmissionMap(rng.uniform(0.1, 1, (32, 48)))
    st_ = tmap_diff_stats(t, t, _field(np.ones((2, 3))))
    assert st_.total == 32 * 48 and st_.counts[0] == st_.total and st_.fraction_below_10pct == 1.0
    st_ = tmap_diff_stats(t, t, _field(np.zeros((2, 3))))
    assert st_.empty and st_.fraction_below_10pct is None


def test_tmap_diff_binning():
    fw = TransmissionMap(np.full((16, 32), 0.5))
    acc = np.full((16, 32), 0.5)
    acc[:, :16] = 0.5 * 1.155  # 15.5% -> bin 15, only the skipped block counts
    acc[:, 16:] = 0.9
    st_ = tmap_diff_stats(fw, TransmissionMap(acc), _field([[1, 0]]))
    assert st_.total == 256 and st_.counts[15] == 256 and st_.fraction_below_10pct == 0.0


def test_tmap_diff_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        tmap_diff_stats(TransmissionMap(np.ones((16, 16))), TransmissionMap(np.ones((16, 32))), _field([[1]]))


def test_sequence_tmap_diff(rng):
    st_ = sequence_tmap_diff_stats(static_sequence(lowlight_scene(32, 48, rng), 4))
    assert st_.fraction_below_10pct == 1.0 and st_.counts[0] == st_.total
    st_ = sequence_tmap_diff_stats(pan_sequence(lowlight_scene(96, 200, rng), 8, 160))
    assert st_.fraction_below_10pct >= 0.9
