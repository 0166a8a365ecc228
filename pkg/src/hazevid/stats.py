"""Histogram, chi-square, PSNR and transmission-difference instrumentation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .dehaze import TransmissionMap
from .errors import ShapeMismatchError, UndefinedTestError
from .frame import Frame, check_same_shape, min_channel
from .motion import BLOCK, MotionField

N_BINS = 8
BIN_EDGES = tuple(range(0, 257, 32))  # 0, 32, ..., 256; bin k covers [32k, 32k + 31]

# chi-square upper critical values at p = 0.05, indexed by degrees of freedom
CRITICAL_P05 = {1: 3.84, 2: 5.99, 3: 7.81, 4: 9.49, 5: 11.07,
                6: 12.59, 7: 14.07, 8: 15.51, 9: 16.92, 10: 18.31}

IDENTICAL = "identical"


@dataclass(frozen=True, eq=False)
class Histogram:
    counts: np.ndarray
    bin_edges: tuple = BIN_EDGES

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __add__(self, other: Histogram) -> Histogram:
        return Histogram(self.counts + other.counts, self.bin_edges)

    def __eq__(self, other):
        if not isinstance(other, Histogram):
            return NotImplemented
        return np.array_equal(self.counts, other.counts)

    @classmethod
    def of(cls, counts) -> Histogram:
        c = np.asarray(counts, dtype=np.int64)
        if c.shape != (N_BINS,) or (c < 0).any():
            raise ValueError(f"expected {N_BINS} non-negative counts")
        return cls(c)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    degrees_of_freedom: int
    consistent_at_p05: bool


def gray_histogram(values: np.ndarray) -> Histogram:
    counts = np.bincount(np.asarray(values, dtype=np.uint8).ravel() >> 5, minlength=N_BINS)
    return Histogram(counts.astype(np.int64))


def min_channel_histogram(frames: Iterable[Frame]) -> Histogram:
    total = None
    for f in frames:
        h = gray_histogram(min_channel(f.pixels))
        total = h if total is None else total + h
    if total is None:
        raise ValueError("histogram of an empty sequence")
    return total


def critical_value(df: int) -> float:
    try:
        return CRITICAL_P05[df]
    except KeyError:
        raise ValueError(f"no p=0.05 critical value tabulated for df={df}") from None


def is_consistent(statistic: float, df: int) -> bool:
    return statistic < critical_value(df)


def chi_square(observed: Histogram, expected: Histogram) -> ChiSquareResult:
    """Goodness of fit of ``observed`` against ``expected``.

    Expected counts are rescaled to the observed total; bins where the
    expected count is zero are left out of both the sum and the degrees of
    freedom.
    """
    o = np.asarray(observed.counts, dtype=np.float64)
    e = np.asarray(expected.counts, dtype=np.float64)
    if o.sum() <= 0:
        raise UndefinedTestError("observed histogram is empty")
    keep = e > 0
    if not keep.any():
        raise UndefinedTestError("every expected bin is zero")
    df = int(keep.sum()) - 1
    if df < 1:
        raise UndefinedTestError("a single populated expected bin leaves no degrees of freedom")
    e = e * (o.sum() / e.sum())
    stat = float((((o - e) ** 2)[keep] / e[keep]).sum())
    return ChiSquareResult(stat, df, is_consistent(stat, df))


def mse(a: np.ndarray, b: np.ndarray) -> float:
    d = a.astype(np.float64) - b.astype(np.float64)
    return float(np.mean(d * d))


def _psnr_from_mse(m: float) -> Union[float, str]:
    if m == 0:
        return IDENTICAL
    return 10.0 * math.log10(255.0 ** 2 / m)


def psnr(a: Frame, b: Frame) -> Union[float, str]:
    """PSNR in dB over all channels, or :data:`IDENTICAL` for equal frames."""
    check_same_shape(a, b)
    return _psnr_from_mse(mse(a.pixels, b.pixels))


def psnr_sequence(a: list[Frame], b: list[Frame]) -> Union[float, str]:
    """PSNR of the MSE pooled over every frame pair."""
    if len(a) != len(b) or not a:
        raise ShapeMismatchError(f"sequence lengths differ or are empty: {len(a)} vs {len(b)}")
    for x, y in zip(a, b):
        check_same_shape(x, y)
    return _psnr_from_mse(float(np.mean([mse(x.pixels, y.pixels) for x, y in zip(a, b)])))


@dataclass(frozen=True)
class TmapDiffStats:
    """Relative transmission differences on skipped blocks, in 1% bins.

    ``counts[k]`` holds differences in ``[k%, (k+1)%)``; the last bin
    collects everything at or above 100%.
    """

    counts: np.ndarray
    total: int
    fraction_below_10pct: Optional[float]

    @property
    def empty(self) -> bool:
        return self.total == 0


def skipped_pixel_mask(field: MotionField, shape) -> np.ndarray:
    h, w = shape
    mask = np.zeros((h, w), dtype=bool)
    by, bx = field.skipped.shape
    blocks = np.kron(field.skipped, np.ones((BLOCK, BLOCK), dtype=bool))
    mask[:by * BLOCK, :bx * BLOCK] = blocks
    return mask


def relative_tmap_diffs(frame_wise: TransmissionMap, accelerated: TransmissionMap,
                        field: MotionField, t_floor: float = 0.1) -> np.ndarray:
    if frame_wise.t.shape != accelerated.t.shape:
        raise ShapeMismatchError("transmission maps differ in size")
    mask = skipped_pixel_mask(field, frame_wise.t.shape)
    fw, acc = frame_wise.t[mask], accelerated.t[mask]
    return np.abs(acc - fw) / np.maximum(fw, t_floor)


def tmap_diff_stats(frame_wise: TransmissionMap, accelerated: TransmissionMap, field: MotionField,
                    t_floor: float = 0.1) -> TmapDiffStats:
    rel = relative_tmap_diffs(frame_wise, accelerated, field, t_floor)
    return diff_stats_from_values(rel)


def diff_stats_from_values(rel: np.ndarray) -> TmapDiffStats:
    rel = np.asarray(rel, dtype=np.float64).ravel()
    counts = np.bincount(np.minimum(np.floor(rel * 100).astype(np.int64), 100), minlength=101)
    if rel.size == 0:
        return TmapDiffStats(counts, 0, None)
    return TmapDiffStats(counts, int(rel.size), float(np.count_nonzero(rel < 0.10)) / rel.size)


def sequence_tmap_diff_stats(frames, cfg=None) -> TmapDiffStats:
    """Run both modes on ``frames`` and pool the skipped-block differences."""
    import dataclasses

    from .pipeline import Mode, PipelineConfig, enhance_sequence, plan_gops

    cfg = cfg or PipelineConfig()
    plans = plan_gops(frames, cfg)
    _, fw = enhance_sequence(frames, dataclasses.replace(cfg, mode=Mode.FRAMEWISE), True, plans)
    _, acc = enhance_sequence(frames, dataclasses.replace(cfg, mode=Mode.ACCELERATED), True, plans)
    rels = [relative_tmap_diffs(fw.tmaps[i], acc.tmaps[i], mf, cfg.dehaze.t_floor)
            for i, mf in enumerate(acc.fields) if mf is not None]
    return diff_stats_from_values(np.concatenate(rels) if rels else np.empty(0))
