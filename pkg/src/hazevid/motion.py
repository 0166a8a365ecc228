"""Block motion search and transmission-map reuse across frames."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import _kernels
from .dehaze import Airlight, DehazeConfig, TransmissionMap
from .errors import ShapeMismatchError
from .frame import Frame, check_same_shape, min_channel

BLOCK = _kernels.BLOCK


class MotionVector(NamedTuple):
    dx: int
    dy: int


@dataclass(frozen=True)
class AccelConfig:
    block_size: int = BLOCK
    search_range: int = 16
    sad_threshold: int = 240
    max_iters: int = 16
    # stop searching once SAD <= threshold; faster, but on low-contrast
    # content it settles for the zero vector and t drifts along the P chain
    early_exit: bool = False

    def __post_init__(self):
        if self.block_size != BLOCK:
            raise ValueError(f"block size is fixed at {BLOCK}")
        if self.search_range < 0 or self.sad_threshold < 0 or self.max_iters < 0:
            raise ValueError("search_range, sad_threshold and max_iters must be non-negative")

    @property
    def pattern(self) -> frozenset[tuple[int, int]]:
        return sad_pattern()


@dataclass(eq=False)
class MotionField:
    """Per-block motion vectors, SADs and skip flags for one frame.

    Arrays are indexed ``[block_row, block_col]``; ``mv[..., 0]`` is dx and
    ``mv[..., 1]`` is dy.  Only full 16x16 blocks are represented.
    """

    mv: np.ndarray
    sad: np.ndarray
    skipped: np.ndarray
    evaluations: int = 0

    @property
    def blocks_x(self) -> int:
        return self.sad.shape[1]

    @property
    def blocks_y(self) -> int:
        return self.sad.shape[0]

    @property
    def skip_ratio(self) -> Optional[float]:
        if self.sad.size == 0:
            return None
        return float(np.count_nonzero(self.skipped)) / self.sad.size

    def entry(self, bx: int, by: int) -> tuple[MotionVector, int, bool]:
        return (MotionVector(int(self.mv[by, bx, 0]), int(self.mv[by, bx, 1])),
                int(self.sad[by, bx]), bool(self.skipped[by, bx]))

    def __eq__(self, other):
        if not isinstance(other, MotionField):
            return NotImplemented
        return (np.array_equal(self.mv, other.mv) and np.array_equal(self.sad, other.sad)
                and np.array_equal(self.skipped, other.skipped))


@dataclass
class SadStats:
    """Counter for instrumenting :func:`subsampled_sad`."""

    calls: int = 0
    abs_diffs: int = 0


def sad_pattern() -> frozenset[tuple[int, int]]:
    """The 60 perimeter positions ``(x, y)`` of a 16x16 block."""
    return frozenset(map(tuple, _kernels.PATTERN.tolist()))


def _check_block(f: Frame, origin, what):
    x, y = origin
    if x < 0 or y < 0 or x + BLOCK > f.width or y + BLOCK > f.height:
        raise ValueError(f"{what} block at {origin} is not inside a {f.width}x{f.height} frame")


def subsampled_sad(cur: Frame, cur_origin, ref: Frame, ref_origin, stats: SadStats | None = None) -> int:
    """SAD of channel minima over the perimeter pattern.

    ``cur_origin`` and ``ref_origin`` are ``(x, y)`` top-left corners.
    """
    _check_block(cur, cur_origin, "current")
    _check_block(ref, ref_origin, "reference")
    px, py = _kernels.PATTERN[:, 0], _kernels.PATTERN[:, 1]
    (cx, cy), (rx, ry) = cur_origin, ref_origin
    a = min_channel(cur.pixels[cy + py, cx + px]).astype(np.int32)
    b = min_channel(ref.pixels[ry + py, rx + px]).astype(np.int32)
    diffs = np.abs(a - b)
    if stats is not None:
        stats.calls += 1
        stats.abs_diffs += diffs.size
    return int(diffs.sum())


def motion_search(cur: Frame, block_index, ref: Frame, predictors=(),
                  cfg: AccelConfig = AccelConfig()) -> tuple[MotionVector, int]:
    """Best vector for block ``(bx, by)`` of ``cur`` against ``ref``.

    The zero vector and each predictor (clamped in-bounds) seed a
    small-diamond descent.  Only the evaluated candidates are compared, so
    the result is a local optimum.
    """
    check_same_shape(cur, ref)
    bx, by = block_index
    _check_block(cur, (bx * BLOCK, by * BLOCK), "current")
    dx, dy, sad, _ = _kernels.block_search(
        min_channel(cur.pixels), min_channel(ref.pixels), bx * BLOCK, by * BLOCK,
        [tuple(p) for p in predictors], cfg.search_range, cfg.sad_threshold,
        cfg.early_exit, cfg.max_iters)
    return MotionVector(dx, dy), sad


def estimate_motion(cur_lum: np.ndarray, ref_lum: np.ndarray, prev_field: MotionField | None,
                    cfg: AccelConfig = AccelConfig()) -> MotionField:
    """Raster-order search over all full blocks of a pair of min-channel maps."""
    prev_mv = None if prev_field is None else prev_field.mv
    mv, sad, evals = _kernels.motion_field(
        np.ascontiguousarray(cur_lum), np.ascontiguousarray(ref_lum), prev_mv,
        cfg.search_range, cfg.sad_threshold, cfg.early_exit, cfg.max_iters)
    return MotionField(mv, sad, sad <= cfg.sad_threshold, evals)


def _recompute(pixels, a, cfg_d, field_, out):
    h, w = pixels.shape[:2]
    by, bx = field_.sad.shape
    args = (pixels, a, cfg_d.omega, cfg_d.t_floor, cfg_d.window_radius)
    todo = ~field_.skipped
    if todo.all():
        _kernels.transmission_rect(*args, 0, h, 0, w, out)
        return
    for j in range(by):
        # merge horizontal runs of recomputed blocks into one call
        row = todo[j]
        i = 0
        while i < bx:
            if not row[i]:
                i += 1
                continue
            k = i
            while k < bx and row[k]:
                k += 1
            _kernels.transmission_rect(*args, j * BLOCK, (j + 1) * BLOCK, i * BLOCK, k * BLOCK, out)
            i = k
    # partial strips on the right and bottom are always recomputed
    if w > bx * BLOCK:
        _kernels.transmission_rect(*args, 0, by * BLOCK, bx * BLOCK, w, out)
    if h > by * BLOCK:
        _kernels.transmission_rect(*args, by * BLOCK, h, 0, w, out)


def propagate_tmap(cur: Frame, ref: Frame, ref_tm: TransmissionMap, prev_field: MotionField | None,
                   a: Airlight, cfg_a: AccelConfig = AccelConfig(), cfg_d: DehazeConfig = DehazeConfig(),
                   *, cur_lum: np.ndarray | None = None, ref_lum: np.ndarray | None = None
                   ) -> tuple[TransmissionMap, MotionField]:
    """Transmission map of ``cur`` reusing ``ref_tm`` wherever motion search finds
    a block match with SAD at or below the threshold.

    ``cur_lum``/``ref_lum`` may pass precomputed channel-minimum maps.
    """
    check_same_shape(cur, ref)
    if ref_tm.t.shape != ref.shape:
        raise ShapeMismatchError("reference transmission map does not match the reference frame")
    if cur_lum is None:
        cur_lum = min_channel(cur.pixels)
    if ref_lum is None:
        ref_lum = min_channel(ref.pixels)
    grid = (cur.height // BLOCK, cur.width // BLOCK)
    if prev_field is not None and prev_field.sad.shape != grid:
        raise ShapeMismatchError("previous motion field has a different block grid")
    mf = estimate_motion(cur_lum, ref_lum, prev_field, cfg_a)
    out = np.empty(cur.shape, dtype=np.float64)
    _kernels.copy_skipped(np.ascontiguousarray(ref_tm.t), mf.mv,
                          mf.skipped.astype(np.uint8), out)
    _recompute(cur.pixels, a.as_array(), cfg_d, mf, out)
    return TransmissionMap(out), mf
