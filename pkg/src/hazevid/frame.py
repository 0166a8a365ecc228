"""Raster types, inversion and min-channel extraction."""
from __future__ import annotations

import colorsys
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ShapeMismatchError

MIN_SIDE = 16


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Frame:
    """An 8-bit RGB raster.

    ``pixels`` has shape ``(height, width, 3)`` and dtype ``uint8``; it is
    stored read-only so a Frame can be shared freely between workers.
    """

    pixels: np.ndarray
    index: int = 0

    def __post_init__(self):
        p = np.asarray(self.pixels)
        if p.ndim != 3 or p.shape[2] != 3:
            raise ValueError(f"expected (H, W, 3) pixels, got shape {p.shape}")
        if p.dtype != np.uint8:
            if np.issubdtype(p.dtype, np.integer) and p.size and (p.min() < 0 or p.max() > 255):
                raise ValueError("channel values must lie in [0, 255]")
            if not np.issubdtype(p.dtype, np.integer):
                raise ValueError(f"expected integer samples, got {p.dtype}")
            p = p.astype(np.uint8)
        if p.shape[0] < MIN_SIDE or p.shape[1] < MIN_SIDE:
            raise ValueError(f"frame must be at least {MIN_SIDE}x{MIN_SIDE}, got {p.shape[1]}x{p.shape[0]}")
        if self.index < 0:
            raise ValueError("frame index must be non-negative")
        if p.flags.writeable or not p.flags.c_contiguous:
            p = _readonly(np.ascontiguousarray(p).copy())
        object.__setattr__(self, "pixels", p)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape[:2]

    def with_pixels(self, pixels: np.ndarray) -> Frame:
        return Frame(pixels, self.index)

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return self.index == other.index and np.array_equal(self.pixels, other.pixels)

    def same_samples(self, other: Frame) -> bool:
        return np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True, eq=False)
class GrayMap:
    """Single-channel 8-bit map, e.g. the per-pixel channel minimum."""

    values: np.ndarray

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]

    def __eq__(self, other):
        if not isinstance(other, GrayMap):
            return NotImplemented
        return np.array_equal(self.values, other.values)


class HsvPixel(NamedTuple):
    h: float
    s: int
    v: int


def check_same_shape(a: Frame, b: Frame) -> None:
    if a.shape != b.shape:
        raise ShapeMismatchError(f"frame sizes differ: {a.width}x{a.height} vs {b.width}x{b.height}")


def invert_frame(f: Frame) -> Frame:
    return Frame(_readonly(255 - f.pixels), f.index)


def min_channel(pixels: np.ndarray) -> np.ndarray:
    """Per-pixel minimum over the last axis of an (H, W, 3) array."""
    return np.minimum(np.minimum(pixels[..., 0], pixels[..., 1]), pixels[..., 2])


def max_channel(pixels: np.ndarray) -> np.ndarray:
    return np.maximum(np.maximum(pixels[..., 0], pixels[..., 1]), pixels[..., 2])


def min_channel_map(f: Frame) -> GrayMap:
    return GrayMap(_readonly(min_channel(f.pixels)))


def saturation_value(pixels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised S and V on 0..255 scales, rounding half up.

    Integer arithmetic keeps the rounding exact:
    ``round(255 * d / v) == (510 * d + v) // (2 * v)``.
    """
    v = max_channel(pixels).astype(np.int32)
    d = v - min_channel(pixels).astype(np.int32)
    s = np.zeros_like(v)
    nz = v > 0
    s[nz] = (510 * d[nz] + v[nz]) // (2 * v[nz])
    return s, v


def rgb_to_hsv(p) -> HsvPixel:
    r, g, b = (int(c) for c in p)
    for c in (r, g, b):
        if not 0 <= c <= 255:
            raise ValueError(f"channel value {c} outside [0, 255]")
    v = max(r, g, b)
    d = v - min(r, g, b)
    s = 0 if v == 0 else (510 * d + v) // (2 * v)
    h = colorsys.rgb_to_hsv(r / 255, g / 255, b / 255)[0] * 360.0
    return HsvPixel(h % 360.0, s, v)
