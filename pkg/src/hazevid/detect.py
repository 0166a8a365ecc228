"""Impairment classification and scene-change detection."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .frame import Frame, HsvPixel, check_same_shape, invert_frame, min_channel, saturation_value


class ImpairmentClass(enum.Enum):
    HAZY = "haze"
    INVERTED_HAZY = "lowlight"
    NORMAL = "normal"


@dataclass(frozen=True)
class DetectConfig:
    s_lo: int = 0
    s_hi: int = 130
    v_lo: int = 90
    v_hi: int = 240
    hazy_fraction_threshold: float = 0.60
    scene_change_mad_threshold: float = 30.0

    def __post_init__(self):
        if not (0 <= self.s_lo <= self.s_hi <= 255 and 0 <= self.v_lo <= self.v_hi <= 255):
            raise ValueError("S and V ranges must be ordered sub-ranges of [0, 255]")
        if not 0 < self.hazy_fraction_threshold <= 1:
            raise ValueError("hazy_fraction_threshold must be in (0, 1]")
        if self.scene_change_mad_threshold < 0:
            raise ValueError("scene_change_mad_threshold must be non-negative")


def pixel_is_hazy(p: HsvPixel, cfg: DetectConfig = DetectConfig()) -> bool:
    return cfg.s_lo <= p.s <= cfg.s_hi and cfg.v_lo <= p.v <= cfg.v_hi


def hazy_fraction(f: Frame, cfg: DetectConfig = DetectConfig()) -> float:
    s, v = saturation_value(f.pixels)
    hazy = (s >= cfg.s_lo) & (s <= cfg.s_hi) & (v >= cfg.v_lo) & (v <= cfg.v_hi)
    return float(np.count_nonzero(hazy)) / hazy.size


def classify_frame(f: Frame, cfg: DetectConfig = DetectConfig()) -> ImpairmentClass:
    # strictly greater: a frame exactly at the threshold is not hazy
    if hazy_fraction(f, cfg) > cfg.hazy_fraction_threshold:
        return ImpairmentClass.HAZY
    if hazy_fraction(invert_frame(f), cfg) > cfg.hazy_fraction_threshold:
        return ImpairmentClass.INVERTED_HAZY
    return ImpairmentClass.NORMAL


def min_channel_mad(prev: Frame, cur: Frame) -> float:
    check_same_shape(prev, cur)
    a = min_channel(prev.pixels).astype(np.int32)
    b = min_channel(cur.pixels).astype(np.int32)
    return float(np.abs(a - b).mean())


def scene_changed(prev: Frame, cur: Frame, cfg: DetectConfig = DetectConfig()) -> bool:
    return min_channel_mad(prev, cur) > cfg.scene_change_mad_threshold
