"""Dark-channel de-hazing core: airlight, transmission, recovery."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import DomainError, ShapeMismatchError
from .frame import Frame, min_channel


class Airlight(NamedTuple):
    """Global atmospheric light per channel, each in [1, 255]."""

    r: float
    g: float
    b: float

    @classmethod
    def floored(cls, rgb) -> Airlight:
        """Build from any triple, raising channels below 1 (and capping at 255)."""
        return cls(*(min(max(float(c), 1.0), 255.0) for c in rgb))

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class TransmissionMap:
    t: np.ndarray

    @property
    def width(self) -> int:
        return self.t.shape[1]

    @property
    def height(self) -> int:
        return self.t.shape[0]

    def __eq__(self, other):
        if not isinstance(other, TransmissionMap):
            return NotImplemented
        return np.array_equal(self.t, other.t)


@dataclass(frozen=True)
class DehazeConfig:
    omega: float = 0.8
    window_radius: int = 4
    airlight_candidates: int = 100
    blend_old: float = 0.4
    blend_new: float = 0.6
    t_floor: float = 0.1
    use_multiplier: bool = False

    def __post_init__(self):
        if not 0 < self.omega <= 1:
            raise ValueError(f"omega must be in (0, 1], got {self.omega}")
        if abs(self.blend_old + self.blend_new - 1.0) > 1e-12:
            raise ValueError("blend_old + blend_new must equal 1")
        if not 0 < self.t_floor < 1:
            raise ValueError(f"t_floor must be in (0, 1), got {self.t_floor}")
        if self.window_radius < 0:
            raise ValueError("window_radius must be non-negative")
        if self.airlight_candidates < 1:
            raise ValueError("airlight_candidates must be positive")


def estimate_airlight(f: Frame, cfg: DehazeConfig = DehazeConfig()) -> Airlight:
    """Brightest-sum pixel among the pixels with the highest channel minimum.

    Ties in both stages go to the earliest pixel in raster order.
    """
    flat = f.pixels.reshape(-1, 3)
    mins = min_channel(flat)
    total = mins.size
    n = min(cfg.airlight_candidates, total)
    kth = np.partition(mins, total - n)[total - n]
    above = np.flatnonzero(mins > kth)
    ties = np.flatnonzero(mins == kth)[: n - above.size]
    cand = np.sort(np.concatenate([above, ties]))
    sums = flat[cand].astype(np.int32).sum(axis=1)
    best = cand[int(np.argmax(sums))]  # first maximum == earliest in raster order
    return Airlight.floored(flat[best])


def blend_airlight(prev: Airlight, candidate: Airlight, cfg: DehazeConfig = DehazeConfig()) -> Airlight:
    # p*old + c*new rewritten as p + (c - p)*new: exact fixed point when p == c
    return Airlight(*(p + (c - p) * cfg.blend_new for p, c in zip(prev, candidate)))


def transmission_map(f: Frame, a: Airlight, cfg: DehazeConfig = DehazeConfig()) -> TransmissionMap:
    t = _kernels.transmission(f.pixels, a.as_array(), cfg.omega, cfg.t_floor, cfg.window_radius)
    return TransmissionMap(t)


def boost_multiplier(t: float) -> float:
    """Adaptive multiplier on the transmission, defined on (0, 1]."""
    if not 0 < t <= 1:
        raise DomainError(f"transmission {t} outside (0, 1]")
    if t <= 0.5:
        return 2.0 * t
    return -2.0 * t * t + 8.0 - 3.0 / t


def effective_divisor(t: float, t_floor: float = 0.1) -> float:
    return max(boost_multiplier(t) * t, t_floor)


def recover_frame(f: Frame, a: Airlight, tm: TransmissionMap, cfg: DehazeConfig = DehazeConfig()) -> Frame:
    if tm.t.shape != f.shape:
        raise ShapeMismatchError(f"transmission map {tm.t.shape} does not match frame {f.shape}")
    t = np.ascontiguousarray(tm.t, dtype=np.float64)
    out = _kernels.recover(f.pixels, a.as_array(), t, cfg.use_multiplier, cfg.t_floor)
    return Frame(out, f.index)
