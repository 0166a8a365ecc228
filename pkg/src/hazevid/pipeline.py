"""GOP planning and end-to-end enhancement."""
from __future__ import annotations

import dataclasses
import enum
import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .dehaze import (Airlight, DehazeConfig, TransmissionMap, blend_airlight, estimate_airlight,
                     recover_frame, transmission_map)
from .detect import DetectConfig, ImpairmentClass, classify_frame, scene_changed
from .errors import InconsistentDimensionsError, InputError
from .frame import Frame, invert_frame, min_channel
from .motion import AccelConfig, MotionField, propagate_tmap


class Mode(enum.Enum):
    FRAMEWISE = "framewise"
    ACCELERATED = "accel"


@dataclass(frozen=True)
class PipelineConfig:
    max_gop_len: int = 30
    mode: Mode = Mode.FRAMEWISE
    detect: DetectConfig = field(default_factory=DetectConfig)
    dehaze: DehazeConfig = field(default_factory=DehazeConfig)
    accel: AccelConfig = field(default_factory=AccelConfig)
    # bypasses automatic detection for every GOP when set
    force_class: Optional[ImpairmentClass] = None

    def __post_init__(self):
        if self.max_gop_len < 1:
            raise ValueError("max_gop_len must be at least 1")

    @classmethod
    def from_dict(cls, d: dict) -> PipelineConfig:
        """Build from a nested mapping such as a parsed JSON config file."""
        d = dict(d)
        kw = {}
        for key, sub in (("detect", DetectConfig), ("dehaze", DehazeConfig), ("accel", AccelConfig)):
            if key in d:
                kw[key] = sub(**d.pop(key))
        if "mode" in d:
            kw["mode"] = Mode(d.pop("mode"))
        if d.get("force_class") is not None:
            kw["force_class"] = ImpairmentClass(d.pop("force_class"))
        d.pop("force_class", None)
        return cls(**kw, **d)


@dataclass(frozen=True)
class GopPlan:
    start_index: int
    length: int
    impairment: ImpairmentClass
    airlight: Optional[Airlight]
    triggered_by_scene_change: bool = False

    @property
    def stop_index(self) -> int:
        return self.start_index + self.length


class GopResult(NamedTuple):
    frames: list[Frame]
    airlight: Optional[Airlight]
    fields: list[MotionField]
    tmaps: Optional[list[TransmissionMap]]
    ms: list[float]


@dataclass
class FrameRecord:
    frame_index: int
    gop_index: int
    impairment: ImpairmentClass
    mode: Mode
    ms: float
    skip_ratio: Optional[float]
    airlight: Optional[Airlight]


@dataclass
class GopRecord:
    gop_index: int
    start_index: int
    length: int
    impairment: ImpairmentClass
    airlight: Optional[Airlight]
    scene_change: bool


@dataclass
class RunReport:
    frames: list[FrameRecord] = field(default_factory=list)
    gops: list[GopRecord] = field(default_factory=list)
    # per-frame transmission maps, only collected on request (None for passthrough frames)
    tmaps: Optional[list[Optional[TransmissionMap]]] = None
    # per-frame motion fields, collected alongside tmaps (None where no search ran)
    fields: Optional[list[Optional[MotionField]]] = None

    @property
    def mean_ms(self) -> float:
        return float(np.mean([r.ms for r in self.frames])) if self.frames else 0.0

    @property
    def skip_ratios(self) -> list[float]:
        return [r.skip_ratio for r in self.frames if r.skip_ratio is not None]

    def mean_ms_by_mode(self) -> dict[str, float]:
        by: dict[str, list[float]] = {}
        for r in self.frames:
            by.setdefault(r.mode.value, []).append(r.ms)
        return {k: float(np.mean(v)) for k, v in by.items()}


def check_sequence(frames: Sequence[Frame]) -> None:
    if len(frames) == 0:
        raise InputError("empty frame sequence")
    shape = frames[0].shape
    for f in frames:
        if f.shape != shape:
            raise InconsistentDimensionsError(
                f"frame {f.index} is {f.width}x{f.height}, expected {shape[1]}x{shape[0]}")


def working_frame(f: Frame, impairment: ImpairmentClass) -> Frame:
    return invert_frame(f) if impairment is ImpairmentClass.INVERTED_HAZY else f


def carried_airlight(prev_airlight: Optional[Airlight], plan: GopPlan,
                     prev_plan: Optional[GopPlan]) -> Optional[Airlight]:
    """Airlight memory handed to a GOP: dropped on a cut or a change of class."""
    if prev_plan is None or plan.triggered_by_scene_change or plan.impairment != prev_plan.impairment:
        return None
    return prev_airlight


def gop_airlight(first: Frame, impairment: ImpairmentClass, prev_airlight: Optional[Airlight],
                 cfg: DehazeConfig) -> Optional[Airlight]:
    if impairment is ImpairmentClass.NORMAL:
        return prev_airlight
    candidate = estimate_airlight(working_frame(first, impairment), cfg)
    return candidate if prev_airlight is None else blend_airlight(prev_airlight, candidate, cfg)


def gop_boundaries(frames: Sequence[Frame], cfg: PipelineConfig) -> list[tuple[int, int, bool]]:
    """``(start, length, cut)`` triples partitioning the sequence."""
    out = []
    start, cut = 0, False
    for i in range(1, len(frames)):
        if scene_changed(frames[i - 1], frames[i], cfg.detect):
            out.append((start, i - start, cut))
            start, cut = i, True
        elif i - start == cfg.max_gop_len:
            out.append((start, i - start, cut))
            start, cut = i, False
    out.append((start, len(frames) - start, cut))
    return out


def plan_gops(frames: Sequence[Frame], cfg: PipelineConfig = PipelineConfig()) -> list[GopPlan]:
    check_sequence(frames)
    plans: list[GopPlan] = []
    airlight = None
    for start, length, cut in gop_boundaries(frames, cfg):
        impairment = cfg.force_class or classify_frame(frames[start], cfg.detect)
        plan = GopPlan(start, length, impairment, None, cut)
        prev = carried_airlight(airlight, plan, plans[-1] if plans else None)
        airlight = gop_airlight(frames[start], impairment, prev, cfg.dehaze)
        plans.append(dataclasses.replace(plan, airlight=airlight))
    return plans


def enhance_gop(frames: Sequence[Frame], plan: GopPlan, prev_airlight: Optional[Airlight] = None,
                cfg: PipelineConfig = PipelineConfig(), keep_tmaps: bool = False) -> GopResult:
    if len(frames) != plan.length:
        raise ValueError(f"plan covers {plan.length} frames but {len(frames)} were given")
    if plan.impairment is ImpairmentClass.NORMAL:
        return GopResult(list(frames), prev_airlight, [], [] if keep_tmaps else None, [0.0] * len(frames))

    inverted = plan.impairment is ImpairmentClass.INVERTED_HAZY
    dcfg = dataclasses.replace(cfg.dehaze, use_multiplier=inverted)
    accelerated = cfg.mode is Mode.ACCELERATED
    out, fields, ms = [], [], []
    tmaps = [] if keep_tmaps else None
    airlight = None
    prev_w = prev_t = prev_lum = prev_field = None
    for i, f in enumerate(frames):
        t0 = time.perf_counter()
        w = invert_frame(f) if inverted else f
        if airlight is None:
            candidate = estimate_airlight(w, dcfg)
            airlight = candidate if prev_airlight is None else blend_airlight(prev_airlight, candidate, dcfg)
        if accelerated:
            lum = min_channel(w.pixels)
            if prev_w is None:
                tm = transmission_map(w, airlight, dcfg)
            else:
                tm, prev_field = propagate_tmap(w, prev_w, prev_t, prev_field, airlight, cfg.accel, dcfg,
                                                cur_lum=lum, ref_lum=prev_lum)
                fields.append(prev_field)
            prev_w, prev_t, prev_lum = w, tm, lum
        else:
            tm = transmission_map(w, airlight, dcfg)
        j = recover_frame(w, airlight, tm, dcfg)
        out.append(invert_frame(j) if inverted else j)
        ms.append((time.perf_counter() - t0) * 1e3)
        if keep_tmaps:
            tmaps.append(tm)
    return GopResult(out, airlight, fields, tmaps, ms)


def enhance_sequence(frames: Sequence[Frame], cfg: PipelineConfig = PipelineConfig(),
                     keep_tmaps: bool = False, plans: Optional[list[GopPlan]] = None):
    """Plan GOPs and enhance each one, threading the airlight between them.

    Returns ``(frames, report)``.  With ``keep_tmaps`` the report also
    carries every frame's transmission map.
    """
    frames = list(frames)
    if plans is None:
        plans = plan_gops(frames, cfg)
    report = RunReport(tmaps=[] if keep_tmaps else None, fields=[] if keep_tmaps else None)
    result: list[Frame] = []
    airlight = None
    for g, plan in enumerate(plans):
        prev = carried_airlight(airlight, plan, plans[g - 1] if g else None)
        res = enhance_gop(frames[plan.start_index:plan.stop_index], plan, prev, cfg, keep_tmaps)
        airlight = res.airlight
        result.extend(res.frames)
        report.gops.append(GopRecord(g, plan.start_index, plan.length, plan.impairment,
                                     res.airlight, plan.triggered_by_scene_change))
        # the first frame of a GOP has no motion field
        skips = [None] + [mf.skip_ratio for mf in res.fields] if res.fields else [None] * plan.length
        for k, f in enumerate(frames[plan.start_index:plan.stop_index]):
            report.frames.append(FrameRecord(f.index, g, plan.impairment, cfg.mode, res.ms[k],
                                             skips[k], res.airlight))
        if keep_tmaps:
            report.tmaps.extend(res.tmaps if res.tmaps else [None] * plan.length)
            report.fields.extend([None, *res.fields] if res.fields else [None] * plan.length)
    return result, report
