"""Wall-clock comparison of frame-wise and accelerated enhancement."""
from __future__ import annotations

import dataclasses
import statistics
from dataclasses import dataclass, field

from .pipeline import Mode, PipelineConfig, enhance_sequence, plan_gops

BENCH_COLUMNS = ("mode", "run", "frames", "mean_ms")


@dataclass
class BenchResult:
    frames: int
    runs: dict[Mode, list[float]] = field(default_factory=dict)

    def median(self, mode: Mode) -> float:
        return statistics.median(self.runs[mode])

    @property
    def saving(self) -> float:
        """Fractional reduction of accelerated vs frame-wise median ms/frame."""
        fw = self.median(Mode.FRAMEWISE)
        return (fw - self.median(Mode.ACCELERATED)) / fw if fw > 0 else 0.0

    def rows(self) -> list[dict]:
        out = []
        for mode, values in self.runs.items():
            for i, v in enumerate(values):
                out.append({"mode": mode.value, "run": i, "frames": self.frames, "mean_ms": f"{v:.4f}"})
            out.append({"mode": mode.value, "run": "median", "frames": self.frames,
                        "mean_ms": f"{self.median(mode):.4f}"})
        out.append({"mode": "saving", "run": "median", "frames": self.frames,
                    "mean_ms": f"{100 * self.saving:.2f}%"})
        return out


def run_bench(frames, cfg: PipelineConfig = PipelineConfig(), runs: int = 3, warmup: bool = True) -> BenchResult:
    """Runs both modes ``runs`` times, interleaved, on one shared GOP plan."""
    frames = list(frames)
    plans = plan_gops(frames, cfg)
    res = BenchResult(len(frames), {Mode.FRAMEWISE: [], Mode.ACCELERATED: []})
    cfgs = {m: dataclasses.replace(cfg, mode=m) for m in res.runs}
    if warmup:
        for c in cfgs.values():
            enhance_sequence(frames[:2], c)
    for _ in range(runs):
        for mode, c in cfgs.items():
            _, report = enhance_sequence(frames, c, plans=plans)
            res.runs[mode].append(report.mean_ms)
    return res
