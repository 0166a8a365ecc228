"""Compare the compiled and pure-numpy kernel backends.

    python benchmarks/bench_backends.py [--width 640 --height 480 --frames 10]

Times the individual kernels on one synthetic low-light frame pair and the
accelerated pipeline on a short panning clip, once per available backend.
"""
import argparse
import time

import numpy as np

import hazevid
from hazevid import Mode, PipelineConfig, enhance_sequence, estimate_airlight, invert_frame
from hazevid import _kernels
from hazevid.frame import min_channel
from hazevid.synth import lowlight_scene, pan_sequence


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return 1e3 * min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--width", type=int, default=640)
    ap.add_argument("--height", type=int, default=480)
    ap.add_argument("--frames", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(1)
    clip = pan_sequence(lowlight_scene(args.height, args.width + 2 * args.frames, rng),
                        args.frames, args.width)
    cur, ref = invert_frame(clip[1]), invert_frame(clip[0])
    a = estimate_airlight(ref).as_array()
    cur_lum, ref_lum = min_channel(cur.pixels), min_channel(ref.pixels)
    tm = _kernels.transmission(cur.pixels, a, 0.8, 0.1, 4)
    accel = PipelineConfig(mode=Mode.ACCELERATED)

    cases = {
        "transmission": lambda: _kernels.transmission(cur.pixels, a, 0.8, 0.1, 4),
        "recover": lambda: _kernels.recover(cur.pixels, a, tm, True, 0.1),
        "motion_field": lambda: _kernels.motion_field(cur_lum, ref_lum, None, 16, 240, False, 16),
        f"pipeline x{args.frames} (accel)": lambda: enhance_sequence(clip, accel),
    }
    backends = hazevid.available_backends()
    results = {}
    prev = _kernels.backend_name()
    try:
        for b in backends:
            hazevid.set_backend(b)
            for name, fn in cases.items():
                results[name, b] = best_of(fn, args.repeat)
    finally:
        hazevid.set_backend(prev)

    print(f"{args.width}x{args.height}, best of {args.repeat} (ms)")
    print(f"{'case':28s}" + "".join(f"{b:>12s}" for b in backends) + ("    speedup" if len(backends) > 1 else ""))
    for name in cases:
        row = f"{name:28s}" + "".join(f"{results[name, b]:12.2f}" for b in backends)
        if len(backends) > 1:
            row += f"{results[name, 'python'] / results[name, 'compiled']:10.1f}x"
        print(row)


if __name__ == "__main__":
    main()
