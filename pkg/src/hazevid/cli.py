"""Command-line interface: ``enhance``, ``analyze`` and ``bench``.

Exit codes: 0 success, 1 input error, 2 usage error, 3 internal error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import _kernels
from .bench import BENCH_COLUMNS, run_bench
from .detect import ImpairmentClass, hazy_fraction
from .errors import HazevidError
from .frame import invert_frame
from .io import (SequenceSource, read_report, read_sequence, write_csv, write_report, write_sequence,
                 write_tmaps)
from .pipeline import Mode, PipelineConfig, enhance_sequence, plan_gops
from .stats import (IDENTICAL, chi_square, min_channel_histogram, psnr, psnr_sequence,
                    sequence_tmap_diff_stats)

EXIT_OK, EXIT_INPUT, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

FORCE = {"auto": None, "haze": ImpairmentClass.HAZY,
         "lowlight": ImpairmentClass.INVERTED_HAZY, "normal": ImpairmentClass.NORMAL}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_pipeline_args(p):
    p.add_argument("--config", type=Path, help="JSON file with detect/dehaze/accel sections")
    p.add_argument("--force-class", choices=list(FORCE), default="auto")
    p.add_argument("--gop", type=int, metavar="N", help="maximum GOP length in frames (default 30)")
    p.add_argument("--omega", type=float, metavar="F", help="haze retention factor (default 0.8)")
    p.add_argument("--sad-threshold", type=int, metavar="N", help="skip threshold T (default 240)")
    p.add_argument("--frame-limit", type=int, metavar="N")
    p.add_argument("--backend", choices=["auto", "compiled", "python"], default="auto")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hazevid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    e = sub.add_parser("enhance", help="enhance a frame sequence")
    e.add_argument("--input", required=True, type=Path, help="PPM directory or .y4m file")
    e.add_argument("--output", required=True, type=Path, help="PPM directory or .y4m file")
    e.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.FRAMEWISE.value)
    e.add_argument("--report", type=Path, metavar="PATH.csv")
    e.add_argument("--dump-tmaps", type=Path, metavar="DIR")
    e.add_argument("--dump-detect", action="store_true", help="print the GOP plan")
    _add_pipeline_args(e)

    a = sub.add_parser("analyze", help="statistics on sequences or reports")
    asub = a.add_subparsers(dest="analysis", parser_class=_Parser)
    asub.required = True
    ap = asub.add_parser("psnr")
    ap.add_argument("a", type=Path)
    ap.add_argument("b", type=Path)
    ap.add_argument("--per-frame", action="store_true")
    ah = asub.add_parser("histogram")
    ah.add_argument("a", type=Path)
    ah.add_argument("--invert", action="store_true")
    ah.add_argument("--csv", type=Path)
    ac = asub.add_parser("chi2", help="observed sequence against expected sequence")
    ac.add_argument("observed", type=Path)
    ac.add_argument("expected", type=Path)
    ac.add_argument("--invert-observed", action="store_true")
    ac.add_argument("--invert-expected", action="store_true")
    at = asub.add_parser("tmap-diff", help="accelerated vs frame-wise transmission on one sequence")
    at.add_argument("a", type=Path)
    at.add_argument("--csv", type=Path)
    _add_pipeline_args(at)
    ar = asub.add_parser("report", help="summarise enhance report CSVs")
    ar.add_argument("reports", type=Path, nargs="+")

    b = sub.add_parser("bench", help="time both modes on the same input")
    b.add_argument("--input", required=True, type=Path)
    b.add_argument("--runs", type=int, default=3)
    b.add_argument("--output", type=Path, metavar="PATH.csv")
    _add_pipeline_args(b)
    return parser


def _config(args, mode: Mode = Mode.FRAMEWISE) -> PipelineConfig:
    if args.config is not None:
        try:
            cfg = PipelineConfig.from_dict(json.loads(args.config.read_text()))
        except OSError as e:
            raise HazevidError(f"{args.config}: {e.strerror or e}") from e
        except (json.JSONDecodeError, TypeError, ValueError) as e:
            raise UsageError(f"bad config {args.config}: {e}") from e
    else:
        cfg = PipelineConfig()
    try:
        changes = {"mode": mode}
        if args.force_class != "auto":
            changes["force_class"] = FORCE[args.force_class]
        if args.gop is not None:
            changes["max_gop_len"] = args.gop
        if args.omega is not None:
            changes["dehaze"] = dataclasses.replace(cfg.dehaze, omega=args.omega)
        if args.sad_threshold is not None:
            changes["accel"] = dataclasses.replace(cfg.accel, sad_threshold=args.sad_threshold)
        return dataclasses.replace(cfg, **changes)
    except ValueError as e:
        raise UsageError(str(e)) from e


def _select_backend(args):
    if args.backend != "auto":
        try:
            _kernels.set_backend(args.backend)
        except ValueError as e:
            raise UsageError(str(e)) from e


def _read(path: Path, limit=None):
    return read_sequence(SequenceSource.from_path(path, limit))


def cmd_enhance(args, out) -> int:
    if args.input.resolve() == args.output.resolve():
        raise UsageError("--input and --output must differ")
    _select_backend(args)
    cfg = _config(args, Mode(args.mode))
    frames = _read(args.input, args.frame_limit)
    plans = plan_gops(frames, cfg)
    if args.dump_detect:
        for g, p in enumerate(plans):
            first = frames[p.start_index]
            a = "-" if p.airlight is None else "%.2f/%.2f/%.2f" % p.airlight
            print(f"gop {g} start={p.start_index} length={p.length} class={p.impairment.value} "
                  f"hazy={hazy_fraction(first, cfg.detect):.3f} "
                  f"hazy_inverted={hazy_fraction(invert_frame(first), cfg.detect):.3f} "
                  f"scene_change={int(p.triggered_by_scene_change)} airlight={a}", file=out)
    result, report = enhance_sequence(frames, cfg, keep_tmaps=args.dump_tmaps is not None, plans=plans)
    write_sequence(result, SequenceSource.from_path(args.output))
    if args.report is not None:
        write_report(report, args.report)
    if args.dump_tmaps is not None:
        write_tmaps(report.tmaps, args.dump_tmaps)
    print(f"enhanced {len(result)} frames in {len(plans)} GOPs, mode={cfg.mode.value}, "
          f"mean {report.mean_ms:.2f} ms/frame", file=out)
    return EXIT_OK


def _fmt_psnr(v) -> str:
    return IDENTICAL if v == IDENTICAL else f"{v:.4f} dB"


def cmd_analyze(args, out) -> int:
    kind = args.analysis
    if kind == "psnr":
        a, b = _read(args.a), _read(args.b)
        if args.per_frame:
            for x, y in zip(a, b):
                print(f"{x.index},{_fmt_psnr(psnr(x, y))}", file=out)
        print(_fmt_psnr(psnr_sequence(a, b)), file=out)
    elif kind == "histogram":
        frames = _read(args.a)
        if args.invert:
            frames = [invert_frame(f) for f in frames]
        h = min_channel_histogram(frames)
        rows = [{"bin": k, "lo": h.bin_edges[k], "hi": h.bin_edges[k + 1] - 1, "count": int(c)}
                for k, c in enumerate(h.counts)]
        for r in rows:
            print(f"{r['lo']:3d}-{r['hi']:3d} {r['count']}", file=out)
        if args.csv:
            write_csv(args.csv, rows, ("bin", "lo", "hi", "count"))
    elif kind == "chi2":
        obs, exp = _read(args.observed), _read(args.expected)
        if args.invert_observed:
            obs = [invert_frame(f) for f in obs]
        if args.invert_expected:
            exp = [invert_frame(f) for f in exp]
        r = chi_square(min_channel_histogram(obs), min_channel_histogram(exp))
        print(f"statistic={r.statistic:.4f} df={r.degrees_of_freedom} "
              f"consistent_at_p05={'yes' if r.consistent_at_p05 else 'no'}", file=out)
    elif kind == "tmap-diff":
        _select_backend(args)
        cfg = _config(args)
        st = sequence_tmap_diff_stats(_read(args.a, args.frame_limit), cfg)
        if st.empty:
            print("no skipped blocks", file=out)
        else:
            print(f"skipped_pixels={st.total} below_10pct={100 * st.fraction_below_10pct:.2f}%", file=out)
        if args.csv:
            write_csv(args.csv, [{"bin_pct": k, "count": int(c)} for k, c in enumerate(st.counts)],
                      ("bin_pct", "count"))
    elif kind == "report":
        for path in args.reports:
            rows = read_report(path)
            by_mode: dict[str, list[float]] = {}
            skips = []
            for r in rows:
                by_mode.setdefault(r["mode"], []).append(float(r["ms"]))
                if r["skip_ratio"]:
                    skips.append(float(r["skip_ratio"]))
            modes = " ".join(f"{m}={sum(v) / len(v):.3f}ms" for m, v in by_mode.items())
            sk = f"{sum(skips) / len(skips):.4f}" if skips else "n/a"
            print(f"{path}: frames={len(rows)} {modes} mean_skip_ratio={sk}", file=out)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    if args.runs < 1:
        raise UsageError("--runs must be at least 1")
    _select_backend(args)
    cfg = _config(args)
    frames = _read(args.input, args.frame_limit)
    res = run_bench(frames, cfg, args.runs)
    if args.output is not None:
        write_csv(args.output, res.rows(), BENCH_COLUMNS)
    print(f"backend={_kernels.backend_name()} frames={res.frames} runs={args.runs} "
          f"framewise={res.median(Mode.FRAMEWISE):.3f}ms accel={res.median(Mode.ACCELERATED):.3f}ms "
          f"saving={100 * res.saving:.1f}%", file=out)
    return EXIT_OK


COMMANDS = {"enhance": cmd_enhance, "analyze": cmd_analyze, "bench": cmd_bench}


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    prev_backend = _kernels.backend_name()
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        print(f"usage error: {e}", file=err)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    except HazevidError as e:
        print(f"error: {e}", file=err)
        return EXIT_INPUT
    except Exception as e:  # noqa: BLE001 - last-resort diagnostic
        print(f"internal error: {type(e).__name__}: {e}", file=err)
        return EXIT_INTERNAL
    finally:
        _kernels.set_backend(prev_backend)


def main():
    sys.exit(run_cli())
