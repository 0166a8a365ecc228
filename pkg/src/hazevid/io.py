"""Frame-sequence I/O (numbered P6 directories, YUV4MPEG2) and CSV reports."""
from __future__ import annotations

import csv
import enum
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (InconsistentDimensionsError, InputError, MalformedInputError, MissingInputError,
                     OutputError, UnsupportedFormatError)
from .frame import Frame

REPORT_COLUMNS = ("frame_index", "gop_index", "class", "mode", "ms", "skip_ratio")

_PPM_NAME = re.compile(r"^(\d+)\.ppm$", re.IGNORECASE)


class SourceKind(enum.Enum):
    PPM_DIR = "ppm_dir"
    Y4M_FILE = "y4m_file"


@dataclass(frozen=True)
class SequenceSource:
    kind: SourceKind
    path: Path
    frame_limit: Optional[int] = None

    @classmethod
    def from_path(cls, path, frame_limit: Optional[int] = None) -> SequenceSource:
        """Infer the kind: ``*.y4m`` is a YUV4MPEG2 file, anything else a PPM directory."""
        p = Path(path)
        kind = SourceKind.Y4M_FILE if p.suffix.lower() == ".y4m" else SourceKind.PPM_DIR
        return cls(kind, p, frame_limit)


# ---------------------------------------------------------------- PPM

def _ppm_tokens(data: bytes, count: int):
    """First ``count`` header tokens and the offset of the raster."""
    tokens, pos, n = [], 0, len(data)
    while len(tokens) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise MalformedInputError("truncated PPM header")
        tokens.append(data[start:pos])
    # exactly one whitespace byte separates maxval from the raster
    return tokens, pos + 1


def decode_ppm(data: bytes, name: str = "<bytes>") -> np.ndarray:
    if data[:2] != b"P6":
        raise MalformedInputError(f"{name}: not a binary PPM (P6) file")
    tokens, offset = _ppm_tokens(data, 4)
    try:
        w, h, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise MalformedInputError(f"{name}: non-numeric PPM header field") from None
    if w <= 0 or h <= 0:
        raise MalformedInputError(f"{name}: invalid size {w}x{h}")
    if maxval != 255:
        raise UnsupportedFormatError(f"{name}: maxval {maxval} unsupported, only 8-bit (255)")
    need = w * h * 3
    raster = data[offset:offset + need]
    if len(raster) != need:
        raise MalformedInputError(f"{name}: raster truncated ({len(raster)} of {need} bytes)")
    return np.frombuffer(raster, dtype=np.uint8).reshape(h, w, 3)


def encode_ppm(pixels: np.ndarray) -> bytes:
    h, w = pixels.shape[:2]
    return b"P6\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(pixels, dtype=np.uint8).tobytes()


def encode_pgm(values: np.ndarray) -> bytes:
    h, w = values.shape
    return b"P5\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(values, dtype=np.uint8).tobytes()


def _ppm_files(path: Path) -> list[tuple[int, Path]]:
    if not path.is_dir():
        raise MissingInputError(f"{path}: no such directory")
    found = []
    for p in path.iterdir():
        m = _PPM_NAME.match(p.name)
        if m:
            found.append((int(m.group(1)), p))
    if not found:
        raise MissingInputError(f"{path}: no numbered .ppm frames")
    return sorted(found)


def _read_ppm_dir(path: Path, limit: Optional[int]) -> list[Frame]:
    files = _ppm_files(path)
    if limit is not None:
        files = files[:limit]
    frames = []
    for i, (_, p) in enumerate(files):
        px = decode_ppm(p.read_bytes(), str(p))
        if frames and px.shape != frames[0].pixels.shape:
            raise InconsistentDimensionsError(
                f"{p}: {px.shape[1]}x{px.shape[0]} differs from {frames[0].width}x{frames[0].height}")
        frames.append(_frame(px, i, p))
    return frames


def _frame(px, index, where) -> Frame:
    try:
        return Frame(px, index)
    except ValueError as e:
        raise MalformedInputError(f"{where}: {e}") from None


# ---------------------------------------------------------------- Y4M

def _yuv_to_rgb(y, u, v) -> np.ndarray:
    """BT.601 full-range YCbCr to RGB."""
    y = y.astype(np.float64)
    cb = u.astype(np.float64) - 128.0
    cr = v.astype(np.float64) - 128.0
    rgb = np.stack([y + 1.402 * cr,
                    y - 0.344136 * cb - 0.714136 * cr,
                    y + 1.772 * cb], axis=-1)
    return np.clip(np.floor(rgb + 0.5), 0, 255).astype(np.uint8)


def _rgb_to_yuv(pixels) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    p = pixels.astype(np.float64)
    r, g, b = p[..., 0], p[..., 1], p[..., 2]
    planes = (0.299 * r + 0.587 * g + 0.114 * b,
              -0.168736 * r - 0.331264 * g + 0.5 * b + 128.0,
              0.5 * r - 0.418688 * g - 0.081312 * b + 128.0)
    return tuple(np.clip(np.floor(c + 0.5), 0, 255).astype(np.uint8) for c in planes)


def _parse_y4m_header(line: bytes, name: str):
    parts = line.split()
    if not parts or parts[0] != b"YUV4MPEG2":
        raise MalformedInputError(f"{name}: missing YUV4MPEG2 signature")
    w = h = None
    chroma = "420"
    for p in parts[1:]:
        tag, val = p[:1], p[1:].decode("ascii", "replace")
        try:
            if tag == b"W":
                w = int(val)
            elif tag == b"H":
                h = int(val)
        except ValueError:
            raise MalformedInputError(f"{name}: bad header field {p!r}") from None
        if tag == b"C":
            chroma = val
    if not w or not h or w <= 0 or h <= 0:
        raise MalformedInputError(f"{name}: header lacks a valid W/H")
    if chroma.startswith("420"):
        chroma = "420"
    elif chroma != "444":
        raise UnsupportedFormatError(f"{name}: colorspace C{chroma} unsupported (C420*, C444 only)")
    return w, h, chroma


def decode_y4m(data: bytes, name: str = "<bytes>", limit: Optional[int] = None) -> list[Frame]:
    nl = data.find(b"\n")
    if nl < 0:
        raise MalformedInputError(f"{name}: missing header line")
    w, h, chroma = _parse_y4m_header(data[:nl], name)
    cw, ch = (w, h) if chroma == "444" else ((w + 1) // 2, (h + 1) // 2)
    size = w * h + 2 * cw * ch
    frames, pos = [], nl + 1
    while pos < len(data) and (limit is None or len(frames) < limit):
        end = data.find(b"\n", pos)
        if end < 0 or not data[pos:end].startswith(b"FRAME"):
            raise MalformedInputError(f"{name}: expected FRAME marker at byte {pos} "
                                      "(frame sizes inconsistent with the header?)")
        pos = end + 1
        buf = data[pos:pos + size]
        if len(buf) != size:
            raise MalformedInputError(f"{name}: frame {len(frames)} truncated")
        pos += size
        planes = np.frombuffer(buf, dtype=np.uint8)
        y = planes[:w * h].reshape(h, w)
        u = planes[w * h:w * h + cw * ch].reshape(ch, cw)
        v = planes[w * h + cw * ch:].reshape(ch, cw)
        if chroma == "420":
            u = np.repeat(np.repeat(u, 2, axis=0), 2, axis=1)[:h, :w]
            v = np.repeat(np.repeat(v, 2, axis=0), 2, axis=1)[:h, :w]
        frames.append(_frame(_yuv_to_rgb(y, u, v), len(frames), name))
    if not frames:
        raise MalformedInputError(f"{name}: no frames")
    return frames


def encode_y4m(frames: Sequence[Frame], fps: str = "30:1") -> bytes:
    """YUV4MPEG2 with C444 chroma (no subsampling loss)."""
    f0 = frames[0]
    out = [b"YUV4MPEG2 W%d H%d F%s Ip A1:1 C444\n" % (f0.width, f0.height, fps.encode())]
    for f in frames:
        if f.shape != f0.shape:
            raise InconsistentDimensionsError("Y4M frames must share one size")
        out.append(b"FRAME\n")
        out.extend(p.tobytes() for p in _rgb_to_yuv(f.pixels))
    return b"".join(out)


# ---------------------------------------------------------------- sequences

def read_sequence(src: SequenceSource) -> list[Frame]:
    if src.kind is SourceKind.PPM_DIR:
        return _read_ppm_dir(src.path, src.frame_limit)
    if not src.path.is_file():
        raise MissingInputError(f"{src.path}: no such file")
    return decode_y4m(src.path.read_bytes(), str(src.path), src.frame_limit)


def write_sequence(frames: Sequence[Frame], dst: SequenceSource) -> None:
    frames = list(frames)
    if not frames:
        raise InputError("nothing to write: empty sequence")
    try:
        if dst.kind is SourceKind.Y4M_FILE:
            dst.path.parent.mkdir(parents=True, exist_ok=True)
            dst.path.write_bytes(encode_y4m(frames))
            return
        dst.path.mkdir(parents=True, exist_ok=True)
        for i, f in enumerate(frames):
            (dst.path / f"{i:06d}.ppm").write_bytes(encode_ppm(f.pixels))
    except OSError as e:
        raise OutputError(f"{dst.path}: {e.strerror or e}") from e


def write_tmaps(tmaps, directory) -> None:
    """Transmission maps as 8-bit PGM images (t scaled by 255)."""
    d = Path(directory)
    try:
        d.mkdir(parents=True, exist_ok=True)
        for i, tm in enumerate(tmaps):
            if tm is None:
                continue
            g = np.clip(np.floor(tm.t * 255.0 + 0.5), 0, 255).astype(np.uint8)
            (d / f"{i:06d}.pgm").write_bytes(encode_pgm(g))
    except OSError as e:
        raise OutputError(f"{d}: {e.strerror or e}") from e


# ---------------------------------------------------------------- reports

def report_rows(report) -> list[dict]:
    rows = []
    for r in report.frames:
        rows.append({
            "frame_index": r.frame_index,
            "gop_index": r.gop_index,
            "class": r.impairment.value,
            "mode": r.mode.value,
            "ms": f"{r.ms:.3f}",
            "skip_ratio": "" if r.skip_ratio is None else f"{r.skip_ratio:.6f}",
        })
    return rows


def write_csv(path, rows: Iterable[dict], columns: Sequence[str]) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=list(columns))
            w.writeheader()
            w.writerows(rows)
    except OSError as e:
        raise OutputError(f"{path}: {e.strerror or e}") from e


def write_report(report, path) -> None:
    write_csv(path, report_rows(report), REPORT_COLUMNS)


def read_report(path) -> list[dict]:
    p = Path(path)
    if not p.is_file():
        raise MissingInputError(f"{p}: no such report")
    with open(p, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != REPORT_COLUMNS:
            raise MalformedInputError(f"{p}: unexpected columns {reader.fieldnames}")
        return list(reader)
