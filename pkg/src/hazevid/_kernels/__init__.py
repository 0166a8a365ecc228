"""Kernel backend selection.

The compiled ``_core`` extension is used when it imports; otherwise the
numpy ``_fallback`` takes over.  Set ``HAZEVID_BACKEND=python`` to force the
fallback, or call :func:`set_backend` at runtime.
"""
import os

from . import _fallback

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

BACKENDS = {"python": _fallback}
if _core is not None:
    BACKENDS["compiled"] = _core

_active = None
_active_name = None


def available():
    return list(BACKENDS)


def backend_name():
    return _active_name


def set_backend(name):
    """Switch kernels; returns the previously active backend name."""
    global _active, _active_name
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} not available (have {available()})")
    prev = _active_name
    _active, _active_name = BACKENDS[name], name
    return prev


_requested = os.environ.get("HAZEVID_BACKEND")
if _requested:
    set_backend(_requested)
else:
    set_backend("compiled" if _core is not None else "python")

PATTERN = _fallback.PATTERN
BLOCK = _fallback.BLOCK


def transmission(pixels, airlight, omega, t_floor, radius):
    return _active.transmission(pixels, airlight, omega, t_floor, radius)


def transmission_rect(pixels, airlight, omega, t_floor, radius, y0, y1, x0, x1, out):
    _active.transmission_rect(pixels, airlight, omega, t_floor, radius, y0, y1, x0, x1, out)


def recover(pixels, airlight, tmap, use_multiplier, t_floor):
    return _active.recover(pixels, airlight, tmap, use_multiplier, t_floor)


def subsampled_sad(cur_lum, cx, cy, ref_lum, rx, ry):
    return _active.subsampled_sad(cur_lum, cx, cy, ref_lum, rx, ry)


def block_search(cur_lum, ref_lum, ox, oy, predictors, search_range, threshold,
                 early_exit, max_iters):
    return _active.block_search(cur_lum, ref_lum, ox, oy, predictors, search_range,
                                threshold, early_exit, max_iters)


def motion_field(cur_lum, ref_lum, prev_mv, search_range, threshold, early_exit, max_iters):
    return _active.motion_field(cur_lum, ref_lum, prev_mv, search_range, threshold,
                                early_exit, max_iters)


def copy_skipped(ref_tm, mv, skip, out):
    _active.copy_skipped(ref_tm, mv, skip, out)
