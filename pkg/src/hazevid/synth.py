"""Synthetic test sequences: textured scenes, haze blends, camera pans."""
from __future__ import annotations

import numpy as np

from .frame import Frame


def _blur(noise: np.ndarray, sigma: float) -> np.ndarray:
    h, w = noise.shape
    fy = np.fft.fftfreq(h)[:, None]
    fx = np.fft.fftfreq(w)[None, :]
    g = np.exp(-2.0 * (np.pi * sigma) ** 2 * (fx ** 2 + fy ** 2))
    return np.real(np.fft.ifft2(np.fft.fft2(noise) * g))


def smooth_texture(height: int, width: int, rng: np.random.Generator,
                   sigmas=(2.0, 6.0)) -> np.ndarray:
    """Band-limited random field scaled to [0, 1], shape (height, width)."""
    field = sum(_blur(rng.standard_normal((height, width)), s) * s for s in sigmas)
    field -= field.min()
    return field / max(field.max(), 1e-12)


def lowlight_scene(height: int, width: int, rng: np.random.Generator,
                   lo: float = 8.0, hi: float = 75.0) -> np.ndarray:
    """Dim, slightly tinted textured RGB image (uint8)."""
    base = smooth_texture(height, width, rng)
    detail = smooth_texture(height, width, rng, sigmas=(1.0,))
    tint = np.array([1.0, 0.92, 0.85])
    img = lo + (hi - lo) * (0.5 * base + 0.5 * detail)[..., None] * tint
    return np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)


def haze_blend(pixels: np.ndarray, weight: float = 0.5, airlight=255) -> np.ndarray:
    """Blend a scene with a uniform airlight, as haze does."""
    out = (1.0 - weight) * pixels.astype(np.float64) + weight * float(airlight)
    return np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8)


def pan_sequence(scene: np.ndarray, n_frames: int, width: int, step: int = 2) -> list[Frame]:
    """Crops sliding right by ``step`` px per frame, so content moves left."""
    need = width + step * (n_frames - 1)
    if scene.shape[1] < need:
        raise ValueError(f"scene must be at least {need} px wide")
    return [Frame(scene[:, k * step:k * step + width], k) for k in range(n_frames)]


def static_sequence(pixels: np.ndarray, n_frames: int) -> list[Frame]:
    return [Frame(pixels, k) for k in range(n_frames)]
