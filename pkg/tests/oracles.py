"""Slow, obviously-correct reference implementations used as test oracles."""
import numpy as np


def naive_transmission(f, a, omega=0.8, radius=4, t_floor=0.1):
    """All window pixels x all channels, one position at a time."""
    px = f.pixels.astype(np.float64)
    h, w = f.shape
    out = np.empty((h, w))
    for y in range(h):
        for x in range(w):
            m = np.inf
            for yy in range(max(0, y - radius), min(h, y + radius + 1)):
                for xx in range(max(0, x - radius), min(w, x + radius + 1)):
                    for c in range(3):
                        m = min(m, px[yy, xx, c] / a[c])
            out[y, x] = min(max(1.0 - omega * m, t_floor), 1.0)
    return out


def brute_airlight(f, k=100):
    px = [tuple(int(c) for c in p) for p in f.pixels.reshape(-1, 3)]
    ranked = sorted(range(len(px)), key=lambda i: (-min(px[i]), i))[:k]
    best = max(ranked, key=lambda i: (sum(px[i]), -i))
    return tuple(max(c, 1) for c in px[best])
