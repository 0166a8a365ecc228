"""Pure numpy implementations of the hot kernels.

Every function here mirrors one in ``_core.pyx`` operation for operation, so
both backends produce bit-identical floating point results.
"""
import numpy as np

BLOCK = 16

# Perimeter of a 16x16 block in raster order: 16 + 16 + 14 + 14 = 60 samples.
PATTERN = np.array(
    [(x, y) for y in range(BLOCK) for x in range(BLOCK)
     if x in (0, BLOCK - 1) or y in (0, BLOCK - 1)],
    dtype=np.intp,
)
PAT_X = PATTERN[:, 0]
PAT_Y = PATTERN[:, 1]

# up, left, right, down: raster order of the four axial neighbours
DIAMOND = ((0, -1), (-1, 0), (1, 0), (0, 1))


def _window_min(a, radius, axis):
    n = a.shape[axis]
    pad = [(0, 0), (0, 0)]
    pad[axis] = (radius, radius)
    p = np.pad(a, pad, constant_values=np.inf)
    out = None
    for k in range(2 * radius + 1):
        s = p[:, k:k + n] if axis == 1 else p[k:k + n, :]
        out = s.copy() if out is None else np.minimum(out, s, out=out)
    return out


def transmission_rect(pixels, airlight, omega, t_floor, radius, y0, y1, x0, x1, out):
    h, w = pixels.shape[:2]
    ey0, ey1 = max(0, y0 - radius), min(h, y1 + radius)
    ex0, ex1 = max(0, x0 - radius), min(w, x1 + radius)
    region = pixels[ey0:ey1, ex0:ex1].astype(np.float64)
    ratio = region[..., 0] / airlight[0]
    ratio = np.minimum(ratio, region[..., 1] / airlight[1])
    ratio = np.minimum(ratio, region[..., 2] / airlight[2])
    # infinity padding == truncating the window at the image border
    m = _window_min(ratio, radius, 1)[:, x0 - ex0:x1 - ex0]
    m = _window_min(m, radius, 0)[y0 - ey0:y1 - ey0]
    out[y0:y1, x0:x1] = np.clip(1.0 - omega * m, t_floor, 1.0)


def transmission(pixels, airlight, omega, t_floor, radius):
    h, w = pixels.shape[:2]
    out = np.empty((h, w), dtype=np.float64)
    transmission_rect(pixels, airlight, omega, t_floor, radius, 0, h, 0, w, out)
    return out


def recover(pixels, airlight, tmap, use_multiplier, t_floor):
    t = tmap
    if use_multiplier:
        boost = np.where(t <= 0.5, 2.0 * t, -2.0 * t * t + 8.0 - 3.0 / t)
        d = np.maximum(boost * t, t_floor)
    else:
        d = t
    j = (pixels.astype(np.float64) - airlight) / d[..., None] + airlight
    return np.clip(np.floor(j + 0.5), 0, 255).astype(np.uint8)


def subsampled_sad(cur_lum, cx, cy, ref_lum, rx, ry):
    a = cur_lum[cy + PAT_Y, cx + PAT_X].astype(np.int32)
    b = ref_lum[ry + PAT_Y, rx + PAT_X].astype(np.int32)
    return int(np.abs(a - b).sum())


def block_search(cur_lum, ref_lum, ox, oy, predictors, search_range, threshold,
                 early_exit, max_iters):
    """Predictor candidates, then small-diamond descent.

    Returns ``(dx, dy, sad, evaluations)``.
    """
    h, w = cur_lum.shape
    lo_x, hi_x = max(-search_range, -ox), min(search_range, w - BLOCK - ox)
    lo_y, hi_y = max(-search_range, -oy), min(search_range, h - BLOCK - oy)
    cur_pat = cur_lum[oy + PAT_Y, ox + PAT_X].astype(np.int32)
    seen = set()
    evals = 0
    best = None

    def cost(dx, dy):
        ref_pat = ref_lum[oy + dy + PAT_Y, ox + dx + PAT_X].astype(np.int32)
        return int(np.abs(cur_pat - ref_pat).sum())

    for dx, dy in [(0, 0), *predictors]:
        dx = min(max(int(dx), lo_x), hi_x)
        dy = min(max(int(dy), lo_y), hi_y)
        if (dx, dy) in seen:
            continue
        seen.add((dx, dy))
        s = cost(dx, dy)
        evals += 1
        key = (s, abs(dx) + abs(dy))
        if best is None or key < best[0]:
            best = (key, dx, dy)

    if not (early_exit and best[0][0] <= threshold):
        for _ in range(max_iters):
            improved = False
            _, cx, cy = best
            for ddx, ddy in DIAMOND:
                nx, ny = cx + ddx, cy + ddy
                if nx < lo_x or nx > hi_x or ny < lo_y or ny > hi_y or (nx, ny) in seen:
                    continue
                seen.add((nx, ny))
                s = cost(nx, ny)
                evals += 1
                key = (s, abs(nx) + abs(ny))
                if key < best[0]:
                    best = (key, nx, ny)
                    improved = True
            if not improved or (early_exit and best[0][0] <= threshold):
                break
    (s, _), dx, dy = best
    return dx, dy, s, evals


def motion_field(cur_lum, ref_lum, prev_mv, search_range, threshold, early_exit, max_iters):
    h, w = cur_lum.shape
    by, bx = h // BLOCK, w // BLOCK
    mv = np.zeros((by, bx, 2), dtype=np.int32)
    sad = np.zeros((by, bx), dtype=np.int32)
    total = 0
    for j in range(by):
        for i in range(bx):
            preds = []
            if i > 0:
                preds.append(mv[j, i - 1])
            if j > 0:
                preds.append(mv[j - 1, i])
                if i + 1 < bx:
                    preds.append(mv[j - 1, i + 1])
            if prev_mv is not None:
                preds.append(prev_mv[j, i])
            dx, dy, s, n = block_search(cur_lum, ref_lum, i * BLOCK, j * BLOCK, preds,
                                        search_range, threshold, early_exit, max_iters)
            mv[j, i] = (dx, dy)
            sad[j, i] = s
            total += n
    return mv, sad, total


def copy_skipped(ref_tm, mv, skip, out):
    by, bx = skip.shape
    for j in range(by):
        for i in range(bx):
            if skip[j, i]:
                y, x = j * BLOCK, i * BLOCK
                dx, dy = int(mv[j, i, 0]), int(mv[j, i, 1])
                out[y:y + BLOCK, x:x + BLOCK] = ref_tm[y + dy:y + dy + BLOCK, x + dx:x + dx + BLOCK]
