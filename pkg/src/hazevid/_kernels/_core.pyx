# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; same contracts and arithmetic order as ``_fallback``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport floor
from libc.stdlib cimport malloc, free

cnp.import_array()

DEF BLOCK = 16
DEF NPAT = 60

cdef int PAT_X[NPAT]
cdef int PAT_Y[NPAT]
cdef int _n = 0
for _y in range(BLOCK):
    for _x in range(BLOCK):
        if _x == 0 or _x == BLOCK - 1 or _y == 0 or _y == BLOCK - 1:
            PAT_X[_n] = _x
            PAT_Y[_n] = _y
            _n += 1

cdef int DIA_X[4]
cdef int DIA_Y[4]
DIA_X[:] = [0, -1, 1, 0]
DIA_Y[:] = [-1, 0, 0, 1]


cdef inline int imin(int a, int b) nogil:
    return a if a < b else b

cdef inline int imax(int a, int b) nogil:
    return a if a > b else b

cdef inline int iabs(int a) nogil:
    return a if a >= 0 else -a


def transmission_rect(const cnp.uint8_t[:, :, ::1] pixels, const double[::1] airlight,
                      double omega, double t_floor, int radius,
                      int y0, int y1, int x0, int x1, double[:, ::1] out):
    cdef int h = pixels.shape[0], w = pixels.shape[1]
    cdef int ey0 = imax(0, y0 - radius), ey1 = imin(h, y1 + radius)
    cdef int ex0 = imax(0, x0 - radius), ex1 = imin(w, x1 + radius)
    cdef int rh = ey1 - ey0, rw = ex1 - ex0, ow = x1 - x0
    cdef int y, x, k, lo, hi
    cdef double a0 = airlight[0], a1 = airlight[1], a2 = airlight[2]
    cdef double r, m, t
    if y1 <= y0 or x1 <= x0:
        return
    cdef double *ratio = <double *> malloc(rh * rw * sizeof(double))
    cdef double *hmin = <double *> malloc(rh * ow * sizeof(double))
    if ratio == NULL or hmin == NULL:
        free(ratio)
        free(hmin)
        raise MemoryError()
    with nogil:
        for y in range(rh):
            for x in range(rw):
                m = pixels[ey0 + y, ex0 + x, 0] / a0
                r = pixels[ey0 + y, ex0 + x, 1] / a1
                if r < m:
                    m = r
                r = pixels[ey0 + y, ex0 + x, 2] / a2
                if r < m:
                    m = r
                ratio[y * rw + x] = m
        for y in range(rh):
            for x in range(ow):
                lo = imax(x0 + x - radius, 0) - ex0
                hi = imin(x0 + x + radius, w - 1) - ex0
                m = ratio[y * rw + lo]
                for k in range(lo + 1, hi + 1):
                    if ratio[y * rw + k] < m:
                        m = ratio[y * rw + k]
                hmin[y * ow + x] = m
        for y in range(y1 - y0):
            lo = imax(y0 + y - radius, 0) - ey0
            hi = imin(y0 + y + radius, h - 1) - ey0
            for x in range(ow):
                m = hmin[lo * ow + x]
                for k in range(lo + 1, hi + 1):
                    if hmin[k * ow + x] < m:
                        m = hmin[k * ow + x]
                t = 1.0 - omega * m
                if t < t_floor:
                    t = t_floor
                if t > 1.0:
                    t = 1.0
                out[y0 + y, x0 + x] = t
    free(ratio)
    free(hmin)


def transmission(pixels, airlight, double omega, double t_floor, int radius):
    cdef int h = pixels.shape[0], w = pixels.shape[1]
    out = np.empty((h, w), dtype=np.float64)
    transmission_rect(pixels, airlight, omega, t_floor, radius, 0, h, 0, w, out)
    return out


def recover(const cnp.uint8_t[:, :, ::1] pixels, const double[::1] airlight,
            const double[:, ::1] tmap, bint use_multiplier, double t_floor):
    cdef int h = pixels.shape[0], w = pixels.shape[1]
    res = np.empty((h, w, 3), dtype=np.uint8)
    cdef cnp.uint8_t[:, :, ::1] o = res
    cdef int y, x, c
    cdef double t, d, j, a
    with nogil:
        for y in range(h):
            for x in range(w):
                t = tmap[y, x]
                if use_multiplier:
                    if t <= 0.5:
                        d = 2.0 * t
                    else:
                        d = -2.0 * t * t + 8.0 - 3.0 / t
                    d = d * t
                    if d < t_floor:
                        d = t_floor
                else:
                    d = t
                for c in range(3):
                    a = airlight[c]
                    j = floor((pixels[y, x, c] - a) / d + a + 0.5)
                    if j < 0.0:
                        j = 0.0
                    elif j > 255.0:
                        j = 255.0
                    o[y, x, c] = <cnp.uint8_t> j
    return res


cdef inline int _sad(const cnp.uint8_t[:, ::1] cur, int cx, int cy,
                     const cnp.uint8_t[:, ::1] ref, int rx, int ry) nogil:
    cdef int k, s = 0
    for k in range(NPAT):
        s += iabs(<int> cur[cy + PAT_Y[k], cx + PAT_X[k]] - <int> ref[ry + PAT_Y[k], rx + PAT_X[k]])
    return s


def subsampled_sad(const cnp.uint8_t[:, ::1] cur_lum, int cx, int cy,
                   const cnp.uint8_t[:, ::1] ref_lum, int rx, int ry):
    return _sad(cur_lum, cx, cy, ref_lum, rx, ry)


cdef inline bint _better(int s, int l1, int bs, int bl1) nogil:
    return s < bs or (s == bs and l1 < bl1)


cdef int _search(const cnp.uint8_t[:, ::1] cur, const cnp.uint8_t[:, ::1] ref,
                 int ox, int oy, int *px, int *py, int npred,
                 int search_range, int threshold, bint early_exit, int max_iters,
                 int *seen, int stamp, int *out) nogil:
    cdef int h = cur.shape[0], w = cur.shape[1]
    cdef int side = 2 * search_range + 1
    cdef int lo_x = imax(-search_range, -ox), hi_x = imin(search_range, w - BLOCK - ox)
    cdef int lo_y = imax(-search_range, -oy), hi_y = imin(search_range, h - BLOCK - oy)
    cdef int k, it, dx, dy, s, cx, cy, nx, ny, evals = 0
    cdef int bs = -1, bl1 = 0, bdx = 0, bdy = 0
    cdef bint improved
    for k in range(npred + 1):
        if k == 0:
            dx = 0
            dy = 0
        else:
            dx = imin(imax(px[k - 1], lo_x), hi_x)
            dy = imin(imax(py[k - 1], lo_y), hi_y)
        if seen[(dy + search_range) * side + dx + search_range] == stamp:
            continue
        seen[(dy + search_range) * side + dx + search_range] = stamp
        s = _sad(cur, ox, oy, ref, ox + dx, oy + dy)
        evals += 1
        if bs < 0 or _better(s, iabs(dx) + iabs(dy), bs, bl1):
            bs = s
            bl1 = iabs(dx) + iabs(dy)
            bdx = dx
            bdy = dy
    if not (early_exit and bs <= threshold):
        for it in range(max_iters):
            improved = False
            cx = bdx
            cy = bdy
            for k in range(4):
                nx = cx + DIA_X[k]
                ny = cy + DIA_Y[k]
                if nx < lo_x or nx > hi_x or ny < lo_y or ny > hi_y:
                    continue
                if seen[(ny + search_range) * side + nx + search_range] == stamp:
                    continue
                seen[(ny + search_range) * side + nx + search_range] = stamp
                s = _sad(cur, ox, oy, ref, ox + nx, oy + ny)
                evals += 1
                if _better(s, iabs(nx) + iabs(ny), bs, bl1):
                    bs = s
                    bl1 = iabs(nx) + iabs(ny)
                    bdx = nx
                    bdy = ny
                    improved = True
            if not improved or (early_exit and bs <= threshold):
                break
    out[0] = bdx
    out[1] = bdy
    out[2] = bs
    return evals


def block_search(const cnp.uint8_t[:, ::1] cur_lum, const cnp.uint8_t[:, ::1] ref_lum,
                 int ox, int oy, predictors, int search_range, int threshold,
                 bint early_exit, int max_iters):
    preds = np.ascontiguousarray(np.asarray(predictors, dtype=np.int32).reshape(-1, 2))
    cdef int[:, ::1] pv = preds
    cdef int n = pv.shape[0], k
    cdef int side = 2 * search_range + 1
    seen_arr = np.zeros(side * side, dtype=np.int32)
    px_arr = np.ascontiguousarray(preds[:, 0]) if n else np.zeros(1, dtype=np.int32)
    py_arr = np.ascontiguousarray(preds[:, 1]) if n else np.zeros(1, dtype=np.int32)
    cdef int[::1] seen = seen_arr, px = px_arr, py = py_arr
    cdef int res[3]
    cdef int evals = _search(cur_lum, ref_lum, ox, oy, &px[0], &py[0], n, search_range,
                             threshold, early_exit, max_iters, &seen[0], 1, res)
    return res[0], res[1], res[2], evals


def motion_field(const cnp.uint8_t[:, ::1] cur_lum, const cnp.uint8_t[:, ::1] ref_lum,
                 prev_mv, int search_range, int threshold, bint early_exit, int max_iters):
    cdef int h = cur_lum.shape[0], w = cur_lum.shape[1]
    cdef int by = h // BLOCK, bx = w // BLOCK
    mv_arr = np.zeros((by, bx, 2), dtype=np.int32)
    sad_arr = np.zeros((by, bx), dtype=np.int32)
    cdef int[:, :, ::1] mv = mv_arr
    cdef int[:, ::1] sad = sad_arr
    cdef int[:, :, ::1] pm
    cdef bint has_prev = prev_mv is not None
    if has_prev:
        pm = np.ascontiguousarray(prev_mv, dtype=np.int32)
    cdef int side = 2 * search_range + 1
    seen_arr = np.zeros(side * side, dtype=np.int32)
    cdef int[::1] seen = seen_arr
    cdef int px[4]
    cdef int py[4]
    cdef int res[3]
    cdef int i, j, n, stamp = 0
    cdef long total = 0
    with nogil:
        for j in range(by):
            for i in range(bx):
                n = 0
                if i > 0:
                    px[n] = mv[j, i - 1, 0]
                    py[n] = mv[j, i - 1, 1]
                    n += 1
                if j > 0:
                    px[n] = mv[j - 1, i, 0]
                    py[n] = mv[j - 1, i, 1]
                    n += 1
                    if i + 1 < bx:
                        px[n] = mv[j - 1, i + 1, 0]
                        py[n] = mv[j - 1, i + 1, 1]
                        n += 1
                if has_prev:
                    px[n] = pm[j, i, 0]
                    py[n] = pm[j, i, 1]
                    n += 1
                stamp += 1
                total += _search(cur_lum, ref_lum, i * BLOCK, j * BLOCK, px, py, n,
                                 search_range, threshold, early_exit, max_iters,
                                 &seen[0], stamp, res)
                mv[j, i, 0] = res[0]
                mv[j, i, 1] = res[1]
                sad[j, i] = res[2]
    return mv_arr, sad_arr, total


def copy_skipped(const double[:, ::1] ref_tm, const int[:, :, ::1] mv,
                 const cnp.uint8_t[:, ::1] skip, double[:, ::1] out):
    cdef int by = skip.shape[0], bx = skip.shape[1]
    cdef int i, j, y, x, dx, dy
    with nogil:
        for j in range(by):
            for i in range(bx):
                if not skip[j, i]:
                    continue
                dx = mv[j, i, 0]
                dy = mv[j, i, 1]
                for y in range(j * BLOCK, j * BLOCK + BLOCK):
                    for x in range(i * BLOCK, i * BLOCK + BLOCK):
                        out[y, x] = ref_tm[y + dy, x + dx]
