"""Hot numeric kernels, each in a numba (loop) and a pure-numpy (vectorized) form.

The public names at the bottom dispatch on :data:`cnext._accel.USE_NUMBA`.
Both forms are importable directly (``*_jit`` / ``*_numpy``) so tests and the
benchmark can compare them in one process.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

_EPS = np.finfo(float).eps
_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


# ---------------------------------------------------------------------------
# inverse of the shrink map s(y) = y + (y/delta)**(n+1) * (1 - delta)
# ---------------------------------------------------------------------------

@njit
def _shrink_inverse_scalar(x, delta, n, max_secant):
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return delta
    p = n + 1
    c = 1.0 - delta
    # s(y) >= y, so the root lies in [0, min(delta, x)]
    tol = 1e-14 * x
    lo, hi = 0.0, min(delta, x)
    y0, f0 = 0.0, -x
    y1, f1 = hi, hi + (hi / delta) ** p * c - x
    if f1 >= 0.0 and f1 <= tol:
        return hi
    for it in range(400):
        if f1 != f0 and it < max_secant:
            y = y1 - f1 * (y1 - y0) / (f1 - f0)
        else:
            y = 0.5 * (lo + hi)
        if not (lo < y < hi):
            y = 0.5 * (lo + hi)
        fy = y + (y / delta) ** p * c - x
        if abs(fy) <= tol:
            return y
        if fy < 0.0:
            lo = y
        else:
            hi = y
        if hi - lo <= 4.0 * 2.220446049250313e-16 * hi:
            return y
        y0, f0 = y1, f1
        y1, f1 = y, fy
    return 0.5 * (lo + hi)


@njit
def shrink_inverse_jit(x, delta, n, max_secant=100):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = _shrink_inverse_scalar(x[i], delta, n, max_secant)
    return out


def shrink_inverse_numpy(x, delta, n, max_secant=100):
    x = np.asarray(x, dtype=float)
    p = n + 1
    c = 1.0 - delta
    out = np.where(x >= 1.0, delta, 0.0)
    act = np.flatnonzero((x > 0.0) & (x < 1.0))
    if act.size == 0:
        return out
    xa = x[act]
    tol = 1e-14 * xa
    lo = np.zeros_like(xa)
    hi = np.minimum(delta, xa)
    y0, f0 = np.zeros_like(xa), -xa
    y1 = hi.copy()
    f1 = y1 + (y1 / delta) ** p * c - xa
    done = (f1 >= 0.0) & (f1 <= tol)
    out[act[done]] = hi[done]
    keep = ~done
    if not keep.any():
        return out
    act, xa, tol, lo, hi = act[keep], xa[keep], tol[keep], lo[keep], hi[keep]
    y0, f0, y1, f1 = y0[keep], f0[keep], y1[keep], f1[keep]
    y = 0.5 * (lo + hi)
    idx = np.arange(xa.size)
    for it in range(400):
        mid = 0.5 * (lo + hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            y = y1 - f1 * (y1 - y0) / (f1 - f0)
        bad = (f1 == f0) | ~((lo < y) & (y < hi)) | (it >= max_secant)
        y = np.where(bad, mid, y)
        fy = y + (y / delta) ** p * c - xa
        done = (np.abs(fy) <= tol) | (np.where(fy < 0.0, hi - y, y - lo) <= 4.0 * _EPS * hi)
        out[act[idx[done]]] = y[done]
        keep = ~done
        if not keep.any():
            return out
        neg = fy < 0.0
        lo = np.where(neg, y, lo)[keep]
        hi = np.where(neg, hi, y)[keep]
        y0, f0, y1, f1 = y1[keep], f1[keep], y[keep], fy[keep]
        xa, tol, idx = xa[keep], tol[keep], idx[keep]
    out[act[idx]] = 0.5 * (lo + hi)
    return out


# ---------------------------------------------------------------------------
# closest-point projection onto a closed trigonometric-polynomial curve
# x(th) = sum_m ax[m] cos(m th) + bx[m] sin(m th), same for y
# ---------------------------------------------------------------------------

@njit
def _curve_eval(th, ax, bx, ay, by):
    px = py = dx = dy = ddx = ddy = 0.0
    for m in range(ax.shape[0]):
        c = math.cos(m * th)
        s = math.sin(m * th)
        px += ax[m] * c + bx[m] * s
        py += ay[m] * c + by[m] * s
        dx += m * (bx[m] * c - ax[m] * s)
        dy += m * (by[m] * c - ay[m] * s)
        ddx -= m * m * (ax[m] * c + bx[m] * s)
        ddy -= m * m * (ay[m] * c + by[m] * s)
    return px, py, dx, dy, ddx, ddy


@njit
def _sqdist(th, qx, qy, ax, bx, ay, by):
    px, py, dx, dy, ddx, ddy = _curve_eval(th, ax, bx, ay, by)
    return (px - qx) ** 2 + (py - qy) ** 2


@njit
def _stationarity(th, qx, qy, ax, bx, ay, by):
    px, py, dx, dy, ddx, ddy = _curve_eval(th, ax, bx, ay, by)
    return (px - qx) * dx + (py - qy) * dy


@njit
def _golden_then_bisect(a, b, q0, q1, ax, bx, ay, by):
    # golden section narrows the bracket, bisection on the stationarity
    # residual then resolves the minimizer to rounding
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = _sqdist(c, q0, q1, ax, bx, ay, by)
    fd = _sqdist(d, q0, q1, ax, bx, ay, by)
    while b - a > 1e-6:
        if fc < fd:
            b = d
            d = c
            fd = fc
            c = b - _GOLDEN * (b - a)
            fc = _sqdist(c, q0, q1, ax, bx, ay, by)
        else:
            a = c
            c = d
            fc = fd
            d = a + _GOLDEN * (b - a)
            fd = _sqdist(d, q0, q1, ax, bx, ay, by)
    ga = _stationarity(a, q0, q1, ax, bx, ay, by)
    gb = _stationarity(b, q0, q1, ax, bx, ay, by)
    if ga > 0.0 or gb < 0.0:
        return 0.5 * (a + b)
    for it in range(80):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        if _stationarity(m, q0, q1, ax, bx, ay, by) < 0.0:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


@njit
def project_points_jit(qx, qy, ax, bx, ay, by, nscan, max_newton=50):
    npts = qx.shape[0]
    theta = np.empty(npts)
    dist = np.empty(npts)
    status = np.zeros(npts, dtype=np.int64)
    h = 2.0 * math.pi / nscan
    sx = np.empty(nscan)
    sy = np.empty(nscan)
    for j in range(nscan):
        r = _curve_eval(j * h, ax, bx, ay, by)
        sx[j] = r[0]
        sy[j] = r[1]
    for i in range(npts):
        q0 = qx[i]
        q1 = qy[i]
        best = 0
        bd = (sx[0] - q0) ** 2 + (sy[0] - q1) ** 2
        for j in range(1, nscan):
            d = (sx[j] - q0) ** 2 + (sy[j] - q1) ** 2
            if d < bd:
                bd = d
                best = j
        th0 = best * h
        th = th0
        ok = False
        for it in range(max_newton):
            px, py, dx, dy, ddx, ddy = _curve_eval(th, ax, bx, ay, by)
            rx = px - q0
            ry = py - q1
            g = rx * dx + ry * dy
            gp = dx * dx + dy * dy + rx * ddx + ry * ddy
            if gp <= 0.0:
                break
            step = g / gp
            th -= step
            if abs(th - th0) > 2.0 * h:
                break
            if abs(step) <= 1e-12:
                ok = True
                break
        if not ok:
            th = _golden_then_bisect(th0 - h, th0 + h, q0, q1, ax, bx, ay, by)
            status[i] = 1
        th = th % (2.0 * math.pi)
        px, py, dx, dy, ddx, ddy = _curve_eval(th, ax, bx, ay, by)
        sp = math.sqrt(dx * dx + dy * dy)
        theta[i] = th
        dist[i] = ((q0 - px) * dy - (q1 - py) * dx) / sp
    return theta, dist, status


def _curve_eval_numpy(th, ax, bx, ay, by):
    m = np.arange(ax.shape[0])
    ang = np.multiply.outer(th, m)
    c, s = np.cos(ang), np.sin(ang)
    px = c @ ax + s @ bx
    py = c @ ay + s @ by
    dx = (c * m) @ bx - (s * m) @ ax
    dy = (c * m) @ by - (s * m) @ ay
    m2 = m * m
    ddx = -((c * m2) @ ax + (s * m2) @ bx)
    ddy = -((c * m2) @ ay + (s * m2) @ by)
    return px, py, dx, dy, ddx, ddy


def project_points_numpy(qx, qy, ax, bx, ay, by, nscan, max_newton=50):
    qx = np.asarray(qx, dtype=float)
    qy = np.asarray(qy, dtype=float)
    h = 2.0 * np.pi / nscan
    grid = np.arange(nscan) * h
    sx, sy = _curve_eval_numpy(grid, ax, bx, ay, by)[:2]
    best = np.empty(qx.shape[0], dtype=np.int64)
    block = 4096
    for start in range(0, qx.shape[0], block):
        sl = slice(start, start + block)
        d2 = (qx[sl, None] - sx) ** 2 + (qy[sl, None] - sy) ** 2
        best[sl] = np.argmin(d2, axis=1)
    th0 = best * h
    th = th0.copy()
    ok = np.zeros(qx.shape[0], dtype=bool)
    failed = np.zeros(qx.shape[0], dtype=bool)
    for _ in range(max_newton):
        act = ~(ok | failed)
        if not act.any():
            break
        px, py, dx, dy, ddx, ddy = _curve_eval_numpy(th[act], ax, bx, ay, by)
        rx, ry = px - qx[act], py - qy[act]
        g = rx * dx + ry * dy
        gp = dx * dx + dy * dy + rx * ddx + ry * ddy
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(gp > 0.0, g / gp, 0.0)
        new = th[act] - step
        bad = (gp <= 0.0) | (np.abs(new - th0[act]) > 2.0 * h)
        conv = ~bad & (np.abs(step) <= 1e-12)
        th[act] = np.where(bad, th[act], new)
        ok[np.flatnonzero(act)[conv]] = True
        failed[np.flatnonzero(act)[bad]] = True
    failed |= ~ok
    status = failed.astype(np.int64)
    for i in np.flatnonzero(failed):
        th[i] = _golden_numpy(th0[i] - h, th0[i] + h, qx[i], qy[i], ax, bx, ay, by)
    th = np.mod(th, 2.0 * np.pi)
    px, py, dx, dy = _curve_eval_numpy(th, ax, bx, ay, by)[:4]
    dist = ((qx - px) * dy - (qy - py) * dx) / np.hypot(dx, dy)
    return th, dist, status


def _golden_numpy(a, b, q0, q1, ax, bx, ay, by):
    def evaluate(t):
        return [v[0] for v in _curve_eval_numpy(np.array([t]), ax, bx, ay, by)]

    def f(t):
        px, py = evaluate(t)[:2]
        return (px - q0) ** 2 + (py - q1) ** 2

    def g(t):
        px, py, dx, dy = evaluate(t)[:4]
        return (px - q0) * dx + (py - q1) * dy

    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > 1e-6:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    if g(a) > 0.0 or g(b) < 0.0:
        return 0.5 * (a + b)
    for _ in range(80):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        if g(m) < 0.0:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# discrete Fourier transforms (forward, unnormalized)
# ---------------------------------------------------------------------------

@njit
def fft_radix2_jit(x):
    n = x.shape[0]
    out = x.astype(np.complex128)
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            tmp = out[i]
            out[i] = out[j]
            out[j] = tmp
    size = 2
    while size <= n:
        half = size // 2
        for k in range(half):
            ang = -2.0 * math.pi * k / size
            tw = complex(math.cos(ang), math.sin(ang))
            for start in range(0, n, size):
                u = out[start + k]
                v = out[start + k + half] * tw
                out[start + k] = u + v
                out[start + k + half] = u - v
        size *= 2
    return out


def fft_radix2_numpy(x):
    x = np.asarray(x, dtype=complex)
    n = x.shape[0]
    nmin = min(n, 16)
    k = np.arange(nmin)
    dft = np.exp(-2j * np.pi * np.outer(k, k) / nmin)
    out = dft @ x.reshape(nmin, -1)
    while out.shape[0] < n:
        half = out.shape[1] // 2
        even, odd = out[:, :half], out[:, half:]
        tw = np.exp(-1j * np.pi * np.arange(out.shape[0]) / out.shape[0])[:, None]
        out = np.vstack([even + tw * odd, even - tw * odd])
    return out.ravel()


@njit
def dft_direct_jit(x):
    n = x.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    for k in range(n):
        acc = 0.0 + 0.0j
        for j in range(n):
            ang = -2.0 * math.pi * ((k * j) % n) / n
            acc += x[j] * complex(math.cos(ang), math.sin(ang))
        out[k] = acc
    return out


def dft_direct_numpy(x):
    x = np.asarray(x, dtype=complex)
    n = x.shape[0]
    j = np.arange(n)
    out = np.empty(n, dtype=complex)
    block = max(1, 2**22 // max(n, 1))
    for start in range(0, n, block):
        k = np.arange(start, min(n, start + block))
        out[k] = np.exp(-2j * np.pi * (np.outer(k, j) % n) / n) @ x
    return out


# ---------------------------------------------------------------------------
# piecewise Chebyshev evaluation (Clenshaw per panel)
# ---------------------------------------------------------------------------

@njit
def panel_eval_jit(x, edges, coef):
    npan = coef.shape[0]
    k = coef.shape[1]
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        p = np.searchsorted(edges, x[i], side="right") - 1
        if p < 0:
            p = 0
        elif p >= npan:
            p = npan - 1
        a = edges[p]
        b = edges[p + 1]
        u = (2.0 * x[i] - a - b) / (b - a)
        b1 = 0.0
        b2 = 0.0
        for m in range(k - 1, 0, -1):
            t = 2.0 * u * b1 - b2 + coef[p, m]
            b2 = b1
            b1 = t
        out[i] = u * b1 - b2 + coef[p, 0]
    return out


def panel_eval_numpy(x, edges, coef):
    x = np.asarray(x, dtype=float)
    p = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, coef.shape[0] - 1)
    a, b = edges[p], edges[p + 1]
    u = (2.0 * x - a - b) / (b - a)
    c = coef[p]
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for m in range(coef.shape[1] - 1, 0, -1):
        b1, b2 = 2.0 * u * b1 - b2 + c[:, m], b1
    return u * b1 - b2 + c[:, 0]


if USE_NUMBA:
    shrink_inverse = shrink_inverse_jit
    project_points = project_points_jit
    fft_radix2 = fft_radix2_jit
    dft_direct = dft_direct_jit
    panel_eval = panel_eval_jit
else:
    shrink_inverse = shrink_inverse_numpy
    project_points = project_points_numpy
    fft_radix2 = fft_radix2_numpy
    dft_direct = dft_direct_numpy
    panel_eval = panel_eval_numpy
