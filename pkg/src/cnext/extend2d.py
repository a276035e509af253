"""Extension along boundary normals for smooth planar domains.

A point ``q`` outside ``D`` near the boundary is written as ``q = y + x n_y``
with ``y`` its closest boundary point and ``x > 0`` the normal distance; the
extended value is ``sum_j w_j f(y - t_j x n_y)``, optionally rolled off by a
window in ``x``.

Boundaries are closed trigonometric polynomials
``p(th) = sum_m a_m cos(m th) + b_m sin(m th)`` (per coordinate), which covers
circles, ellipses and star shapes exactly and trigonometric interpolants of
sampled boundary points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .diagnostics import dft, one_sided_derivative
from .extension_core import ExtensionScheme
from .stabilizers import WindowSpec


class DegenerateCurveError(ValueError):
    pass


class SampleOutsideDomainError(ValueError):
    """An extension sample ``y - t_j x n_y`` left the closure of the domain."""


@dataclass(frozen=True)
class ParametricCurve:
    """Counterclockwise closed curve given by Fourier coefficients.

    ``ax, bx`` are the cosine and sine coefficients of the x coordinate,
    ``ay, by`` those of the y coordinate, indexed by mode ``m = 0 .. M``.
    """

    ax: np.ndarray = field(repr=False)
    bx: np.ndarray = field(repr=False)
    ay: np.ndarray = field(repr=False)
    by: np.ndarray = field(repr=False)
    name: str = "curve"

    def __post_init__(self):
        arrs = [np.ascontiguousarray(np.asarray(v, dtype=float)) for v in (self.ax, self.bx, self.ay, self.by)]
        size = max(a.size for a in arrs)
        arrs = [np.pad(a, (0, size - a.size)) for a in arrs]
        for a in arrs:
            a.setflags(write=False)
        for key, a in zip(("ax", "bx", "ay", "by"), arrs):
            object.__setattr__(self, key, a)
        th = np.linspace(0.0, 2.0 * np.pi, 1024, endpoint=False)
        speed = np.hypot(*self.tangent(th))
        if not np.all(speed > 1e-12 * max(1.0, float(np.max(speed)))):
            raise DegenerateCurveError("degenerate parametrization: |p'(theta)| vanishes")

    # -- constructors -------------------------------------------------------

    @classmethod
    def circle(cls, radius: float = 1.0, center=(0.0, 0.0)):
        return cls([center[0], radius], [0.0, 0.0], [center[1], 0.0], [0.0, radius], name="circle")

    @classmethod
    def ellipse(cls, a: float = 2.0, b: float = 1.0, center=(0.0, 0.0)):
        return cls([center[0], a], [0.0, 0.0], [center[1], 0.0], [0.0, b], name="ellipse")

    @classmethod
    def star(cls, radius: float = 1.0, eps: float = 0.2, k: int = 5, center=(0.0, 0.0)):
        """``r(th) = radius (1 + eps cos(k th))`` around ``center``."""
        if k < 1:
            raise ValueError("star needs k >= 1")
        M = k + 1
        ax, bx, ay, by = (np.zeros(M + 1) for _ in range(4))
        ax[0], ay[0] = center
        ax[1] += radius
        by[1] += radius
        h = 0.5 * radius * eps
        # cos(k th) cos(th) and cos(k th) sin(th) as sums of single modes
        ax[k + 1] += h
        ax[abs(k - 1)] += h
        by[k + 1] += h
        by[abs(k - 1)] -= h if k > 1 else 0.0
        return cls(ax, bx, ay, by, name="star")

    @classmethod
    def from_samples(cls, points):
        """Trigonometric interpolant of ``N`` boundary points (``N`` a power of two).

        Points are uniformly spaced in the curve parameter. Clockwise input is
        reversed so the normal points outward.
        """
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("expected an (N, 2) array of boundary points")
        N = pts.shape[0]
        if N < 8 or N & (N - 1):
            raise ValueError("boundary sample count must be a power of two >= 8, got %d" % N)
        coeffs = []
        for col in (pts[:, 0], pts[:, 1]):
            X = dft(col) / N
            a = np.empty(N // 2 + 1)
            b = np.zeros(N // 2 + 1)
            a[0] = X[0].real
            a[1:N // 2] = 2.0 * X[1:N // 2].real
            b[1:N // 2] = -2.0 * X[1:N // 2].imag
            # the Nyquist mode is split evenly and contributes only a cosine
            a[N // 2] = X[N // 2].real
            coeffs += [a, b]
        ax, bx, ay, by = coeffs
        x = pts[:, 0]
        y = pts[:, 1]
        area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        if area < 0.0:
            bx, by = -bx, -by
        return cls(ax, bx, ay, by, name="samples")

    # -- geometry -------------------------------------------------------------

    def _eval(self, theta):
        th = np.atleast_1d(np.asarray(theta, dtype=float))
        return kernels._curve_eval_numpy(th, self.ax, self.bx, self.ay, self.by)

    def position(self, theta):
        px, py = self._eval(theta)[:2]
        return px, py

    def tangent(self, theta):
        dx, dy = self._eval(theta)[2:4]
        return dx, dy

    def normal(self, theta):
        """Outward unit normal (tangent rotated clockwise)."""
        dx, dy = self.tangent(theta)
        s = np.hypot(dx, dy)
        return dy / s, -dx / s

    def curvature(self, theta):
        """Signed curvature; positive where the curve is convex."""
        _, _, dx, dy, ddx, ddy = self._eval(theta)
        return (dx * ddy - dy * ddx) / np.hypot(dx, dy) ** 3

    def max_curvature(self, samples: int = 1024) -> float:
        th = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
        return float(np.max(np.abs(self.curvature(th))))

    def default_reach(self) -> float:
        return 0.5 / self.max_curvature()

    @property
    def modes(self) -> int:
        return self.ax.size - 1

    def rotated(self, angle: float):
        c, s = np.cos(angle), np.sin(angle)
        return ParametricCurve(c * self.ax - s * self.ay, c * self.bx - s * self.by,
                               s * self.ax + c * self.ay, s * self.bx + c * self.by, name=self.name)

    def contains(self, qx, qy):
        """Inside-or-on test via the sign of the normal distance."""
        return project(self, qx, qy)[1] <= 0.0


@dataclass(frozen=True)
class TubeCoordinates:
    theta: float
    x: float
    valid: bool


def _scan_count(curve: ParametricCurve) -> int:
    return max(256, 16 * curve.modes)


def project(curve: ParametricCurve, qx, qy):
    """Closest-point parameters and signed normal distances for many points.

    A global coarse scan picks the nearest of at least 256 boundary samples;
    Newton iteration on ``(q - p(th)) . p'(th) = 0`` then polishes it, with a
    bracketed golden-section/bisection fallback. Returns ``(theta, x)`` with
    ``x > 0`` outside the domain.
    """
    qx = np.ascontiguousarray(np.asarray(qx, dtype=float).ravel())
    qy = np.ascontiguousarray(np.asarray(qy, dtype=float).ravel())
    th, dist, _ = kernels.project_points(qx, qy, curve.ax, curve.bx, curve.ay, curve.by, _scan_count(curve))
    return th, dist


def tube_project(curve: ParametricCurve, q, reach: float) -> TubeCoordinates:
    """Tube chart ``(theta, x)`` of a single point ``q``.

    ``valid`` is false when ``|x| >= reach``. ``reach`` must stay below the
    radius of curvature, otherwise the chart is not one-to-one.
    """
    _check_reach(curve, reach)
    th, d = project(curve, [q[0]], [q[1]])
    return TubeCoordinates(theta=float(th[0]), x=float(d[0]), valid=bool(abs(d[0]) < reach))


def _check_reach(curve: ParametricCurve, reach: float):
    kmax = curve.max_curvature()
    if reach <= 0.0 or reach * kmax >= 1.0:
        raise ValueError("reach %.6g must be positive and below 1/max|curvature| = %.6g; suggested reach %.6g"
                         % (reach, 1.0 / kmax, 0.5 / kmax))


def _evaluate2(f: Callable, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    try:
        out = np.asarray(f(x, y), dtype=float)
        if out.shape == x.shape:
            return out
        if out.ndim == 0:
            return np.full(x.shape, float(out))
    except (TypeError, ValueError):
        pass
    return np.vectorize(lambda a, b: float(f(a, b)), otypes=[float])(x, y)


def extend_field(f: Callable, curve: ParametricCurve, scheme: ExtensionScheme, reach: Optional[float] = None,
                 window: Optional[WindowSpec] = None, X=None, Y=None, check_samples: bool = True):
    """Extend ``f(x, y)`` from the closed domain to the points ``(X, Y)``.

    Inside the domain the value is ``f`` itself; in the outer tube of width
    ``reach`` it is the normal extension times ``window(x)``; beyond it, zero.

    Raises
    ------
    SampleOutsideDomainError
        If a sample point ``y - t_j x n_y`` falls outside the domain, which
        means ``scheme.a * reach`` is too large for the curve.
    """
    if reach is None:
        reach = curve.default_reach()
    _check_reach(curve, reach)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    shape = np.broadcast(X, Y).shape
    qx = np.broadcast_to(X, shape).ravel()
    qy = np.broadcast_to(Y, shape).ravel()
    th, d = project(curve, qx, qy)
    out = np.zeros(qx.size)
    inside = d <= 0.0
    if np.any(inside):
        out[inside] = _evaluate2(f, qx[inside], qy[inside])
    tube = ~inside & (d <= reach)
    if np.any(tube):
        out[tube] = _extend_tube(f, curve, scheme, th[tube], d[tube], window, check_samples, qx[tube], qy[tube])
    return out.reshape(shape)


def _extend_tube(f, curve, scheme, th, d, window, check_samples, qx, qy):
    px, py = curve.position(th)
    nx, ny = curve.normal(th)
    depth = np.multiply.outer(d, scheme.t)
    sx = px[:, None] - depth * nx[:, None]
    sy = py[:, None] - depth * ny[:, None]
    if check_samples:
        _, sd = project(curve, sx.ravel(), sy.ravel())
        scale = max(1.0, float(np.max(np.abs(curve.ax[1:])) + np.max(np.abs(curve.by[1:]))))
        bad = sd.reshape(sx.shape) > 1e-10 * scale
        if np.any(bad):
            i = int(np.flatnonzero(bad.any(axis=1))[0])
            raise SampleOutsideDomainError(
                "extension sample leaves the domain for grid point (%.17g, %.17g); reduce reach or scheme.a"
                % (qx[i], qy[i]))
    vals = _evaluate2(f, sx, sy) @ scheme.w
    if window is not None:
        vals = vals * window(d)
    return vals


def mismatch_steps(scheme: ExtensionScheme, reach: float, window: Optional[WindowSpec] = None,
                   accuracy: int = 4, hmax: float = 1e-2):
    """Step sweep whose widest stencil stays where the window equals one."""
    plateau = window.r0 if window is not None and window.r0 > 0.0 else reach
    h = min(hmax, plateau / (scheme.n + accuracy - 1))
    return (h, 0.5 * h, 0.25 * h)


def boundary_mismatch(f: Callable, curve: ParametricCurve, scheme: ExtensionScheme, reach: Optional[float] = None,
                      window: Optional[WindowSpec] = None, thetas=None, steps=None, accuracy: int = 4,
                      max_order: Optional[int] = None):
    """Jumps of normal derivatives of order ``0 .. scheme.n`` across the boundary.

    At each boundary parameter the extended field is sampled along the normal
    line on both sides, one-sided finite differences of every order are
    formed, and the difference is normalized by ``max(1, |source derivative|)``.
    The smallest value over the step sweep is kept, so the result is the FD
    estimate at its best step. By default the steps come from
    :func:`mismatch_steps`. Orders run to ``max_order`` (default
    ``scheme.n``). Returns an array ``(len(thetas), max_order + 1)``.
    """
    if reach is None:
        reach = curve.default_reach()
    if max_order is None:
        max_order = scheme.n
    if steps is None:
        steps = mismatch_steps(scheme, reach, window, accuracy)
    if thetas is None:
        thetas = np.linspace(0.0, 2.0 * np.pi, 20, endpoint=False)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    px, py = curve.position(thetas)
    nx, ny = curve.normal(thetas)
    out = np.full((thetas.size, max_order + 1), np.inf)
    for i in range(thetas.size):
        def along(s, i=i):
            s = np.asarray(s, dtype=float)
            return extend_field(f, curve, scheme, reach, window, px[i] + s * nx[i], py[i] + s * ny[i])

        def source(s, i=i):
            s = np.asarray(s, dtype=float)
            return _evaluate2(f, px[i] + s * nx[i], py[i] + s * ny[i])

        for h in steps:
            for k in range(max_order + 1):
                ext = one_sided_derivative(along, 0.0, k, h, +1, accuracy)
                src = one_sided_derivative(source, 0.0, k, h, -1, accuracy)
                out[i, k] = min(out[i, k], abs(ext - src) / max(1.0, abs(src)))
    return out


def mismatch_thresholds(scheme: ExtensionScheme, steps=(1e-2, 5e-3, 2.5e-3), accuracy: int = 4,
                        fscale: float = 1.0) -> np.ndarray:
    """Finite-difference-consistent bounds for :func:`boundary_mismatch`.

    For order ``k`` the bound is ten times the rounding floor
    ``eps (1 + ||w||_1) fscale sum|c| / h**k`` at the largest step, plus the
    truncation allowance ``h**accuracy``.
    """
    from .diagnostics import _one_sided_weights

    h = max(steps)
    eps = np.finfo(float).eps
    out = np.empty(scheme.n + 1)
    for k in range(scheme.n + 1):
        s = np.sum(np.abs(_one_sided_weights(k, k + accuracy)))
        out[k] = 10.0 * eps * (1.0 + scheme.cond) * fscale * s / h ** k + h ** accuracy
    return out
