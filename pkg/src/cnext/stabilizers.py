"""Shrinking map and window function used to stabilize the extension."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import erfc

from . import kernels


@dataclass(frozen=True)
class WindowSpec:
    """Roll-off from 1 (at ``r0`` and below) to 0 (at ``r1`` and above)."""

    r0: float
    r1: float

    def __post_init__(self):
        if not (0.0 <= self.r0 < self.r1):
            raise ValueError("window needs 0 <= r0 < r1, got r0=%r r1=%r" % (self.r0, self.r1))

    def __call__(self, x):
        return window(x, self)


def window(x, spec: WindowSpec):
    """Evaluate the erfc/arcsin window at ``x``.

    Inside ``(r0, r1)`` the value is ``erfc((12/pi) * arcsin(u)) / 2`` with
    ``u = (x - (r0 + r1)/2) / ((r1 - r0)/2)``, so that ``u`` sweeps ``(-1, 1)``
    and the seams mismatch the plateaus only by ``erfc(6)/2 ~ 1e-17``.
    ``erfc`` is the standard one, ``erfc(-inf) = 2``.
    """
    x = np.asarray(x, dtype=float)
    out = np.where(x <= spec.r0, 1.0, 0.0)
    mid = (x > spec.r0) & (x < spec.r1)
    if np.any(mid):
        u = (x[mid] - 0.5 * (spec.r0 + spec.r1)) / (0.5 * (spec.r1 - spec.r0))
        out[mid] = 0.5 * erfc((12.0 / np.pi) * np.arcsin(np.clip(u, -1.0, 1.0)))
    return out[()] if out.ndim == 0 else out


def shrink_forward(x, delta: float, n: int):
    """``s(x) = x + (x/delta)**(n+1) * (1 - delta)`` on ``[0, delta]``."""
    _check_delta(delta)
    x = np.asarray(x, dtype=float)
    if np.any((x < 0.0) | (x > delta)):
        raise ValueError("shrink_forward is defined on [0, delta] = [0, %g]" % delta)
    out = x + (x / delta) ** (n + 1) * (1.0 - delta)
    return out[()] if out.ndim == 0 else out


def shrink_psi(x, delta: float, n: int):
    """Inverse of :func:`shrink_forward`, mapping ``[0, 1]`` onto ``[0, delta]``.

    Secant iteration on the bracket ``[0, min(delta, x)]`` (``s(y) >= y``)
    with a bisection safeguard; the result satisfies ``|s(y) - x| <= 1e-14 x``
    or is the bracket midpoint at machine resolution.
    """
    _check_delta(delta)
    x = np.asarray(x, dtype=float)
    if np.any((x < 0.0) | (x > 1.0)):
        raise ValueError("shrink_psi is defined on [0, 1]")
    out = kernels.shrink_inverse(np.ascontiguousarray(x.ravel()), float(delta), int(n)).reshape(x.shape)
    return out[()] if out.ndim == 0 else out


def _check_delta(delta):
    if not (0.0 < delta <= 1.0):
        raise ValueError("delta must lie in (0, 1], got %r" % delta)


@dataclass(frozen=True)
class ShrinkMap:
    """The shrinking function ``psi = s^{-1}`` with an optional lookup table.

    ``table`` is a :class:`~cnext.diagnostics.PanelSet` approximating ``psi``
    on ``[0, 1]``; when present, evaluation goes through it instead of the
    root finder.
    """

    delta: float
    n: int
    table: Optional[object] = None

    def __post_init__(self):
        _check_delta(self.delta)

    def __call__(self, x):
        if self.table is None:
            return shrink_psi(x, self.delta, self.n)
        x = np.asarray(x, dtype=float)
        if np.any((x < 0.0) | (x > 1.0)):
            raise ValueError("shrink map is defined on [0, 1]")
        out = np.clip(self.table(x), 0.0, self.delta)
        out = np.where(x == 0.0, 0.0, np.where(x == 1.0, self.delta, out))
        return out[()] if out.ndim == 0 else out


def build_shrink_table(delta: float, n: int, tol: float = 1e-12, k: int = 16) -> ShrinkMap:
    """Precompute a piecewise Chebyshev table for ``psi`` accurate to ``tol``."""
    from .diagnostics import adaptive_chunks

    if tol < 1e-14:
        raise ValueError("tolerance below root-finder accuracy (1e-14)")
    # tail criterion is relative to the largest coefficient (about delta/2);
    # a factor 10 margin turns it into an absolute bound on the values
    rel = 0.1 * tol / delta
    panels = adaptive_chunks(lambda x: shrink_psi(x, delta, n), 0.0, 1.0, k=k, tol=rel)
    return ShrinkMap(delta=delta, n=n, table=panels)
