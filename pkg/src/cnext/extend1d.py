"""One-dimensional extension from ``[0, L]`` to ``[-M, 0]``.

The production formula is

    E[f](x) = ( sum_i w_i f(t_i xi) phi_l(t_i xi) ) * phi_g(|x|),   x < 0,

with ``xi = |x|`` for the plain scheme and ``xi = S psi(|x| / S)`` when a
shrinking map ``psi`` is configured (``S`` is ``shrink_scale``; ``S = 1``
applies ``psi`` to the normal coordinate itself).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .extension_core import ExtensionScheme
from .stabilizers import ShrinkMap, WindowSpec

_SLACK = 1e-13


class ReachError(ValueError):
    """A sample argument of the extension left the source interval."""


def evaluate(f: Callable, x: np.ndarray) -> np.ndarray:
    """Call ``f`` on an array, falling back to elementwise calls for scalar-only callables."""
    x = np.asarray(x, dtype=float)
    try:
        out = np.asarray(f(x), dtype=float)
        if out.shape == x.shape:
            return out
        if out.ndim == 0:
            return np.full(x.shape, float(out))
    except (TypeError, ValueError):
        pass
    return np.vectorize(lambda v: float(f(v)), otypes=[float])(x)


@dataclass(frozen=True)
class Extension1DConfig:
    scheme: ExtensionScheme
    local_window: Optional[WindowSpec] = None
    global_window: Optional[WindowSpec] = None
    shrink: Optional[ShrinkMap] = None
    shrink_scale: float = 1.0
    L: float = 0.5
    M: float = 0.25

    def __post_init__(self):
        if self.L <= 0.0 or self.M <= 0.0:
            raise ValueError("source length L and extension length M must be positive")
        if self.shrink is not None and self.M > self.shrink_scale:
            raise ValueError("shrink needs M <= shrink_scale (psi is defined on [0, 1])")
        reach = self.max_sample_argument()
        if reach > self.L * (1.0 + _SLACK):
            raise ReachError(
                "extension reach exceeds source interval: a*M = %.17g > L = %.17g "
                "(need a*M <= L, or a shrinking map)" % (reach, self.L)
            )

    def normal_coordinate(self, depth):
        """Map extension depth ``|x|`` to the coordinate fed to the nodes."""
        depth = np.asarray(depth, dtype=float)
        if self.shrink is None:
            return depth
        S = self.shrink_scale
        return S * np.asarray(self.shrink(np.clip(depth / S, 0.0, 1.0)))

    def max_sample_argument(self) -> float:
        return float(self.scheme.t[-1] * self.normal_coordinate(self.M))


def extend_values(f: Callable, cfg: Extension1DConfig, x) -> np.ndarray:
    """Vectorized :func:`extend_point` for ``x`` in ``[-M, 0]``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x > 0.0) or np.any(x < -cfg.M * (1.0 + _SLACK)):
        raise ValueError("extension points must lie in [-M, 0] = [%g, 0]" % -cfg.M)
    depth = -x
    xi = cfg.normal_coordinate(depth)
    args = np.multiply.outer(xi, cfg.scheme.t)
    bad = (args < 0.0) | (args > cfg.L * (1.0 + _SLACK))
    if np.any(bad):
        raise ReachError("extension reach exceeds source interval: sample argument %.17g outside [0, %g]"
                         % (args[bad][0], cfg.L))
    vals = evaluate(f, args)
    if cfg.local_window is not None:
        vals = vals * cfg.local_window(args)
    out = vals @ cfg.scheme.w
    # x = 0 is taken from the source side; both branches agree there
    zero = depth == 0.0
    if np.any(zero):
        out[zero] = evaluate(f, np.zeros(1))[0]
    if cfg.global_window is not None:
        out = out * cfg.global_window(depth)
    return out


def extend_point(f: Callable, cfg: Extension1DConfig, x: float) -> float:
    """Extended value at a single point ``x`` in ``[-M, 0]``."""
    return float(extend_values(f, cfg, [x])[0])


def extend_profile(f: Callable, cfg: Extension1DConfig, grid, window_source: bool = False) -> np.ndarray:
    """Values on a grid in ``[-M, L]``: ``f`` on the source side, ``E[f]`` outside.

    With ``window_source`` the source side is multiplied by the global window,
    which is how the spectral profile is built.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any(grid > cfg.L * (1.0 + _SLACK)):
        raise ValueError("grid extends past the source interval [0, %g]" % cfg.L)
    out = np.empty_like(grid)
    neg = grid < 0.0
    if np.any(neg):
        out[neg] = extend_values(f, cfg, grid[neg])
    pos = ~neg
    if np.any(pos):
        vals = evaluate(f, grid[pos])
        if window_source and cfg.global_window is not None:
            vals = vals * cfg.global_window(grid[pos])
        out[pos] = vals
    return out


def kappa(f: Callable, cfg: Extension1DConfig, probe_count: int = 1000, max_probes: int = 2**19) -> float:
    """Ratio of sup-norms ``max|E[f]|`` on ``[-M, 0]`` over ``max|f|`` on ``[0, L]``.

    The uniform probe is doubled until the ratio is stable to three
    significant digits.
    """
    if probe_count < 1000:
        raise ValueError("probe_count must be at least 1000")
    prev = None
    count = probe_count
    while True:
        ext = np.max(np.abs(extend_values(f, cfg, np.linspace(-cfg.M, 0.0, count + 1))))
        src = np.max(np.abs(evaluate(f, np.linspace(0.0, cfg.L, count + 1))))
        if src == 0.0:
            raise ZeroDivisionError("undefined ratio: f vanishes on the source interval")
        ratio = ext / src
        if prev is not None and abs(ratio - prev) <= 5e-4 * abs(ratio):
            return float(ratio)
        if count >= max_probes:
            return float(ratio)
        prev = ratio
        count *= 2
