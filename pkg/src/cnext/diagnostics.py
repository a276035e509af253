"""Quality metrics for extended profiles.

* adaptive piecewise-Chebyshev chunking (the chunk count of a profile),
* one-sided DFT power spectra,
* the windowed spectral profile ``F`` and the chunking profile ``G``,
* one-sided finite-difference derivatives used for smoothness checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import kernels
from .extend1d import Extension1DConfig, evaluate, extend_profile, extend_values
from .extension_core import solve_vandermonde

# declared chunker parameters
CHUNK_K = 48
CHUNK_TOL = 1e-11


class UnresolvedError(RuntimeError):
    """Raised when adaptive refinement exceeds its depth limit."""


@lru_cache(maxsize=None)
def _cheb_setup(k: int):
    j = np.arange(k)
    pts = np.cos(np.pi * (j + 0.5) / k)
    T = np.cos(np.outer(np.arange(k), np.pi * (j + 0.5) / k)) * (2.0 / k)
    T[0] *= 0.5
    pts.setflags(write=False)
    T.setflags(write=False)
    return pts, T


def chebyshev_fit(g: Callable, lo: float, hi: float, k: int) -> np.ndarray:
    """Chebyshev coefficients of the degree ``k-1`` interpolant of ``g`` on ``[lo, hi]``.

    Samples sit at first-kind Chebyshev points; coefficients follow from the
    discrete cosine relation.
    """
    pts, T = _cheb_setup(k)
    x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * pts
    return T @ evaluate(g, x)


@dataclass(frozen=True)
class PanelSet:
    """Piecewise Chebyshev representation on ``[lo, hi]``.

    ``edges`` has one more entry than there are panels; ``coef[p]`` holds the
    ``k`` Chebyshev coefficients on ``[edges[p], edges[p+1]]``.
    """

    lo: float
    hi: float
    edges: np.ndarray = field(repr=False)
    coef: np.ndarray = field(repr=False)
    tol: float
    k: int

    def __len__(self):
        return self.coef.shape[0]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = kernels.panel_eval(np.ascontiguousarray(x.ravel()), self.edges, self.coef).reshape(x.shape)
        return out[()] if out.ndim == 0 else out

    @property
    def panels(self):
        return list(zip(self.edges[:-1].tolist(), self.edges[1:].tolist()))

    def tail(self) -> np.ndarray:
        """Largest of the last two coefficient magnitudes on each panel."""
        return np.max(np.abs(self.coef[:, -2:]), axis=1)


def adaptive_chunks(g: Callable, lo: float, hi: float, k: int = CHUNK_K, tol: float = CHUNK_TOL,
                    max_depth: int = 40, floor: float = 0.0) -> PanelSet:
    """Partition ``[lo, hi]`` by bisection until every panel is resolved.

    A panel is accepted once its last two Chebyshev coefficients are at most
    ``max(tol * scale, floor)``, where ``scale`` is the largest coefficient
    magnitude over the final panel set and ``floor`` is an absolute noise
    level below which ``g`` cannot be resolved.

    Raises
    ------
    UnresolvedError
        When a panel would need more than ``max_depth`` bisections.
    """
    if k < 8:
        raise ValueError("need at least 8 coefficients per panel")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if max_depth > 40:
        raise ValueError("max_depth is capped at 40")
    if not hi > lo:
        raise ValueError("empty interval")

    root = chebyshev_fit(g, lo, hi, k)
    scale = float(np.max(np.abs(root)))
    for _ in range(8):
        accepted = _refine(g, lo, hi, k, max(tol * scale, floor), max_depth, root)
        new_scale = max(float(np.max(np.abs(c))) for _, _, c in accepted)
        if new_scale <= scale:
            break
        scale = new_scale
    accepted.sort(key=lambda item: item[0])
    edges = np.array([a for a, _, _ in accepted] + [hi])
    edges[0] = lo
    coef = np.array([c for _, _, c in accepted])
    edges.setflags(write=False)
    coef.setflags(write=False)
    return PanelSet(lo=lo, hi=hi, edges=edges, coef=coef, tol=tol, k=k)


def _refine(g, lo, hi, k, threshold, max_depth, root):
    accepted = []
    stack = [(lo, hi, 0, root)]
    while stack:
        a, b, depth, c = stack.pop()
        if c is None:
            c = chebyshev_fit(g, a, b, k)
        if np.max(np.abs(c[-2:])) <= threshold:
            accepted.append((a, b, c))
            continue
        if depth >= max_depth:
            raise UnresolvedError("function not resolvable at tolerance near [%.17g, %.17g]" % (a, b))
        m = 0.5 * (a + b)
        stack.append((m, b, depth + 1, None))
        stack.append((a, m, depth + 1, None))
    return accepted


def interpolate_samples(x, y, k: int = 16) -> PanelSet:
    """Piecewise polynomial interpolant of sampled data ``(x, y)``.

    Consecutive groups of ``k`` samples (sharing endpoints) are interpolated
    by degree ``k-1`` polynomials stored in Chebyshev form.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape or x.size < 2:
        raise ValueError("need matching 1-D sample arrays")
    if np.any(np.diff(x) <= 0.0):
        raise ValueError("sample abscissae must be strictly increasing")
    k = min(k, x.size)
    starts = list(range(0, x.size - 1, k - 1))
    edges = [x[s] for s in starts] + [x[-1]]
    coefs = []
    for s, a, b in zip(starts, edges[:-1], edges[1:]):
        # the last group borrows samples from the left to keep k points
        s = min(s, x.size - k)
        u = (2.0 * x[s:s + k] - a - b) / (b - a)
        coefs.append(np.polynomial.chebyshev.chebfit(u, y[s:s + k], k - 1))
    return PanelSet(lo=float(x[0]), hi=float(x[-1]), edges=np.array(edges), coef=np.array(coefs), tol=0.0, k=k)


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumReport:
    """One-sided magnitude spectrum with forward normalization ``1/N``.

    ``magnitudes[k] = |sum_j x_j exp(-2 pi i j k / N)| / N`` for
    ``k = 0 .. N//2``; a unit cosine at bin ``m`` shows magnitude 1/2.
    """

    sample_count: int
    magnitudes: np.ndarray = field(repr=False)

    def total_power(self) -> float:
        """Sum of ``|X_k/N|^2`` over all ``N`` bins, reconstructed from one side."""
        wts = np.full(self.magnitudes.shape, 2.0)
        wts[0] = 1.0
        if self.sample_count % 2 == 0:
            wts[-1] = 1.0
        return float(np.sum(wts * self.magnitudes ** 2))

    def decay_bin(self, ratio: float) -> int:
        """First bin after which every magnitude stays below ``ratio * peak``."""
        above = np.flatnonzero(self.magnitudes >= ratio * np.max(self.magnitudes))
        return int(above[-1] + 1) if above.size else 0


def dft(samples) -> np.ndarray:
    """Unnormalized forward DFT: radix-2 for powers of two, direct sum otherwise."""
    x = np.ascontiguousarray(np.asarray(samples, dtype=complex).ravel())
    n = x.size
    if n == 0:
        raise ValueError("empty input")
    if n & (n - 1) == 0:
        return kernels.fft_radix2(x)
    return kernels.dft_direct(x)


def power_spectrum(samples) -> SpectrumReport:
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 2:
        raise ValueError("need at least two samples")
    X = dft(x) / x.size
    mags = np.abs(X[: x.size // 2 + 1])
    mags.setflags(write=False)
    return SpectrumReport(sample_count=x.size, magnitudes=mags)


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def source_sup(f: Callable, cfg: Extension1DConfig, count: int = 4001) -> float:
    return float(np.max(np.abs(evaluate(f, np.linspace(0.0, cfg.L, count)))))


def noise_level(f: Callable, cfg: Extension1DConfig) -> float:
    """Rounding floor of the extension sum, ``eps * ||w||_1 * max|f|``."""
    return float(np.finfo(float).eps * cfg.scheme.cond * source_sup(f, cfg))


def build_F_profile(f: Callable, cfg: Extension1DConfig, N: int = 4000):
    """Samples of the windowed profile on ``[-M, M)`` for spectral analysis.

    ``F = E[f]`` on ``[-M, 0]`` and ``f * phi_g`` on ``(0, M)``; the grid is
    periodic (``N`` points, right endpoint excluded). Returns ``(x, F)``.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    x = -cfg.M + 2.0 * cfg.M * np.arange(N) / N
    return x, extend_profile(f, cfg, x, window_source=True)


@dataclass(frozen=True)
class GProfile:
    """``G = E[f]`` on ``[-M, 0]`` and ``f`` on ``[0, L]``, as a callable."""

    f: Callable
    cfg: Extension1DConfig

    @property
    def interval(self):
        return (-self.cfg.M, self.cfg.L)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = extend_profile(self.f, self.cfg, x.ravel()).reshape(x.shape)
        return out[()] if out.ndim == 0 else out


def build_G_profile(f: Callable, cfg: Extension1DConfig) -> GProfile:
    return GProfile(f, cfg)


def count_chunks(f: Callable, cfg: Extension1DConfig, k: int = CHUNK_K, tol: float = CHUNK_TOL) -> PanelSet:
    """Chunk the G-profile of ``f`` with the extension's rounding floor."""
    G = build_G_profile(f, cfg)
    return adaptive_chunks(G, -cfg.M, cfg.L, k=k, tol=tol, floor=noise_level(f, cfg))


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _one_sided_weights(order: int, npts: int) -> np.ndarray:
    rhs = np.zeros(npts)
    rhs[order] = float(np.prod(np.arange(1, order + 1)))
    w = solve_vandermonde(np.arange(npts, dtype=float), rhs)
    w.setflags(write=False)
    return w


def one_sided_derivative(g: Callable, x0: float, order: int, h: float, side: int, accuracy: int = 4) -> float:
    """``order``-th derivative of ``g`` at ``x0`` from samples on one side only.

    ``side=+1`` samples ``x0, x0+h, ...``; ``side=-1`` samples ``x0, x0-h, ...``.
    The stencil has ``order + accuracy`` points and truncation error
    ``O(h**accuracy)``.
    """
    if side not in (-1, 1):
        raise ValueError("side must be +1 or -1")
    npts = order + accuracy
    w = _one_sided_weights(order, npts)
    vals = evaluate(g, x0 + side * h * np.arange(npts))
    return float(side ** order * (w @ vals) / h ** order)


def extension_jump(f: Callable, ext: Callable, order: int, h: float, accuracy: int = 4) -> float:
    """Difference of one-sided derivatives at 0: extension side minus source side."""
    left = one_sided_derivative(ext, 0.0, order, h, -1, accuracy)
    right = one_sided_derivative(f, 0.0, order, h, +1, accuracy)
    return left - right


def windowless_extension(f: Callable, cfg: Extension1DConfig) -> Callable:
    """``x -> E[f](x)`` for ``x <= 0`` ignoring both windows (for derivative checks)."""
    from dataclasses import replace

    plain = replace(cfg, local_window=None, global_window=None)
    return lambda x: extend_values(f, plain, np.atleast_1d(x))


def fd_noise_floor(order: int, h: float, accuracy: int = 4, cond: float = 1.0, fscale: float = 1.0) -> float:
    """Rounding floor of a one-sided FD derivative of an extension with l1 norm ``cond``."""
    s = float(np.sum(np.abs(_one_sided_weights(order, order + accuracy))))
    return float(np.finfo(float).eps * (1.0 + cond) * fscale * s / h ** order)


def derivative_jump_sweep(f: Callable, ext: Callable, order: int, steps, accuracy: int = 4,
                          cond: float = 1.0, fscale: float = 1.0):
    """Relative derivative jumps at 0 and their noise floors over a step sweep.

    Both are normalized by ``max(1, |source derivative|)``. Returns
    ``(errors, floors)``, one entry per step.
    """
    errs, floors = [], []
    for h in steps:
        src = one_sided_derivative(f, 0.0, order, h, +1, accuracy)
        ext_d = one_sided_derivative(ext, 0.0, order, h, -1, accuracy)
        scale = max(1.0, abs(src))
        errs.append(abs(ext_d - src) / scale)
        floors.append(fd_noise_floor(order, h, accuracy, cond, fscale) / scale)
    return np.array(errs), np.array(floors)


def fd_consistent(errors, floors, factor: float = 10.0, ratio: float = 0.75) -> bool:
    """True when errors shrink with the step until they reach the noise floor.

    ``errors`` and ``floors`` are ordered by decreasing step. Each step must
    either cut the error by ``ratio`` relative to the previous one or sit
    within ``factor`` times its floor.
    """
    e = np.asarray(errors, dtype=float)
    fl = factor * np.asarray(floors, dtype=float)
    return bool(np.all((e[1:] < ratio * e[:-1]) | (e[1:] <= fl[1:])))
