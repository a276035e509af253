"""Nodes, weights and condition numbers of the finite-order extension formula.

An extension of order ``n`` with reach ``a`` uses nodes ``0 = t_0 < ... < t_n = a``
and weights solving the moment system ``sum_j w_j t_j**i = (-1)**i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class DegenerateNodesError(ValueError):
    """Raised when a node set has repeated entries or is not increasing."""


class IllConditionedError(ArithmeticError):
    """Raised when the Vandermonde oracle cannot be solved in double precision."""


def chebyshev_T(n: int, x):
    """Chebyshev polynomial of the first kind of degree ``n``.

    Uses ``cos(n arccos x)`` inside ``[-1, 1]`` and the closed algebraic form
    ``((x - sqrt(x^2-1))^n + (x + sqrt(x^2-1))^n) / 2`` outside; both agree at
    ``|x| = 1``. Accepts scalars or arrays.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    inner = np.abs(x) < 1.0
    out[inner] = np.cos(n * np.arccos(x[inner]))
    xo = x[~inner]
    r = np.sqrt(xo * xo - 1.0)
    out[~inner] = 0.5 * ((xo - r) ** n + (xo + r) ** n)
    return out[()] if out.ndim == 0 else out


def _check_nodes(nodes) -> np.ndarray:
    t = np.asarray(nodes, dtype=float).ravel()
    if t.size == 0:
        raise DegenerateNodesError("degenerate node set: empty")
    if t.size > 1 and np.any(np.diff(t) <= 0.0):
        raise DegenerateNodesError("degenerate node set: nodes must be distinct and strictly increasing")
    return t


def moment_rhs(n: int) -> np.ndarray:
    """Right-hand side ``((-1)**i)_{i=0..n}`` of the moment system."""
    return (-1.0) ** np.arange(n + 1)


def _bjorck_pereyra(t: np.ndarray, b: np.ndarray) -> np.ndarray:
    # elimination in Newton form for sum_j x_j t_j**i = b_i
    n = t.size - 1
    x = b.copy()
    for k in range(n):
        x[k + 1:] -= t[k] * x[k:n]
    for k in range(n - 1, -1, -1):
        x[k + 1:] /= t[k + 1:] - t[: n - k]
        x[k:n] -= x[k + 1:].copy()
    return x


def solve_vandermonde(nodes, rhs, method: str = "bjorck-pereyra") -> np.ndarray:
    """Solve the moment system ``sum_j w_j t_j**i = rhs_i`` directly.

    This is the oracle route for the closed-form weights. ``method`` selects
    Bjorck-Pereyra elimination (default; componentwise accurate for
    increasing nonnegative nodes and sign-alternating ``rhs``) or ``"lu"``,
    dense LU with partial pivoting on the transposed Vandermonde matrix.

    Raises
    ------
    DegenerateNodesError
        If the nodes repeat or are not increasing.
    IllConditionedError
        If the system is numerically singular.
    """
    t = _check_nodes(nodes)
    c = np.asarray(rhs, dtype=float).ravel()
    if c.shape != t.shape:
        raise ValueError("rhs must have one entry per node")
    if method == "lu":
        A = np.vander(t, increasing=True).T
        with np.errstate(all="ignore"):
            cond = np.linalg.cond(A, p=1)
        if not np.isfinite(cond) or cond * np.finfo(float).eps >= 1.0:
            raise IllConditionedError("ill-conditioned beyond solvable range (cond_1 = %.3g)" % cond)
        return np.linalg.solve(A, c)
    if method != "bjorck-pereyra":
        raise ValueError("unknown method %r" % method)
    with np.errstate(over="ignore", invalid="ignore"):
        w = _bjorck_pereyra(t, c)
    if not np.all(np.isfinite(w)):
        raise IllConditionedError("ill-conditioned beyond solvable range")
    return w


def lagrange_weights(nodes) -> np.ndarray:
    """Weights ``w_i = l_i(-1)``, the Lagrange basis at ``-1``, by the product formula."""
    t = _check_nodes(nodes)
    n1 = t.size
    w = np.empty(n1)
    for i in range(n1):
        num = 1.0 + np.delete(t, i)
        den = np.abs(t[i] - np.delete(t, i))
        w[i] = (-1.0) ** i * np.prod(num / den)
    return w


def chebyshev_nodes(n: int, a: float) -> np.ndarray:
    """Second-kind Chebyshev points mapped to ``[0, a]``; endpoints are exact."""
    if a <= 0.0:
        raise ValueError("reach a must be positive")
    if n == 0:
        return np.zeros(1)
    if n < 0:
        raise ValueError("order n must be nonnegative")
    # (a/2)(1 - cos(i pi/n)) written as a sin^2 to avoid cancellation near 0
    t = a * np.sin(np.arange(n + 1) * np.pi / (2 * n)) ** 2
    t[0], t[-1] = 0.0, a
    return t


def _optimal_constant(n: int, a: float) -> float:
    x0 = 1.0 + 2.0 / a
    r = math.sqrt(x0 * x0 - 1.0)
    return (1.0 + a) / r * ((x0 + r) ** n - (x0 - r) ** n)


def optimal_weights(n: int, a: float) -> np.ndarray:
    """Closed-form weights for the Chebyshev nodes of :func:`chebyshev_nodes`."""
    if n < 1 or a <= 0.0:
        raise ValueError("need n >= 1 and a > 0")
    t = chebyshev_nodes(n, a)
    denom = np.full(n + 1, n * a) * (1.0 + t)
    denom[0] *= 2.0
    denom[-1] *= 2.0
    return (-1.0) ** np.arange(n + 1) * _optimal_constant(n, a) / denom


def condition_number(n: int, a: float) -> float:
    """Intrinsic l1 condition number ``T_n(1 + 2/a)`` of the optimal scheme."""
    if a <= 0.0:
        raise ValueError("reach a must be positive")
    return float(chebyshev_T(n, 1.0 + 2.0 / a))


@dataclass(frozen=True)
class ExtensionScheme:
    n: int
    a: float
    t: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    cond: float

    def moment_residual(self, scaled: bool = True) -> float:
        """Largest violation of the moment conditions, relative to ``cond``.

        With ``scaled`` row ``i`` is divided by ``max(1, a)**i``, the size of
        its largest term, so the result measures the weights and not the
        rounding of ``t**i``; for ``a <= 1`` both forms coincide.
        """
        V = np.vander(self.t, increasing=True).T
        res = np.abs(V @ self.w - moment_rhs(self.n))
        if scaled:
            res = res / max(1.0, self.a) ** np.arange(self.n + 1)
        return float(np.max(res) / self.cond)


def make_scheme(n: int, a: float, nodes=None) -> ExtensionScheme:
    """Build an :class:`ExtensionScheme`.

    Without ``nodes`` the optimal Chebyshev nodes and closed-form weights are
    used. Explicit ``nodes`` must be strictly increasing inside ``[0, a]`` and
    get Lagrange weights.
    """
    if a <= 0.0:
        raise ValueError("reach a must be positive")
    if nodes is None:
        if n == 0:
            t, w = np.zeros(1), np.ones(1)
        else:
            t, w = chebyshev_nodes(n, a), optimal_weights(n, a)
    else:
        t = _check_nodes(nodes)
        if t.size != n + 1:
            raise ValueError("expected %d nodes for order %d, got %d" % (n + 1, n, t.size))
        if t[0] < 0.0 or t[-1] > a:
            raise ValueError("nodes must lie in [0, a]")
        w = lagrange_weights(t)
    t.setflags(write=False)
    w.setflags(write=False)
    return ExtensionScheme(n=n, a=float(a), t=t, w=w, cond=float(np.sum(np.abs(w))))
