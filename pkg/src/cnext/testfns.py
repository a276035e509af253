"""Benchmark functions of increasing difficulty, defined on ``[0, 0.5]``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .extension_core import chebyshev_T


def bessel_j0(x):
    """Bessel function of the first kind of order zero (Cephes ``j0``)."""
    out = special.j0(np.asarray(x, dtype=float))
    return out[()] if np.ndim(out) == 0 else out


def _f1(x):
    return 0.04 / (0.04 + x * x)


def _f2(x):
    return np.sin(2.0 * np.pi * (x + 1.0) ** 2)


def _f3(x):
    return (x * x - 1.0) * np.exp(-20.0 * x * x)


def _f4(x):
    return bessel_j0(25.0 * (x + 0.4))


def _f5(x):
    # cos(7 arccos(4x - 1)) continued off [0, 0.5] as the polynomial T_7
    return chebyshev_T(7, 4.0 * np.asarray(x, dtype=float) - 1.0)


@dataclass(frozen=True)
class TestFunction:
    __test__ = False

    id: str
    eval: Callable
    domain: tuple = (0.0, 0.5)

    def __call__(self, x):
        return self.eval(np.asarray(x, dtype=float))


TEST_FUNCTIONS = {
    "f1": TestFunction("f1", _f1),
    "f2": TestFunction("f2", _f2),
    "f3": TestFunction("f3", _f3),
    "f4": TestFunction("f4", _f4),
    "f5": TestFunction("f5", _f5),
}


def get_test_function(fn_id: str) -> TestFunction:
    try:
        return TEST_FUNCTIONS[fn_id]
    except KeyError:
        raise KeyError("unknown test function %r (choose from %s)" % (fn_id, ", ".join(TEST_FUNCTIONS))) from None


def eval_test_function(fn_id: str, x):
    out = get_test_function(fn_id)(x)
    return out[()] if np.ndim(out) == 0 else out
