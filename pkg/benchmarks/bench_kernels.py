"""Time each hot kernel in its numba and pure-numpy form.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5]

Compilation is excluded: every jitted kernel is called once before timing.
The reported figure is the best of ``--repeat`` runs.
"""

import argparse
import time

import numpy as np

from cnext import kernels
from cnext._accel import NUMBA_AVAILABLE
from cnext.extend2d import ParametricCurve, _scan_count


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(rng):
    x = rng.uniform(0.0, 1.0, 200_000)
    star = ParametricCurve.star(1.0, 0.2, 5)
    qx, qy = rng.uniform(-1.5, 1.5, (2, 20_000))
    proj = (qx, qy, star.ax, star.bx, star.ay, star.by, _scan_count(star))
    sig2 = rng.standard_normal(2**16) + 0j
    sig = rng.standard_normal(4000) + 0j
    edges = np.linspace(0.0, 1.0, 9)
    coef = rng.standard_normal((8, 48))
    xs = rng.uniform(0.0, 1.0, 200_000)
    return [
        ("shrink_inverse 2e5 pts", "shrink_inverse", (x, 1 / 40, 9)),
        ("project_points 2e4 pts", "project_points", proj),
        ("fft_radix2 N=65536", "fft_radix2", (sig2,)),
        ("dft_direct N=4000", "dft_direct", (sig,)),
        ("panel_eval 2e5 pts", "panel_eval", (xs, edges, coef)),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if not NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(0)
    print("%-26s %12s %12s %9s" % ("kernel", "numba [s]", "numpy [s]", "speedup"))
    for label, name, call_args in cases(rng):
        jit = getattr(kernels, name + "_jit")
        ref = getattr(kernels, name + "_numpy")
        jit(*call_args)  # compile
        t_jit = best_of(lambda: jit(*call_args), args.repeat)
        t_np = best_of(lambda: ref(*call_args), args.repeat)
        print("%-26s %12.4g %12.4g %8.1fx" % (label, t_jit, t_np, t_np / t_jit))


if __name__ == "__main__":
    main()
