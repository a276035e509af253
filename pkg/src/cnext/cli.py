"""Command-line front end.

Every subcommand writes one artifact, either CSV (``# key=value`` header
followed by one block per data series) or JSON with the same content.
Floats are written with 17 significant digits in CSV and as shortest
round-trip literals in JSON.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .diagnostics import (CHUNK_K, CHUNK_TOL, build_F_profile, build_G_profile, count_chunks,
                          power_spectrum)
from .extend1d import Extension1DConfig, ReachError, kappa
from .extend2d import (ParametricCurve, boundary_mismatch, extend_field, mismatch_steps, mismatch_thresholds)
from .extension_core import condition_number, make_scheme
from .stabilizers import ShrinkMap, WindowSpec, build_shrink_table, shrink_psi
from .testfns import TEST_FUNCTIONS, get_test_function

# numerical-experiment setup: source [0, 0.5], extension [-0.25, 0]
SOURCE_LENGTH = 0.5
EXTENSION_LENGTH = 0.25
GLOBAL_WINDOW = WindowSpec(1e-6, 0.25)
LOCAL_WINDOW = WindowSpec(0.2, 1.0)

SUBCOMMANDS = ("table1", "extend1d", "spectrum", "chunks", "extend2d", "shrink-table")


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# artifacts
# ---------------------------------------------------------------------------

@dataclass
class Artifact:
    command: str
    meta: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)

    def add_series(self, name, columns, rows):
        self.series[name] = (list(columns), [[_plain(v) for v in row] for row in rows])

    def to_json(self, timestamp: Optional[str]) -> str:
        doc = {}
        if timestamp is not None:
            doc["generated"] = timestamp
        doc["command"] = self.command
        doc["meta"] = {k: _plain(v) for k, v in self.meta.items()}
        doc["series"] = {name: {"columns": cols, "data": rows} for name, (cols, rows) in self.series.items()}
        return json.dumps(doc, indent=1) + "\n"

    def to_csv(self, timestamp: Optional[str]) -> str:
        lines = []
        if timestamp is not None:
            lines.append("# generated=%s" % timestamp)
        lines.append("# command=%s" % self.command)
        for key, value in self.meta.items():
            lines.append("# %s=%s" % (key, _fmt(value)))
        for name, (cols, rows) in self.series.items():
            lines.append("# series=%s" % name)
            lines.append(",".join(cols))
            lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        return "\n".join(lines) + "\n"


def _plain(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    if isinstance(v, (list, tuple, np.ndarray)):
        return " ".join(_fmt(x) for x in v)
    if v is None:
        return ""
    return str(v)


def read_csv_artifact(text: str) -> dict:
    """Parse a CSV artifact back into ``{"meta": {...}, "series": {name: array}}``."""
    meta, series = {}, {}
    current = None
    header_next = False
    for line in text.splitlines():
        if line.startswith("# series="):
            current = line[len("# series="):]
            series[current] = []
            header_next = True
        elif line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = value
        elif header_next:
            header_next = False
        elif line and current is not None:
            series[current].append([float(v) for v in line.split(",")])
    return {"meta": meta, "series": {k: np.array(v) for k, v in series.items()}}


# ---------------------------------------------------------------------------
# option parsing helpers
# ---------------------------------------------------------------------------

def parse_range(text: str, integer: bool):
    """``"5"``, ``"2,3,7"`` or ``"lo..hi[:step]"`` (inclusive)."""
    conv = int if integer else float
    text = text.strip()
    try:
        if ".." in text:
            lo, _, rest = text.partition("..")
            hi, _, step = rest.partition(":")
            lo, hi = conv(lo), conv(hi)
            step = conv(step) if step else conv(1)
            if step <= 0 or hi < lo:
                raise UsageError("bad range %r" % text)
            count = int(round((hi - lo) / step)) + 1
            return [conv(lo + i * step) for i in range(count)]
        return [conv(v) for v in text.split(",")]
    except ValueError as exc:
        raise UsageError("cannot parse range %r" % text) from exc


def parse_fraction(text: str) -> float:
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        return float(num) / float(den)
    return float(text)


def parse_curve(spec: str) -> ParametricCurve:
    """``circle[:R]``, ``ellipse[:A,B]``, ``star[:R,eps,k]`` or ``file:PATH``."""
    kind, _, args = spec.partition(":")
    try:
        vals = [float(v) for v in args.split(",")] if args and kind != "file" else []
        if kind == "circle":
            return ParametricCurve.circle(*(vals or [1.0]))
        if kind == "ellipse":
            return ParametricCurve.ellipse(*(vals or [2.0, 1.0]))
        if kind == "star":
            R, eps, k = (vals + [1.0, 0.2, 5][len(vals):])[:3]
            return ParametricCurve.star(R, eps, int(k))
        if kind == "file":
            return ParametricCurve.from_samples(read_boundary_samples(args))
    except (TypeError, ValueError, OSError) as exc:
        raise UsageError("bad curve spec %r: %s" % (spec, exc)) from exc
    raise UsageError("unknown curve %r (circle, ellipse, star, file:PATH)" % spec)


def read_boundary_samples(path: str) -> np.ndarray:
    """Plain text, one ``x y`` pair per line; the count must be a power of two."""
    pts = np.loadtxt(path, ndmin=2)
    if pts.shape[1] != 2:
        raise ValueError("each line of %s must hold exactly two numbers" % path)
    n = pts.shape[0]
    if n < 8 or n & (n - 1):
        raise ValueError("boundary sample count must be a power of two >= 8, got %d" % n)
    return pts


NAMED_FIELDS = {
    "one": lambda x, y: np.ones_like(x),
    "sinexp": lambda x, y: np.sin(x) * np.exp(y),
}


def parse_field(spec: str):
    """Named field (``one``, ``sinexp``) or ``poly:C@I,J;C@I,J;...`` = sum C x^I y^J."""
    if spec in NAMED_FIELDS:
        return NAMED_FIELDS[spec]
    if spec.startswith("poly:"):
        terms = []
        try:
            for term in spec[5:].split(";"):
                coef, _, powers = term.partition("@")
                i, j = (int(p) for p in powers.split(","))
                if i < 0 or j < 0:
                    raise ValueError
                terms.append((float(coef), i, j))
        except ValueError as exc:
            raise UsageError("bad polynomial spec %r (use C@I,J;C@I,J)" % spec) from exc

        def poly(x, y):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            for c, i, j in terms:
                out = out + c * x ** i * np.asarray(y, dtype=float) ** j
            return out

        return poly
    raise UsageError("unknown field %r (one, sinexp, poly:...)" % spec)


def parse_grid(spec: str):
    """``NX,NY,XMIN,XMAX,YMIN,YMAX``."""
    try:
        nx, ny, x0, x1, y0, y1 = spec.split(",")
        nx, ny = int(nx), int(ny)
        x0, x1, y0, y1 = float(x0), float(x1), float(y0), float(y1)
    except ValueError as exc:
        raise UsageError("grid must be NX,NY,XMIN,XMAX,YMIN,YMAX, got %r" % spec) from exc
    if nx < 1 or ny < 1 or x1 < x0 or y1 < y0:
        raise UsageError("empty grid %r" % spec)
    return np.meshgrid(np.linspace(x0, x1, nx), np.linspace(y0, y1, ny), indexing="xy")


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    subcommand: str
    n: Optional[str] = None
    a: Optional[str] = None
    fn_id: str = "f1"
    shrink_delta: Optional[float] = None
    output_path: Optional[str] = None
    format: str = "csv"
    samples: Optional[int] = None
    timestamp: bool = True
    curve: str = "circle"
    grid: str = "64,64,-1.5,1.5,-1.5,1.5"
    tol: float = 1e-12
    reach: Optional[float] = None

    def validate(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError("unknown subcommand %r" % self.subcommand)
        if self.format not in ("csv", "json"):
            raise UsageError("format must be csv or json")
        if self.subcommand == "table1":
            ns = parse_range(self.n or "2..9", integer=True)
            as_ = parse_range(self.a or "2..16:2", integer=False)
            if not ns or not as_:
                raise UsageError("ranges must be nonempty")
            if min(ns) < 0 or min(as_) <= 0:
                raise UsageError("need n >= 0 and a > 0")
            return
        n = self.order()
        a = self.reach_a()
        if n < 0 or a <= 0:
            raise UsageError("need n >= 0 and a > 0")
        if self.shrink_delta is not None and not (0.0 < self.shrink_delta <= 1.0):
            raise UsageError("--shrink-delta must lie in (0, 1]")
        if self.samples is not None and self.samples < 2:
            raise UsageError("--samples must be at least 2")
        if self.subcommand in ("extend1d", "spectrum", "chunks"):
            get_test_function(self.fn_id)
            if self.shrink_delta is None and a * EXTENSION_LENGTH > SOURCE_LENGTH * (1 + 1e-13):
                raise UsageError("extension reach exceeds source interval: a*M = %g > L = %g; "
                                 "need a*M <= L (a <= %g) or --shrink-delta"
                                 % (a * EXTENSION_LENGTH, SOURCE_LENGTH, SOURCE_LENGTH / EXTENSION_LENGTH))
        if self.subcommand == "shrink-table":
            if self.shrink_delta is None:
                raise UsageError("shrink-table needs --shrink-delta")
            if self.tol < 1e-14:
                raise UsageError("tolerance below root-finder accuracy (1e-14)")
        if self.subcommand == "extend2d":
            curve = parse_curve(self.curve)
            parse_field(self.fn_id)
            parse_grid(self.grid)
            kmax = curve.max_curvature()
            if self.reach is not None and not (0.0 < self.reach * kmax < 1.0):
                raise UsageError("reach %g must be positive and below 1/max|curvature| = %g; suggested reach %g"
                                 % (self.reach, 1.0 / kmax, curve.default_reach() / max(1.0, a)))

    def order(self) -> int:
        return int(self.n) if self.n is not None else 9

    def reach_a(self) -> float:
        return float(self.a) if self.a is not None else 2.0


def experiment_config(n: int, a: float, shrink_delta: Optional[float] = None) -> Extension1DConfig:
    """The two-window 1D setup on ``[0, 0.5]`` extended to ``[-0.25, 0]``."""
    shrink = ShrinkMap(shrink_delta, n) if shrink_delta is not None else None
    return Extension1DConfig(make_scheme(n, a), LOCAL_WINDOW, GLOBAL_WINDOW, shrink,
                             L=SOURCE_LENGTH, M=EXTENSION_LENGTH)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def display_value(n: int, value: float) -> str:
    """Display formatting of the condition table: one decimal below order 4."""
    return "%.1f" % value if n < 4 else "%d" % int(round(value))


def cmd_table1(n_range, a_range) -> Artifact:
    art = Artifact("table1")
    art.meta["n"] = list(n_range)
    art.meta["a"] = list(a_range)
    rows = [[a, n, condition_number(n, a), display_value(n, condition_number(n, a))]
            for a in a_range for n in n_range]
    art.add_series("table1", ["a", "n", "cond", "display"], rows)
    return art


def _config_meta(art, fn_id, n, a, delta):
    art.meta.update(fn=fn_id, n=n, a=a, shrink_delta=delta, L=SOURCE_LENGTH, M=EXTENSION_LENGTH,
                    global_window=[GLOBAL_WINDOW.r0, GLOBAL_WINDOW.r1],
                    local_window=[LOCAL_WINDOW.r0, LOCAL_WINDOW.r1])


def cmd_spectrum(fn_id, n, a, shrink_delta=None, samples=4000) -> Artifact:
    cfg = experiment_config(n, a, shrink_delta)
    f = get_test_function(fn_id)
    _, F = build_F_profile(f, cfg, samples)
    spec = power_spectrum(F)
    art = Artifact("spectrum")
    _config_meta(art, fn_id, n, a, shrink_delta)
    art.meta["samples"] = samples
    art.meta["decay_bin_1e-8"] = spec.decay_bin(1e-8)
    art.add_series("spectrum", ["bin", "magnitude"], enumerate(spec.magnitudes))
    return art


def cmd_chunks(fn_id, n, a, shrink_delta=None) -> Artifact:
    cfg = experiment_config(n, a, shrink_delta)
    panels = count_chunks(get_test_function(fn_id), cfg)
    art = Artifact("chunks")
    _config_meta(art, fn_id, n, a, shrink_delta)
    art.meta.update(chunk_k=CHUNK_K, chunk_tol=CHUNK_TOL, chunks=len(panels))
    art.add_series("chunks", ["left", "right"], panels.panels)
    return art


def cmd_extend1d(fn_id, n, a, shrink_delta=None, samples=1001, spectrum_samples=4000) -> Artifact:
    cfg = experiment_config(n, a, shrink_delta)
    f = get_test_function(fn_id)
    G = build_G_profile(f, cfg)
    x = np.linspace(-cfg.M, cfg.L, samples)
    panels = count_chunks(f, cfg)
    _, F = build_F_profile(f, cfg, spectrum_samples)
    spec = power_spectrum(F)
    art = Artifact("extend1d")
    _config_meta(art, fn_id, n, a, shrink_delta)
    art.meta.update(kappa=kappa(f, cfg), chunks=len(panels), chunk_edges=panels.edges,
                    condition_number=cfg.scheme.cond, spectrum_samples=spectrum_samples)
    art.add_series("G", ["x", "value"], zip(x, G(x)))
    art.add_series("spectrum", ["bin", "magnitude"], enumerate(spec.magnitudes))
    return art


def cmd_shrink_table(delta, n, tol) -> Artifact:
    table = build_shrink_table(delta, n, tol)
    probe = np.random.default_rng(0).uniform(0.0, 1.0, 1000)
    err = float(np.max(np.abs(table(probe) - shrink_psi(probe, delta, n))))
    art = Artifact("shrink-table")
    art.meta.update(delta=delta, n=n, tol=tol, panels=len(table.table), k=table.table.k, max_probe_error=err)
    rows = [[lo, hi] + list(c) for (lo, hi), c in zip(table.table.panels, table.table.coef)]
    art.add_series("panels", ["left", "right"] + ["c%d" % i for i in range(table.table.k)], rows)
    return art


def cmd_extend2d(curve_spec, fn_spec, n, a, grid_spec, reach=None) -> Artifact:
    curve = parse_curve(curve_spec)
    f = parse_field(fn_spec)
    X, Y = parse_grid(grid_spec)
    scheme = make_scheme(n, a)
    if reach is None:
        # samples reach depth a*reach inside; keep them within the inner tube
        reach = curve.default_reach() / max(1.0, a)
    window = WindowSpec(0.5 * reach, reach)
    V = extend_field(f, curve, scheme, reach, window, X, Y)
    steps = mismatch_steps(scheme, reach, window)
    mism = boundary_mismatch(f, curve, scheme, reach, window, steps=steps)
    th = np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False)
    fscale = max(1.0, float(np.max(np.abs(f(*curve.position(th))))))
    bounds = mismatch_thresholds(scheme, steps, fscale=fscale)
    art = Artifact("extend2d")
    art.meta.update(curve=curve_spec, fn=fn_spec, n=n, a=a, grid=grid_spec, reach=reach,
                    window=[window.r0, window.r1], condition_number=scheme.cond)
    art.add_series("field", ["x", "y", "value"], zip(X.ravel(), Y.ravel(), V.ravel()))
    art.add_series("mismatch", ["order", "max_mismatch", "threshold"],
                   [[k, float(np.max(mism[:, k])), bounds[k]] for k in range(n + 1)])
    return art


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cnext", description="C^n function extension toolkit")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        sp.add_argument("--no-header-timestamp", action="store_true")

    sp = sub.add_parser("table1", help="condition numbers over an (a, n) grid")
    sp.add_argument("--n", default="2..9", help="orders: N, N1,N2,... or LO..HI[:STEP]")
    sp.add_argument("--a", default="2..16:2", help="reaches: same syntax as --n")
    common(sp)

    for name, helptext in (("extend1d", "extension profile, kappa, chunks and spectrum"),
                           ("spectrum", "power spectrum of the windowed profile"),
                           ("chunks", "adaptive chunk count of the extended profile")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--fn", default="f1", choices=sorted(TEST_FUNCTIONS))
        sp.add_argument("--n", type=int, default=9)
        sp.add_argument("--a", type=float, default=2.0)
        sp.add_argument("--shrink-delta", type=parse_fraction, default=None)
        sp.add_argument("--samples", type=int, default=None)
        common(sp)

    sp = sub.add_parser("shrink-table", help="piecewise Chebyshev table of the shrinking map")
    sp.add_argument("--shrink-delta", type=parse_fraction, required=True)
    sp.add_argument("--n", type=int, default=9)
    sp.add_argument("--tol", type=float, default=1e-12)
    common(sp)

    sp = sub.add_parser("extend2d", help="normal extension of a field around a planar domain")
    sp.add_argument("--curve", default="circle", help="circle[:R] | ellipse[:A,B] | star[:R,eps,k] | file:PATH")
    sp.add_argument("--fn", default="one", help="one | sinexp | poly:C@I,J;...")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--a", type=float, default=2.0)
    sp.add_argument("--grid", default="64,64,-1.5,1.5,-1.5,1.5", help="NX,NY,XMIN,XMAX,YMIN,YMAX")
    sp.add_argument("--reach", type=float, default=None)
    common(sp)
    return p


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(subcommand=args.subcommand, format=args.format, output_path=args.out,
                    timestamp=not args.no_header_timestamp)
    for key in ("n", "a"):
        if getattr(args, key, None) is not None:
            setattr(cfg, key, str(getattr(args, key)))
    cfg.fn_id = getattr(args, "fn", cfg.fn_id)
    cfg.shrink_delta = getattr(args, "shrink_delta", None)
    cfg.samples = getattr(args, "samples", None)
    cfg.curve = getattr(args, "curve", cfg.curve)
    cfg.grid = getattr(args, "grid", cfg.grid)
    cfg.tol = getattr(args, "tol", cfg.tol)
    cfg.reach = getattr(args, "reach", None)
    return cfg


def run(cfg: RunConfig) -> Artifact:
    cfg.validate()
    cmd = cfg.subcommand
    if cmd == "table1":
        return cmd_table1(parse_range(cfg.n or "2..9", True), parse_range(cfg.a or "2..16:2", False))
    n, a = cfg.order(), cfg.reach_a()
    if cmd == "extend1d":
        return cmd_extend1d(cfg.fn_id, n, a, cfg.shrink_delta, samples=cfg.samples or 1001)
    if cmd == "spectrum":
        return cmd_spectrum(cfg.fn_id, n, a, cfg.shrink_delta, samples=cfg.samples or 4000)
    if cmd == "chunks":
        return cmd_chunks(cfg.fn_id, n, a, cfg.shrink_delta)
    if cmd == "shrink-table":
        return cmd_shrink_table(cfg.shrink_delta, n, cfg.tol)
    return cmd_extend2d(cfg.curve, cfg.fn_id, n, a, cfg.grid, cfg.reach)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        art = run(cfg)
    except (UsageError, ReachError, KeyError) as exc:
        print("cnext %s: error: %s" % (args.subcommand, exc), file=sys.stderr)
        return 2
    except ValueError as exc:
        print("cnext %s: error: %s" % (args.subcommand, exc), file=sys.stderr)
        return 1
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds") if cfg.timestamp else None
    text = art.to_json(stamp) if cfg.format == "json" else art.to_csv(stamp)
    try:
        if cfg.output_path:
            with open(cfg.output_path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print("cnext %s: error: cannot write output: %s" % (args.subcommand, exc), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
