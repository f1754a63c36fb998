"""Command-line sweeps producing figure data as CSV or JSON, plus the verify suite.

Angles are in degrees on the command line and in output files.  Exit codes:
0 success, 1 validation error, 2 numerical failure, 3 verify-suite failure.
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
import configparser
import csv
from dataclasses import dataclass
import io
import json
import math
import sys

import numpy as np

from .born import ScatterParams, concurrence_born, yield_born
from .errors import (ConvergenceError, DomainError, ResonanceError, ScatterError,
                     UnsupportedRegimeError, ZeroYieldError)
from .fullorder import evaluate_full
from . import verify

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_VERIFY = 0, 1, 2, 3

FIELDS = ("kappa", "w_over_d", "g_tilde", "theta0_deg", "thetaD_deg", "dtheta_deg",
          "method", "C", "P_norm", "status")
MODES = ("born-polar", "full-polar", "sweep-g", "grid-theta", "verify")


class ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


@dataclass(frozen=True)
class Axis:
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.count < 2:
            raise ValidationError(f"an axis needs at least 2 points, got {self.count}")
        if self.scale == "log" and not (self.start > 0 and self.stop > 0):
            raise ValidationError("log axis needs positive endpoints")
        if self.scale not in ("linear", "log"):
            raise ValidationError(f"unknown axis scale {self.scale!r}")

    def values(self):
        if self.scale == "log":
            return [float(v) for v in np.logspace(math.log10(self.start),
                                                  math.log10(self.stop), self.count)]
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]


@dataclass(frozen=True)
class Point:
    method: str
    kappa: float
    w_over_d: float
    g_tilde: float
    theta0_deg: float
    thetaD_deg: float
    dtheta_deg: float
    calc: str = "series"
    # thetaD_deg reported in the file, differs from thetaD_deg for mirror rows
    reported_thetaD_deg: float = None


def evaluate_point(pt):
    """One output record; resonances are recorded, other numerical failures raise."""
    row = {"kappa": pt.kappa, "w_over_d": pt.w_over_d, "g_tilde": pt.g_tilde,
           "theta0_deg": pt.theta0_deg,
           "thetaD_deg": pt.thetaD_deg if pt.reported_thetaD_deg is None
           else pt.reported_thetaD_deg,
           "dtheta_deg": pt.dtheta_deg, "method": pt.method}
    p = ScatterParams.from_degrees(pt.kappa, pt.w_over_d, pt.g_tilde, pt.theta0_deg,
                                   pt.thetaD_deg, pt.dtheta_deg)
    try:
        if pt.method == "born":
            c, y = concurrence_born(p), yield_born(p)
        else:
            c, y = evaluate_full(p, pt.calc)
    except (ResonanceError, ZeroYieldError):
        row.update(C=None, P_norm=None, status="skipped-resonance")
        return row
    row.update(C=float(c), P_norm=float(y), status="ok")
    return row


def _degree_axis(n, stop=180.0):
    return Axis(0.0, stop, n).values()


def build_points(args):
    base = dict(kappa=args.kappa, w_over_d=args.w_over_d, g_tilde=args.g_tilde,
                theta0_deg=args.theta0_deg, dtheta_deg=args.dtheta_deg)
    if args.mode in ("born-polar", "full-polar"):
        method = "born" if args.mode == "born-polar" else "full"
        pts = [Point(method, thetaD_deg=t, calc=args.calc, **base)
               for t in _degree_axis(args.points)]
        if args.mirror:
            # cylindrical symmetry: theta_D and 360 - theta_D give the same point
            pts += [Point(method, thetaD_deg=q.thetaD_deg, calc=args.calc,
                          reported_thetaD_deg=360.0 - q.thetaD_deg, **base)
                    for q in reversed(pts[1:-1])]
        return pts
    if args.mode == "sweep-g":
        base.pop("g_tilde")
        return [Point("full", g_tilde=g, thetaD_deg=args.thetaD_deg, calc=args.calc, **base)
                for g in Axis(args.g_min, args.g_max, args.points, "log").values()]
    if args.mode == "grid-theta":
        base.pop("theta0_deg")
        return [Point(args.order, theta0_deg=t0, thetaD_deg=td, calc=args.calc, **base)
                for t0 in _degree_axis(args.points) for td in _degree_axis(args.points)]
    raise ValidationError(f"unknown mode {args.mode!r}")


def run_sweep(points, jobs=1):
    """Evaluate every point, in parallel if ``jobs > 1``; rows keep sweep order."""
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(evaluate_point, points, chunksize=8))
    return [evaluate_point(p) for p in points]


def _cell(v):
    if v is None:
        return ""
    return repr(v) if isinstance(v, float) else str(v)


def render(rows, fmt):
    if fmt == "json":
        return json.dumps([{k: r[k] for k in FIELDS} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for r in rows:
        writer.writerow([_cell(r[k]) for k in FIELDS])
    return buf.getvalue()


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# option name -> (type, default); shared by flags and config keys
OPTIONS = {
    "kappa": (float, 10.0),
    "w_over_d": (float, 10.0),
    "g_tilde": (float, 1.0),
    "theta0_deg": (float, 90.0),
    "thetaD_deg": (float, 90.0),
    "dtheta_deg": (float, 12.0),
    "points": (int, None),
    "g_min": (float, 1e-3),
    "g_max": (float, 1e3),
    "calc": (str, "series"),
    "order": (str, "born"),
    "format": (str, "csv"),
    "out": (str, None),
    "jobs": (int, 1),
    "seed": (int, 42),
    "mirror": (bool, False),
}
DEFAULT_POINTS = {"born-polar": 181, "full-polar": 181, "sweep-g": 61, "grid-theta": 37}


def build_parser():
    parser = _Parser(prog="qubitscatter", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="INI file: [common] and per-subcommand sections")
    sub = parser.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    for mode in MODES:
        sp = sub.add_parser(mode)
        sp.add_argument("--config", dest="config_sub", help=argparse.SUPPRESS)
        sp.add_argument("--kappa", type=float, help="k0 d")
        sp.add_argument("--w-over-d", dest="w_over_d", type=float, help="packet width w/d")
        sp.add_argument("--g-tilde", dest="g_tilde", type=float, help="m g_r / hbar^2 d")
        sp.add_argument("--theta0-deg", dest="theta0_deg", type=float, help="incident angle")
        sp.add_argument("--thetaD-deg", dest="thetaD_deg", type=float,
                        help="detector direction (sweep-g only)")
        sp.add_argument("--dtheta-deg", dest="dtheta_deg", type=float, help="aperture half-angle")
        sp.add_argument("--points", type=int, help="points per sweep axis")
        sp.add_argument("--g-min", dest="g_min", type=float)
        sp.add_argument("--g-max", dest="g_max", type=float)
        sp.add_argument("--calc", choices=("series", "quad"), help="cap phase average route")
        sp.add_argument("--order", choices=("born", "full"), help="grid-theta evaluation order")
        sp.add_argument("--mirror", action="store_true", default=None,
                        help="also emit theta_D in (180, 360) rows")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--jobs", type=int)
        sp.add_argument("--seed", type=int)
    return parser


def _parse_value(key, raw, typ, where):
    try:
        if typ is bool:
            return configparser.ConfigParser.BOOLEAN_STATES[raw.strip().lower()]
        return typ(raw)
    except (ValueError, KeyError):
        raise ValidationError(f"{where}: bad value {raw!r} for {key}") from None


def load_config(path, mode):
    """Values from the ``[common]`` and ``[<mode>]`` sections; the latter wins."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ValidationError(f"{path}: {exc}") from None
    values = {}
    for section in ("common", mode):
        if not cp.has_section(section):
            continue
        for key, raw in cp.items(section):
            name = key.replace("-", "_")
            if name not in OPTIONS:
                raise ValidationError(f"{path} [{section}]: unknown key {key!r}")
            values[name] = _parse_value(key, raw, OPTIONS[name][0], f"{path} [{section}]")
    return values


def resolve(argv):
    args = build_parser().parse_args(argv)
    config = args.config_sub or args.config
    merged = {k: d for k, (_, d) in OPTIONS.items()}
    merged["points"] = DEFAULT_POINTS.get(args.mode)
    if config:
        merged.update(load_config(config, args.mode))
    for k in OPTIONS:
        v = getattr(args, k, None)
        if v is not None:
            merged[k] = v
    merged["mode"] = args.mode
    ns = argparse.Namespace(**merged)
    if ns.jobs < 1:
        raise ValidationError("--jobs must be at least 1")
    if ns.format not in ("csv", "json"):
        raise ValidationError(f"unknown format {ns.format!r}")
    if ns.calc not in ("series", "quad") or ns.order not in ("born", "full"):
        raise ValidationError("calc must be series|quad and order born|full")
    return ns


def main(argv=None):
    try:
        ns = resolve(sys.argv[1:] if argv is None else argv)
        if ns.mode == "verify":
            results = verify.run_suite(ns.seed)
            _emit(verify.manifest(results, ns.seed), ns.out)
            return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY
        points = build_points(ns)
        # validate every point up front so a bad sweep fails before any work
        for pt in (points[0], points[-1]):
            ScatterParams.from_degrees(pt.kappa, pt.w_over_d, pt.g_tilde, pt.theta0_deg,
                                       pt.thetaD_deg, pt.dtheta_deg)
        rows = run_sweep(points, ns.jobs)
        _emit(render(rows, ns.format), ns.out)
        return EXIT_OK
    except (ValidationError, DomainError, UnsupportedRegimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConvergenceError, ScatterError, ArithmeticError) as exc:
        hint = " (try --calc quad)" if isinstance(exc, ConvergenceError) else ""
        print(f"numerical failure: {exc}{hint}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
