"""Command-line front end: ``gyrokit {lagrange,poinsot,herpolhode,viscous,verify}``.

Every option can also be given in a ``--config`` file of ``key = value``
lines (``#`` starts a comment).  Keys are the option names with or without
leading dashes, using either ``-`` or ``_``.  Options on the command line
override the file.

Exit status: 0 on success, 1 when ``verify`` finds a failing check, 2 for
invalid parameters and 3 for a singularity met during evaluation.
"""

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__, herpolhode, lagrange, poinsot, viscous
from .errors import DomainError, SingularityError
from .verify import CASES, format_report, verify_all

# column name -> unit, in output order
LAGRANGE_COLUMNS = {"t": "s", "theta": "rad", "psi": "rad", "phi": "rad", "p": "rad/s",
                    "q": "rad/s", "r": "rad/s", "gamma1": "1", "gamma2": "1", "gamma3": "1",
                    "X": "apex units", "Y": "apex units", "Z": "apex units"}
POINSOT_COLUMNS = {"t": "s", "tau": "1", "p": "rad/s", "q": "rad/s", "r": "rad/s",
                   "theta": "rad", "phi": "rad", "psi": "rad", "gamma1": "1", "gamma2": "1",
                   "gamma3": "1"}
HERPOLHODE_COLUMNS = {"rho": "1/sqrt(moment)", "chi": "rad", "x": "1/sqrt(moment)",
                      "y": "1/sqrt(moment)"}
VISCOUS_COLUMNS = {"t": "s", "p": "rad/s", "q": "rad/s", "r": "rad/s", "gamma1": "1",
                   "gamma2": "1", "gamma3": "1", "theta": "rad", "phi": "rad", "psi": "rad"}


class UsageError(Exception):
    """Bad command-line or config-file input."""


def _triple(text):
    parts = [float(v) for v in str(text).replace(";", ",").split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated numbers")
    return tuple(parts)


def _add_output(sub):
    sub.add_argument("--config", help="key=value file supplying any option")
    sub.add_argument("--format", choices=("csv", "json"), default=None,
                     help="output format (default csv)")
    sub.add_argument("--output", "-o", help="write to this file instead of stdout")


def _add_grid(sub, what):
    sub.add_argument("--t-end", type=float, help=f"final time in s (default {what})")
    sub.add_argument("--samples", type=int, help="number of samples (default 201)")


def build_parser():
    parser = argparse.ArgumentParser(prog="gyrokit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gyrokit {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("lagrange", help="heavy symmetric top trajectory")
    for name, text in (("A", "equatorial moment"), ("C", "axial moment"), ("M", "mass"),
                       ("zg", "height of the centre of mass on the figure axis"),
                       ("theta0", "initial nutation (rad)"),
                       ("theta-dot0", "initial nutation rate (rad/s)"),
                       ("psi-dot0", "initial precession rate (rad/s)"),
                       ("r0", "spin rate (rad/s)")):
        sub.add_argument(f"--{name}", type=float, help=text)
    sub.add_argument("--g", type=float, default=None, help="gravity (default 9.81)")
    sub.add_argument("--phi0", type=float, help="initial spin angle (default 0)")
    sub.add_argument("--psi0", type=float, help="initial precession angle (default 0)")
    _add_grid(sub, "three nutation periods")
    _add_output(sub)

    sub = subs.add_parser("poinsot", help="torque-free asymmetric body")
    for name, text in (("A", "moment about x"), ("B", "moment about y"),
                       ("C", "moment about z"), ("p0", "initial p (rad/s)"),
                       ("r0", "initial r (rad/s)")):
        sub.add_argument(f"--{name}", type=float, help=text)
    sub.add_argument("--psi0", type=float, help="initial precession angle (default 0)")
    _add_grid(sub, "three rate periods")
    _add_output(sub)

    sub = subs.add_parser("herpolhode", help="polar trace of the herpolhode")
    for name, text in (("A", "principal moment"), ("B", "principal moment"),
                       ("C", "principal moment"), ("D", "fictitious moment |K|^2 / 2T")):
        sub.add_argument(f"--{name}", type=float, help=text)
    sub.add_argument("--m", type=float, help="homogenising constant (default 1)")
    sub.add_argument("--chi0", type=float, help="initial anomaly (default 0)")
    sub.add_argument("--samples", type=int, help="number of points (default 201)")
    sub.add_argument("--legs", type=int, help="radial sweeps to trace (default 4)")
    _add_output(sub)

    sub = subs.add_parser("viscous", help="symmetric top under viscous drag")
    for name, text in (("A", "equatorial moment"), ("C", "axial moment"),
                       ("mu", "viscous constant"), ("p0", "initial p (rad/s)"),
                       ("q0", "initial q (rad/s)"), ("r0", "initial r (rad/s)")):
        sub.add_argument(f"--{name}", type=float, help=text)
    sub.add_argument("--gamma0", type=_triple,
                     help="initial vertical cosines g1,g2,g3 (unit vector, not vertical)")
    _add_grid(sub, "5 A / mu")
    _add_output(sub)

    sub = subs.add_parser("verify", help="closed forms against the numerical oracle")
    sub.add_argument("--case", action="append", choices=CASES + ("all",),
                     help="case to run (repeatable; default all)")
    sub.add_argument("--seed", type=int, help="random seed (default $GYROKIT_SEED or 0)")
    sub.add_argument("--n", type=int, help="draws per case (default: per-case counts)")
    sub.add_argument("--tol", action="append", metavar="CHECK=VALUE",
                     help="override the tolerance of a named check")
    sub.add_argument("--json", action="store_true", default=None, help="JSON report")
    sub.add_argument("--config", help="key=value file supplying any option")
    sub.add_argument("--output", "-o", help="write to this file instead of stdout")
    return parser


def _subparser(parser, name):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def read_config(path):
    """Parse a key=value file into a dict of raw strings."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.lstrip("-").replace("-", "_")] = value
    return out


def _apply_config(args, sub):
    if not getattr(args, "config", None):
        return args
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    for key, raw in read_config(args.config).items():
        action = actions.get(key)
        if action is None:
            raise UsageError(f"unknown config key {key!r}")
        if getattr(args, key) is not None:
            continue
        if isinstance(action, argparse._AppendAction):
            value = [v.strip() for v in raw.split(",") if v.strip()]
        elif isinstance(action, argparse._StoreTrueAction):
            value = raw.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            try:
                value = action.type(raw)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config key {key!r}: {exc}") from None
        else:
            value = raw
        if action.choices is not None and not isinstance(value, list) \
                and value not in action.choices:
            raise UsageError(f"config key {key!r}: {value!r} not in {sorted(action.choices)}")
        setattr(args, key, value)
    return args


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing required option(s): "
                         + ", ".join("--" + n.replace("_", "-") for n in missing))


def _or(value, default):
    return default if value is None else value


def _grid(args, default_end):
    samples = _or(args.samples, 201)
    if samples < 2:
        raise UsageError("--samples must be at least 2")
    t_end = _or(args.t_end, default_end)
    if not (np.isfinite(t_end) and t_end > 0):
        raise UsageError("--t-end must be positive")
    return np.linspace(0.0, t_end, samples)


def run_lagrange(args):
    _need(args, "A", "C", "M", "zg", "theta0", "theta_dot0", "psi_dot0", "r0")
    cfg = lagrange.SymmetricTopConfig.from_rates(
        args.A, args.C, args.M, _or(args.g, 9.81), args.zg, args.theta0, _or(args.phi0, 0.0),
        _or(args.psi0, 0.0), args.theta_dot0, args.psi_dot0, args.r0)
    t = _grid(args, 3.0 * lagrange.nutation_period(cfg))
    return LAGRANGE_COLUMNS, lagrange.trajectory(t, cfg)


def run_poinsot(args):
    _need(args, "A", "B", "C", "p0", "r0")
    cfg = poinsot.FreeBodyConfig.from_rates(args.A, args.B, args.C, args.p0, args.r0,
                                            _or(args.psi0, 0.0))
    t = _grid(args, 3.0 * poinsot.rate_period(cfg))
    return POINSOT_COLUMNS, poinsot.state_of_t(t, cfg)


def run_herpolhode(args):
    _need(args, "A", "B", "C", "D")
    hc = herpolhode.herpolhode_constants(args.A, args.B, args.C, args.D, _or(args.m, 1.0),
                                         _or(args.chi0, 0.0))
    samples = _or(args.samples, 201)
    if samples < 2:
        raise UsageError("--samples must be at least 2")
    return HERPOLHODE_COLUMNS, herpolhode.trace_curve(hc, samples, _or(args.legs, 4))


def run_viscous(args):
    _need(args, "A", "C", "mu", "p0", "q0", "r0", "gamma0")
    cfg = viscous.ViscousConfig(args.A, args.C, args.mu, args.p0, args.q0, args.r0,
                                args.gamma0)
    t = _grid(args, 5.0 * cfg.A / cfg.mu)
    p, q, r = viscous.rates(t, cfg)
    ang = viscous.euler_angles_viscous(t, cfg)
    g = ang.gamma
    return VISCOUS_COLUMNS, {"t": t, "p": p, "q": q, "r": r, "gamma1": g[0], "gamma2": g[1],
                             "gamma3": g[2], "theta": ang.theta, "phi": ang.phi,
                             "psi": ang.psi}


def format_records(columns, data, fmt):
    """Render sampled columns as CSV (17 significant digits) or JSON."""
    n = len(np.atleast_1d(data[next(iter(columns))]))
    cols = {k: np.broadcast_to(np.asarray(data[k], float), (n,)) for k in columns}
    if fmt == "json":
        doc = {"columns": list(columns), "units": dict(columns),
               "records": [[float(cols[k][i]) for k in columns] for i in range(n)]}
        return json.dumps(doc) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"{k} [{u}]" for k, u in columns.items()])
    for i in range(n):
        writer.writerow(["%.17g" % cols[k][i] for k in columns])
    return buf.getvalue()


def _parse_tolerances(items):
    out = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"--tol expects CHECK=VALUE, got {item!r}")
        name, value = item.rsplit("=", 1)
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise UsageError(f"--tol value {value!r} is not a number") from None
    return out


def resolve_seed(seed):
    """Explicit seed, else $GYROKIT_SEED, else 0."""
    if seed is not None:
        return int(seed)
    env = os.environ.get("GYROKIT_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"GYROKIT_SEED={env!r} is not an integer") from None
    return 0


def run_verify(args):
    cases = args.case or ["all"]
    cases = CASES if "all" in cases else tuple(cases)
    if args.n is not None and args.n < 1:
        raise UsageError("--n must be positive")
    report = verify_all(resolve_seed(args.seed), cases, args.n, _parse_tolerances(args.tol))
    return report, format_report(report, as_json=bool(args.json))


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_RUNNERS = {"lagrange": run_lagrange, "poinsot": run_poinsot,
            "herpolhode": run_herpolhode, "viscous": run_viscous}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(args, _subparser(parser, args.command))
        if args.command == "verify":
            report, text = run_verify(args)
            _emit(text, args.output)
            return 0 if report["passed"] else 1
        columns, data = _RUNNERS[args.command](args)
        _emit(format_records(columns, data, _or(args.format, "csv")), args.output)
        return 0
    except (UsageError, OSError) as exc:
        print(f"gyrokit: error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"gyrokit: invalid parameters: {exc}", file=sys.stderr)
        return 2
    except SingularityError as exc:
        print(f"gyrokit: singularity: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
