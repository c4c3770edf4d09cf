"""Command-line interface.

Settings come from an optional ``key = value`` spec file, overridden by
``--set key=value`` flags.  Results are written as CSV with the resolved
settings echoed as ``#`` comment lines.  Exit codes: 0 success, 2 bad
configuration, 3 numeric failure.
"""

import argparse
import csv
import math
import sys
import warnings

import numpy as np

from . import capacity, link_analysis
from .capacity import OutageConstraint
from .error_models import make_error
from .exceptions import (BracketError, ConfigError, DomainError, NoRoot,
                         QuadratureNotConverged)
from .link_analysis import NetworkParams, SuccessCurve
from .patterns import IDEAL, OMNI, make_pattern
from .simulate import SimConfig, simulate_success

DEFAULTS = {
    "pattern.kind": "ideal",
    "pattern.omega_deg": "20",
    "pattern.g2": "0.1",
    "pattern.gamma_deg": "5",
    "error.kind": "halfnormal",
    "error.mean_deg": "3",
    "error.eps_max_deg": "",
    "error.dimple.a": "0.5",
    "error.dimple.b": "0.5",
    "error.dimple.c1": "15",
    "error.dimple.c2": "1",
    "net.lambda": "1e-5",
    "net.d": "100",
    "net.alpha": "3",
    "net.beta": "4",
    "net.eta": "1e-12",
    "net.pt": "1",
    "outage.pe": "0.15",
    "sweep.axis": "",
    "sweep.min": "",
    "sweep.max": "",
    "sweep.points": "",
    "sweep.log": "",
    "sim.window": "5000",
    "sim.reps": "100000",
    "sim.seed": "0",
}

# axis, min, max, points, log
SWEEP_DEFAULTS = {
    "success-curve": ("lambda", 1e-7, 1e-3, 50, True),
    "throughput-curve": ("lambda", 1e-7, 1e-3, 50, True),
    "sweep-beamwidth": ("omega", 1.0, 359.0, 100, False),
    "optimize": ("mean", 1.0, 10.0, 10, False),
    "simulate": ("lambda", 1e-5, 1e-4, 5, True),
}

COLUMNS = {
    "success-curve": ("lambda", "ps_analytic"),
    "throughput-curve": ("lambda", "ps_analytic", "throughput"),
    "sweep-beamwidth": ("omega_deg", "g1", "tp", "tp_lambda_star", "tp_norm",
                        "tc", "tc_lambda_star", "tc_norm", "tc_feasible"),
    "optimize": ("mean_deg", "omega_star_deg", "metric_value", "lambda_star",
                 "omega_star_closed_form_deg"),
    "simulate": ("lambda", "ps_analytic", "ps_sim", "ci_low", "ci_high", "n", "inside_ci"),
    "validate": ("check", "config", "value", "reference", "abs_diff", "tolerance", "passed"),
}

EPILOG = """\
CSV columns:
  success-curve     lambda, ps_analytic
  throughput-curve  lambda, ps_analytic, throughput (= lambda * ps)
  sweep-beamwidth   omega_deg, g1, tp, tp_lambda_star, tp_norm, tc,
                    tc_lambda_star, tc_norm, tc_feasible (norm = ratio to omni)
  optimize          mean_deg, omega_star_deg, metric_value, lambda_star,
                    omega_star_closed_form_deg (ideal sector, g2 = 0, tc only)
  simulate          lambda, ps_analytic, ps_sim, ci_low, ci_high, n, inside_ci
  validate          check, config, value, reference, abs_diff, tolerance, passed

Spec keys (angles in degrees):
  pattern.kind omni|ideal|transition|3gpp, pattern.omega_deg, pattern.g2,
  pattern.gamma_deg, error.kind zero|uniform|exponential|halfnormal|dimple,
  error.mean_deg, error.eps_max_deg, error.dimple.{a,b,c1,c2},
  net.{lambda,d,alpha,beta,eta,pt}, outage.pe,
  sweep.{axis,min,max,points,log}, sim.{window,reps,seed}
"""


class SpecError(ConfigError):
    """A spec entry could not be parsed or is invalid; names the key."""


# -- spec handling --------------------------------------------------------

def parse_spec_text(text, source="spec"):
    out = {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecError(f"{source}:{no}: expected key = value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def resolve(spec_text=None, overrides=(), source="spec"):
    spec = dict(DEFAULTS)
    if spec_text is not None:
        spec.update(parse_spec_text(spec_text, source))
    for item in overrides:
        if "=" not in item:
            raise SpecError(f"--set expects key=value, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        spec[key] = value
    unknown = sorted(set(spec) - set(DEFAULTS))
    if unknown:
        raise SpecError(f"unknown spec key {unknown[0]!r}")
    return spec


def _float(spec, key, *, optional=False):
    raw = spec[key]
    if raw == "" and optional:
        return None
    try:
        val = float(raw)
    except ValueError:
        raise SpecError(f"{key}: not a number: {raw!r}") from None
    if not math.isfinite(val):
        raise SpecError(f"{key}: must be finite, got {raw!r}")
    return val


def _int(spec, key):
    try:
        return int(spec[key])
    except ValueError:
        raise SpecError(f"{key}: not an integer: {spec[key]!r}") from None


def _bool(spec, key, default):
    raw = spec[key].lower()
    if raw == "":
        return default
    if raw in ("1", "true", "yes", "on"):
        return True
    if raw in ("0", "false", "no", "off"):
        return False
    raise SpecError(f"{key}: expected true/false, got {spec[key]!r}")


def _guard(keys, fn, *args):
    """Run a builder, turning domain errors into a SpecError naming ``keys``."""
    try:
        return fn(*args)
    except (DomainError, NoRoot, ConfigError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"{keys}: {exc}") from exc


def pattern_family(spec, g2_db=False):
    """Map from beamwidth (radians) to pattern with the other settings fixed."""
    kind = spec["pattern.kind"]
    g2 = _float(spec, "pattern.g2")
    if g2_db:
        g2 = 10.0 ** (g2 / 10.0)
    gamma = _float(spec, "pattern.gamma_deg", optional=True)
    gamma = None if gamma is None else math.radians(gamma)

    def family(omega):
        return make_pattern(kind, None if kind == OMNI else omega, g2, gamma)

    return family


def build_pattern(spec, omega_deg=None, g2_db=False):
    omega = omega_deg if omega_deg is not None else _float(spec, "pattern.omega_deg")
    family = pattern_family(spec, g2_db)
    return _guard("pattern.kind/omega_deg/g2/gamma_deg", family, math.radians(omega))


def build_error(spec, mean_deg=None):
    mean = mean_deg if mean_deg is not None else _float(spec, "error.mean_deg", optional=True)
    emax = _float(spec, "error.eps_max_deg", optional=True)
    dim = [_float(spec, f"error.dimple.{k}") for k in ("a", "b", "c1", "c2")]
    return _guard("error.kind/mean_deg/eps_max_deg", make_error, spec["error.kind"],
                  None if mean is None else math.radians(mean),
                  None if emax is None else math.radians(emax), *dim)


def build_params(spec):
    vals = [_float(spec, f"net.{k}") for k in ("lambda", "d", "alpha", "beta", "eta", "pt")]
    return _guard("net.*", NetworkParams, *vals)


def build_outage(spec):
    return _guard("outage.pe", OutageConstraint, _float(spec, "outage.pe"))


def build_sim(spec):
    return _guard("sim.*", SimConfig, _float(spec, "sim.window"), _int(spec, "sim.reps"),
                  _int(spec, "sim.seed"))


def build_sweep(spec, command):
    axis0, lo0, hi0, n0, log0 = SWEEP_DEFAULTS[command]
    axis = spec["sweep.axis"] or axis0
    if axis != axis0:
        raise SpecError(f"sweep.axis: command {command!r} sweeps {axis0!r}, got {axis!r}")
    lo = _float(spec, "sweep.min", optional=True)
    hi = _float(spec, "sweep.max", optional=True)
    lo = lo0 if lo is None else lo
    hi = hi0 if hi is None else hi
    n = _int(spec, "sweep.points") if spec["sweep.points"] else n0
    log = _bool(spec, "sweep.log", log0)
    if n < 1:
        raise SpecError(f"sweep.points: must be >= 1, got {n}")
    if not 0 < lo <= hi:
        raise SpecError(f"sweep.min/sweep.max: need 0 < min <= max, got ({lo!r}, {hi!r})")
    if n > 1 and lo == hi:
        raise SpecError("sweep.min/sweep.max: equal bounds need sweep.points = 1")
    grid = np.geomspace(lo, hi, n) if log else np.linspace(lo, hi, n)
    return [float(v) for v in grid]


# -- commands -------------------------------------------------------------

def analytic_success(params, pattern, error, lam):
    """Closed form where available, quadrature otherwise."""
    lam = np.asarray(lam, dtype=float)
    if pattern.kind == OMNI:
        return link_analysis.success_omni(params, lam)
    if pattern.kind == IDEAL:
        if pattern.g2 == 0.0:
            return link_analysis.success_sector_noside(params, pattern, error, lam)
        return link_analysis.success_sector(params, pattern, error, lam)
    return SuccessCurve(params, pattern, error)(lam)


def cmd_success_curve(spec, args):
    params, pattern, error = build_params(spec), build_pattern(spec, g2_db=args.g2_db), build_error(spec)
    lam = np.array(build_sweep(spec, "success-curve"))
    ps = analytic_success(params, pattern, error, lam)
    return [(float(a), float(b)) for a, b in zip(lam, ps)]


def cmd_throughput_curve(spec, args):
    params, pattern, error = build_params(spec), build_pattern(spec, g2_db=args.g2_db), build_error(spec)
    lam = np.array(build_sweep(spec, "throughput-curve"))
    ps = analytic_success(params, pattern, error, lam)
    return [(float(a), float(b), float(a * b)) for a, b in zip(lam, ps)]


def cmd_sweep_beamwidth(spec, args):
    params, error, outage = build_params(spec), build_error(spec), build_outage(spec)
    tp_o = capacity.tp_omni(params).value
    tc_o = capacity.tc_omni(params, outage)
    rows = []
    for w in build_sweep(spec, "sweep-beamwidth"):
        pattern = build_pattern(spec, omega_deg=w, g2_db=args.g2_db)
        tp = capacity.throughput(params, pattern, error)
        tc = capacity.transmission_capacity(params, pattern, error, outage)
        tc_norm = tc.value / tc_o.value if tc_o.feasible else math.nan
        rows.append((w, pattern.g1, tp.value, tp.lambda_star, tp.value / tp_o,
                     tc.value, tc.lambda_star, tc_norm, int(tc.feasible)))
    return rows


def cmd_optimize(spec, args):
    params, outage = build_params(spec), build_outage(spec)
    metric = args.metric
    pattern = build_pattern(spec, g2_db=args.g2_db)  # validates the fixed settings
    family = pattern_family(spec, args.g2_db)
    rows = []
    for mean in build_sweep(spec, "optimize"):
        error = build_error(spec, mean_deg=mean)
        best = capacity.optimize_beamwidth(params, family, error, metric, outage)
        closed = math.nan
        if metric == capacity.TC and pattern.kind == IDEAL and pattern.g2 == 0.0:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                closed = math.degrees(capacity.tc_beamwidth_maximizer(error, outage))
        rows.append((mean, math.degrees(best.omega), best.result.value,
                     best.result.lambda_star, closed))
    return rows


def cmd_simulate(spec, args):
    params, pattern, error = build_params(spec), build_pattern(spec, g2_db=args.g2_db), build_error(spec)
    cfg = build_sim(spec)
    rows = []
    for lam in build_sweep(spec, "simulate"):
        p = params.with_lambda(lam)
        _guard("sim.window", cfg.check, p)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            est = simulate_success(p, pattern, error, cfg)
        ref = float(analytic_success(p, pattern, error, lam))
        rows.append((lam, ref, est.p_hat, est.ci_low, est.ci_high, est.n, int(est.contains(ref))))
    return rows


def cmd_validate(spec, args):
    from .validate_suite import run_suite
    return run_suite(build_params(spec), build_sim(spec), build_outage(spec))


COMMANDS = {
    "success-curve": cmd_success_curve,
    "throughput-curve": cmd_throughput_curve,
    "sweep-beamwidth": cmd_sweep_beamwidth,
    "optimize": cmd_optimize,
    "simulate": cmd_simulate,
    "validate": cmd_validate,
}


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(stream, command, spec, rows, extra_header=()):
    stream.write(f"# command={command}\n")
    for key in sorted(spec):
        stream.write(f"# {key}={spec[key]}\n")
    for line in extra_header:
        stream.write(f"# {line}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(COLUMNS[command])
    for row in rows:
        writer.writerow([_cell(v) for v in row])


def build_parser():
    parser = argparse.ArgumentParser(
        prog="beamnet", description="Coverage, throughput and capacity of directional Poisson networks.",
        epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--spec", help="key = value spec file")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                       help="override a spec entry (repeatable)")
        p.add_argument("-o", "--output", help="CSV path (default: standard output)")
        p.add_argument("--g2-db", action="store_true", help="read pattern.g2 in dB")
        if name == "optimize":
            p.add_argument("--metric", choices=capacity.METRICS, default=capacity.TC)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        text = None
        if args.spec:
            try:
                with open(args.spec, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise SpecError(f"--spec: cannot read {args.spec!r}: {exc.strerror}") from None
        spec = resolve(text, args.overrides, args.spec or "spec")
        # reject bad scalar settings even when this command ignores them
        build_params(spec), build_outage(spec), build_sim(spec)
        rows = COMMANDS[args.command](spec, args)
    except ConfigError as exc:
        print(f"beamnet {args.command}: config error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureNotConverged, BracketError, NoRoot, ArithmeticError) as exc:
        print(f"beamnet {args.command}: numeric failure: {exc}", file=sys.stderr)
        return 3
    extra = ()
    if args.command == "optimize":
        extra = (f"metric={args.metric}",)
    if args.command == "validate":
        passed = sum(int(r[-1]) for r in rows)
        extra = (f"passed={passed}/{len(rows)}",)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_csv(fh, args.command, spec, rows, extra)
    else:
        write_csv(sys.stdout, args.command, spec, rows, extra)
    return 0


if __name__ == "__main__":
    sys.exit(main())
