"""Spatial throughput and transmission capacity.

Spatial throughput is ``max_lam lam * p_s(lam)``.  Transmission capacity is
``lam(p_e) * (1 - p_e)`` where ``lam(p_e)`` solves ``p_s(lam) = 1 - p_e``.
Ideal sectors without sidelobes (and omni antennas) have closed forms; any
other pattern goes through a numeric search on the success curve.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .error_models import ZeroError, is_concave_cdf
from .exceptions import BracketError, DomainError, NoRoot, NonConcaveWarning
from .link_analysis import SuccessCurve
from .patterns import IDEAL, OMNI, ideal_sector
from .validation import TWO_PI, check_probability

TP = "tp"
TC = "tc"
METRICS = (TP, TC)

_LAM_BRACKET = (1e-9, 1e-1)
_LAM_WIDEN = 1e3
_LAM_PER_DECADE = 8


@dataclass(frozen=True)
class ThroughputResult:
    """Optimum of a throughput metric.

    Attributes:
        value: successful transmissions per m^2.
        lambda_star: optimizing intensity per m^2.
        p_s_at_star: success probability at ``lambda_star``.
        omega: beamwidth in radians (``2*pi`` for omni).
        feasible: False when no intensity meets the outage constraint; the
            value is then 0.
    """

    value: float
    lambda_star: float
    p_s_at_star: float
    omega: float
    feasible: bool = True


@dataclass(frozen=True)
class OutageConstraint:
    """Maximum tolerated outage probability ``p_e`` in (0, 1)."""

    p_e: float = 0.15

    def __post_init__(self):
        check_probability(self.p_e, "p_e", open_interval=True)

    @property
    def target(self):
        """Required success probability ``1 - p_e``."""
        return 1.0 - self.p_e


def _outage(outage):
    if isinstance(outage, OutageConstraint):
        return outage
    return OutageConstraint(outage)


def _result(lam, ps, omega):
    return ThroughputResult(lam * ps, lam, ps, omega)


def _infeasible(omega, ps0):
    return ThroughputResult(0.0, 0.0, ps0, omega, feasible=False)


# -- closed forms ----------------------------------------------------------

def _noside_rates(params, omega, error):
    pattern = ideal_sector(omega, 0.0)
    p = pattern.omega / TWO_PI
    u = error.cdf(min(pattern.omega / 2, math.pi))
    return pattern, p, u


def tp_sector_noside(params, omega, error):
    """TP of ideal sectors without sidelobes: ``lam* = 1 / (p**2 A)``."""
    pattern, p, u = _noside_rates(params, omega, error)
    lam = 1.0 / (p * p * params.interference_scale)
    ps = u * u * math.exp(-1.0 - params.noise_scale / pattern.g1 ** 2)
    return _result(lam, ps, pattern.omega)


def tp_omni(params):
    lam = 1.0 / params.interference_scale
    return _result(lam, math.exp(-1.0 - params.noise_scale), TWO_PI)


def tc_sector_noside(params, omega, error, outage):
    """TC of ideal sectors without sidelobes.

    ``lam* = log(u**2 exp(-B / g1**2) / (1 - p_e)) / (p**2 A)``; a
    non-positive log means the outage target is out of reach and the
    result is flagged infeasible with value 0.
    """
    outage = _outage(outage)
    pattern, p, u = _noside_rates(params, omega, error)
    if u == 0.0:
        return _infeasible(pattern.omega, 0.0)
    log_arg = 2.0 * math.log(u) - params.noise_scale / pattern.g1 ** 2 - math.log(outage.target)
    if log_arg <= 0.0:
        return _infeasible(pattern.omega, u * u * math.exp(-params.noise_scale / pattern.g1 ** 2))
    lam = log_arg / (p * p * params.interference_scale)
    return _result(lam, outage.target, pattern.omega)


def tc_omni(params, outage):
    outage = _outage(outage)
    log_arg = -params.noise_scale - math.log(outage.target)
    if log_arg <= 0.0:
        return _infeasible(TWO_PI, math.exp(-params.noise_scale))
    return _result(log_arg / params.interference_scale, outage.target, TWO_PI)


def tp_gain(params, omega, error, noise_free=True):
    """TP of sectors without sidelobes relative to omni.

    With ``noise_free`` (the default) this is ``u**2 / p**2`` exactly;
    otherwise the ratio of the two closed forms at the given noise power.
    """
    _, p, u = _noside_rates(params, omega, error)
    if noise_free:
        return u * u / (p * p)
    return tp_sector_noside(params, omega, error).value / tp_omni(params).value


def tc_gain(params, omega, error, outage, noise_free=True):
    """TC of sectors without sidelobes relative to omni.

    With ``noise_free`` this is ``log(u**2 / (1-p_e)) / (p**2 log(1 / (1-p_e)))``,
    clamped at 0 when the outage target cannot be met.
    """
    outage = _outage(outage)
    if noise_free:
        _, p, u = _noside_rates(params, omega, error)
        if u == 0.0:
            return 0.0
        num = 2.0 * math.log(u) - math.log(outage.target)
        return max(num, 0.0) / (p * p * -math.log(outage.target))
    omni_tc = tc_omni(params, outage)
    if not omni_tc.feasible:
        raise DomainError("omni transmission capacity is zero; the ratio is undefined")
    return tc_sector_noside(params, omega, error, outage).value / omni_tc.value


# -- numeric evaluation on a success curve --------------------------------

def _curve(params, pattern, error, curve):
    return SuccessCurve(params, pattern, error) if curve is None else curve


def tp_numeric(params, pattern, error, curve=None):
    """Maximize ``lam * p_s(lam)`` over ``lam`` numerically.

    Scans a log grid on [1e-9, 1e-1] per m^2, then refines the best cell by
    golden-section search on ``log lam``.  If the best grid point is an
    endpoint the bracket is widened by three decades on each side once.

    Raises:
        BracketError: if the maximum still sits on the widened edge.
    """
    curve = _curve(params, pattern, error, curve)
    lo, hi = math.log(_LAM_BRACKET[0]), math.log(_LAM_BRACKET[1])
    for attempt in range(2):
        n = int(round((hi - lo) / math.log(10.0) * _LAM_PER_DECADE)) + 1
        grid = np.linspace(lo, hi, n)
        vals = np.exp(grid) * curve(np.exp(grid))
        i = int(np.argmax(vals))
        if 0 < i < n - 1:
            break
        if attempt == 1 or vals[i] == 0.0:
            raise BracketError(
                f"tp_numeric: maximum of lam * p_s at the bracket edge lam={math.exp(grid[i])!r}"
            )
        lo -= math.log(_LAM_WIDEN)
        hi += math.log(_LAM_WIDEN)

    def neg(t):
        lam = math.exp(t)
        return -lam * float(curve(lam))

    t = _golden(neg, grid[i - 1], grid[i], grid[i + 1])
    lam = math.exp(t)
    return _result(lam, float(curve(lam)), pattern.omega)


def _golden(fn, a, b, c):
    """Golden-section minimizer of ``fn`` bracketed by ``a < b < c``; ``b`` on failure."""
    try:
        res = optimize.minimize_scalar(fn, bracket=(a, b, c), method="golden", tol=1e-10)
    except ValueError:
        # flat neighbourhood, no strict bracket
        return b
    return res.x if res.fun <= fn(b) else b


def tc_numeric(params, pattern, error, outage, curve=None):
    """Invert ``p_s(lam) = 1 - p_e`` by Brent's method on ``log lam``.

    ``p_s`` decreases in ``lam``; if even ``p_s(0)`` misses the target the
    result is infeasible with value 0.
    """
    outage = _outage(outage)
    curve = _curve(params, pattern, error, curve)
    target = outage.target
    ps0 = float(curve(0.0))
    if ps0 <= target:
        return _infeasible(pattern.omega, ps0)
    lo, hi = math.log(_LAM_BRACKET[0]), math.log(_LAM_BRACKET[1])

    def gap(t):
        return float(curve(math.exp(t))) - target

    while gap(lo) <= 0.0:
        lo -= math.log(_LAM_WIDEN)
        if lo < math.log(1e-300):
            raise BracketError("tc_numeric: success target not reached at tiny intensity")
    while gap(hi) > 0.0:
        hi += math.log(_LAM_WIDEN)
        if hi > math.log(1e300):
            raise BracketError("tc_numeric: success stays above target at huge intensity")
    t = optimize.brentq(gap, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps, maxiter=500)
    lam = math.exp(t)
    return ThroughputResult(lam * target, lam, target, pattern.omega)


def _noside(pattern):
    return pattern.kind == OMNI or (pattern.kind == IDEAL and pattern.g2 == 0.0)


def throughput(params, pattern, error):
    """TP for any pattern; closed form where one exists."""
    if pattern.kind == OMNI:
        return tp_omni(params)
    if _noside(pattern):
        return tp_sector_noside(params, pattern.omega, error)
    return tp_numeric(params, pattern, error)


def transmission_capacity(params, pattern, error, outage):
    """TC for any pattern; closed form where one exists."""
    if pattern.kind == OMNI:
        return tc_omni(params, outage)
    if _noside(pattern):
        return tc_sector_noside(params, pattern.omega, error, outage)
    return tc_numeric(params, pattern, error, outage)


# -- TC of ideal sectors without sidelobes as a function of x = omega/2 ---

def _tc_constants(params, outage):
    outage = _outage(outage)
    a = math.pi * outage.target / (params.kappa * params.d ** 2 * params.beta ** params.delta)
    b = -math.log(outage.target)
    c = params.noise_scale / math.pi ** 2
    return a, b, c


def tc_d0(x, error, params, outage):
    """Unclamped TC at half-beamwidth ``x``: ``A/x**2 (2 log F + B) - A C``."""
    a, b, c = _tc_constants(params, outage)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return a / x ** 2 * (2.0 * np.log(error.cdf(x)) + b) - a * c


def tc_d1(x, error, params, outage):
    """First derivative of :func:`tc_d0` in ``x``."""
    a, b, _ = _tc_constants(params, outage)
    x = np.asarray(x, dtype=float)
    F, f = error.cdf(x), error.pdf(x)
    return 2.0 * a / x ** 2 * (f / F - (2.0 * np.log(F) + b) / x)


def tc_d2(x, error, params, outage):
    """Second derivative of :func:`tc_d0` in ``x``."""
    a, b, _ = _tc_constants(params, outage)
    x = np.asarray(x, dtype=float)
    F, f, df = error.cdf(x), error.pdf(x), error.dpdf(x)
    r = f / F
    return 2.0 * a / x ** 3 * (3.0 * (2.0 * np.log(F) + b) / x - 4.0 * r
                               - x * r * r + x * df / F)


def tc_beamwidth_maximizer(error, outage):
    """Beamwidth maximizing TC of ideal sectors without sidelobes.

    Depends only on the error law and ``p_e``.  If
    ``f(eps_max) >= log(1/(1-p_e)) / eps_max`` the answer is ``2 eps_max``;
    otherwise it is the root in ``x = omega/2`` of
    ``f(x)/F(x) = log(F(x)**2 / (1-p_e)) / x`` on
    ``(F^-1(sqrt(1-p_e)), eps_max)``.

    Emits :class:`NonConcaveWarning` when the error cdf is not concave, in
    which case the root need not be the maximizer.

    Raises:
        DomainError: for the zero-error model, where TC grows without bound
            as the beam narrows.
    """
    outage = _outage(outage)
    if isinstance(error, ZeroError):
        raise DomainError("with zero orientation error TC increases as omega -> 0; no maximizer")
    check = is_concave_cdf(error)
    if not check.concave:
        warnings.warn(
            f"error cdf is not concave (density rises by {check.max_violation:.3g}); "
            "the stationary point may not be the maximizer",
            NonConcaveWarning, stacklevel=2,
        )
    emax = error.eps_max
    b = -math.log(outage.target)
    if error.pdf(emax) >= b / emax:
        return 2.0 * emax
    xl = float(error.quantile(math.sqrt(outage.target)))

    def h(x):
        F = error.cdf(x)
        return error.pdf(x) / F - (2.0 * math.log(F) + b) / x

    if not h(xl) > 0.0:
        # the quantile lands a hair below its exact value; step inside
        xl = math.nextafter(xl, emax)
    try:
        x = optimize.brentq(h, xl, emax, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500)
    except ValueError as exc:
        raise NoRoot(f"tc_beamwidth_maximizer: no sign change on ({xl!r}, {emax!r})") from exc
    return 2.0 * x


# -- beamwidth search for general patterns --------------------------------

def metric_value(params, pattern, error, metric, outage=None):
    """TP or TC of one configuration."""
    if metric == TP:
        return throughput(params, pattern, error)
    if metric == TC:
        if outage is None:
            raise DomainError("metric 'tc' needs an outage constraint")
        return transmission_capacity(params, pattern, error, outage)
    raise DomainError(f"metric must be one of {METRICS}, got {metric!r}")


@dataclass(frozen=True)
class BeamwidthOptimum:
    omega: float
    result: ThroughputResult


def optimize_beamwidth(params, family, error, metric, outage=None, *,
                       omega_min=math.radians(0.5), omega_max=TWO_PI - 1e-9,
                       points=256):
    """Best beamwidth for a pattern family by grid scan plus golden refinement.

    ``family`` maps a beamwidth in radians to a pattern.  Beamwidths for which
    the family has no admissible pattern are skipped.  Unimodality is not
    assumed: the best of ``points`` grid values is refined by golden-section
    search inside its neighbouring cells.  A best point on the grid edge is
    returned as is.
    """
    if not 0.0 < omega_min < omega_max <= TWO_PI:
        raise DomainError(f"need 0 < omega_min < omega_max <= 2*pi, got ({omega_min!r}, {omega_max!r})")
    grid = np.linspace(omega_min, omega_max, points)
    vals = np.full(points, -np.inf)
    results = [None] * points

    def evaluate(omega):
        try:
            pattern = family(omega)
        except (DomainError, NoRoot):
            return None
        return metric_value(params, pattern, error, metric, outage)

    for k, omega in enumerate(grid):
        res = evaluate(float(omega))
        if res is not None:
            results[k], vals[k] = res, res.value
    if not np.isfinite(vals).any():
        raise NoRoot("optimize_beamwidth: no admissible beamwidth on the grid")
    i = int(np.argmax(vals))
    best = BeamwidthOptimum(float(grid[i]), results[i])
    if 0 < i < points - 1 and np.isfinite(vals[i - 1]) and np.isfinite(vals[i + 1]):
        cache = {}

        def neg(omega):
            res = evaluate(float(omega))
            cache[float(omega)] = res
            return np.inf if res is None else -res.value

        omega = float(_golden(neg, grid[i - 1], grid[i], grid[i + 1]))
        res = cache.get(omega)
        if res is not None and res.value > best.result.value:
            best = BeamwidthOptimum(omega, res)
    return best
