"""Monte Carlo estimate of the typical-link success probability.

Each replication conditions on a typical transmitter-receiver pair, drops a
Poisson field of interfering transmitters around the receiver, draws
orientation errors, direction marks and Rayleigh fades, and checks whether
the SINR at the typical receiver reaches the threshold.

Two window shapes are supported.  ``"disk"`` (the default) samples
interferers in a disk of radius ``window_side / 2`` around the receiver and
adds the mean interference from beyond that radius.  That tail decays only
like ``R**(2 - alpha)`` and biases the estimate noticeably if dropped.  ``"torus"`` samples a square
window with wrap-around distances and no far-field term.

Replication ``r`` draws from a Philox stream keyed by ``(seed, r)``, so an
estimate depends only on the seed and the replication count, not on how
the work is chunked.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .exceptions import ConfigError
from .validation import TWO_PI

DISK = "disk"
TORUS = "torus"
BOUNDARIES = (DISK, TORUS)

_MIN_WINDOW_IN_D = 20.0
_MIN_EXPECTED_POINTS = 50.0
_CHUNK = 2048


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings.

    Attributes:
        window_side: side of the square window (torus) or diameter of the
            disk window, m.  Must be at least ``20 d``.
        replications: number of independent network realizations.
        seed: 64-bit seed; replication ``r`` uses the stream ``(seed, r)``.
        boundary: ``"disk"`` or ``"torus"``.
        far_field: add the mean interference from outside the disk window.
    """

    window_side: float = 5000.0
    replications: int = 100_000
    seed: int = 0
    boundary: str = DISK
    far_field: bool = True

    def __post_init__(self):
        if not (isinstance(self.window_side, (int, float)) and math.isfinite(self.window_side)
                and self.window_side > 0):
            raise ConfigError(f"sim.window must be a positive number, got {self.window_side!r}")
        if isinstance(self.replications, bool) or not isinstance(self.replications, (int, np.integer)) \
                or self.replications < 1:
            raise ConfigError(f"sim.reps must be an integer >= 1, got {self.replications!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) \
                or not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"sim.seed must be an integer in [0, 2**64), got {self.seed!r}")
        if self.boundary not in BOUNDARIES:
            raise ConfigError(f"sim.boundary must be one of {BOUNDARIES}, got {self.boundary!r}")

    @property
    def area(self):
        if self.boundary == DISK:
            return math.pi * (self.window_side / 2) ** 2
        return self.window_side ** 2

    def check(self, params):
        """Validate against network parameters; warns on sparse windows."""
        if self.window_side < _MIN_WINDOW_IN_D * params.d:
            raise ConfigError(
                f"sim.window must be >= {_MIN_WINDOW_IN_D:g} * d = "
                f"{_MIN_WINDOW_IN_D * params.d!r}, got {self.window_side!r}"
            )
        expected = params.lam * self.area
        if expected < _MIN_EXPECTED_POINTS:
            warnings.warn(f"only {expected:.3g} interferers expected per window", RuntimeWarning,
                          stacklevel=3)


@dataclass(frozen=True)
class SimEstimate:
    """Success estimate with a 95% Wilson interval."""

    p_hat: float
    ci_low: float
    ci_high: float
    n: int
    successes: int

    def contains(self, p):
        return self.ci_low <= p <= self.ci_high

    @property
    def half_width(self):
        return 0.5 * (self.ci_high - self.ci_low)


def far_field_interference(params, radius):
    """Mean interference from transmitters beyond ``radius``.

    Both interferer-side gains average to one, so this is
    ``lam P_t 2 pi R**(2 - alpha) / (alpha - 2)``.
    """
    a = params.alpha
    return params.lam * params.p_t * TWO_PI * radius ** (2.0 - a) / (a - 2.0)


def replication_stream(seed, r):
    """Independent random stream for replication ``r``."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, r], dtype=np.uint64)))


def _signed(error, u_mag, u_sign):
    return error.quantile(u_mag) * np.where(u_sign < 0.5, -1.0, 1.0)


def _draw(cfg, params, start, stop):
    """Uniform draws for replications ``start..stop-1``, stacked."""
    mean = params.lam * cfg.area
    typical = np.empty((stop - start, 6))
    field, counts = [], np.empty(stop - start, dtype=np.int64)
    for k, r in enumerate(range(start, stop)):
        rng = replication_stream(cfg.seed, r)
        typical[k] = rng.random(6)
        counts[k] = rng.poisson(mean)
        field.append(rng.random((6, counts[k])))
    owner = np.repeat(np.arange(stop - start), counts)
    return typical, np.concatenate(field, axis=1), owner


def _count_successes(params, pattern, error, cfg, typical, field, owner, extra_noise):
    a, beta, pt = params.alpha, params.beta, params.p_t
    # typical pair: RX at the origin, TX at distance d in direction phi
    phi = TWO_PI * typical[:, 0]
    eps_t = _signed(error, typical[:, 1], typical[:, 2])
    eps_r = _signed(error, typical[:, 3], typical[:, 4])
    bore_t = phi + math.pi + eps_t
    bore_r = phi + eps_r
    g_t = pattern.gain(phi + math.pi - bore_t)
    g_r = pattern.gain(phi - bore_r)
    signal = pt * g_t * g_r * -np.log1p(-typical[:, 5]) * params.d ** -a

    half = cfg.window_side / 2
    if cfg.boundary == DISK:
        rad = half * np.sqrt(field[0])
        ang = TWO_PI * field[1]
        x, y = rad * np.cos(ang), rad * np.sin(ang)
    else:
        # receiver at the centre of the torus, so the minimum-image
        # displacement is the offset from the centre
        x = cfg.window_side * field[0] - half
        y = cfg.window_side * field[1] - half
    dist = np.hypot(x, y)
    to_rx = np.arctan2(-y, -x)
    # interferer boresight: its own receiver direction plus orientation error
    bore_i = TWO_PI * field[2] + _signed(error, field[3], field[4])
    g_ti = pattern.gain(to_rx - bore_i)
    g_ri = pattern.gain(np.arctan2(y, x) - bore_r[owner])
    fade = -np.log1p(-field[5])
    with np.errstate(divide="ignore"):
        power = pt * g_ti * g_ri * fade * dist ** -a
    interference = np.bincount(owner, weights=power, minlength=typical.shape[0])
    ok = (signal > 0) & (signal >= beta * (interference + params.eta + extra_noise))
    return int(np.count_nonzero(ok))


def simulate_success(params, pattern, error, cfg=None):
    """Estimate the success probability of the typical link.

    Returns a :class:`SimEstimate` with a 95% Wilson interval.

    Raises:
        ConfigError: if the window is smaller than ``20 d``.
    """
    cfg = SimConfig() if cfg is None else cfg
    cfg.check(params)
    extra = 0.0
    if cfg.boundary == DISK and cfg.far_field:
        extra = far_field_interference(params, cfg.window_side / 2)
    wins = 0
    for start in range(0, cfg.replications, _CHUNK):
        stop = min(start + _CHUNK, cfg.replications)
        typical, field, owner = _draw(cfg, params, start, stop)
        wins += _count_successes(params, pattern, error, cfg, typical, field, owner, extra)
    n = cfg.replications
    ci = stats.binomtest(wins, n).proportion_ci(confidence_level=0.95, method="wilson")
    return SimEstimate(wins / n, float(ci.low), float(ci.high), n, wins)
