"""Success probability of the typical transmission in a bipolar Poisson network.

Under Rayleigh fading the success probability conditioned on the
typical-pair gains ``(g_T, g_R)`` is

    exp(-lam * pi * kappa * (beta / (g_T g_R))**(2/alpha) * m_T * m_R * d**2)
        * exp(-beta * d**alpha * eta / (P_t * g_T * g_R))

with ``kappa = Gamma(1 + 2/alpha) Gamma(1 - 2/alpha)`` and ``m_T``, ``m_R`` the
``2/alpha`` moments of the interferer-side gains.  The unconditional value
averages this over the typical-pair gain laws.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import special

from .exceptions import DomainError, QuadratureNotConverged, WrongPattern
from .gains import interferer_moment, typical_gain_expectation, typical_gain_nodes
from .patterns import IDEAL, OMNI
from .validation import TWO_PI, check_alpha, check_scalar

_LAM_CHUNK = 64


@dataclass(frozen=True)
class NetworkParams:
    """Network parameters; defaults are the common values used throughout.

    Attributes:
        lam: transmitter intensity per m^2.
        d: transmitter-receiver distance, m.
        alpha: pathloss exponent, > 2.
        beta: SINR threshold, linear.
        eta: noise power, W.
        p_t: transmit power, W.
    """

    lam: float = 1e-5
    d: float = 100.0
    alpha: float = 3.0
    beta: float = 4.0
    eta: float = 1e-12
    p_t: float = 1.0

    def __post_init__(self):
        check_scalar(self.lam, "lam", low=0.0)
        check_scalar(self.d, "d", low=0.0, low_open=True)
        check_alpha(self.alpha)
        check_scalar(self.beta, "beta", low=0.0, low_open=True)
        check_scalar(self.eta, "eta", low=0.0)
        check_scalar(self.p_t, "p_t", low=0.0, low_open=True)

    @property
    def kappa(self):
        return kappa(self.alpha)

    @property
    def delta(self):
        return 2.0 / self.alpha

    @property
    def interference_scale(self):
        """``pi * kappa * beta**(2/alpha) * d**2``: omni exponent per unit intensity."""
        return math.pi * self.kappa * self.beta ** self.delta * self.d ** 2

    @property
    def noise_scale(self):
        """``beta * d**alpha * eta / P_t``: omni noise exponent."""
        return self.beta * self.d ** self.alpha * self.eta / self.p_t

    def with_lambda(self, lam):
        return replace(self, lam=lam)


def kappa(alpha):
    """``Gamma(1 + 2/alpha) * Gamma(1 - 2/alpha)``."""
    alpha = check_alpha(alpha)
    delta = 2.0 / alpha
    return float(special.gamma(1.0 + delta) * special.gamma(1.0 - delta))


def _lam(params, lam):
    lam = params.lam if lam is None else lam
    arr = np.asarray(lam, dtype=float)
    if np.any(arr < 0) or np.any(~np.isfinite(arr)):
        raise DomainError(f"intensity must be finite and >= 0, got {lam!r}")
    return arr


def _finish(val, lam):
    val = np.clip(val, 0.0, 1.0)
    return float(val) if np.ndim(lam) == 0 else val


def success_omni(params, lam=None):
    """Closed-form success probability with omni-directional antennas."""
    lam_arr = _lam(params, lam)
    val = np.exp(-lam_arr * params.interference_scale - params.noise_scale)
    return _finish(val, lam_arr)


def _require_ideal(pattern):
    if pattern.kind != IDEAL:
        raise WrongPattern(f"expected an ideal sector, got {pattern.kind!r}")


def _hit_rates(pattern, error):
    p = pattern.omega / TWO_PI
    u = error.cdf(min(pattern.omega / 2, math.pi))
    return p, u


def success_sector(params, pattern, error, lam=None):
    """Closed-form success probability for ideal sectors with ``g2 > 0``.

    Three summands: both ends hit (weight ``u**2``), one hits
    (``2 u (1-u)``), both miss (``(1-u)**2``).
    """
    _require_ideal(pattern)
    if pattern.g2 <= 0.0:
        raise DomainError("success_sector needs g2 > 0; use success_sector_noside")
    lam_arr = _lam(params, lam)
    p, u = _hit_rates(pattern, error)
    pb, ub = 1.0 - p, 1.0 - u
    g1, g2, a = pattern.g1, pattern.g2, params.alpha
    A, B = params.interference_scale, params.noise_scale
    r2 = (g2 / g1) ** (2 / a)
    terms = (
        (u * u, (p + pb * r2) ** 2, B / g1 ** 2),
        (2 * u * ub, (p * (g1 / g2) ** (1 / a) + pb * (g2 / g1) ** (1 / a)) ** 2, B / (g1 * g2)),
        (ub * ub, (p / r2 + pb) ** 2, B / g2 ** 2),
    )
    val = sum(w * np.exp(-lam_arr * A * thin - noise) for w, thin, noise in terms if w > 0)
    return _finish(val, lam_arr)


def success_sector_noside(params, pattern, error, lam=None):
    """Closed-form success probability for ideal sectors with ``g2 == 0``."""
    _require_ideal(pattern)
    if pattern.g2 != 0.0:
        raise DomainError(f"success_sector_noside needs g2 == 0, got {pattern.g2!r}")
    lam_arr = _lam(params, lam)
    p, u = _hit_rates(pattern, error)
    val = u * u * np.exp(-lam_arr * params.interference_scale * p * p
                         - params.noise_scale / pattern.g1 ** 2)
    return _finish(val, lam_arr)


def success_general(params, pattern, error, discrete=True):
    """Success probability for any pattern and error model.

    Averages the conditional success probability over the typical-pair
    gains (in error space, see :func:`beamnet.gains.typical_gain_expectation`).
    Zero typical gains contribute nothing.  ``discrete=False`` integrates
    ideal sectors numerically rather than summing their two-atom laws.
    """
    m = interferer_moment(pattern, params.alpha)
    lam, delta = params.lam, params.delta
    A = params.interference_scale * m * m
    B = params.noise_scale

    def integrand(gt, gr):
        g = gt * gr
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            val = np.exp(-lam * A * g ** -delta - B / g)
        return np.where(g > 0, val, 0.0)

    val = typical_gain_expectation(integrand, pattern, error, discrete=discrete)
    return float(np.clip(val, 0.0, 1.0))


class SuccessCurve:
    """Success probability as a vectorized function of intensity.

    Builds the typical-pair gain quadrature once for ``(params, pattern,
    error)`` and then evaluates ``p_s(lam)`` for scalars or arrays.  The
    intensity stored in ``params`` is ignored.  Discrete gain laws (omni,
    ideal sector, zero error) are exact; continuous ones carry a coarse rule
    alongside the fine one and every evaluation checks their agreement.
    """

    def __init__(self, params, pattern, error, n=64, rtol=1e-6):
        self.params, self.pattern, self.error = params, pattern, error
        self.rtol = rtol
        self.moment = interferer_moment(pattern, params.alpha)
        self._fine = self._build(typical_gain_nodes(pattern, error, 2 * n))
        continuous = not (pattern.kind in (OMNI, IDEAL) or error.eps_max == 0.0)
        self._coarse = self._build(typical_gain_nodes(pattern, error, n)) if continuous else None

    def _build(self, nodes):
        g, w = nodes
        gg = (g[:, None] * g[None, :]).ravel()
        ww = (w[:, None] * w[None, :]).ravel()
        keep = (gg > 0) & (ww > 0)
        gg, ww = gg[keep], ww[keep]
        prm = self.params
        s = prm.interference_scale * self.moment ** 2 * gg ** -prm.delta
        logw = np.log(ww) - prm.noise_scale / gg
        return s, logw

    @staticmethod
    def _eval(table, lam):
        s, logw = table
        out = np.empty(lam.shape)
        flat = lam.ravel()
        res = out.ravel()
        for i in range(0, flat.size, _LAM_CHUNK):
            blk = flat[i:i + _LAM_CHUNK, None]
            res[i:i + _LAM_CHUNK] = np.exp(logw[None, :] - blk * s[None, :]).sum(axis=1)
        return res.reshape(lam.shape)

    def __call__(self, lam):
        lam_arr = np.asarray(lam, dtype=float)
        if np.any(lam_arr < 0) or np.any(~np.isfinite(lam_arr)):
            raise DomainError(f"intensity must be finite and >= 0, got {lam!r}")
        fine = self._eval(self._fine, lam_arr)
        if self._coarse is not None:
            coarse = self._eval(self._coarse, lam_arr)
            bad = np.abs(fine - coarse) > self.rtol * np.abs(fine) + 1e-14
            if np.any(bad):
                raise QuadratureNotConverged(
                    "success curve: coarse and fine quadrature disagree at "
                    f"lam={lam_arr[bad].ravel()[0]!r}"
                )
        return _finish(fine, lam_arr)

    def at_zero(self):
        """Noise-only success probability, the limit as intensity -> 0."""
        return float(self(0.0))


def success_curve(params, pattern, error):
    return SuccessCurve(params, pattern, error)
