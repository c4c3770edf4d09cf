"""Planar antenna radiation patterns normalized to unit total radiated power.

Every pattern is symmetric about boresight and averages to one over the
circle, so narrowing the main beam raises its gain.  Four families are
provided: omni-directional, the ideal sector, a sector with linear
transitions between main beam and sidelobe, and a sector whose main beam
follows the 3GPP parabolic-in-dB rolloff.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from .exceptions import DomainError, NoRoot
from .validation import TWO_PI, check_scalar, wrap_angle

OMNI = "omni"
IDEAL = "ideal"
TRANSITION = "transition"
THREEGPP = "3gpp"
KINDS = (OMNI, IDEAL, TRANSITION, THREEGPP)

# 10**(-0.3 t**2) == exp(-_DB3 * t**2)
_DB3 = 0.3 * math.log(10.0)


@dataclass(frozen=True)
class RadiationPattern:
    """Immutable, validated radiation pattern.

    Build instances with :func:`omni`, :func:`ideal_sector`,
    :func:`transition_sector` or :func:`threegpp_sector`; the main-beam
    gain ``g1`` is derived from the other parameters.

    Attributes:
        kind: one of ``"omni"``, ``"ideal"``, ``"transition"``, ``"3gpp"``.
        omega: beamwidth in radians (3-dB beamwidth for the transition and
            3GPP families).
        g2: sidelobe gain, linear.
        gamma: transition width in radians (transition family only).
        g1: main-beam gain, linear.
    """

    kind: str
    omega: float = TWO_PI
    g2: float = 1.0
    gamma: float = 0.0
    g1: float = field(default=1.0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown pattern kind {self.kind!r}")

    # -- geometry -------------------------------------------------------
    @property
    def theta1(self):
        """Edge of the flat (or 3GPP rolloff) main beam, radians."""
        if self.kind == IDEAL:
            return self.omega / 2
        if self.kind == TRANSITION:
            return self.omega / 2 - self.gamma / 2
        if self.kind == THREEGPP:
            return _threegpp_theta1(self.omega, self.g1, self.g2)
        return math.pi

    @property
    def breakpoints(self):
        """Angles in (0, pi) where the gain is not smooth, ascending."""
        if self.kind == IDEAL:
            pts = (self.omega / 2,)
        elif self.kind == TRANSITION:
            half = self.omega / 2
            pts = (half - self.gamma / 2, half + self.gamma / 2, half + self.gamma)
        elif self.kind == THREEGPP:
            pts = (self.theta1,)
        else:
            pts = ()
        return tuple(p for p in pts if 0.0 < p < math.pi)

    @property
    def zeros(self):
        """Angles in (0, pi) where the gain touches zero inside a ramp."""
        if self.kind == TRANSITION:
            return (self.omega / 2 + self.gamma / 2,)
        return ()

    def gain(self, theta):
        """Linear power gain at angle(s) ``theta`` measured from boresight."""
        # fold by |theta| first so gain(theta) == gain(-theta) bit for bit
        a = np.abs(np.asarray(theta, dtype=float))
        a = np.where(a > math.pi, np.abs(wrap_angle(a)), a)
        if self.kind == OMNI:
            out = np.ones_like(a)
        elif self.kind == IDEAL:
            out = np.where(a <= self.omega / 2, self.g1, self.g2)
        elif self.kind == TRANSITION:
            t1 = self.omega / 2 - self.gamma / 2
            t2 = self.omega / 2 + self.gamma / 2
            t3 = self.omega / 2 + self.gamma
            out = np.select(
                [a <= t1, a <= t2, a <= t3],
                [np.full_like(a, self.g1),
                 self.g1 - self.g1 / self.gamma * (a - t1),
                 2.0 * self.g2 / self.gamma * (a - t2)],
                default=self.g2,
            )
        else:
            t1 = self.theta1
            main = self.g1 * np.exp(-_DB3 * (a / (self.omega / 2)) ** 2)
            out = np.where(a <= t1, main, self.g2)
        if np.ndim(theta) == 0:
            return float(out)
        return out

    def __call__(self, theta):
        return self.gain(theta)

    # -- integrals ------------------------------------------------------
    def moment(self, q):
        r"""Average of ``gain**q`` over a uniformly distributed angle.

        Closed form for every family: flat pieces contribute width times
        value, linear ramps integrate as ``w (b**(q+1) - a**(q+1)) / ((q+1)(b-a))``
        and the 3GPP main beam is a Gaussian integral.
        """
        q = float(q)
        if self.kind == OMNI:
            return 1.0
        if self.kind == IDEAL:
            p = self.omega / TWO_PI
            return p * self.g1 ** q + (1.0 - p) * _pow0(self.g2, q)
        if self.kind == TRANSITION:
            half, gam = self.omega / 2, self.gamma
            main = self.g1 ** q * ((half - gam / 2) + gam / (q + 1.0))
            side = _pow0(self.g2, q) * (gam / (2.0 * (q + 1.0)) + math.pi - half - gam)
            return (main + side) / math.pi
        t1 = self.theta1
        main = self.g1 ** q * _gauss_integral(self.omega, q, t1)
        return (main + (math.pi - t1) * _pow0(self.g2, q)) / math.pi

    def trp(self):
        """Total radiated power, integrated numerically (should be 1)."""
        edges = [0.0, *self.breakpoints, math.pi]
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            val, _ = integrate.quad(self.gain, lo, hi, epsabs=1e-13, epsrel=1e-13, limit=200)
            total += val
        return total / math.pi


def _pow0(x, q):
    # 0**q is 0 for the q > 0 used here
    return 0.0 if x == 0.0 else x ** q


def _gauss_integral(omega, q, upper):
    """Integral over [0, upper] of exp(-q * _DB3 * (theta / (omega/2))**2)."""
    half = omega / 2
    c = math.sqrt(q * _DB3)
    return half * math.sqrt(math.pi) / (2.0 * c) * math.erf(c * upper / half)


def _threegpp_theta1(omega, g1, g2):
    return omega / 2 * math.sqrt(10.0 / 3.0 * math.log10(g1 / g2))


def _threegpp_trp(omega, g1, g2):
    t1 = _threegpp_theta1(omega, g1, g2)
    return (g1 * _gauss_integral(omega, 1.0, t1) + (math.pi - t1) * g2) / math.pi


# -- constructors --------------------------------------------------------

def omni():
    """Isotropic pattern, gain 1 in every direction."""
    return RadiationPattern(OMNI)


def ideal_sector(omega, g2=0.0):
    """Ideal sector: ``g1`` within ``omega/2`` of boresight, ``g2`` elsewhere.

    ``omega == 2*pi`` is accepted as the degenerate omni-equivalent sector
    with ``g1 == 1``.
    """
    omega = check_scalar(omega, "omega", low=0.0, high=TWO_PI, low_open=True)
    g2 = check_scalar(g2, "g2", low=0.0)
    if omega == TWO_PI:
        return RadiationPattern(IDEAL, omega=omega, g2=g2, g1=1.0)
    if g2 >= 1.0:
        raise DomainError(f"g2 must be < 1 for a sector, got {g2!r}")
    g1 = (TWO_PI - (TWO_PI - omega) * g2) / omega
    return RadiationPattern(IDEAL, omega=omega, g2=g2, g1=g1)


def transition_sector(omega, g2, gamma):
    """Sector with linear ramps of width ``gamma`` around the beam edge."""
    omega = check_scalar(omega, "omega", low=0.0, low_open=True)
    gamma = check_scalar(gamma, "gamma", low=0.0, low_open=True)
    g2 = check_scalar(g2, "g2", low=0.0)
    if omega >= TWO_PI - 2.0 * gamma:
        raise DomainError(f"omega must be < 2*pi - 2*gamma = {TWO_PI - 2 * gamma!r}, got {omega!r}")
    if gamma >= min(omega, math.pi - omega / 2):
        raise DomainError(f"gamma must be < min(omega, pi - omega/2), got {gamma!r}")
    g2_max = 1.0 / (1.0 - 3.0 * gamma / (4.0 * math.pi))
    if g2 >= g2_max:
        raise DomainError(f"g2 must be < {g2_max!r} for gamma={gamma!r}, got {g2!r}")
    g1 = (TWO_PI - (TWO_PI - 1.5 * gamma - omega) * g2) / omega
    return RadiationPattern(TRANSITION, omega=omega, g2=g2, gamma=gamma, g1=g1)


def solve_g1_3gpp(omega, g2, *, xtol=1e-15, rtol=1e-15):
    """Main-beam gain that gives the 3GPP sector unit TRP.

    The TRP residual is increasing in ``g1``.  The admissible range is
    ``g2 <= g1 <= g2 * 10**(0.3 * (2*pi/omega)**2)`` (the rolloff must meet
    the sidelobe level within pi), and Brent's method is run inside it.

    Raises:
        NoRoot: if no ``g1`` in the admissible range normalizes the pattern.
    """
    omega = check_scalar(omega, "omega", low=0.0, high=TWO_PI, low_open=True)
    g2 = check_scalar(g2, "g2", low=0.0)
    if g2 == 0.0:
        raise NoRoot("3GPP sector needs g2 > 0: the rolloff never reaches a zero sidelobe")
    if g2 >= 1.0:
        raise NoRoot(f"3GPP sector needs g2 < 1 (TRP exceeds 1 for every g1), got g2={g2!r}")
    # log(g1/g2) at which theta1 == pi; capped to keep g1 finite
    s_max = min(_DB3 * (TWO_PI / omega) ** 2, 700.0)
    g1_max = g2 * math.exp(s_max)
    hi = min(g1_max, TWO_PI / omega * (1.0 + g2 * TWO_PI / omega))
    hi = max(hi, 1.0)
    while _threegpp_trp(omega, hi, g2) < 1.0 and hi < g1_max:
        hi = min(2.0 * hi, g1_max)
    if _threegpp_trp(omega, min(hi, g1_max), g2) < 1.0:
        raise NoRoot(
            f"3GPP sector with omega={omega!r}, g2={g2!r} cannot reach unit TRP "
            "while keeping theta1 <= pi"
        )
    hi = min(hi, g1_max)
    return optimize.brentq(lambda g1: _threegpp_trp(omega, g1, g2) - 1.0,
                           g2, hi, xtol=xtol, rtol=rtol, maxiter=500)


def threegpp_sector(omega, g2):
    """3GPP-style sector with 3-dB beamwidth ``omega`` and sidelobe floor ``g2``."""
    g1 = solve_g1_3gpp(omega, g2)
    return RadiationPattern(THREEGPP, omega=float(omega), g2=float(g2), g1=g1)


def make_pattern(kind, omega=None, g2=0.0, gamma=None):
    """Build a pattern by family name; used by the CLI and the estimator."""
    if kind == OMNI:
        return omni()
    if omega is None:
        raise DomainError(f"pattern kind {kind!r} needs omega")
    if kind == IDEAL:
        return ideal_sector(omega, g2)
    if kind == TRANSITION:
        if gamma is None:
            raise DomainError("transition sector needs gamma")
        return transition_sector(omega, g2, gamma)
    if kind == THREEGPP:
        return threegpp_sector(omega, g2)
    raise DomainError(f"unknown pattern kind {kind!r}")


__all__ = [
    "RadiationPattern", "omni", "ideal_sector", "transition_sector",
    "threegpp_sector", "solve_g1_3gpp", "make_pattern", "KINDS",
    "OMNI", "IDEAL", "TRANSITION", "THREEGPP",
]
