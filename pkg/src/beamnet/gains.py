"""Random antenna gains induced by orientation error and random geometry.

Between the typical transmitter and receiver the gain input angle is the
orientation error itself, so ``G_T = G(|eps_x|)`` and ``G_R = G(|eps_y|)``
with independent errors.  Between an interferer and the typical receiver
the input angles are uniform on the circle, so only the ``2/alpha``
moment of the pattern over a uniform angle is needed.
"""

import math
from dataclasses import dataclass

import numpy as np

from .error_models import ZeroError
from .exceptions import QuadratureNotConverged, WrongPattern
from .patterns import IDEAL, OMNI, THREEGPP
from .validation import TWO_PI, check_alpha

TYPICAL = "typical"
INTERFERER = "interferer"

_QUANTILE_SPLITS = (0.25, 0.5, 0.75, 0.9) + tuple(1.0 - 10.0 ** -k for k in range(2, 16))
_GRADING_RATIO = 0.25
_GRADING_LEVELS = 18
# nodes per panel are n // _MAIN_DIV on ordinary panels, n // _GRADED_DIV on graded ones
_MAIN_DIV = 5
_GRADED_DIV = 10


@dataclass(frozen=True)
class DiscreteGainLaw:
    """Finite gain distribution as ``((gain, probability), ...)``."""

    atoms: tuple
    kind: str

    def __post_init__(self):
        total = sum(p for _, p in self.atoms)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"gain law probabilities sum to {total!r}")

    def moment(self, q):
        return sum(p * (g ** q if g > 0 else 0.0) for g, p in self.atoms)


@dataclass(frozen=True)
class GainMoments:
    """``2/alpha`` moments of the interferer-side gains."""

    m_t: float
    m_r: float


def sector_gain_laws(pattern, error):
    """Typical-pair and interferer gain laws of an ideal sector.

    The typical law puts mass ``u = F(omega/2)`` on ``g1``; the interferer law
    puts mass ``p = omega / 2pi`` on ``g1``.  Remaining mass sits on ``g2``.
    """
    if pattern.kind != IDEAL:
        raise WrongPattern(f"sector gain laws need an ideal sector, got {pattern.kind!r}")
    u = error.cdf(min(pattern.omega / 2, math.pi))
    p = pattern.omega / TWO_PI
    typical = DiscreteGainLaw(_atoms(pattern.g1, pattern.g2, u), TYPICAL)
    interferer = DiscreteGainLaw(_atoms(pattern.g1, pattern.g2, p), INTERFERER)
    return typical, interferer


def _atoms(g1, g2, w):
    if w >= 1.0:
        return ((g1, 1.0),)
    return ((g1, w), (g2, 1.0 - w))


def interferer_moment(pattern, alpha):
    """Mean of ``G(theta)**(2/alpha)`` for theta uniform on the circle."""
    alpha = check_alpha(alpha)
    return pattern.moment(2.0 / alpha)


def gain_moments(pattern, alpha):
    m = interferer_moment(pattern, alpha)
    return GainMoments(m, m)


def typical_gain_nodes(pattern, error, n=64, discrete=True):
    """Quadrature representation of the law of one typical-pair gain.

    Returns ``(gains, weights)`` so that ``E[h(G_T)] ~ sum(weights * h(gains))``.
    Discrete cases are exact; ``discrete=False`` sends ideal sectors through
    the generic quadrature instead (useful as a cross-check).  Continuous cases use composite Gauss-Legendre
    in error space with ``n // 5`` nodes per panel (``n // 10`` on graded panels);
    panels are split at the pattern breakpoints, at the density kinks of the
    error model and at a few error quantiles so the mass is resolved for
    narrow errors.  Panels are graded geometrically toward angles where the
    gain vanishes.
    Nodes with equal gain (flat pattern pieces) are merged.
    """
    if pattern.kind == OMNI or isinstance(error, ZeroError):
        return np.array([pattern.gain(0.0)]), np.array([1.0])
    if pattern.kind == IDEAL and discrete:
        typical, _ = sector_gain_laws(pattern, error)
        g, w = zip(*typical.atoms)
        return np.array(g), np.array(w)

    emax = error.eps_max
    cuts = {0.0, emax}
    cuts.update(b for b in pattern.breakpoints if b < emax)
    cuts.update(error.breakpoints)
    if pattern.kind == THREEGPP:
        # the Gaussian rolloff varies on the scale of the half beamwidth
        half = pattern.omega / 2
        cuts.update(half * np.arange(0.5, pattern.theta1 / half, 0.5))
    cuts.update(float(error.quantile(q)) for q in _QUANTILE_SPLITS)
    # geometric grading toward gain zeros, where exp(-c * g**-delta) is steep
    graded = []
    for z in pattern.zeros:
        steps = 0.5 * pattern.gamma * _GRADING_RATIO ** np.arange(1, _GRADING_LEVELS + 1)
        cuts.update(z - steps)
        cuts.update(z + steps)
        graded.append((z - 0.5 * pattern.gamma, z + 0.5 * pattern.gamma))
    edges = np.unique([c for c in cuts if 0.0 <= c <= emax])
    lo, hi = edges[:-1], edges[1:]
    fine_panel = np.zeros(lo.shape, dtype=bool)
    for a, b in graded:
        fine_panel |= (lo >= a) & (hi <= b)
    x, w = [], []
    for mask, k in ((~fine_panel, max(4, n // _MAIN_DIV)), (fine_panel, max(4, n // _GRADED_DIV))):
        if mask.any():
            xi, wi = _nodes(lo[mask], hi[mask], k)
            x.append(xi)
            w.append(wi)
    x, w = np.concatenate(x), np.concatenate(w)
    w = w * error.pdf(x)
    g = pattern.gain(x)
    keep = w > 0
    g, w = g[keep], w[keep]
    uniq, inv = np.unique(g, return_inverse=True)
    return uniq, np.bincount(inv, weights=w)


def _nodes(lo, hi, per_panel):
    x0, w0 = np.polynomial.legendre.leggauss(per_panel)
    lo, hi = lo[:, None], hi[:, None]
    x = (0.5 * (hi - lo) * x0 + 0.5 * (hi + lo)).ravel()
    w = (0.5 * (hi - lo) * w0).ravel()
    return x, w


def _pair_expectation(fn, g, w):
    gt, gr = g[:, None], g[None, :]
    return float(np.sum(w[:, None] * w[None, :] * fn(gt, gr)))


def typical_gain_expectation(fn, pattern, error, n=64, rtol=1e-6, discrete=True):
    """``E[fn(G_T, G_R)]`` over independent typical-pair orientation errors.

    ``fn`` must accept broadcastable arrays.  For continuous laws the tensor
    rule built with ``n`` is compared against the one built with ``2n``
    (see :func:`typical_gain_nodes`); the finer value is returned.

    Raises:
        QuadratureNotConverged: if the two rules differ by more than ``rtol``
            relative (plus a 1e-14 absolute floor).
    """
    fine = _pair_expectation(fn, *typical_gain_nodes(pattern, error, 2 * n, discrete))
    if pattern.kind == OMNI or isinstance(error, ZeroError) or (pattern.kind == IDEAL and discrete):
        return fine
    coarse = _pair_expectation(fn, *typical_gain_nodes(pattern, error, n, discrete))
    if abs(fine - coarse) > rtol * abs(fine) + 1e-14:
        raise QuadratureNotConverged(
            f"typical_gain_expectation: {n}- and {2 * n}-node rules differ "
            f"({coarse!r} vs {fine!r})"
        )
    return fine
