"""Distributions of the absolute antenna orientation error |eps| on [0, pi].

The signed error is symmetric about zero, so only the law of its magnitude
matters to the analysis.  Truncated families are parameterized by the mean
of the untruncated distribution and then restricted to [0, pi].
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate, special

from .exceptions import DomainError
from .validation import check_probability, check_scalar

_SQRT2 = math.sqrt(2.0)


class ConcavityCheck(NamedTuple):
    concave: bool
    max_violation: float


class OrientationErrorModel:
    """Base class.  Subclasses fill in the ``_cdf``, ``_pdf``, ``_dpdf`` and
    ``_quantile`` kernels on the support ``[0, eps_max]``; the public methods
    handle domain checks, clamping and broadcasting."""

    kind = "abstract"
    eps_max = math.pi

    @property
    def breakpoints(self):
        """Points in (0, eps_max) where the density is not smooth."""
        return ()

    def _check_x(self, x):
        arr = np.asarray(x, dtype=float)
        if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > math.pi):
            raise DomainError(f"error magnitude must lie in [0, pi], got {x!r}")
        return arr

    @staticmethod
    def _out(x, val):
        return float(val) if np.ndim(x) == 0 else val

    def cdf(self, x):
        """P(|eps| <= x); equals 1 beyond ``eps_max``."""
        arr = self._check_x(x)
        inside = np.minimum(arr, self.eps_max)
        val = np.where(arr >= self.eps_max, 1.0, self._cdf(inside))
        return self._out(x, val)

    def pdf(self, x):
        """Density of |eps|; zero beyond ``eps_max``."""
        arr = self._check_x(x)
        inside = np.minimum(arr, self.eps_max)
        val = np.where(arr > self.eps_max, 0.0, self._pdf(inside))
        return self._out(x, val)

    def dpdf(self, x):
        """Derivative of the density (left derivative at kinks)."""
        arr = self._check_x(x)
        inside = np.minimum(arr, self.eps_max)
        val = np.where(arr > self.eps_max, 0.0, self._dpdf(inside))
        return self._out(x, val)

    def quantile(self, q):
        """Least x with F(x) >= q."""
        arr = np.asarray(q, dtype=float)
        if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
            raise DomainError(f"quantile level must lie in [0, 1], got {q!r}")
        val = np.clip(self._quantile(arr), 0.0, self.eps_max)
        val = np.where(arr <= 0.0, 0.0, np.where(arr >= 1.0, self.eps_max, val))
        return self._out(q, val)

    def sample_abs(self, rng, size=None):
        """Draw |eps| by inverse-cdf sampling from a numpy Generator."""
        return self.quantile(rng.random(size))

    def sample(self, rng, size=None):
        """Draw signed errors: |eps| times an independent fair sign."""
        mag = self.sample_abs(rng, size)
        sign = np.where(rng.random(size) < 0.5, -1.0, 1.0)
        return mag * sign

    def mean(self):
        """Mean of |eps| after truncation."""
        edges = [0.0, *self.breakpoints, self.eps_max]
        return sum(integrate.quad(lambda t: t * self.pdf(t), lo, hi, limit=200)[0]
                   for lo, hi in zip(edges[:-1], edges[1:]))


@dataclass(frozen=True, repr=True)
class ZeroError(OrientationErrorModel):
    """Perfect orientation: an atom at zero."""

    kind = "zero"
    eps_max = 0.0

    def cdf(self, x):
        arr = self._check_x(x)
        return self._out(x, np.ones_like(arr))

    def pdf(self, x):
        arr = self._check_x(x)
        return self._out(x, np.zeros_like(arr))

    def dpdf(self, x):
        return self.pdf(x)

    def _quantile(self, q):
        return np.zeros_like(q)

    def mean(self):
        return 0.0


@dataclass(frozen=True)
class UniformError(OrientationErrorModel):
    """|eps| uniform on [0, eps_max]."""

    eps_max: float = math.pi
    kind = "uniform"

    def __post_init__(self):
        check_scalar(self.eps_max, "eps_max", low=0.0, high=math.pi, low_open=True)

    def _cdf(self, x):
        return x / self.eps_max

    def _pdf(self, x):
        return np.full_like(x, 1.0 / self.eps_max)

    def _dpdf(self, x):
        return np.zeros_like(x)

    def _quantile(self, q):
        return q * self.eps_max

    def mean(self):
        return self.eps_max / 2


@dataclass(frozen=True)
class TruncatedExponentialError(OrientationErrorModel):
    """Exponential with pre-truncation mean ``mean`` restricted to [0, pi]."""

    mean_pre_truncation: float
    kind = "exponential"

    def __post_init__(self):
        check_scalar(self.mean_pre_truncation, "mean", low=0.0, low_open=True)

    @property
    def _norm(self):
        return -math.expm1(-math.pi / self.mean_pre_truncation)

    def _cdf(self, x):
        return -np.expm1(-x / self.mean_pre_truncation) / self._norm

    def _pdf(self, x):
        m = self.mean_pre_truncation
        return np.exp(-x / m) / (m * self._norm)

    def _dpdf(self, x):
        return -self._pdf(x) / self.mean_pre_truncation

    def _quantile(self, q):
        return -self.mean_pre_truncation * np.log1p(-q * self._norm)

    def mean(self):
        m = self.mean_pre_truncation
        return m - math.pi * math.exp(-math.pi / m) / self._norm


@dataclass(frozen=True)
class TruncatedHalfNormalError(OrientationErrorModel):
    """Half-normal with pre-truncation mean ``mean`` restricted to [0, pi].

    The scale is ``sigma = mean * sqrt(pi/2)`` since a half-normal has mean
    ``sigma * sqrt(2/pi)``.
    """

    mean_pre_truncation: float
    kind = "halfnormal"

    def __post_init__(self):
        check_scalar(self.mean_pre_truncation, "mean", low=0.0, low_open=True)

    @property
    def sigma(self):
        return self.mean_pre_truncation * math.sqrt(math.pi / 2)

    @property
    def _norm(self):
        return math.erf(math.pi / (self.sigma * _SQRT2))

    def _cdf(self, x):
        return special.erf(x / (self.sigma * _SQRT2)) / self._norm

    def _pdf(self, x):
        s = self.sigma
        return _SQRT2 / (s * math.sqrt(math.pi)) * np.exp(-0.5 * (x / s) ** 2) / self._norm

    def _dpdf(self, x):
        return -x / self.sigma ** 2 * self._pdf(x)

    def _quantile(self, q):
        return self.sigma * _SQRT2 * special.erfinv(q * self._norm)

    def mean(self):
        s = self.sigma
        return s * math.sqrt(2 / math.pi) * -math.expm1(-0.5 * (math.pi / s) ** 2) / self._norm


@dataclass(frozen=True)
class DimpleError(OrientationErrorModel):
    """Two glued truncated exponentials with cdf value ``b`` at ``x = a``.

    For suitable parameters the cdf is not concave, yet ``x f(x) / F(x)``
    stays below one.
    """

    a: float = 0.5
    b: float = 0.5
    c1: float = 15.0
    c2: float = 1.0
    kind = "dimple"

    def __post_init__(self):
        check_scalar(self.a, "dimple.a", low=0.0, high=math.pi, low_open=True, high_open=True)
        check_probability(self.b, "dimple.b", open_interval=True)
        check_scalar(self.c1, "dimple.c1", low=0.0, low_open=True)
        check_scalar(self.c2, "dimple.c2", low=0.0, low_open=True)

    @property
    def breakpoints(self):
        return (self.a,)

    @property
    def _n1(self):
        return -math.expm1(-self.c1 * self.a)

    @property
    def _n2(self):
        return -math.expm1(-self.c2 * (math.pi - self.a))

    def _cdf(self, x):
        left = self.b * -np.expm1(-self.c1 * x) / self._n1
        right = self.b + (1 - self.b) * -np.expm1(-self.c2 * (x - self.a)) / self._n2
        return np.where(x <= self.a, left, right)

    def _pdf(self, x):
        # x == a takes the left branch
        left = self.b * self.c1 * np.exp(-self.c1 * x) / self._n1
        right = (1 - self.b) * self.c2 * np.exp(-self.c2 * (x - self.a)) / self._n2
        return np.where(x <= self.a, left, right)

    def _dpdf(self, x):
        c = np.where(x <= self.a, self.c1, self.c2)
        return -c * self._pdf(x)

    def _quantile(self, q):
        with np.errstate(invalid="ignore", divide="ignore"):
            left = -np.log1p(-q * self._n1 / self.b) / self.c1
            right = self.a - np.log1p(-(q - self.b) * self._n2 / (1 - self.b)) / self.c2
        return np.where(q <= self.b, left, right)


def is_concave_cdf(model, n=10_000, tol=1e-9):
    """Grid check that the density is nonincreasing on (0, eps_max).

    Returns ``(concave, max_violation)`` where ``max_violation`` is the
    largest increase of the density between neighbouring grid points.
    This is a diagnostic, not a proof.
    """
    if model.eps_max == 0.0:
        return ConcavityCheck(True, 0.0)
    grid = np.linspace(0.0, model.eps_max, n + 2)[1:-1]
    steps = np.diff(model.pdf(grid))
    worst = float(max(steps.max(initial=0.0), 0.0))
    return ConcavityCheck(worst <= tol, worst)


def make_error(kind, mean=None, eps_max=None, a=0.5, b=0.5, c1=15.0, c2=1.0):
    """Build an error model from a family name (angles in radians).

    For the uniform family ``eps_max`` wins; otherwise ``mean`` sets
    ``eps_max = 2 * mean``.
    """
    if kind == "zero":
        return ZeroError()
    if kind == "uniform":
        if eps_max is None:
            if mean is None:
                raise DomainError("uniform error needs eps_max or mean")
            eps_max = 2.0 * mean
        return UniformError(eps_max)
    if kind in ("exponential", "halfnormal"):
        if mean is None:
            raise DomainError(f"{kind} error needs a mean")
        cls = TruncatedExponentialError if kind == "exponential" else TruncatedHalfNormalError
        return cls(mean)
    if kind == "dimple":
        return DimpleError(a, b, c1, c2)
    raise DomainError(f"unknown error kind {kind!r}")


ERROR_KINDS = ("zero", "uniform", "exponential", "halfnormal", "dimple")
