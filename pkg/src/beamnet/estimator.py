"""scikit-learn style front end.

:class:`SuccessProbability` bundles a pattern, an error model and network
parameters behind ``fit``/``predict``: ``fit`` validates the settings and
builds the success curve, ``predict`` maps intensities to success
probabilities.  Hyperparameters follow sklearn conventions, so
``get_params``/``set_params``/``clone`` work and grid searches over
beamwidth are straightforward.
"""

import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .capacity import OutageConstraint, throughput, transmission_capacity
from .error_models import make_error
from .link_analysis import NetworkParams, SuccessCurve
from .patterns import make_pattern


def _rad(deg):
    return None if deg is None else math.radians(deg)


class SuccessProbability(BaseEstimator):
    """Success probability of the typical link as a function of intensity.

    Angles are given in degrees.  ``fit`` ignores its arguments; they exist
    so the estimator drops into sklearn tooling.

    Attributes set by ``fit``:
        pattern_, error_, params_, curve_
    """

    def __init__(self, pattern="ideal", omega_deg=20.0, g2=0.1, gamma_deg=5.0,
                 error="halfnormal", error_mean_deg=3.0, error_eps_max_deg=None,
                 d=100.0, alpha=3.0, beta=4.0, eta=1e-12, p_t=1.0, n_nodes=64, rtol=1e-6):
        self.pattern = pattern
        self.omega_deg = omega_deg
        self.g2 = g2
        self.gamma_deg = gamma_deg
        self.error = error
        self.error_mean_deg = error_mean_deg
        self.error_eps_max_deg = error_eps_max_deg
        self.d = d
        self.alpha = alpha
        self.beta = beta
        self.eta = eta
        self.p_t = p_t
        self.n_nodes = n_nodes
        self.rtol = rtol

    def fit(self, X=None, y=None):
        self.pattern_ = make_pattern(self.pattern, _rad(self.omega_deg), self.g2, _rad(self.gamma_deg))
        self.error_ = make_error(self.error, _rad(self.error_mean_deg), _rad(self.error_eps_max_deg))
        self.params_ = NetworkParams(0.0, self.d, self.alpha, self.beta, self.eta, self.p_t)
        self.curve_ = SuccessCurve(self.params_, self.pattern_, self.error_, self.n_nodes, self.rtol)
        return self

    def predict(self, X):
        """Success probability at each intensity in ``X`` (1-D or one column)."""
        check_is_fitted(self, "curve_")
        lam = check_array(np.asarray(X, dtype=float).reshape(-1, 1), ensure_min_samples=1)
        return self.curve_(lam[:, 0])

    def throughput(self):
        check_is_fitted(self, "curve_")
        return throughput(self.params_, self.pattern_, self.error_)

    def transmission_capacity(self, p_e=0.15):
        check_is_fitted(self, "curve_")
        return transmission_capacity(self.params_, self.pattern_, self.error_, OutageConstraint(p_e))
