"""Agreement checks between closed forms, quadrature and simulation.

Used by the ``validate`` command.  Each check yields one row
``(check, config, value, reference, abs_diff, tolerance, passed)``.
"""

import math
import warnings
from dataclasses import replace

import numpy as np

from . import capacity, link_analysis
from .error_models import (DimpleError, TruncatedExponentialError,
                           TruncatedHalfNormalError, UniformError, ZeroError)
from .link_analysis import SuccessCurve
from .patterns import ideal_sector, omni, threegpp_sector, transition_sector
from .simulate import simulate_success

_DEG = math.pi / 180.0


def _row(check, config, value, reference, tol, rel=True):
    diff = abs(value - reference)
    bound = tol * abs(reference) if rel else tol
    return (check, config, float(value), float(reference), float(diff), float(tol),
            int(diff <= bound))


def _configs():
    hn3 = TruncatedHalfNormalError(3 * _DEG)
    return [
        ("omni", omni(), ZeroError()),
        ("ideal20_g0.1_hn3", ideal_sector(20 * _DEG, 0.1), hn3),
        ("ideal20_g0_hn3", ideal_sector(20 * _DEG, 0.0), hn3),
        ("ideal60_g0.01_exp10", ideal_sector(60 * _DEG, 0.01), TruncatedExponentialError(10 * _DEG)),
        ("transition20_g0.1_hn3", transition_sector(20 * _DEG, 0.1, 5 * _DEG), hn3),
        ("3gpp20_g0.1_hn3", threegpp_sector(20 * _DEG, 0.1), hn3),
    ]


def closed_form_rows(params):
    rows = []
    lams = (0.0, 1e-6, 1e-5, 1e-4, 1e-3)
    for name, pattern, error in _configs()[:4]:
        curve = SuccessCurve(params, pattern, error)
        for lam in lams:
            if pattern.kind == "omni":
                ref = link_analysis.success_omni(params, lam)
            elif pattern.g2 == 0.0:
                ref = link_analysis.success_sector_noside(params, pattern, error, lam)
            else:
                ref = link_analysis.success_sector(params, pattern, error, lam)
            rows.append(_row("closed_form_vs_quadrature", f"{name}@lam={lam!r}",
                             float(curve(lam)), ref, 1e-10))
    return rows


def capacity_rows(params, outage):
    rows = []
    hn3 = TruncatedHalfNormalError(3 * _DEG)
    pat = ideal_sector(20 * _DEG, 0.0)
    rows.append(_row("tp_numeric_vs_closed", "omni", capacity.tp_numeric(params, omni(), ZeroError()).value,
                     capacity.tp_omni(params).value, 1e-6))
    rows.append(_row("tp_numeric_vs_closed", "ideal20_g0_hn3", capacity.tp_numeric(params, pat, hn3).value,
                     capacity.tp_sector_noside(params, pat.omega, hn3).value, 1e-6))
    rows.append(_row("tc_numeric_vs_closed", "omni",
                     capacity.tc_numeric(params, omni(), ZeroError(), outage).value,
                     capacity.tc_omni(params, outage).value, 1e-8))
    rows.append(_row("tc_numeric_vs_closed", "ideal20_g0_hn3",
                     capacity.tc_numeric(params, pat, hn3, outage).value,
                     capacity.tc_sector_noside(params, pat.omega, hn3, outage).value, 1e-8))
    for name, error in (("hn3", hn3), ("exp10", TruncatedExponentialError(10 * _DEG)),
                        ("uniform_pi", UniformError())):
        w = capacity.tc_beamwidth_maximizer(error, outage)
        grid = np.linspace(1e-3, 2 * math.pi, 10_000)
        tc = [capacity.tc_sector_noside(params, g, error, outage).value for g in grid]
        ref = float(grid[int(np.argmax(tc))])
        rows.append(_row("tc_maximizer_vs_grid", name, w, ref, grid[1] - grid[0], rel=False))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        w = capacity.tc_beamwidth_maximizer(DimpleError(), outage)
    rows.append(_row("tc_maximizer_stationary", "dimple",
                     float(capacity.tc_d1(w / 2, DimpleError(), params, outage)), 0.0, 1e-6, rel=False))
    return rows


def simulation_rows(params, cfg):
    rows = []
    lam_for = {"omni": 1e-5}
    for name, pattern, error in _configs():
        lam = lam_for.get(name, 1e-4)
        p = params.with_lambda(lam)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            est = simulate_success(p, pattern, error, cfg)
        ref = float(SuccessCurve(p, pattern, error)(lam))
        diff = abs(est.p_hat - ref)
        rows.append(("simulation_ci_covers_analytic", f"{name}@lam={lam!r}", est.p_hat, ref,
                     diff, est.half_width, int(est.contains(ref))))
    return rows


def run_suite(params, cfg, outage):
    params = replace(params, lam=0.0)
    return closed_form_rows(params) + capacity_rows(params, outage) + simulation_rows(params, cfg)
