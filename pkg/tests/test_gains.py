import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from beamnet import (DiscreteGainLaw, DomainError, QuadratureNotConverged,
                     TruncatedExponentialError, TruncatedHalfNormalError,
                     UniformError, WrongPattern, ZeroError, ideal_sector,
                     interferer_moment, omni, sector_gain_laws,
                     threegpp_sector, transition_sector,
                     typical_gain_expectation)
from beamnet.gains import typical_gain_nodes

from oracles import adaptive_mean, riemann_mean

DEG = math.pi / 180
TWO_PI = 2 * math.pi


# -- discrete laws ----------------------------------------------------------

def test_full_circle_sector_with_zero_error_is_degenerate():
    typ, intf = sector_gain_laws(ideal_sector(TWO_PI, 0.0), ZeroError())
    assert typ.atoms == ((1.0, 1.0),)
    assert intf.atoms == ((1.0, 1.0),)


def test_half_circle_sector_uniform_error_rates():
    typ, intf = sector_gain_laws(ideal_sector(math.pi, 0.2), UniformError())
    assert typ.atoms[0][1] == pytest.approx(0.5, rel=1e-15)
    assert intf.atoms[0][1] == pytest.approx(0.5, rel=1e-15)


def test_interferer_law_values():
    pat = ideal_sector(math.pi / 3, 0.1)
    _, intf = sector_gain_laws(pat, ZeroError())
    g1 = (TWO_PI - (5 * math.pi / 3) * 0.1) / (math.pi / 3)
    (a, pa), (b, pb) = intf.atoms
    assert a == pytest.approx(g1, rel=1e-14) and pa == pytest.approx(1 / 6, rel=1e-14)
    assert b == 0.1 and pb == pytest.approx(5 / 6, rel=1e-14)
    assert intf.kind == "interferer"


def test_sector_laws_reject_other_patterns():
    with pytest.raises(WrongPattern):
        sector_gain_laws(omni(), ZeroError())


def test_gain_law_probabilities_must_sum_to_one():
    with pytest.raises(ValueError):
        DiscreteGainLaw(((1.0, 0.5), (2.0, 0.4)), "typical")


# -- interferer moments -----------------------------------------------------

def test_omni_moment_is_one():
    for a in (2.5, 3.0, 4.0, 6.0):
        assert interferer_moment(omni(), a) == 1.0


def test_ideal_moment_closed_form():
    pat = ideal_sector(math.pi / 2, 0.0)
    assert interferer_moment(pat, 3.0) == pytest.approx(0.25 * 4 ** (2 / 3), rel=1e-14)
    assert interferer_moment(pat, 3.0) == pytest.approx(0.6299605249474366, rel=1e-14)


def test_moment_rejects_small_pathloss():
    with pytest.raises(DomainError):
        interferer_moment(omni(), 2.0)


@pytest.mark.parametrize("omega,g2", [(math.radians(20), 0.1), (math.pi / 2, 0.05), (math.radians(60), 0.3)])
def test_threegpp_moment_matches_riemann_sum(omega, g2):
    pat = threegpp_sector(omega, g2)
    ref = riemann_mean(lambda t: pat.gain(t) ** (2 / 3))
    assert interferer_moment(pat, 3.0) == pytest.approx(ref, abs=1e-7)


def test_transition_moment_matches_adaptive_quadrature():
    pat = transition_sector(math.radians(20), 0.1, math.radians(5))
    brk = [s * b for b in pat.breakpoints for s in (1, -1)]
    ref = float(adaptive_mean(lambda t: pat.gain(t) ** (2 / 3), brk))
    assert ref == pytest.approx(0.5748693052170573, rel=1e-13)
    assert interferer_moment(pat, 3.0) == pytest.approx(ref, rel=1e-12)


def test_sector_moment_matches_quadrature():
    for w, g2 in ((0.3, 0.0), (1.0, 0.1), (4.0, 0.5)):
        pat = ideal_sector(w, g2)
        for a in (2.5, 3.0, 4.5):
            q = 2 / a
            ref = mp.quad(lambda t: pat.gain(float(t)) ** q if pat.gain(float(t)) > 0 else 0,
                          [-mp.pi, -w / 2, w / 2, mp.pi]) / (2 * mp.pi)
            assert interferer_moment(pat, a) == pytest.approx(float(ref), abs=1e-10)


def test_transition_moment_tends_to_ideal():
    w, g2 = math.radians(30), 0.1
    ideal = interferer_moment(ideal_sector(w, g2), 3.0)
    assert abs(interferer_moment(transition_sector(w, g2, 1e-4), 3.0) - ideal) < 1e-3


@given(st.floats(1e-3, TWO_PI - 1e-3), st.floats(0, 0.99), st.floats(2.01, 8.0))
def test_moment_bounded_by_one(omega, g2, alpha):
    m = interferer_moment(ideal_sector(omega, g2), alpha)
    assert 0 < m <= 1 + 1e-9


@given(st.floats(math.radians(2), math.radians(100)), st.floats(1e-3, 0.9), st.floats(2.01, 8.0))
def test_threegpp_moment_bounded_by_one(omega, g2, alpha):
    m = interferer_moment(threegpp_sector(omega, g2), alpha)
    assert 0 < m <= 1 + 1e-9


# -- typical-pair expectations ----------------------------------------------

CONTINUOUS = [
    (transition_sector(math.radians(20), 0.1, math.radians(5)), TruncatedHalfNormalError(3 * DEG)),
    (threegpp_sector(math.radians(20), 0.1), TruncatedExponentialError(10 * DEG)),
    (ideal_sector(math.radians(40), 0.1), UniformError()),
]


@pytest.mark.parametrize("pattern,error", CONTINUOUS + [(omni(), ZeroError())])
def test_expectation_of_constant_is_one(pattern, error):
    val = typical_gain_expectation(lambda a, b: np.ones(np.broadcast(a, b).shape), pattern, error)
    assert val == pytest.approx(1.0, abs=1e-12)


def test_sector_hit_indicator_gives_squared_hit_rate():
    pat, err = ideal_sector(math.radians(20), 0.1), TruncatedHalfNormalError(3 * DEG)
    val = typical_gain_expectation(lambda a, b: (a == pat.g1) * (b == pat.g1), pat, err)
    assert val == pytest.approx(0.9921770028781915 ** 2, rel=1e-13)


def test_omni_product_of_gains_is_one():
    assert typical_gain_expectation(lambda a, b: a * b, omni(), ZeroError()) == 1.0


def test_continuous_rule_matches_discrete_law_for_sectors():
    pat, err = ideal_sector(math.radians(20), 0.1), TruncatedHalfNormalError(3 * DEG)

    def fn(a, b):
        return np.exp(-0.3 * (a * b) ** -0.5)

    exact = typical_gain_expectation(fn, pat, err)
    quad = typical_gain_expectation(fn, pat, err, discrete=False)
    assert quad == pytest.approx(exact, rel=1e-12)


def test_mean_gain_matches_adaptive_quadrature():
    pat, err = transition_sector(math.radians(20), 0.1, math.radians(5)), TruncatedHalfNormalError(3 * DEG)
    g, w = typical_gain_nodes(pat, err, 128)
    brk = [0, *pat.breakpoints, 0.05, 0.1, 0.2, mp.pi]
    ref = mp.quad(lambda t: pat.gain(float(t)) * err.pdf(float(t)), sorted(brk))
    assert float(np.dot(g, w)) == pytest.approx(float(ref), rel=1e-12)


def test_coarse_fine_disagreement_is_reported():
    pat, err = threegpp_sector(math.radians(20), 0.1), TruncatedHalfNormalError(5 * DEG)
    with pytest.raises(QuadratureNotConverged, match="differ"):
        typical_gain_expectation(lambda a, b: np.sin(50 * a) * np.cos(30 * b), pat, err, n=20, rtol=1e-8)
