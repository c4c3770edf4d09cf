import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from beamnet import (DimpleError, DomainError, TruncatedExponentialError,
                     TruncatedHalfNormalError, UniformError, ZeroError,
                     is_concave_cdf, make_error)

DEG = math.pi / 180


def _bisect_quantile(model, q):
    lo, hi = 0.0, model.eps_max
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if model.cdf(mid) < q:
            lo = mid
        else:
            hi = mid
    return hi


# -- cdf ------------------------------------------------------------------

def test_uniform_cdf_midpoint():
    assert UniformError().cdf(math.pi / 2) == 0.5


def test_exponential_cdf_matches_integrated_density():
    m = TruncatedExponentialError(10 * DEG)
    for x in (0.05, 0.3, 1.0, 2.5):
        closed = (1 - math.exp(-x / m.mean_pre_truncation)) / (1 - math.exp(-math.pi / m.mean_pre_truncation))
        integ, _ = integrate.quad(m.pdf, 0, x, epsabs=1e-14, epsrel=1e-13)
        assert m.cdf(x) == pytest.approx(closed, rel=1e-13)
        assert m.cdf(x) == pytest.approx(integ, rel=1e-10)


def test_dimple_cdf_at_branch_point():
    assert DimpleError(0.5, 0.5, 15, 1).cdf(0.5) == pytest.approx(0.5, rel=1e-15)


def test_cdf_clamps_to_one_beyond_support():
    m = UniformError(1.0)
    assert m.cdf(2.0) == 1.0
    assert m.pdf(2.0) == 0.0


@pytest.mark.parametrize("x", [-1e-9, math.pi + 1e-9, math.nan])
def test_cdf_rejects_outside_domain(x):
    with pytest.raises(DomainError):
        TruncatedHalfNormalError(3 * DEG).cdf(x)
    with pytest.raises(DomainError):
        TruncatedHalfNormalError(3 * DEG).pdf(x)


# -- pdf ------------------------------------------------------------------

def test_uniform_density_constant():
    assert np.all(UniformError().pdf(np.linspace(0, math.pi, 9)) == 1 / math.pi)


def test_halfnormal_density_peaks_at_zero_and_integrates_to_one():
    m = TruncatedHalfNormalError(3 * DEG)
    grid = np.linspace(0, math.pi, 1001)
    assert np.argmax(m.pdf(grid)) == 0
    total = mp.quad(lambda t: m.pdf(float(t)), [0, 0.1, 0.5, mp.pi])
    assert float(total) == pytest.approx(1.0, abs=1e-10)


def test_halfnormal_scale_from_mean():
    m = TruncatedHalfNormalError(3 * DEG)
    assert m.sigma == pytest.approx(3 * DEG * math.sqrt(math.pi / 2), rel=1e-15)


def test_dimple_density_jumps_at_branch_point():
    m = DimpleError()
    below, above = m.pdf(0.5 - 1e-9), m.pdf(0.5 + 1e-9)
    assert below < above
    assert m.pdf(0.5) == pytest.approx(below, rel=1e-6)


def test_dpdf_matches_finite_difference():
    for m in (TruncatedExponentialError(0.3), TruncatedHalfNormalError(0.2), DimpleError()):
        for x in (0.1, 0.3, 1.0, 2.0):
            h = 1e-6
            fd = (m.pdf(x + h) - m.pdf(x - h)) / (2 * h)
            assert m.dpdf(x) == pytest.approx(fd, rel=1e-5, abs=1e-8)


# -- quantile -------------------------------------------------------------

def test_uniform_quantile_at_outage_level():
    q = math.sqrt(0.85)
    m = UniformError()
    assert m.quantile(q) == pytest.approx(2.896405313647583, rel=1e-14)
    assert m.quantile(q) == pytest.approx(_bisect_quantile(m, q), abs=1e-12)


@pytest.mark.parametrize("model", [
    ZeroError(), UniformError(2.0), TruncatedExponentialError(0.2),
    TruncatedHalfNormalError(0.1), DimpleError(),
])
def test_quantile_endpoints(model):
    assert model.quantile(0.0) == 0.0
    assert model.quantile(1.0) == model.eps_max


def test_quantile_rejects_bad_level():
    with pytest.raises(DomainError):
        UniformError().quantile(1.5)


@pytest.mark.parametrize("model", [
    UniformError(2.0), TruncatedExponentialError(0.2), TruncatedExponentialError(5.0),
    TruncatedHalfNormalError(0.05), TruncatedHalfNormalError(2.0), DimpleError(),
])
def test_quantile_inverts_cdf(model):
    q = np.linspace(1e-6, 1 - 1e-6, 2001)
    assert np.max(np.abs(model.cdf(model.quantile(q)) - q)) < 1e-10
    for level in (0.1, 0.5, 0.9):
        assert model.quantile(level) == pytest.approx(_bisect_quantile(model, level), abs=1e-11)


# -- sampling -------------------------------------------------------------

def test_zero_error_samples_are_zero():
    assert np.all(ZeroError().sample(np.random.default_rng(1), 100) == 0.0)


def test_uniform_samples_pass_ks():
    m = UniformError()
    x = m.sample_abs(np.random.default_rng(3), 1_000_000)
    assert stats.kstest(x, m.cdf).statistic < 0.002


def test_exponential_sample_mean_matches_truncated_mean():
    m = TruncatedExponentialError(70 * DEG)
    x = m.sample_abs(np.random.default_rng(5), 200_000)
    assert m.mean() == pytest.approx(0.9617617718201543, rel=1e-12)
    assert abs(x.mean() - m.mean()) < 3 * x.std() / math.sqrt(x.size)


def test_signed_samples_symmetric():
    x = TruncatedHalfNormalError(0.2).sample(np.random.default_rng(9), 200_000)
    assert abs(np.mean(x > 0) - 0.5) < 0.005
    assert np.all(np.abs(x) <= math.pi)


# -- concavity --------------------------------------------------------------

@pytest.mark.parametrize("model", [UniformError(), TruncatedExponentialError(0.1),
                                   TruncatedHalfNormalError(3 * DEG)])
def test_standard_families_are_concave(model):
    check = is_concave_cdf(model)
    assert check.concave and check.max_violation == 0.0


def test_dimple_is_not_concave():
    check = is_concave_cdf(DimpleError(0.5, 0.5, 15, 1))
    assert not check.concave
    assert check.max_violation > 0.1


def test_make_error_dispatch():
    assert isinstance(make_error("zero"), ZeroError)
    assert make_error("uniform", mean=0.5).eps_max == 1.0
    assert make_error("uniform", eps_max=2.0).eps_max == 2.0
    assert isinstance(make_error("exponential", 0.1), TruncatedExponentialError)
    assert isinstance(make_error("halfnormal", 0.1), TruncatedHalfNormalError)
    assert isinstance(make_error("dimple"), DimpleError)
    with pytest.raises(DomainError):
        make_error("cauchy", 0.1)
    with pytest.raises(DomainError):
        make_error("halfnormal")


@pytest.mark.parametrize("args", [dict(a=0.0), dict(b=1.0), dict(c1=-1.0)])
def test_dimple_rejects_bad_shape(args):
    with pytest.raises(DomainError):
        DimpleError(**args)


# -- properties -------------------------------------------------------------

means = st.floats(1e-3, 10.0)


def _models(kind, value):
    if kind == "uniform":
        return UniformError(min(value, math.pi))
    if kind == "exponential":
        return TruncatedExponentialError(value)
    return TruncatedHalfNormalError(value)


@settings(max_examples=100)
@given(st.sampled_from(["uniform", "exponential", "halfnormal"]), means)
def test_density_integrates_to_one(kind, value):
    m = _models(kind, value)
    edges = sorted({0.0, m.eps_max, *[float(m.quantile(q)) for q in (0.5, 0.9, 0.999)]})
    total = sum(integrate.quad(m.pdf, a, b, epsabs=1e-13, epsrel=1e-12)[0]
                for a, b in zip(edges[:-1], edges[1:]))
    assert abs(total - 1.0) < 1e-8


@given(st.sampled_from(["uniform", "exponential", "halfnormal"]), means)
def test_cdf_shape_and_log_derivative_bound(kind, value):
    m = _models(kind, value)
    grid = np.linspace(0, m.eps_max, 2001)[1:]
    F, f = m.cdf(grid), m.pdf(grid)
    assert m.cdf(0.0) == 0.0
    assert m.cdf(m.eps_max) == pytest.approx(1.0, abs=1e-15)
    assert np.all(np.diff(F) >= -1e-15)
    assert np.all(f >= 0)
    assert np.all(grid * f / F <= 1 + 1e-9)


@given(st.floats(0.01, 3.0), st.floats(0.01, 3.0))
def test_truncation_keeps_log_derivative(mean, x):
    x = min(x, math.pi)
    exp = TruncatedExponentialError(mean)
    raw = (1 / mean) * math.exp(-x / mean) / -math.expm1(-x / mean)
    assert exp.pdf(x) / exp.cdf(x) == pytest.approx(raw, rel=1e-10)
    hn = TruncatedHalfNormalError(mean)
    s = hn.sigma
    raw = math.sqrt(2 / math.pi) / s * math.exp(-0.5 * (x / s) ** 2) / math.erf(x / (s * math.sqrt(2)))
    assert hn.pdf(x) / hn.cdf(x) == pytest.approx(raw, rel=1e-10)


def test_dimple_log_derivative_bound_holds():
    m = DimpleError()
    grid = np.linspace(0, math.pi, 20_001)[1:]
    assert np.all(grid * m.pdf(grid) / m.cdf(grid) <= 1 + 1e-12)


def test_dimple_density_integrates_to_one():
    m = DimpleError()
    total = integrate.quad(m.pdf, 0, 0.5, epsabs=1e-14)[0] + integrate.quad(m.pdf, 0.5, math.pi)[0]
    assert total == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=100)
@given(st.floats(0.05, 3.0), st.floats(0.05, 0.95), st.floats(0.1, 30.0), st.floats(0.1, 30.0))
def test_dimple_random_shapes_are_distributions(a, b, c1, c2):
    m = DimpleError(a, b, c1, c2)
    total = integrate.quad(m.pdf, 0, a, epsabs=1e-13)[0] + integrate.quad(m.pdf, a, math.pi, epsabs=1e-13)[0]
    assert abs(total - 1.0) < 1e-8
    assert m.cdf(0.0) == 0.0
    assert m.cdf(math.pi) == pytest.approx(1.0, abs=1e-14)
