import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from opendicke.chaometrics.distributions import (
    cdf_2dp,
    cdf_ginue,
    cdf_ginue_scaled,
    ginue_mean,
    hypothesis_key,
    p_2dp,
    p_ginue,
    p_ginue_scaled,
    ppf_2dp,
    ppf_ginue_scaled,
)
from opendicke.errors import ConfigError


def ginue_oracle(s, K=120):
    """Arbitrary-precision product/sum evaluated term by term."""
    with mpmath.workdps(40):
        s = mpmath.mpf(s)
        x = s * s
        prod = mpmath.mpf(1)
        total = mpmath.mpf(0)
        for k in range(1, K + 1):
            upper = mpmath.gammainc(k + 1, x)  # Gamma(1+k, x), not regularized
            prod *= upper / mpmath.factorial(k)
            total += 2 * s ** (2 * k + 1) * mpmath.exp(-x) / upper
        return float(prod * total)


def test_2dp_at_zero():
    assert p_2dp(0.0) == 0 and cdf_2dp(0.0) == 0


def test_2dp_normalized_unit_mean():
    mass = integrate.quad(p_2dp, 0, np.inf)[0]
    mean = integrate.quad(lambda s: s * p_2dp(s), 0, np.inf)[0]
    assert mass == pytest.approx(1, abs=1e-10) and mean == pytest.approx(1, abs=1e-10)


def test_2dp_cdf_at_one():
    assert cdf_2dp(1.0) == pytest.approx(1 - math.exp(-math.pi / 4))
    assert round(float(cdf_2dp(1.0)), 4) == 0.5441


@given(st.floats(0, 0.999999))
def test_2dp_inverse(u):
    assert cdf_2dp(ppf_2dp(u)) == pytest.approx(u, abs=1e-12)


@pytest.mark.parametrize("s", [0.05, 0.3, 0.8, 1.1429, 1.7, 2.5, 3.5])
def test_ginue_density_matches_oracle(s):
    assert p_ginue(s) == pytest.approx(ginue_oracle(s), rel=1e-10)


def test_ginue_mean():
    assert ginue_mean() == pytest.approx(1.1429, abs=1e-3)
    mean = integrate.quad(lambda s: s * p_ginue(s), 0, 8, limit=200)[0]
    assert ginue_mean() == pytest.approx(mean, abs=1e-10)


def test_ginue_cubic_repulsion():
    s = np.array([1e-3, 3e-3, 1e-2])
    ratio = p_ginue(s) / s**3
    assert np.all(ratio > 0)
    assert np.allclose(ratio, 2.0, rtol=1e-3)


def test_scaled_mass_and_mean():
    mass = integrate.quad(p_ginue_scaled, 0, 10, limit=200)[0]
    mean = integrate.quad(lambda s: s * p_ginue_scaled(s), 0, 10, limit=200)[0]
    assert mass == pytest.approx(1, abs=1e-6) and mean == pytest.approx(1, abs=1e-6)


@pytest.mark.parametrize("s", [0.1, 0.5, 1.0, 1.5, 2.0, 3.0])
def test_ginue_cdf_against_quadrature(s):
    ref = integrate.quad(p_ginue, 0, s, epsabs=1e-14)[0]
    assert cdf_ginue(s) == pytest.approx(ref, abs=1e-10)


@given(st.floats(1e-9, 1 - 1e-9))
def test_ginue_inverse(u):
    assert cdf_ginue_scaled(ppf_ginue_scaled(u)) == pytest.approx(u, abs=1e-12)


@given(st.lists(st.floats(0, 10), min_size=2, max_size=20))
def test_cdfs_monotone_bounded(xs):
    s = np.sort(xs)
    for F in (cdf_2dp, cdf_ginue_scaled):
        v = F(s)
        assert np.all(np.diff(v) >= -1e-15)
        assert np.all((v >= 0) & (v <= 1))


def test_negative_spacing_rejected():
    with pytest.raises(ConfigError):
        p_ginue(-1.0)


def test_hypothesis_names():
    assert hypothesis_key("GinUE") == "ginue" and hypothesis_key("2DP") == "2dp"
    with pytest.raises(ConfigError):
        hypothesis_key("goe")
