import numpy as np
import pytest
from hypothesis import given, strategies as st

from opendicke.chaometrics.ensembles import sample_ginibre, sample_poisson_disk, trial_rng
from opendicke.chaometrics.ratios import REFERENCE, complex_ratios


def test_collinear_equispaced():
    r = complex_ratios(np.arange(30) * 0.5 + 0j)
    assert np.all(r.r <= 1)
    assert np.all(np.isclose(np.abs(r.theta), 0) | np.isclose(np.abs(r.theta), np.pi))


@given(st.integers(0, 2**32 - 1), st.floats(0.01, 100), st.floats(-np.pi, np.pi), st.floats(-10, 10))
def test_similarity_invariance(seed, scale, phase, shift):
    rng = np.random.default_rng(seed)
    z = rng.random(80) + 1j * rng.random(80)
    a = complex_ratios(z).Z
    b = complex_ratios(z * scale * np.exp(1j * phase) + shift).Z
    assert np.allclose(a, b, atol=1e-9)


@given(st.integers(0, 2**32 - 1))
def test_ratio_inside_unit_disk(seed):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(60) + 1j * rng.standard_normal(60)
    assert np.all(complex_ratios(z).r <= 1 + 1e-15)


def pooled(samples):
    Z = np.concatenate([complex_ratios(s.points, subset=s.bulk).Z for s in samples])
    return np.abs(Z).mean(), -np.cos(np.angle(Z)).mean()


def test_poisson_reference():
    # four clouds of 10^4 points keep the standard error of <cos> near 0.004
    mean_r, neg_cos = pooled(sample_poisson_disk(10_000, trial_rng(5, t)) for t in range(4))
    assert mean_r == pytest.approx(REFERENCE["2dp"][0], abs=0.01)
    assert neg_cos == pytest.approx(REFERENCE["2dp"][1], abs=0.01)


def test_ginibre_reference():
    # about 10^4 bulk eigenvalues in total
    mean_r, neg_cos = pooled(sample_ginibre(1000, trial_rng(6, t)) for t in range(16))
    assert mean_r == pytest.approx(REFERENCE["ginue"][0], abs=0.01)
    assert neg_cos == pytest.approx(REFERENCE["ginue"][1], abs=0.015)
