import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from opendicke.chaometrics.neighbors import (
    brute_force,
    collapse_duplicates,
    nearest_neighbors,
    nearest_spacings,
)
from opendicke.errors import ConfigError


def test_collinear_points():
    s = nearest_spacings(np.array([0, 1, 3], dtype=complex))
    assert np.array_equal(s, [1, 1, 2])


def test_square_corners_tie_break():
    z = np.array([0, 1, 1 + 1j, 1j])
    for method in ("brute", "grid"):
        nb = nearest_neighbors(z, 2, method)
        assert np.allclose(nb.distance, 1)
        # both unit-distance neighbours tie; lower index first
        assert nb.index.tolist() == [[1, 3], [0, 2], [1, 3], [0, 2]]


def _clouds(seed):
    rng = np.random.default_rng(seed)
    kind = seed % 5
    n = int(rng.integers(3, 400))
    if kind == 0:
        r, phi = np.sqrt(rng.random(n)), 2 * np.pi * rng.random(n)
        return r * np.exp(1j * phi)
    if kind == 1:  # strongly clustered
        centres = rng.standard_normal(4) * 10 + 1j * rng.standard_normal(4) * 10
        return centres[rng.integers(0, 4, n)] + 0.01 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    if kind == 2:  # integer lattice, many exact ties
        side = int(np.ceil(np.sqrt(n)))
        g = np.arange(side)
        return (g[:, None] + 1j * g[None, :]).ravel()[:max(n, 3)]
    if kind == 3:  # points on a line
        return rng.random(n) * 5 + 0j
    return rng.standard_normal(n) * 100 + 1j * rng.standard_normal(n) * 1e-3  # needle


@pytest.mark.parametrize("seed", range(100))
def test_grid_equals_brute_force(seed):
    z = _clouds(seed)
    a = nearest_neighbors(z, 2, "grid")
    b = nearest_neighbors(z, 2, "brute")
    assert np.array_equal(a.index, b.index)
    assert np.array_equal(a.distance, b.distance)


def test_thousand_point_disk():
    rng = np.random.default_rng(7)
    r, phi = np.sqrt(rng.random(1000)), 2 * np.pi * rng.random(1000)
    z = r * np.exp(1j * phi)
    a, b = nearest_neighbors(z, 2, "grid"), nearest_neighbors(z, 2, "brute")
    assert np.array_equal(a.index, b.index)


@given(
    st.lists(
        st.tuples(st.integers(-20, 20), st.integers(-20, 20)), min_size=3, max_size=60, unique=True
    ),
    st.integers(1, 2),
)
def test_grid_equals_brute_on_lattice_subsets(pts, order):
    z = np.array([complex(x, y) / 7 for x, y in pts])
    a = nearest_neighbors(z, order, "grid")
    b = nearest_neighbors(z, order, "brute")
    assert np.array_equal(a.index, b.index) and np.array_equal(a.distance, b.distance)


@given(st.integers(0, 2**32 - 1))
def test_neighbor_properties(seed):
    rng = np.random.default_rng(seed)
    z = rng.random(50) + 1j * rng.random(50)
    nb = nearest_neighbors(z, 2)
    assert np.all(nb.index != np.arange(50)[:, None])
    assert np.all(nb.distance[:, 0] <= nb.distance[:, 1])
    d = np.abs(z[:, None] - z[None, :]) + np.diag(np.full(50, np.inf))
    assert np.allclose(nb.distance[:, 0], d.min(axis=1))


def test_duplicates_collapsed_with_warning():
    z = np.array([0, 1, 1 + 1e-16, 3, 5j])
    with pytest.warns(UserWarning, match="duplicate"):
        kept_z, kept = collapse_duplicates(z)
    assert kept.tolist() == [0, 1, 3, 4]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        nb = nearest_neighbors(z, 1)
    assert nb.kept.tolist() == [0, 1, 3, 4]
    assert np.all(nb.distance > 0)


def test_too_few_points():
    with pytest.raises(ConfigError):
        nearest_neighbors(np.array([0, 1j]), 1)
    with pytest.raises(ConfigError):
        nearest_neighbors(np.arange(3) + 0j, 3)


def test_unknown_method():
    with pytest.raises(ConfigError):
        nearest_neighbors(np.arange(5) + 0j, 1, "kdtree")


def test_brute_force_chunking_is_invisible():
    rng = np.random.default_rng(3)
    z = rng.random(300) + 1j * rng.random(300)
    a = brute_force(z, 2, chunk=7)
    b = brute_force(z, 2, chunk=1000)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
