import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from opendicke.errors import ConfigError, DimensionError
from opendicke.model import (
    FockLabel,
    ModelParams,
    annihilation,
    build_hamiltonian,
    check_dimension,
    critical_couplings,
    fock_arrays,
    parity_of,
    parity_vector,
)
from oracles import dicke_operators, parity_operator

small_params = st.builds(
    ModelParams,
    omega=st.floats(0.1, 3),
    omega0=st.floats(0.1, 3),
    gamma=st.floats(0, 2),
    kappa=st.floats(0.05, 2),
    two_j=st.integers(0, 4),
    n_max=st.integers(0, 6),
)


def test_critical_couplings_reference_point():
    gc, gos = critical_couplings(ModelParams())
    assert gc == pytest.approx(0.5)
    assert gos == pytest.approx(1 / math.sqrt(2))
    assert round(gos, 3) == 0.707


def test_critical_couplings_closed_system_limit():
    _, gos = critical_couplings(ModelParams(kappa=1e-9))
    assert gos == pytest.approx(0.5, abs=1e-12)


def test_critical_couplings_detuned():
    gc, gos = critical_couplings(ModelParams(omega=2.0))
    assert gc == pytest.approx(math.sqrt(2) / 2)
    assert gos == pytest.approx(math.sqrt(2) / 2 * math.sqrt(1.25))
    assert round(gos, 4) == 0.7906


def test_hamiltonian_diagonal_element():
    H = build_hamiltonian(ModelParams(n_max=3))
    f = FockLabel(0, 0).flat(2)  # n = 0, m_z = -1
    assert H[f, f] == -1.0


def test_hamiltonian_coupling_element():
    p = ModelParams(gamma=0.2, n_max=3)
    H = build_hamiltonian(p)
    bra = FockLabel(1, 1).flat(2)  # n = 1, m_z = 0
    ket = FockLabel(0, 0).flat(2)
    assert H[bra, ket] == pytest.approx(0.2)


def test_hamiltonian_dimension():
    p = ModelParams(n_max=60)
    assert p.dim_hilbert == 183
    assert build_hamiltonian(p).shape == (183, 183)


def test_hamiltonian_uncoupled_spectrum():
    H = build_hamiltonian(ModelParams(gamma=0.0, n_max=2))
    assert np.array_equal(np.sort(np.diag(H)), [-1, 0, 0, 1, 1, 1, 2, 2, 3])
    assert np.count_nonzero(H - np.diag(np.diag(H))) == 0


@given(small_params)
def test_hamiltonian_matches_kronecker_oracle(p):
    H_ref, _ = dicke_operators(p.omega, p.omega0, p.gamma, p.two_j, p.n_max)
    H = build_hamiltonian(p)
    assert np.allclose(H, H_ref, atol=1e-12)
    assert np.array_equal(H, H.T)


@given(small_params)
def test_annihilation_matches_oracle(p):
    _, a_ref = dicke_operators(p.omega, p.omega0, p.gamma, p.two_j, p.n_max)
    assert np.allclose(annihilation(p), a_ref, atol=1e-14)


def test_parity_examples():
    assert parity_of(FockLabel(0, 0), 2) == 1
    assert parity_of(FockLabel(1, 0), 2) == -1
    assert parity_of(FockLabel(2, 1), 2) == -1  # n = 2, m_z = 0, j = 1


@given(small_params)
def test_parity_commutes_with_hamiltonian(p):
    P = parity_vector(p)
    assert np.array_equal(P, parity_operator(p))
    H = build_hamiltonian(p)
    assert np.allclose(P[:, None] * H, H * P[None, :])


def test_flat_index_ordering():
    p = ModelParams(two_j=3, n_max=2)
    n, m = fock_arrays(p)
    for f in range(p.dim_hilbert):
        assert FockLabel(n[f], m[f]).flat(p.two_j) == f
    assert FockLabel(1, 0).m_z(3) == -1.5


@pytest.mark.parametrize(
    "bad",
    [
        dict(omega=0.0),
        dict(omega0=-1.0),
        dict(gamma=-0.1),
        dict(kappa=float("nan")),
        dict(two_j=-1),
        dict(n_max=-1),
        dict(two_j=1.5),
    ],
)
def test_invalid_params_rejected(bad):
    with pytest.raises(ConfigError):
        ModelParams(**bad)


def test_dimension_guard():
    check_dimension(100, 100)
    with pytest.raises(DimensionError):
        check_dimension(101, 100)
    with pytest.raises(DimensionError):
        build_hamiltonian(ModelParams(n_max=60), max_dim=100)


@given(small_params)
def test_params_json_round_trip(p):
    q = ModelParams.from_json(p.to_json())
    assert q == p
    assert q.digest("+") == p.digest("+")


def test_unknown_param_key_rejected():
    with pytest.raises(ConfigError):
        ModelParams.from_dict({"gamma": 1.0, "beta": 2.0})


def test_digest_distinguishes_params_and_tags():
    p = ModelParams()
    assert p.digest("+") != p.replace(gamma=0.21).digest("+")
    assert p.digest("+") != p.digest("-")
    assert json.loads(p.to_json())["gamma"] == 0.2


def test_ground_state_converges_in_cutoff():
    e40 = np.linalg.eigvalsh(build_hamiltonian(ModelParams(gamma=0.5, n_max=40)))[0]
    e60 = np.linalg.eigvalsh(build_hamiltonian(ModelParams(gamma=0.5, n_max=60)))[0]
    assert abs(e40 - e60) < 1e-6
