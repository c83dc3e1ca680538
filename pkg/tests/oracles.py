"""Independent reference constructions used as test oracles.

Everything here is built from Kronecker products of textbook operators and
shares no code with the package's assembly routines.
"""
import numpy as np


def spin_matrices(two_j):
    """``J_z`` and ``J_+`` in the ``m_z = -j .. j`` ascending basis."""
    j = two_j / 2
    m = np.arange(-j, j + 1)
    jz = np.diag(m)
    jp = np.zeros((two_j + 1, two_j + 1))
    for i in range(two_j):
        jp[i + 1, i] = np.sqrt(j * (j + 1) - m[i] * (m[i] + 1))
    return jz, jp


def boson_matrices(n_max):
    a = np.diag(np.sqrt(np.arange(1, n_max + 1)), 1)
    return a, a.T @ a


def dicke_operators(omega, omega0, gamma, two_j, n_max):
    """``(H, a)`` on photon (x) spin, photon index outermost."""
    jz, jp = spin_matrices(two_j)
    a1, num = boson_matrices(n_max)
    Is, Ib = np.eye(two_j + 1), np.eye(n_max + 1)
    a = np.kron(a1, Is)
    H = omega * np.kron(num, Is) + omega0 * np.kron(Ib, jz)
    if two_j > 0:
        H = H + gamma / np.sqrt(two_j) * np.kron(a1 + a1.T, jp + jp.T)
    return H, a


def lindblad_kron(H, a, kappa):
    """Row-major vectorized Lindblad generator, ``vec(A rho B) = (A (x) B^T) vec(rho)``."""
    D = H.shape[0]
    I = np.eye(D)
    ad = a.conj().T
    nn = ad @ a
    return (
        -1j * (np.kron(H, I) - np.kron(I, H.T))
        + kappa * (2 * np.kron(a, ad.T) - np.kron(nn, I) - np.kron(I, nn.T))
    )


def dicke_liouvillian(p):
    H, a = dicke_operators(p.omega, p.omega0, p.gamma, p.two_j, p.n_max)
    return lindblad_kron(H, a, p.kappa)


def parity_operator(p):
    """Diagonal of ``exp(i pi (a^dag a + J_z + j))``."""
    n = np.repeat(np.arange(p.n_max + 1), p.two_j + 1)
    m = np.tile(np.arange(p.two_j + 1), p.n_max + 1)
    return (-1.0) ** (n + m)
