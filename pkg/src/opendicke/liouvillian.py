"""Dicke Liouvillian with cavity losses in the Fock-projector basis.

Basis element ``|f'><f|`` sits at flat position ``f' * D_H + f`` (row-major
vectorization of the density matrix). With this convention
``vec(A rho B) = (A kron B^T) vec(rho)``.

Matrix elements are assembled directly from the tetradic formula

    L[k'l', kl] = -i (H[k',k] d(l,l') - H[l,l'] d(k',k))
                  + 2 kappa a[k',k] a[l',l]
                  - kappa (n_k d(k',k) d(l,l') + n_l d(k',k) d(l,l'))

and stored sparse; each column has at most ``2 * nnz(H column) + 2`` entries.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from . import container
from .errors import ConfigError, SymmetryViolation
from .model import (
    FockLabel,
    ModelParams,
    build_hamiltonian,
    check_dimension,
    fock_arrays,
    parity_vector,
)

SECTORS = ("full", "+", "-")
CROSS_SECTOR_TOL = 1e-14


class LiouvilleLabel(NamedTuple):
    """Projector ``|left><right|``; ``left`` carries the primed quantum numbers."""

    left: FockLabel
    right: FockLabel

    def parity(self) -> int:
        s = self.left.n + self.left.m_index - self.right.n - self.right.m_index
        return -1 if s % 2 else 1


@dataclass
class LiouvillianMatrix:
    params: ModelParams
    matrix: sp.csr_matrix
    sector: str
    labels: np.ndarray  # flat Liouville index of every row/column

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def left(self) -> np.ndarray:
        return self.labels // self.params.dim_hilbert

    @property
    def right(self) -> np.ndarray:
        return self.labels % self.params.dim_hilbert

    def photon_numbers(self) -> tuple[np.ndarray, np.ndarray]:
        """Photon numbers ``(n', n)`` of the left and right Fock labels."""
        sd = self.params.spin_dim
        return self.left // sd, self.right // sd

    def label(self, i: int) -> LiouvilleLabel:
        sd = self.params.spin_dim
        l, r = self.left[i], self.right[i]
        return LiouvilleLabel(FockLabel(l // sd, l % sd), FockLabel(r // sd, r % sd))

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def params_hash(self) -> str:
        return self.params.digest(self.sector, f"v{container.FORMAT_VERSION}")


def superoperator_parity(params: ModelParams) -> np.ndarray:
    """``P = (-1)^(n'+m'-n-m)`` for every flat Liouville index."""
    p = parity_vector(params)
    return np.outer(p, p).ravel()


def sector_dimension(params: ModelParams, sign: int) -> int:
    """Number of Liouville basis states with superoperator parity ``sign``.

    With ``e`` even and ``o`` odd Fock states the sectors hold ``e^2 + o^2``
    and ``2 e o`` states. For integer ``j`` this reduces to ``D_H^2 / 2`` when
    ``n_max`` is odd and ``(D_H^2 +- 1) / 2`` when it is even.
    """
    p = parity_vector(params)
    e = int(np.count_nonzero(p == 1))
    o = p.size - e
    if sign == 1:
        return e * e + o * o
    if sign == -1:
        return 2 * e * o
    raise ConfigError(f"parity sign must be +1 or -1, got {sign!r}")


def _sign_of(sector) -> int:
    if sector in (1, "+", "+1", "plus"):
        return 1
    if sector in (-1, "-", "-1", "minus"):
        return -1
    raise ConfigError(f"unknown parity sector {sector!r}")


def sector_labels(params: ModelParams, sector) -> np.ndarray:
    if sector == "full":
        return np.arange(params.dim_liouville)
    return np.flatnonzero(superoperator_parity(params) == _sign_of(sector))


def build_liouvillian(params: ModelParams, max_dim: int | None = None) -> LiouvillianMatrix:
    D = params.dim_hilbert
    check_dimension(D * D, max_dim, "Liouville")
    H = build_hamiltonian(params)
    n, _ = fock_arrays(params)
    kap = params.kappa
    rows, cols, vals = [], [], []
    ids = np.arange(D)

    hr, hc = np.nonzero(H)
    hv = H[hr, hc]
    # -i H[k',k] d(l,l'): column (k,l) -> row (k',l), for every l
    rows.append((hr[:, None] * D + ids[None, :]).ravel())
    cols.append((hc[:, None] * D + ids[None, :]).ravel())
    vals.append(np.repeat(-1j * hv, D))
    # +i H[l,l'] d(k',k): column (k,l) -> row (k,l'); H entry (r,c) is (l,l')
    rows.append((ids[:, None] * D + hc[None, :]).ravel())
    cols.append((ids[:, None] * D + hr[None, :]).ravel())
    vals.append(np.tile(1j * hv, D))

    # 2 kappa a[k',k] a[l',l]; a lowers n by one and keeps m
    src = np.flatnonzero(n > 0)
    dst = src - params.spin_dim
    amp = np.sqrt(n[src])
    rows.append((dst[:, None] * D + dst[None, :]).ravel())
    cols.append((src[:, None] * D + src[None, :]).ravel())
    vals.append((2 * kap * np.outer(amp, amp)).ravel().astype(complex))

    # -kappa (n_k + n_l) on the diagonal
    diag = -kap * (n[:, None] + n[None, :]).ravel()
    rows.append(np.arange(D * D))
    cols.append(np.arange(D * D))
    vals.append(diag.astype(complex))

    L = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(D * D, D * D),
    ).tocsr()
    L.sum_duplicates()
    L.eliminate_zeros()
    return LiouvillianMatrix(params, L, "full", np.arange(D * D))


def parity_sector(L: LiouvillianMatrix, sign) -> LiouvillianMatrix:
    """Block of ``L`` acting on the superoperator parity sector ``sign``.

    Raises ``SymmetryViolation`` if any element couples the sector to its
    complement.
    """
    if L.sector != "full":
        raise ConfigError("parity_sector needs the full Liouvillian")
    s = _sign_of(sign)
    parity = superoperator_parity(L.params)
    inside = np.flatnonzero(parity == s)
    outside = np.flatnonzero(parity != s)
    if outside.size:
        leak = L.matrix[inside][:, outside]
        leak2 = L.matrix[outside][:, inside]
        worst = max(
            np.abs(leak.data).max(initial=0.0), np.abs(leak2.data).max(initial=0.0)
        )
        if worst > CROSS_SECTOR_TOL:
            raise SymmetryViolation(f"cross-sector element of size {worst:.3e}")
    block = L.matrix[inside][:, inside].tocsr()
    return LiouvillianMatrix(L.params, block, "+" if s == 1 else "-", inside)


def build_sector(params: ModelParams, sector, max_dim: int | None = None) -> LiouvillianMatrix:
    L = build_liouvillian(params, max_dim)
    return L if sector == "full" else parity_sector(L, sector)


def apply_liouvillian(L: LiouvillianMatrix, rho) -> np.ndarray:
    """``L rho``; ``rho`` is a vector over ``L.labels`` or, for the full
    Liouvillian, a ``D_H x D_H`` density matrix (returned in the same shape)."""
    rho = np.asarray(rho)
    D = L.params.dim_hilbert
    if rho.ndim == 2 and L.sector == "full" and rho.shape == (D, D):
        return (L.matrix @ rho.ravel()).reshape(D, D)
    if rho.shape != (L.dimension,):
        raise ConfigError(f"state of shape {rho.shape} does not match dimension {L.dimension}")
    return L.matrix @ rho


def trace_functional(L: LiouvillianMatrix) -> np.ndarray:
    """Row vector ``<<I| L``; vanishes for a trace-preserving generator."""
    identity = (L.left == L.right).astype(float)
    return np.asarray(L.matrix.T @ identity).ravel()


def hermitian_basis(L: LiouvillianMatrix) -> sp.csr_matrix:
    """Unitary mapping the projector basis to Hermitian operators.

    Columns are ``|k><k|``, ``(|k><l| + |l><k|)/sqrt2`` and
    ``i(|k><l| - |l><k|)/sqrt2`` (k < l). A Hermiticity-preserving generator is
    real in this basis.
    """
    pos = {int(x): i for i, x in enumerate(L.labels)}
    D = L.params.dim_hilbert
    rows, cols, vals = [], [], []
    col = 0
    h = 1 / math.sqrt(2)
    for i, (k, l) in enumerate(zip(L.left, L.right)):
        if k == l:
            rows.append(i)
            cols.append(col)
            vals.append(1.0)
            col += 1
        elif k < l:
            t = pos[int(l) * D + int(k)]
            rows += [i, t, i, t]
            cols += [col, col, col + 1, col + 1]
            vals += [h, h, 1j * h, -1j * h]
            col += 2
    if col != L.dimension:
        raise SymmetryViolation("label set is not closed under transposition")
    return sp.csr_matrix((vals, (rows, cols)), shape=(L.dimension, L.dimension), dtype=complex)


def real_form(L: LiouvillianMatrix) -> tuple[np.ndarray, sp.csr_matrix]:
    """Dense real matrix ``U^H L U`` and the unitary ``U`` from ``hermitian_basis``."""
    U = hermitian_basis(L)
    M = (U.conj().T @ L.matrix @ U).toarray()
    scale = max(np.abs(M).max(), 1.0)
    if np.abs(M.imag).max() > 1e-12 * scale:
        raise SymmetryViolation("Liouvillian is not Hermiticity preserving")
    return np.ascontiguousarray(M.real), U


def save_matrix(path, L: LiouvillianMatrix) -> Path:
    """Write the dense matrix (row-major complex doubles) plus a label sidecar."""
    path = Path(path)
    header = {
        "kind": "liouvillian",
        "dimension": L.dimension,
        "sector": L.sector,
        "params": L.params.to_dict(),
        "params_hash": L.params_hash(),
    }
    container.write(path, header, [L.dense()])
    sidecar = {
        "dim_hilbert": L.params.dim_hilbert,
        "two_j": L.params.two_j,
        "labels": [[int(a), int(b)] for a, b in zip(L.left, L.right)],
    }
    path.with_suffix(path.suffix + ".labels.json").write_text(json.dumps(sidecar))
    return path


def load_matrix(path, params: ModelParams | None = None, sector: str | None = None) -> LiouvillianMatrix:
    header, blob = container.read(path, kind="liouvillian")
    p = ModelParams.from_dict(header["params"])
    dim = header["dimension"]
    if params is not None:
        expected = params.digest(sector or header["sector"], f"v{container.FORMAT_VERSION}")
        container.check_hash(header, expected)
    dense = np.frombuffer(blob, dtype="<c16", count=dim * dim).reshape(dim, dim)
    labels = sector_labels(p, header["sector"])
    return LiouvillianMatrix(p, sp.csr_matrix(dense), header["sector"], labels)
