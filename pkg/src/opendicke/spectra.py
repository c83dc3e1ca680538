"""Full dense eigendecompositions, ordering conventions and spectrum files."""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.optimize import linear_sum_assignment
from scipy.spatial import cKDTree

from . import container
from .errors import ConfigError, SolverError
from .liouvillian import LiouvillianMatrix, real_form, sector_labels
from .model import ModelParams, check_dimension

log = logging.getLogger(__name__)

HERMITIAN_RESIDUAL = 1e-9
LIOUVILLIAN_RESIDUAL = 1e-8
TIE_RTOL = 1e-12


@dataclass
class RealSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    params: ModelParams | None = None


@dataclass
class ComplexSpectrum:
    """Eigenvalues sorted by modulus (ties: phase ascending in (-pi, pi]).

    ``eigenvectors[:, k]`` holds the coefficients of eigenvalue ``k`` over
    ``labels`` (flat Liouville indices) and has unit 2-norm.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    params: ModelParams | None = None
    sector: str = "full"
    labels: np.ndarray | None = None
    params_hash: str = ""
    max_residual: float = float("nan")

    @property
    def dimension(self) -> int:
        return self.eigenvalues.size

    def without_vectors(self) -> "ComplexSpectrum":
        return replace(self, eigenvectors=None)


def modulus_order(eigenvalues, rtol: float = TIE_RTOL) -> np.ndarray:
    """Permutation sorting by modulus, ascending phase in (-pi, pi] on ties.

    Moduli within ``rtol`` (relative, chained between neighbours) count as
    tied, so conjugate pairs order the same way whichever solver produced
    them.
    """
    lam = np.asarray(eigenvalues).ravel()
    mod = np.abs(lam)
    angle = np.angle(lam)
    angle = np.where(angle == -np.pi, np.pi, angle)
    order = np.lexsort((angle, mod))
    m = mod[order]
    tied = np.diff(m) <= rtol * np.maximum(m[1:], 1.0)
    if not tied.any():
        return order
    group = np.concatenate([[0], np.cumsum(~tied)])
    return order[np.lexsort((angle[order], group))]


def normalize_columns(V: np.ndarray) -> np.ndarray:
    """Unit 2-norm columns with the first non-negligible entry real positive."""
    V = V / np.linalg.norm(V, axis=0)
    mags = np.abs(V)
    first = np.argmax(mags > 1e-10 * mags.max(axis=0), axis=0)
    pivot = V[first, np.arange(V.shape[1])]
    return V * (np.abs(pivot) / pivot)


def diagonalize_hermitian(H: np.ndarray, params: ModelParams | None = None) -> RealSpectrum:
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ConfigError("Hamiltonian must be square")
    try:
        E, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigh failed: {exc}") from exc
    scale = max(1.0, np.linalg.norm(H) / np.sqrt(H.shape[0]))
    resid = np.linalg.norm(H @ V - V * E, axis=0).max(initial=0.0)
    if resid > HERMITIAN_RESIDUAL * scale:
        raise SolverError(f"eigh residual {resid:.3e} above tolerance")
    return RealSpectrum(E, V, params)


def _eig(M: np.ndarray, vectors: bool):
    if not np.all(np.isfinite(M)):
        raise SolverError("matrix has non-finite entries")
    try:
        if vectors:
            w, V = la.eig(M, check_finite=False, overwrite_a=True)
        else:
            w, V = la.eigvals(M, check_finite=False, overwrite_a=True), None
    except (la.LinAlgError, ValueError) as exc:
        raise SolverError(f"eig failed: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise SolverError("eigensolver returned non-finite eigenvalues")
    return w, V


def diagonalize_liouvillian(
    L, vectors: bool = True, max_dim: int | None = None
) -> ComplexSpectrum:
    """All eigenpairs of a Liouvillian (or any square matrix).

    A ``LiouvillianMatrix`` is diagonalized in the Hermitian-operator basis,
    where it is real, then rotated back to the projector basis.
    """
    if isinstance(L, LiouvillianMatrix):
        check_dimension(L.dimension, max_dim, "Liouville")
        M, U = real_form(L)
        op = L.matrix
        w, vr = _eig(M, vectors)
        V = U @ vr if vectors else None
        meta = dict(params=L.params, sector=L.sector, labels=L.labels, params_hash=L.params_hash())
    else:
        op = np.array(L, dtype=complex)
        if op.ndim != 2 or op.shape[0] != op.shape[1]:
            raise ConfigError("matrix must be square")
        check_dimension(op.shape[0], max_dim)
        w, V = _eig(op.copy(), vectors)
        meta = {}
    order = modulus_order(w)
    w = w[order]
    resid = float("nan")
    if vectors:
        V = normalize_columns(V[:, order])
        resid = residual(op, w, V)
        fro = spla.norm(op) if sp.issparse(op) else np.linalg.norm(op)
        bound = LIOUVILLIAN_RESIDUAL * fro / np.sqrt(w.size)
        if resid > bound:
            raise SolverError(f"eigenpair residual {resid:.3e} exceeds {bound:.3e}")
    return ComplexSpectrum(w.astype(complex), V, max_residual=resid, **meta)


def residual(op, eigenvalues, V) -> float:
    """Largest ``||A v_k - lambda_k v_k||_2`` over all pairs."""
    R = op @ V - V * eigenvalues
    return float(np.linalg.norm(R, axis=0).max(initial=0.0))


def conjugation_defect(eigenvalues) -> float:
    """Largest distance in the best pairing of ``{lambda}`` with ``{lambda*}``."""
    lam = np.asarray(eigenvalues)
    tree = cKDTree(np.column_stack([lam.real, lam.imag]))
    conj = lam.conj()
    dist, idx = tree.query(np.column_stack([conj.real, conj.imag]))
    if np.unique(idx).size == lam.size:
        return float(dist.max(initial=0.0))
    cost = np.abs(conj[:, None] - lam[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max(initial=0.0))


def save_spectrum(path, spectrum: ComplexSpectrum, drop_vectors: bool = False) -> int:
    """Write a spectrum file; returns its size in bytes."""
    has_vectors = spectrum.eigenvectors is not None and not drop_vectors
    header = {
        "kind": "spectrum",
        "params": spectrum.params.to_dict() if spectrum.params else None,
        "params_hash": spectrum.params_hash,
        "sector": spectrum.sector,
        "dim": spectrum.dimension,
        "has_vectors": has_vectors,
    }
    blocks = [spectrum.eigenvalues.astype(np.complex128)]
    if has_vectors:
        blocks.append(spectrum.eigenvectors.astype(np.complex128))
    return container.write(path, header, blocks)


def load_spectrum(path, expected_hash: str | None = None, vectors: bool = True) -> ComplexSpectrum:
    header, blob = container.read(path, kind="spectrum")
    if expected_hash is not None:
        container.check_hash(header, expected_hash)
    dim = header["dim"]
    lam = np.frombuffer(blob, dtype="<c16", count=dim).astype(complex)
    V = None
    if header["has_vectors"] and vectors:
        V = np.frombuffer(blob, dtype="<c16", count=dim * dim, offset=16 * dim)
        V = V.reshape(dim, dim).astype(complex)
    params = ModelParams.from_dict(header["params"]) if header["params"] else None
    labels = sector_labels(params, header["sector"]) if params else None
    return ComplexSpectrum(
        lam, V, params, header["sector"], labels, header["params_hash"]
    )


def fmt(x) -> str:
    return format(float(x), ".17g")


def write_eigenvalue_csv(path, spectrum: ComplexSpectrum):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "re", "im", "abs"])
        for k, lam in enumerate(spectrum.eigenvalues):
            w.writerow([k, fmt(lam.real), fmt(lam.imag), fmt(abs(lam))])
