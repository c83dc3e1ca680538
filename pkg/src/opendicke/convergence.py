"""Truncation convergence: eigenstate tail weights, eigenvalue drift and
the quadratic growth law of the converged count."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateFitError
from .spectra import ComplexSpectrum, RealSpectrum, fmt

DEFAULT_TOLERANCE = 1e-3


@dataclass
class ConvergenceReport:
    """Tail weights per eigenstate and the accepted prefix.

    For a Hamiltonian spectrum ``p2_tail`` is ``None`` and ``p1_tail`` holds
    the photon probability at ``n_max``.
    """

    tolerance: float
    p1_tail: np.ndarray
    p2_tail: np.ndarray | None
    n_converged: int
    n_total: int
    eigenvalues: np.ndarray | None = None
    n_max: int | None = None

    @property
    def accepted(self) -> np.ndarray:
        return np.arange(self.n_converged)

    @property
    def passes(self) -> np.ndarray:
        """Pointwise criterion, ignoring the prefix rule."""
        ok = self.p1_tail <= self.tolerance
        if self.p2_tail is not None:
            ok &= self.p2_tail <= self.tolerance
        return ok

    @property
    def ratio(self) -> float:
        return self.n_converged / self.n_total

    def converged_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues[: self.n_converged]

    def summary(self) -> dict:
        return {
            "n_max": self.n_max,
            "Delta": self.tolerance,
            "N_CES": self.n_converged,
            "N_ES": self.n_total,
            "ratio": self.ratio,
        }


def _prefix_length(ok: np.ndarray) -> int:
    bad = np.flatnonzero(~ok)
    return int(bad[0]) if bad.size else int(ok.size)


def _check_tolerance(tol: float):
    if not 0 <= tol <= 1:
        raise ConfigError(f"tolerance must lie in [0, 1], got {tol}")


def hamiltonian_photon_distribution(vector: np.ndarray, spin_dim: int) -> np.ndarray:
    """Photon-number distribution ``p_n`` of a Fock-basis state vector."""
    w = np.abs(np.asarray(vector)) ** 2
    return w.reshape(-1, spin_dim, *w.shape[1:]).sum(axis=1)


def hamiltonian_converged(spec: RealSpectrum, delta: float = DEFAULT_TOLERANCE) -> ConvergenceReport:
    if spec.eigenvectors is None or spec.params is None:
        raise ConfigError("Hamiltonian convergence needs eigenvectors and params")
    _check_tolerance(delta)
    p = hamiltonian_photon_distribution(spec.eigenvectors, spec.params.spin_dim)
    tail = p[-1]
    n_ok = _prefix_length(tail <= delta)
    return ConvergenceReport(
        delta, tail, None, n_ok, tail.size, spec.eigenvalues, spec.params.n_max
    )


def liouvillian_tail_weights(spec: ComplexSpectrum, k=None) -> tuple[np.ndarray, np.ndarray]:
    """Weight profiles ``P1[n']`` and ``P2[n]`` of eigenvector(s) ``k``.

    Returns arrays of shape ``(n_max + 1,)`` for a single index, otherwise
    ``(n_max + 1, len(k))``.
    """
    if spec.eigenvectors is None or spec.params is None:
        raise ConfigError("tail weights need eigenvectors and params")
    V = spec.eigenvectors if k is None else spec.eigenvectors[:, k]
    return _profiles(np.abs(V) ** 2, spec.labels, spec.params)


def _profiles(W, labels, params):
    D, sd, nb = params.dim_hilbert, params.spin_dim, params.n_max + 1
    n_left = labels // D // sd
    n_right = labels % D // sd
    shape = (nb,) + W.shape[1:]
    P1 = np.zeros(shape)
    P2 = np.zeros(shape)
    np.add.at(P1, n_left, W)
    np.add.at(P2, n_right, W)
    return P1, P2


def liouvillian_tails(spec: ComplexSpectrum) -> tuple[np.ndarray, np.ndarray]:
    """``(P1[n_max], P2[n_max])`` for every eigenvector."""
    if spec.eigenvectors is None or spec.params is None:
        raise ConfigError("tail weights need eigenvectors and params")
    D, sd = spec.params.dim_hilbert, spec.params.spin_dim
    top = spec.params.n_max
    W = np.abs(spec.eigenvectors) ** 2
    left_top = spec.labels // D // sd == top
    right_top = spec.labels % D // sd == top
    return W[left_top].sum(axis=0), W[right_top].sum(axis=0)


def liouvillian_converged(
    spec: ComplexSpectrum, Delta: float = DEFAULT_TOLERANCE, tails=None
) -> ConvergenceReport:
    """Accept the longest modulus-ordered prefix with both tails <= Delta."""
    _check_tolerance(Delta)
    p1, p2 = liouvillian_tails(spec) if tails is None else tails
    n_ok = _prefix_length((p1 <= Delta) & (p2 <= Delta))
    n_max = spec.params.n_max if spec.params else None
    return ConvergenceReport(Delta, p1, p2, n_ok, p1.size, spec.eigenvalues, n_max)


def eigenvalue_drift(a, b) -> np.ndarray:
    """Distance from each eigenvalue of ``a`` to a partner in ``b``.

    Eigenvalues of ``a`` are visited in modulus order and greedily take the
    nearest unmatched eigenvalue of ``b``.
    """
    sa = getattr(a, "sector", None)
    sb = getattr(b, "sector", None)
    if sa is not None and sb is not None and sa != sb:
        raise ConfigError(f"sector mismatch: {sa} vs {sb}")
    x = np.asarray(getattr(a, "eigenvalues", a))
    y = np.asarray(getattr(b, "eigenvalues", b))
    if y.size < x.size:
        raise ConfigError("second spectrum must be at least as large as the first")
    x = x[np.argsort(np.abs(x), kind="stable")]
    free = np.ones(y.size, bool)
    drift = np.empty(x.size)
    for i, lam in enumerate(x):
        d = np.where(free, np.abs(y - lam), np.inf)
        j = int(np.argmin(d))
        drift[i] = d[j]
        free[j] = False
    return drift


@dataclass
class FitResult:
    A1: float
    A2: float
    residual: float
    asymptotic_ratio: float


def fit_converged_counts(samples, two_j: int) -> FitResult:
    """Least squares fit of ``N = A1 n + A2 n^2`` (no constant term)."""
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[0] < 3:
        raise ConfigError("need at least three (n_max, N_CES) samples")
    n, N = data[:, 0], data[:, 1]
    X = np.column_stack([n, n**2])
    if np.linalg.matrix_rank(X) < 2:
        raise DegenerateFitError("singular normal equations")
    (A1, A2), *_ = np.linalg.lstsq(X, N, rcond=None)
    res = float(np.linalg.norm(X @ [A1, A2] - N))
    return FitResult(float(A1), float(A2), res, 2 * A2 / (two_j + 1) ** 2)


def write_report_csv(path, report: ConvergenceReport):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "abs_lambda", "re", "im", "P1_tail", "P2_tail", "accepted"])
        p2 = report.p2_tail if report.p2_tail is not None else np.full_like(report.p1_tail, np.nan)
        for k, lam in enumerate(report.eigenvalues):
            lam = complex(lam)
            w.writerow([
                k, fmt(abs(lam)), fmt(lam.real), fmt(lam.imag),
                fmt(report.p1_tail[k]), fmt(p2[k]), int(k < report.n_converged),
            ])


def write_summary_json(path, report: ConvergenceReport):
    with open(path, "w") as fh:
        json.dump(report.summary(), fh, indent=2, sort_keys=True)
        fh.write("\n")
