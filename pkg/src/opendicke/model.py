"""Dicke model parameters, Fock basis and Hamiltonian.

Units: every frequency is measured in units of the cavity decay rate, so the
default ``kappa`` is 1. The pseudo-spin length ``j`` is stored as the integer
``two_j`` so half-integer spins stay exact.

Fock states ``|n; j, m_z>`` are flattened as ``f = (2j+1) n + (m_z + j)``
(0-based). The 1-based label used in reports is ``f + 1``.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, DimensionError

#: Largest Liouville-space dimension (and Hilbert dimension) we agree to build.
MAX_DIMENSION = 40_000

PARAM_KEYS = ("omega", "omega0", "gamma", "kappa", "two_j", "n_max")


@dataclass(frozen=True)
class ModelParams:
    omega: float = 1.0
    omega0: float = 1.0
    gamma: float = 0.2
    kappa: float = 1.0
    two_j: int = 2
    n_max: int = 30

    def __post_init__(self):
        for name in ("omega", "omega0", "kappa"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not self.gamma >= 0:
            raise ConfigError(f"gamma must be non-negative, got {self.gamma!r}")
        for name in ("two_j", "n_max"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 0:
                raise ConfigError(f"{name} must be a non-negative integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        for name in ("omega", "omega0", "gamma", "kappa"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def n_atoms(self) -> int:
        return self.two_j

    @property
    def spin_dim(self) -> int:
        return self.two_j + 1

    @property
    def dim_hilbert(self) -> int:
        return self.spin_dim * (self.n_max + 1)

    @property
    def dim_liouville(self) -> int:
        return self.dim_hilbert**2

    def replace(self, **changes) -> "ModelParams":
        return ModelParams(**{**asdict(self), **changes})

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "ModelParams":
        unknown = set(doc) - set(PARAM_KEYS)
        if unknown:
            raise ConfigError(f"unknown model keys: {sorted(unknown)}")
        try:
            return cls(**doc)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(doc)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def digest(self, *extra: str) -> str:
        """SHA-256 of the canonical parameter document plus ``extra`` tags."""
        payload = json.dumps(
            {k: (repr(v) if isinstance(v, float) else v) for k, v in self.to_dict().items()},
            sort_keys=True,
        )
        return hashlib.sha256("|".join((payload, *extra)).encode()).hexdigest()


class FockLabel(NamedTuple):
    """``|n; j, m_z>`` with ``m_index = m_z + j`` in ``0..2j``."""

    n: int
    m_index: int

    def m_z(self, two_j: int) -> float:
        return self.m_index - two_j / 2

    def flat(self, two_j: int) -> int:
        return (two_j + 1) * self.n + self.m_index


def fock_labels(params: ModelParams) -> list[FockLabel]:
    return [FockLabel(n, m) for n in range(params.n_max + 1) for m in range(params.spin_dim)]


def fock_arrays(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Photon numbers and ``m_z + j`` for every flat index, in order."""
    f = np.arange(params.dim_hilbert)
    return f // params.spin_dim, f % params.spin_dim


def parity_of(label: FockLabel, two_j: int) -> int:
    """Eigenvalue ``(-1)^(n + m_z + j)`` of the parity operator."""
    if not 0 <= label.m_index <= two_j:
        raise ConfigError(f"m index {label.m_index} out of range for 2j={two_j}")
    return -1 if (label.n + label.m_index) % 2 else 1


def parity_vector(params: ModelParams) -> np.ndarray:
    n, m = fock_arrays(params)
    return np.where((n + m) % 2 == 0, 1, -1)


def critical_couplings(params: ModelParams) -> tuple[float, float]:
    """Superradiant critical couplings of the isolated and the open system."""
    gamma_c = math.sqrt(params.omega * params.omega0) / 2
    return gamma_c, gamma_c * math.sqrt(1 + (params.kappa / params.omega) ** 2)


def check_dimension(dim: int, max_dim: int | None = None, what: str = "matrix"):
    limit = MAX_DIMENSION if max_dim is None else max_dim
    if dim > limit:
        raise DimensionError(f"{what} dimension {dim} exceeds the guard {limit}")


def _spin_ladder(two_j: int) -> np.ndarray:
    """C+ coefficients: element ``i`` is ``<m+1|J+|m>`` for ``m = i - j``."""
    j = two_j / 2
    m = np.arange(two_j + 1) - j
    return np.sqrt(np.maximum(j * (j + 1) - m * (m + 1), 0.0))


def build_hamiltonian(params: ModelParams, max_dim: int | None = None) -> np.ndarray:
    """Dense real symmetric Dicke Hamiltonian in the Fock basis."""
    dim = params.dim_hilbert
    check_dimension(dim, max_dim, "Hilbert")
    n, m = fock_arrays(params)
    H = np.diag(params.omega * n + params.omega0 * (m - params.two_j / 2))
    if params.n_atoms == 0 or params.gamma == 0:
        return H
    g = params.gamma / math.sqrt(params.n_atoms)
    c_plus = _spin_ladder(params.two_j)
    sd = params.spin_dim
    # <n+1, m+1| and <n+1, m-1| blocks; the transposes give the n-1 terms
    for f in range(dim):
        nf, mf = n[f], m[f]
        if nf == params.n_max:
            continue
        amp = g * math.sqrt(nf + 1)
        if mf < params.two_j:
            t = (nf + 1) * sd + mf + 1
            H[t, f] = H[f, t] = amp * c_plus[mf]
        if mf > 0:
            t = (nf + 1) * sd + mf - 1
            H[t, f] = H[f, t] = amp * c_plus[mf - 1]
    return H


def annihilation(params: ModelParams) -> np.ndarray:
    """Photon annihilation operator ``a`` on the truncated Fock space."""
    dim = params.dim_hilbert
    n, _ = fock_arrays(params)
    a = np.zeros((dim, dim))
    src = np.flatnonzero(n > 0)
    a[src - params.spin_dim, src] = np.sqrt(n[src])
    return a
