"""Anderson-Darling statistic and the small-spacing repulsion exponent."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DegenerateFitError
from .distributions import CDFS, hypothesis_key

AD_THRESHOLD = 2.5  # 95% confidence
F_FLOOR = 1e-300
F_CEIL = 1 - 1e-16


@dataclass
class ADResult:
    A2: float
    n: int
    hypothesis: str
    clamped: bool = False

    @property
    def reject(self) -> bool:
        return self.A2 > AD_THRESHOLD


def ad_statistic(F_sorted: np.ndarray) -> float:
    """``-N - sum (2k-1)/N [ln F_k + ln(1 - F_(N+1-k))]`` for ascending ``F``."""
    N = F_sorted.size
    k = np.arange(1, N + 1)
    terms = (2 * k - 1) / N * (np.log(F_sorted) + np.log1p(-F_sorted[::-1]))
    return float(-N - terms.sum())


def anderson_darling(spacings, hypothesis: str = "2dp") -> ADResult:
    key = hypothesis_key(hypothesis)
    s = np.sort(np.asarray(spacings, dtype=float).ravel())
    if s.size == 0:
        raise ConfigError("empty sample")
    F = CDFS[key](s)
    Fc = np.clip(F, F_FLOOR, F_CEIL)
    return ADResult(ad_statistic(Fc), s.size, key, bool(np.any(Fc != F)))


@dataclass
class ExponentFit:
    beta: float
    stderr: float
    n_used: int


def fit_small_s_exponent(spacings, fraction: float = 0.1, min_samples: int = 2000) -> ExponentFit:
    """Repulsion exponent ``beta`` from ``P(s) ~ s^beta`` at small ``s``.

    Regresses ``log F_emp`` on ``log s`` over the smallest ``fraction`` of the
    sample; the slope is ``beta + 1``.
    """
    s = np.sort(np.asarray(spacings, dtype=float).ravel())
    N = s.size
    if N < min_samples:
        raise ConfigError(f"need at least {min_samples} spacings, got {N}")
    m = int(np.ceil(fraction * N))
    low = s[:m]
    if np.any(low <= 0):
        raise DegenerateFitError("zero spacings in the small-s region")
    x = np.log(low)
    y = np.log((np.arange(1, m + 1) - 0.5) / N)
    if np.ptp(x) < 1e-12:
        raise DegenerateFitError("no spread in the smallest spacings")
    X = np.column_stack([np.ones(m), x])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    cov = resid @ resid / max(m - 2, 1) * np.linalg.inv(X.T @ X)
    return ExponentFit(float(coef[1] - 1), float(np.sqrt(cov[1, 1])), m)
