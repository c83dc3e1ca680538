"""Nearest-neighbour spacing laws for complex spectra.

``2dp``: uncorrelated points in the plane, ``(pi/2) s exp(-pi s^2/4)``.
``ginue``: bulk of the Ginibre unitary ensemble at density ``1/pi``,

    P(s) = prod_k Q(k+1, s^2) * sum_k 2 s pmf(k; s^2) / Q(k+1, s^2)

with ``Q`` the regularized upper incomplete gamma function and ``pmf`` the
Poisson mass function (so ``2 s^(2k+1) e^(-s^2) / Gamma(1+k, s^2)`` term by
term). Its mean is about 1.1429; the ``*_scaled`` variants have unit mean.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import special
from scipy.interpolate import CubicHermiteSpline

from ..errors import ConfigError

GINUE_SUPPORT = 8.0  # beyond this P_GinUE < 1e-300
SERIES_TAIL = 1e-14
MIN_TERMS = 100

_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)


def _check(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ConfigError("spacings must be non-negative")
    return s


def p_2dp(s):
    s = _check(s)
    return np.pi / 2 * s * np.exp(-np.pi * s**2 / 4)


def cdf_2dp(s):
    s = _check(s)
    return -np.expm1(-np.pi * s**2 / 4)


def ppf_2dp(u):
    u = np.asarray(u, dtype=float)
    return np.sqrt(-4 / np.pi * np.log1p(-u))


def series_terms(s_max: float) -> int:
    """Smallest ``K >= 100`` with ``1 - Q(K+1, s_max^2) < 1e-14``."""
    x = s_max**2
    K = MIN_TERMS
    while special.gammainc(K + 1, x) >= SERIES_TAIL:
        K += 10
    return K


def p_ginue(s, terms: int | None = None):
    s = _check(s)
    out = np.zeros_like(s)
    inside = (s > 0) & (s < GINUE_SUPPORT)
    x = s[inside] ** 2
    if x.size:
        K = terms or series_terms(float(np.sqrt(x.max())))
        k = np.arange(1, K + 1)[:, None]
        Q = special.gammaincc(k + 1, x)
        with np.errstate(divide="ignore", invalid="ignore", under="ignore"):
            log_prod = np.log(Q).sum(axis=0)
            ratio = np.exp(k * np.log(x) - x - special.gammaln(k + 1)) / Q
        ratio = np.where(np.isfinite(ratio), ratio, 0.0)
        out[inside] = np.exp(log_prod) * 2 * np.sqrt(x) * ratio.sum(axis=0)
    return out


class _Tabulated:
    """Hermite interpolant of the GinUE cdf on a fixed fine grid.

    Each panel is integrated with 10-point Gauss-Legendre; the node
    derivatives are the exact density values.
    """

    def __init__(self, h: float = 2e-3):
        nodes = np.linspace(0.0, GINUE_SUPPORT, int(round(GINUE_SUPPORT / h)) + 1)
        a, b = nodes[:-1], nodes[1:]
        mid, half = (a + b) / 2, (b - a) / 2
        pts = mid[:, None] + half[:, None] * _GL_X[None, :]
        K = self._K = series_terms(GINUE_SUPPORT)
        dens = p_ginue(pts.ravel(), K).reshape(pts.shape)
        panels = (dens * _GL_W).sum(axis=1) * half
        F = np.concatenate([[0.0], np.cumsum(panels)])
        first = (dens * _GL_W * pts).sum(axis=1) * half
        self.mass = float(F[-1])
        self.mean = float(first.sum())
        self.nodes = nodes
        self.cdf = F
        self.spline = CubicHermiteSpline(nodes, F, p_ginue(nodes, K))

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = np.where(s >= GINUE_SUPPORT, self.mass, self.spline(np.minimum(s, GINUE_SUPPORT)))
        # F ~ s^4 / 2 in the first panel, where a cubic interpolant undershoots
        first = s < self.nodes[1]
        if np.any(first):
            out = np.array(out, dtype=float)
            out[first] = self._direct(s[first])
        return np.clip(out, 0.0, self.mass)

    def _direct(self, s):
        half = s / 2
        pts = half[:, None] * (1 + _GL_X[None, :])
        dens = p_ginue(pts.ravel(), self._K).reshape(pts.shape)
        return (dens * _GL_W).sum(axis=1) * half

    def inverse(self, u):
        """Bisection on the interpolant; exact to round-off."""
        u = np.asarray(u, dtype=float)
        idx = np.clip(np.searchsorted(self.cdf, u, side="right") - 1, 0, self.nodes.size - 2)
        lo, hi = self.nodes[idx].copy(), self.nodes[idx + 1].copy()
        for _ in range(60):
            mid = (lo + hi) / 2
            below = self(mid) < u
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return (lo + hi) / 2


@lru_cache(maxsize=1)
def _table() -> _Tabulated:
    return _Tabulated()


def ginue_mean() -> float:
    """First moment of the unscaled GinUE spacing law."""
    return _table().mean


def cdf_ginue(s):
    return _table()(_check(s))


def ppf_ginue(u):
    return _table().inverse(u)


def p_ginue_scaled(s):
    m = ginue_mean()
    return m * p_ginue(_check(s) * m)


def cdf_ginue_scaled(s):
    return cdf_ginue(_check(s) * ginue_mean())


def ppf_ginue_scaled(u):
    return ppf_ginue(u) / ginue_mean()


CDFS = {"2dp": cdf_2dp, "ginue": cdf_ginue_scaled}
DENSITIES = {"2dp": p_2dp, "ginue": p_ginue_scaled}
PPFS = {"2dp": ppf_2dp, "ginue": ppf_ginue_scaled}


def hypothesis_key(name: str) -> str:
    key = name.lower().replace("-", "")
    if key not in CDFS:
        raise ConfigError(f"unknown hypothesis {name!r}; use '2dp' or 'ginue'")
    return key
