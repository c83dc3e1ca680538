"""Unfolding of complex spectra with a Gaussian-broadened mean density."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from .neighbors import nearest_neighbors

SIGMA_FACTOR = 4.5
MIN_POINTS = 10


@dataclass
class UnfoldedSpacings:
    points: np.ndarray  # points whose spacings are reported
    raw_spacings: np.ndarray
    mean_S: float
    sigma: float
    local_density: np.ndarray
    scaled: np.ndarray


def smoothed_density(targets, points, sigma: float, chunk: int = 1024) -> np.ndarray:
    """``(2 pi sigma^2 N)^-1 sum_l exp(-|z - z_l|^2 / 2 sigma^2)`` at each target.

    The sum runs over every point, including a target's own position.
    """
    targets = np.asarray(targets)
    points = np.asarray(points)
    out = np.empty(targets.size)
    for lo in range(0, targets.size, chunk):
        t = targets[lo : lo + chunk]
        d2 = np.abs(t[:, None] - points[None, :]) ** 2
        out[lo : lo + chunk] = np.exp(-d2 / (2 * sigma**2)).sum(axis=1)
    return out / (2 * np.pi * sigma**2 * points.size)


def unfold(points, subset=None, method: str = "grid", neighbors=None) -> UnfoldedSpacings:
    """Scale nearest-neighbour spacings by the square root of the local density.

    Neighbours and the density estimate use every point. ``subset`` (a
    boolean mask over ``points``) restricts which spacings are reported; the
    mean spacing and the normalization are taken over that subset, so the
    reported scaled spacings always have unit mean. Precomputed ``neighbors``
    for the same ``points`` may be passed in.
    """
    nb = neighbors if neighbors is not None else nearest_neighbors(points, 1, method)
    z = nb.points
    if z.size < MIN_POINTS:
        raise ConfigError(f"unfolding needs at least {MIN_POINTS} distinct points")
    sel = np.ones(z.size, bool) if subset is None else np.asarray(subset, bool)[nb.kept]
    s = nb.distance[sel, 0]
    if s.size == 0:
        raise ConfigError("empty subset")
    S = float(s.mean())
    if not S > 0:
        raise ConfigError("degenerate point set: zero mean spacing")
    sigma = SIGMA_FACTOR * S
    nu = smoothed_density(z[sel], z, sigma)
    weighted = np.sqrt(nu) * s
    return UnfoldedSpacings(z[sel], s, S, sigma, nu, weighted / weighted.mean())
