"""Moving-window spectral statistics along the eigenvalue modulus."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from ..spectra import TIE_RTOL, fmt
from .goodness import anderson_darling
from .neighbors import nearest_neighbors
from .ratios import complex_ratios
from .unfolding import unfold

COLUMNS = ("w", "mean_abs_lambda", "A2_2dp", "A2_ginue", "mean_r", "mean_neg_cos", "n")


@dataclass
class WindowStats:
    start: int
    stop: int
    mean_abs: float
    A2_2dp: float
    A2_ginue: float
    mean_r: float
    mean_neg_cos: float
    n: int


@dataclass
class WindowScanResult:
    window_size: int
    step: int
    windows: list = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(w, name) for w in self.windows])

    def rows(self):
        for i, w in enumerate(self.windows):
            yield (i, w.mean_abs, w.A2_2dp, w.A2_ginue, w.mean_r, w.mean_neg_cos, w.n)


def window_starts(n: int, size: int, step: int) -> list[int]:
    """Fixed-width windows from the bottom of the list; a last window is
    aligned with the top when the stride does not land there exactly."""
    if step == 0:
        return [0]
    starts = list(range(0, n - size + 1, step))
    if starts[-1] != n - size:
        starts.append(n - size)
    return starts


def analyse_window(points, subset=None, neighbors=None) -> WindowStats:
    """Statistics of ``points[subset]``; neighbours and the smoothed density
    come from all of ``points``."""
    z = np.asarray(points)
    if neighbors is None:
        neighbors = nearest_neighbors(z, 2)
    u = unfold(z, subset=subset, neighbors=neighbors)
    ratios = complex_ratios(z, subset=subset, neighbors=neighbors)
    return WindowStats(
        0, z.size, float(np.abs(u.points).mean()),
        anderson_darling(u.scaled, "2dp").A2,
        anderson_darling(u.scaled, "ginue").A2,
        ratios.mean_r, ratios.mean_neg_cos, int(u.scaled.size),
    )


def window_scan(
    eigenvalues, window_size: int = 500, step: int | None = None, context: str = "spectrum"
) -> WindowScanResult:
    """Unfold, test against both spacing laws and compute ratios per window.

    ``eigenvalues`` must already be ordered by modulus (the converged prefix).
    ``step`` defaults to a tenth of the window; ``step=0`` gives one window.

    With ``context="spectrum"`` a window selects which eigenvalues are tested
    while nearest neighbours and the local density are taken from the whole
    list. ``context="window"`` treats each window as an isolated point set.
    """
    if context not in ("spectrum", "window"):
        raise ConfigError(f"unknown context {context!r}")
    lam = np.asarray(eigenvalues, dtype=complex)
    if window_size > lam.size:
        raise ConfigError(f"window of {window_size} exceeds sample of {lam.size}")
    if window_size < 10:
        raise ConfigError("window too small to unfold")
    mod = np.abs(lam)
    if np.any(np.diff(mod) < -TIE_RTOL * np.maximum(mod[1:], 1.0)):
        raise ConfigError("eigenvalues must be sorted by modulus")
    if step is None:
        step = max(window_size // 10, 1)
    if step < 0:
        raise ConfigError("step must be non-negative")
    result = WindowScanResult(window_size, step)
    nb = nearest_neighbors(lam, 2) if context == "spectrum" else None
    for a in window_starts(lam.size, window_size, step):
        if context == "window":
            stats = analyse_window(lam[a : a + window_size])
        else:
            mask = np.zeros(lam.size, bool)
            mask[a : a + window_size] = True
            stats = analyse_window(lam, mask, nb)
        stats.start, stats.stop = a, a + window_size
        result.windows.append(stats)
    return result


def write_scan_csv(path, result: WindowScanResult):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in result.rows():
            w.writerow([row[0], *map(fmt, row[1:6]), row[6]])
