"""Synthetic point clouds with known spacing statistics, and the calibration
runs that check the statistics pipeline against them."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..errors import ConfigError
from .distributions import PPFS, hypothesis_key
from .goodness import anderson_darling
from .ratios import complex_ratios
from .unfolding import unfold

GINIBRE_BULK = 0.8
POISSON_BULK = 0.9


@dataclass
class EnsembleSample:
    points: np.ndarray
    bulk: np.ndarray  # boolean mask of points away from the edge


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for Monte Carlo trial ``trial``."""
    return np.random.default_rng([int(seed), int(trial)])


def sample_ginibre(n: int, rng: np.random.Generator) -> EnsembleSample:
    """Eigenvalues of an ``n x n`` matrix of i.i.d. standard complex Gaussians.

    The cloud fills the disk of radius ``sqrt(n)`` at density ``1/pi``.
    """
    if n < 16:
        raise ConfigError("Ginibre bulk statistics need n >= 16")
    G = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    lam = np.linalg.eigvals(G)
    return EnsembleSample(lam, np.abs(lam) < GINIBRE_BULK * np.sqrt(n))


def sample_poisson_disk(n_points: int, rng: np.random.Generator) -> EnsembleSample:
    """Uniform i.i.d. points in the unit disk."""
    r = np.sqrt(rng.random(n_points))
    phi = 2 * np.pi * rng.random(n_points)
    z = r * np.exp(1j * phi)
    return EnsembleSample(z, r < POISSON_BULK)


def sample_spacings(hypothesis: str, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw spacings from a reference law by inverse transform sampling."""
    return PPFS[hypothesis_key(hypothesis)](rng.random(size))


@dataclass
class CalibrationReport:
    ensemble: str
    hypothesis: str
    trials: int
    size: int
    seed: int
    A2: list
    pass_fraction: float
    mean_r: float
    mean_neg_cos: float
    n_points: int

    def to_dict(self) -> dict:
        return asdict(self)


def calibrate(ensemble: str, trials: int = 20, size: int | None = None, seed: int = 0) -> CalibrationReport:
    """Run the unfold -> AD -> ratio pipeline on ``trials`` synthetic clouds.

    Statistics are collected over bulk points only; ratios are pooled.
    """
    if ensemble == "ginibre":
        size = size or 512
        draw, hyp = sample_ginibre, "ginue"
    elif ensemble == "poisson":
        size = size or 4000
        draw, hyp = sample_poisson_disk, "2dp"
    else:
        raise ConfigError(f"unknown ensemble {ensemble!r}")
    a2, Z = [], []
    for t in range(trials):
        sample = draw(size, trial_rng(seed, t))
        u = unfold(sample.points, subset=sample.bulk)
        a2.append(anderson_darling(u.scaled, hyp).A2)
        Z.append(complex_ratios(sample.points, subset=sample.bulk).Z)
    Z = np.concatenate(Z)
    a2 = np.asarray(a2)
    return CalibrationReport(
        ensemble, hyp, trials, size, seed,
        [float(x) for x in a2],
        float(np.mean(a2 < 2.5)),
        float(np.abs(Z).mean()),
        float(-np.cos(np.angle(Z)).mean()),
        int(Z.size),
    )
