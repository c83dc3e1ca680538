import functools
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from opendicke.convergence import liouvillian_converged, liouvillian_tails  # noqa: E402
from opendicke.liouvillian import build_sector, trace_functional  # noqa: E402
from opendicke.model import ModelParams  # noqa: E402
from opendicke.spectra import conjugation_defect, diagonalize_liouvillian  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")


class SectorRun:
    """Light summary of one diagonalized sector; eigenvectors are dropped."""

    def __init__(self, params, sector="+", delta=1e-3):
        L = build_sector(params, sector)
        spec = diagonalize_liouvillian(L)
        self.params = params
        self.eigenvalues = spec.eigenvalues
        self.max_residual = spec.max_residual
        self.trace_defect = float(np.abs(trace_functional(L)).max())
        self.conjugation_defect = conjugation_defect(spec.eigenvalues)
        self.tails = liouvillian_tails(spec)
        self.report = liouvillian_converged(spec.without_vectors(), delta, self.tails)

    @property
    def converged(self):
        return self.report.converged_eigenvalues()


@functools.lru_cache(maxsize=None)
def sector_run(n_max, gamma, two_j=2):
    return SectorRun(ModelParams(gamma=gamma, n_max=n_max, two_j=two_j))


@pytest.fixture(scope="session")
def runs():
    """Lazily computed positive-sector runs shared across the session."""
    return sector_run
