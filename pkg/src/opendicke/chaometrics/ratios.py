"""Complex spacing ratios ``Z = (z_1NN - z) / (z_2NN - z)``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .neighbors import nearest_neighbors

#: reference values of <r> and -<cos theta>
REFERENCE = {"2dp": (2 / 3, 0.0), "ginue": (0.74, 0.24)}


@dataclass
class RatioSample:
    Z: np.ndarray
    n_excluded: int = 0

    @property
    def r(self) -> np.ndarray:
        return np.abs(self.Z)

    @property
    def theta(self) -> np.ndarray:
        return np.angle(self.Z)

    @property
    def mean_r(self) -> float:
        return float(self.r.mean())

    @property
    def mean_neg_cos(self) -> float:
        return float(-np.cos(self.theta).mean())


def complex_ratios(points, subset=None, method: str = "grid", neighbors=None) -> RatioSample:
    """One ratio per point (optionally only those in the boolean ``subset``);
    neighbours are searched among all points."""
    nb = neighbors if neighbors is not None else nearest_neighbors(points, 2, method)
    z = nb.points
    sel = np.ones(z.size, bool) if subset is None else np.asarray(subset, bool)[nb.kept]
    z0 = z[sel]
    num = z[nb.index[sel, 0]] - z0
    den = z[nb.index[sel, 1]] - z0
    good = den != 0
    return RatioSample(num[good] / den[good], int(np.count_nonzero(~good)))
