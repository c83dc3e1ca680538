"""First and second nearest neighbours of points in the complex plane.

Two paths produce identical output: an O(N^2) brute force and a uniform
cell grid. Distances are ``abs(z_j - z_i)`` in both, and ties go to the
lower index, so the results agree bit for bit.
"""
from __future__ import annotations

import math
import warnings
from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..errors import ConfigError

DUPLICATE_TOL = 1e-14


@dataclass
class Neighbors:
    points: np.ndarray  # after duplicate removal
    kept: np.ndarray  # positions of ``points`` in the caller's array
    index: np.ndarray  # (N, order)
    distance: np.ndarray  # (N, order)


def collapse_duplicates(points, tol: float = DUPLICATE_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Drop points within ``tol`` of a lower-indexed point (with a warning)."""
    z = np.asarray(points, dtype=complex).ravel()
    pairs = cKDTree(np.column_stack([z.real, z.imag])).query_pairs(tol, output_type="ndarray")
    if pairs.size == 0:
        return z, np.arange(z.size)
    drop = np.zeros(z.size, bool)
    drop[pairs.max(axis=1)] = True
    kept = np.flatnonzero(~drop)
    warnings.warn(f"collapsed {z.size - kept.size} duplicate point(s)", stacklevel=3)
    return z[kept], kept


def brute_force(z: np.ndarray, order: int = 2, chunk: int = 512):
    N = z.size
    idx = np.empty((N, order), dtype=np.intp)
    dist = np.empty((N, order))
    for lo in range(0, N, chunk):
        rows = np.arange(lo, min(lo + chunk, N))
        d = np.abs(z[None, :] - z[rows, None])
        d[np.arange(rows.size), rows] = np.inf
        nearest = np.argsort(d, axis=1, kind="stable")[:, :order]
        idx[rows] = nearest
        dist[rows] = np.take_along_axis(d, nearest, axis=1)
    return idx, dist


def grid_search(z: np.ndarray, order: int = 2):
    N = z.size
    x, y = z.real, z.imag
    x0, y0 = x.min(), y.min()
    extent = max(np.ptp(x), np.ptp(y))
    ex, ey = max(np.ptp(x), extent / N), max(np.ptp(y), extent / N)
    h = math.sqrt(ex * ey / N) * 1.5
    cx = np.floor((x - x0) / h).astype(np.int64)
    cy = np.floor((y - y0) / h).astype(np.int64)
    cells = defaultdict(list)
    for i, key in enumerate(zip(cx.tolist(), cy.tolist())):
        cells[key].append(i)
    cells = {k: np.asarray(v) for k, v in cells.items()}
    span = int(max(cx.max(), cy.max())) + 1

    idx = np.empty((N, order), dtype=np.intp)
    dist = np.empty((N, order))
    for i in range(N):
        ci, cj = int(cx[i]), int(cy[i])
        found = []
        r = 0
        while True:
            for a in range(ci - r, ci + r + 1):
                for b in range(cj - r, cj + r + 1):
                    if max(abs(a - ci), abs(b - cj)) == r and (a, b) in cells:
                        found.append(cells[(a, b)])
            cand = np.concatenate(found) if found else np.empty(0, np.intp)
            cand = cand[cand != i]
            if cand.size >= order:
                d = np.abs(z[cand] - z[i])
                sel = np.lexsort((cand, d))[:order]
                # cells outside the ring are at least r*h away
                if d[sel[-1]] < r * h or r >= span:
                    idx[i] = cand[sel]
                    dist[i] = d[sel]
                    break
            r += 1
    return idx, dist


def nearest_neighbors(points, order: int = 2, method: str = "grid") -> Neighbors:
    if order not in (1, 2):
        raise ConfigError("neighbor order must be 1 or 2")
    z, kept = collapse_duplicates(points)
    if z.size < max(3, order + 1):
        raise ConfigError(f"need at least {max(3, order + 1)} distinct points, got {z.size}")
    if method == "grid":
        idx, dist = grid_search(z, order)
    elif method == "brute":
        idx, dist = brute_force(z, order)
    else:
        raise ConfigError(f"unknown method {method!r}")
    return Neighbors(z, kept, idx, dist)


def nearest_spacings(points, method: str = "grid") -> np.ndarray:
    """Distance from each point to its nearest neighbour."""
    return nearest_neighbors(points, 1, method).distance[:, 0]
