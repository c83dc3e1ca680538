"""Converged-eigenstate counts versus photon cutoff, and the quadratic fit.

    python3 scripts/convergence_sweep.py --nmax 10 15 20 25 30 --gamma 0.2 1.0

Writes ``<out>/convergence_sweep.csv`` (one row per cutoff and coupling)
and prints the fit coefficients.
"""
import argparse
import csv
import time
from pathlib import Path

import numpy as np

from opendicke.convergence import fit_converged_counts, liouvillian_converged
from opendicke.liouvillian import build_sector
from opendicke.model import ModelParams
from opendicke.spectra import diagonalize_liouvillian, fmt


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, nargs="+", default=[10, 15, 20, 25, 30])
    ap.add_argument("--gamma", type=float, nargs="+", default=[0.2, 1.0])
    ap.add_argument("--two-j", type=int, default=2)
    ap.add_argument("--delta", type=float, default=1e-3)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for g in args.gamma:
        counts = []
        for n_max in args.nmax:
            t0 = time.perf_counter()
            p = ModelParams(gamma=g, n_max=n_max, two_j=args.two_j)
            spec = diagonalize_liouvillian(build_sector(p, "+"))
            rep = liouvillian_converged(spec, args.delta)
            counts.append(rep.n_converged)
            rows.append([g, n_max, rep.n_converged, rep.n_total, fmt(rep.ratio)])
            print(
                f"gamma={g} n_max={n_max}: N_CES={rep.n_converged} of {rep.n_total} "
                f"({time.perf_counter() - t0:.1f} s)",
                flush=True,
            )
        if len(counts) >= 3:
            fit = fit_converged_counts(np.column_stack([args.nmax, counts]), args.two_j)
            print(
                f"gamma={g}: A1={fit.A1:.3f} A2={fit.A2:.4f} "
                f"asymptotic ratio={fit.asymptotic_ratio:.4f}"
            )
    with open(out / "convergence_sweep.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gamma", "n_max", "N_CES", "N_ES", "ratio"])
        w.writerows(rows)


if __name__ == "__main__":
    main()
