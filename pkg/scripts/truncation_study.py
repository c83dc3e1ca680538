"""How the window-scan verdicts move with the photon cutoff.

For each cutoff the positive sector is diagonalized, the converged prefix
scanned with a fixed window, and the accepted fractions printed.

    python3 scripts/truncation_study.py --nmax 20 25 30 35 --gamma 1.0

n_max = 35 needs roughly 2 minutes and 2 GB.
"""
import argparse
import time

import numpy as np

from opendicke.chaometrics.windows import window_scan
from opendicke.convergence import liouvillian_converged
from opendicke.liouvillian import build_sector
from opendicke.model import ModelParams
from opendicke.spectra import diagonalize_liouvillian


def failing_bands(centres, bad):
    """Contiguous runs of rejected windows as 'lo-hi' strings of mean |lambda|."""
    out, start = [], None
    for i, b in enumerate(list(bad) + [False]):
        if b and start is None:
            start = i
        elif not b and start is not None:
            lo, hi = centres[start], centres[i - 1]
            out.append(f"{lo:.1f}" if start == i - 1 else f"{lo:.1f}-{hi:.1f}")
            start = None
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, nargs="+", default=[20, 25, 30])
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--window", type=int, default=300)
    ap.add_argument("--delta", type=float, default=1e-3)
    args = ap.parse_args()

    print(f"{'n_max':>5} {'N_CES':>6} {'windows':>7} {'GinUE ok':>8} {'2DP rej':>8}   GinUE-rejected <|lambda|> runs")
    for n_max in args.nmax:
        t0 = time.perf_counter()
        spec = diagonalize_liouvillian(build_sector(ModelParams(gamma=args.gamma, n_max=n_max), "+"))
        lam = liouvillian_converged(spec, args.delta).converged_eigenvalues()
        del spec
        res = window_scan(lam, args.window)
        a2g = res.column("A2_ginue")
        band = " ".join(failing_bands(res.column("mean_abs"), a2g >= 2.5)) or "-"
        print(
            f"{n_max:5d} {lam.size:6d} {len(res.windows):7d} {np.mean(a2g < 2.5):8.1%} "
            f"{np.mean(res.column('A2_2dp') > 2.5):8.1%}   {band}  ({time.perf_counter() - t0:.0f} s)",
            flush=True,
        )


if __name__ == "__main__":
    main()
