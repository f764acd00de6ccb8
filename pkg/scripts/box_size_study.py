"""Commutator residuals against box size.

omega f decays like e^{-m|x|} even for a compact packet, so x (omega f) is
discontinuous where the periodic box wraps.  The boost relations are the most
sensitive.  This prints the worst Poincare residual and the packet's own tails
as the box grows at fixed spacing.

    python scripts/box_size_study.py --dim 1 --dx 0.25
"""
import argparse

import numpy as np

from rcqm.lattice import Lattice, edge_fraction, nyquist_fraction
from rcqm.observables import check_poincare_algebra
from rcqm.states import random_amplitudes, synthesize_sf
from rcqm.transforms import default_packet


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=1)
    ap.add_argument("--dx", type=float, default=0.25)
    ap.add_argument("--mass", type=float, default=1.0)
    ap.add_argument("--lengths", type=float, nargs="+", default=[8, 12, 16, 24, 32, 48, 64])
    ap.add_argument("--trials", type=int, default=2)
    args = ap.parse_args()

    print(f"{'m L':>6s} {'n':>5s} {'nyquist':>9s} {'edge':>9s} {'worst':>9s}  relation")
    for length in args.lengths:
        n = int(round(length / args.dx / 2)) * 2
        lat = Lattice(args.dim, n, args.dx, args.mass)
        pk = default_packet(lat, k_max=0.3 * args.mass, x_max=0.0)
        f = synthesize_sf(random_amplitudes(lat, np.random.default_rng(0), **pk))
        checks = check_poincare_algebra(lat, n_trials=args.trials, packet=pk)
        worst = max(checks, key=lambda c: c.residual)
        print(
            f"{args.mass * lat.length:6.1f} {n:5d} {nyquist_fraction(f):9.1e} {edge_fraction(f):9.1e} "
            f"{worst.residual:9.1e}  {worst.name}"
        )


if __name__ == "__main__":
    main()
