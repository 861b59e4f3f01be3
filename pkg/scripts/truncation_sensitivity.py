#!/usr/bin/env python3
"""
Eigen-residuals of C_phi and C_phi* as the measured depth N shrinks.

Three columns per depth: forward residual of phi_a^(3j+m), adjoint residual
of e_(3j+m) - a e_(3j+m-1) with the pairing over all carried coefficients,
and the same adjoint residual through the bare N x N conjugate transpose.
Only the last one degrades; the first two stay at roundoff because the
vectors are carried at a depth where their tails are negligible.

    python3 scripts/truncation_sensitivity.py --a 0.8
"""
import argparse

from hardycs import compop, moebius, spectral
from hardycs.cli import parse_complex
from hardycs.moebius import OMEGA


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--a", default="0.5")
    p.add_argument("--count", type=int, default=6)
    p.add_argument("--depths", default="16,32,64,128,256")
    args = p.parse_args(argv)
    a = parse_complex(args.a)
    depths = [int(d) for d in args.depths.split(",")]

    M = spectral.working_depth(a, 3 * args.count + 2, max(depths))
    T = compop.truncate(moebius.build_elliptic(a, OMEGA), M)
    print(f"a = {a}, working depth {M}")
    print(f"{'N':>5s} {'forward':>10s} {'adjoint':>10s} {'square adj':>10s}")
    for N in depths:
        fw = ad = sq = 0.0
        for m in range(3):
            fb = spectral.lambda_basis(a, OMEGA, m, args.count, N, T)
            ab = spectral.lambda_star_basis(a, OMEGA, m, args.count, N, T)
            fw, ad = max(fw, fb.max_residual()), max(ad, ab.max_residual())
            for v in ab.vectors:
                sq = max(sq, compop.adjoint_residual(T, v, ab.eigenvalue, N, compression=True))
        print(f"{N:5d} {fw:10.2e} {ad:10.2e} {sq:10.2e}")


if __name__ == "__main__":
    main()
