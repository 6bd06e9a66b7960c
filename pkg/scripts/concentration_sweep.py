#!/usr/bin/env python3
"""Empirical tails of the missing mass against the exponential bound.

Sweeps the verification grid and prints, per cell, the empirical frequency
of |U_t - E U_t| >= eps next to 2 exp(-t eps^2).  Any cell flagged as a
violation (beyond 3 binomial standard errors) exits nonzero.
"""

import argparse
import sys

from missingmass import ProbVector, tight_finite, verify_concentration


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--replicates", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    grid = [
        ("uniform5", ProbVector.uniform(5)),
        ("uniform50", ProbVector.uniform(50)),
        ("two-level(10,50)", tight_finite(10, 50)),
    ]
    print(f"{'distribution':>18} {'t':>4} {'eps':>5} {'empirical':>11} {'bound':>11} flag")
    failed = False
    for name, d in grid:
        for t in (20, 100):
            for eps in (0.05, 0.1, 0.2, 0.3):
                rep = verify_concentration(d, t, eps, args.replicates, args.seed)
                flag = "VIOLATED" if rep.violated else "ok"
                failed |= rep.violated
                print(f"{name:>18} {t:>4} {eps:>5.2f} {rep.exceed_freq:>11.5f} "
                      f"{rep.bound:>11.5f} {flag}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
