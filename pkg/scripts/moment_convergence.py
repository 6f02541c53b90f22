"""Ensemble mean of 2^-n Tr H^m against the Gaussian moments as n grows.

Usage: python3 scripts/moment_convergence.py --family generic --n 4 6 8 10 --samples 64
"""

import argparse

from qchain.ensembles import EnsembleSpec
from qchain.runs import ensemble_spectra, moment_table

GAUSSIAN = {"1": 0, "2": 1, "3": 0, "4": 3, "5": 0, "6": 15}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default="generic")
    ap.add_argument("--n", type=int, nargs="+", default=[4, 6, 8, 10])
    ap.add_argument("--samples", type=int, default=64)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    print("n\tm\tmean\tstderr\tgaussian")
    for n in args.n:
        table = moment_table(ensemble_spectra(EnsembleSpec(args.family, n, args.seed), args.samples, args.threads))
        for m, row in table.items():
            print(f"{n}\t{m}\t{row['mean']:.5f}\t{row['stderr']:.5f}\t{GAUSSIAN[m]}", flush=True)


if __name__ == "__main__":
    main()
