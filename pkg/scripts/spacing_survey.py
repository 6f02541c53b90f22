"""L1 distance of unfolded spacing histograms to every surmise, per family and n.

Usage: python3 scripts/spacing_survey.py --n 8 9 10 --samples 32 --threads 4
"""

import argparse

from qchain.ensembles import EnsembleSpec
from qchain.runs import ensemble_spectra, spacing_statistics

FAMILIES = ("generic", "local", "inv", "inv_local", "heis")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[8, 9, 10])
    ap.add_argument("--families", nargs="+", default=list(FAMILIES))
    ap.add_argument("--samples", type=int, default=32)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    print("family\tn\tzero_frac\tpoisson\tgoe\tgue\tgse\tgse_half\tnearest")
    for fam in args.families:
        for n in args.n:
            sp = ensemble_spectra(EnsembleSpec(fam, n, args.seed), args.samples, args.threads)
            # odd generic chains are Kramers-paired, so their zero spacings are dropped
            st = spacing_statistics(sp, drop_zero=fam == "generic" and n % 2 == 1)
            d = st["distances"]
            row = "\t".join(f"{d[k]:.3f}" for k in ("poisson", "goe", "gue", "gse", "gse_half"))
            print(f"{fam}\t{n}\t{st['zero_fraction']:.3f}\t{row}\t{min(d, key=d.get)}", flush=True)


if __name__ == "__main__":
    main()
