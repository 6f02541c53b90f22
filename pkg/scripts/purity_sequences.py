"""Average block purity of the translation eigenbasis of sum_j sigma_j^3.

Prints 1/(avg - 2^-l) for each n, plus the single-qubit closed form for l = 1.

Usage: python3 scripts/purity_sequences.py --n-max 10 --l 1 2 3
"""

import argparse

from qchain.free_fermion import single_qubit_purity_closed_form, translation_basis_purity, translation_eigenbasis_z


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-min", type=int, default=3)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--l", type=int, nargs="+", default=[1, 2])
    args = ap.parse_args()

    print("n\tl\tavg_purity\tinverse_excess\tclosed_form")
    for n in range(args.n_min, args.n_max + 1):
        basis = translation_eigenbasis_z(n)
        for l in args.l:
            if l >= n:
                continue
            avg = translation_basis_purity(n, l, basis)
            cf = f"{single_qubit_purity_closed_form(n):.10f}" if l == 1 else "-"
            print(f"{n}\t{l}\t{avg:.10f}\t{1 / (avg - 2.0**-l):.5f}\t{cf}", flush=True)


if __name__ == "__main__":
    main()
