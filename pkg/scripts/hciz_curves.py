"""Conjectured two-qubit one- and two-point functions next to Monte-Carlo histograms.

Writes one_point.tsv and two_point.tsv into --out.

Usage: python3 scripts/hciz_curves.py --samples 262144 --out out/hciz_curves
"""

import argparse
from pathlib import Path

import numpy as np

from qchain import hciz, io


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1 << 16)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--window", type=float, default=0.01)
    ap.add_argument("--out", type=Path, default=Path("out/hciz_curves"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    eigs = hciz.sample_eigenvalues_n2(args.samples, args.seed)

    c, h = hciz.one_point_histogram(eigs)
    rho = hciz.one_point_n2(c, epsabs=1e-5)
    io.write_curve_tsv(args.out / "one_point.tsv", {"lambda": c, "conjecture": rho, "monte_carlo": h})
    print(f"one-point: rho(0) = {hciz.one_point_n2([0.0])[0]:.5f}, MC L1 = {hciz.l1_to_curve(c, h, rho):.4f}")

    c, est, k = hciz.two_point_histogram(eigs, args.window)
    rho2 = hciz.two_point_n2(c)
    io.write_curve_tsv(args.out / "two_point.tsv", {"lambda": c, "conjecture": rho2, "monte_carlo": est})
    print(f"two-point: {k} conditioned samples, MC L1 = {hciz.l1_to_curve(c, est, rho2):.4f}")
    print(f"hyperplane normalization = {hciz.hyperplane_normalization():.8f}")
    x = np.array([10.0, 40.0, 160.0])
    print("rho_22(1/x, 0) * x for x =", x, "->", np.round(hciz.two_point_n2(1 / x) * x, 5))


if __name__ == "__main__":
    main()
