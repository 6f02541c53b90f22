"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 a reported invariant check failed.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import asdict, fields
from pathlib import Path

from . import io
from .pauli import DenseBudgetError
from .runs import HCIZ_CURVES, JW_MODELS, RUNNERS, default_threads

SEED_ENV = "QCHAIN_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _range_pair(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected LO,HI") from exc
    return lo, hi


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qchain", description="Random qubit-chain Hamiltonian eigenstatistics.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, seed=True):
        sp.add_argument("--out", type=Path, default=None, help="output directory (default out/<command>)")
        sp.add_argument("--threads", type=int, default=default_threads(), help="worker processes")
        if seed:
            sp.add_argument("--seed", type=int, default=None, help=f"master seed (default ${SEED_ENV} or 0)")

    def ensemble(sp, samples):
        sp.add_argument("--family", required=True)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--samples", type=int, default=samples)
        sp.add_argument("--heis-site-dependent", action="store_true")

    s = sub.add_parser("spectra", help="pooled spectral histogram and moments")
    ensemble(s, 64)
    s.add_argument("--bins", type=int, default=240)
    s.add_argument("--range", type=_range_pair, default=(-3.0, 3.0))
    s.add_argument("--symmetrize", action="store_true")
    common(s)

    s = sub.add_parser("charfn", help="ensemble characteristic function and its bound")
    ensemble(s, 200)
    s.add_argument("--t-max", type=float, default=3.0)
    s.add_argument("--t-step", type=float, default=0.1)
    common(s)

    s = sub.add_parser("spacings", help="unfolded level spacings against the surmises")
    ensemble(s, 64)
    s.add_argument("--drop-zero-spacings", action="store_true")
    common(s)

    s = sub.add_parser("purity", help="eigenstate purity and bound checks")
    ensemble(s, 4)
    s.add_argument("--l", type=int, required=True)
    common(s)

    s = sub.add_parser("jw", help="free-fermion spectra and E_n(x) trend")
    s.add_argument("--model", choices=JW_MODELS, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--eps", type=float, default=1.0)
    s.add_argument("--trend-n-max", type=int, default=21)
    s.add_argument("--trend-x", type=_floats, default=(-1.6, -1.2, -0.8, -0.4))
    common(s)

    s = sub.add_parser("degeneracy", help="non-degenerate fraction census")
    ensemble(s, 20)
    s.add_argument("--threshold", type=float, default=1e-10)
    common(s)

    s = sub.add_parser("hciz", help="two-qubit conjectured correlation functions")
    s.add_argument("--curve", choices=HCIZ_CURVES, required=True)
    s.add_argument("--grid", type=_floats, default=(-4.0, 4.0, 81), help="LO,HI,POINTS")
    s.add_argument("--mc-samples", type=int, default=1 << 15)
    s.add_argument("--window", type=float, default=0.01)
    common(s)

    s = sub.add_parser("tbasis", help="purity of the translation eigenbasis of sum sigma^3")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    common(s, seed=False)

    s = sub.add_parser("replay", help="rerun the command recorded in a manifest")
    s.add_argument("manifest", type=Path)
    s.add_argument("--out", type=Path, default=None)
    s.add_argument("--threads", type=int, default=default_threads())
    return p


def config_from_args(command: str, ns: argparse.Namespace):
    cls, _ = RUNNERS[command]
    values = {}
    for f in fields(cls):
        if hasattr(ns, f.name):
            values[f.name] = getattr(ns, f.name)
    if "seed" in values and values["seed"] is None:
        values["seed"] = _default_seed()
    if command in ("spectra",) and hasattr(ns, "range"):
        values["lo"], values["hi"] = ns.range
    if command == "hciz":
        lo, hi, pts = ns.grid
        values.update(grid_lo=lo, grid_hi=hi, grid_points=int(pts))
    return cls(**values)


def execute(command: str, cfg, out_dir: Path, threads: int) -> int:
    _, runner = RUNNERS[command]
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    outcome = runner(cfg, out_dir, threads)
    wall = time.perf_counter() - t0
    io.write_manifest(out_dir / "manifest.json", command, asdict(cfg), wall, outcome.outputs)
    for name, ok in outcome.checks.items():
        print(f"{name}: {'ok' if ok else 'FAILED'}")
    print(f"wrote {', '.join(outcome.outputs)} to {out_dir}")
    return 0 if outcome.ok else 2


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command == "replay":
            man = io.read_manifest(ns.manifest)
            command = man["command"]
            cls, _ = RUNNERS[command]
            args = dict(man["args"])
            for f in fields(cls):
                if isinstance(f.default, tuple) and f.name in args:
                    args[f.name] = tuple(args[f.name])
            cfg = cls(**args)
            out = ns.out or ns.manifest.parent
        else:
            command = ns.command
            cfg = config_from_args(command, ns)
            out = ns.out or Path("out") / command
        return execute(command, cfg, out, ns.threads)
    except UsageError as exc:
        print(f"qchain: error: {exc}", file=sys.stderr)
        return 1
    except (DenseBudgetError, ValueError) as exc:
        print(f"qchain: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
