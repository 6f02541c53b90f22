"""TSV and JSON artifacts plus the run manifest."""

from __future__ import annotations

import json
import platform
from pathlib import Path

import numpy as np

MANIFEST_SCHEMA = 1


def _fmt(x) -> str:
    return repr(float(x))


def write_histogram_tsv(path, centers, density, lo: float, hi: float, captured_fraction: float) -> None:
    """Header ``# lo hi bins captured_fraction`` then ``bin_center<TAB>density`` rows."""
    centers = np.asarray(centers)
    lines = [f"# lo hi bins captured_fraction: {_fmt(lo)} {_fmt(hi)} {centers.size} {_fmt(captured_fraction)}"]
    lines += [f"{_fmt(c)}\t{_fmt(d)}" for c, d in zip(centers, density)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_histogram_tsv(path):
    text = Path(path).read_text().splitlines()
    lo, hi, bins, cap = text[0].split(":", 1)[1].split()
    data = np.loadtxt(text[1:], delimiter="\t", ndmin=2)
    return {"lo": float(lo), "hi": float(hi), "bins": int(bins), "captured_fraction": float(cap)}, data


def write_curve_tsv(path, columns: dict[str, np.ndarray]) -> None:
    """Columns as TSV with a ``# name<TAB>name`` header; complex columns split into re/im."""
    names, cols = [], []
    for name, col in columns.items():
        col = np.asarray(col)
        if np.iscomplexobj(col):
            names += [f"{name}_re", f"{name}_im"]
            cols += [col.real, col.imag]
        else:
            names.append(name)
            cols.append(col)
    lines = ["# " + "\t".join(names)]
    for row in zip(*cols):
        lines.append("\t".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if hasattr(obj, "value") and not isinstance(obj, (str, int)):
        return obj.value
    return obj


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


def versions() -> dict[str, str]:
    import scipy

    from . import __version__, linalg

    out = {"qchain": __version__, "python": platform.python_version(), "numpy": np.__version__, "scipy": scipy.__version__}
    out["eig_backend"] = linalg.backend_name()
    if out["eig_backend"] == "torch":
        out["torch"] = linalg._get_torch().__version__
    return out


def write_manifest(path, command: str, args: dict, wall_time: float, outputs: list[str]) -> None:
    """Manifest with everything needed to replay the run; timing lives under ``run``."""
    write_json(
        path,
        {
            "schema": MANIFEST_SCHEMA,
            "command": command,
            "args": args,
            "versions": versions(),
            "outputs": sorted(outputs),
            "run": {"wall_time_s": round(wall_time, 3)},
        },
    )


def read_manifest(path) -> dict:
    data = json.loads(Path(path).read_text())
    if data.get("schema") != MANIFEST_SCHEMA:
        raise ValueError(f"unsupported manifest schema {data.get('schema')!r}")
    return data
