import json

import numpy as np
import pytest

from qchain import io


def test_histogram_roundtrip(tmp_path):
    c = np.linspace(-2.9875, 2.9875, 240)
    d = np.exp(-(c**2) / 2)
    p = tmp_path / "h.tsv"
    io.write_histogram_tsv(p, c, d, -3, 3, 0.997)
    header, data = io.read_histogram_tsv(p)
    assert header == {"lo": -3.0, "hi": 3.0, "bins": 240, "captured_fraction": 0.997}
    assert np.array_equal(data[:, 0], c) and np.array_equal(data[:, 1], d)
    assert p.read_text().startswith("# lo hi bins captured_fraction: -3.0 3.0 240 0.997\n")


def test_curve_tsv_splits_complex(tmp_path):
    p = tmp_path / "c.tsv"
    io.write_curve_tsv(p, {"t": np.array([0.0, 0.1]), "psi": np.array([1 + 0j, 0.5 - 0.25j])})
    lines = p.read_text().splitlines()
    assert lines[0] == "# t\tpsi_re\tpsi_im"
    assert lines[2] == "0.1\t0.5\t-0.25"


def test_json_handles_numpy_and_nonfinite(tmp_path):
    p = tmp_path / "x.json"
    io.write_json(p, {"a": np.float64(1.5), "b": np.arange(3), "c": np.bool_(True), "d": float("inf"), 2: (1, 2)})
    data = json.loads(p.read_text())
    assert data == {"a": 1.5, "b": [0, 1, 2], "c": True, "d": "inf", "2": [1, 2]}


def test_manifest_roundtrip(tmp_path):
    p = tmp_path / "manifest.json"
    io.write_manifest(p, "tbasis", {"n": 4, "l": 1}, 1.23456, ["b.json", "a.tsv"])
    m = io.read_manifest(p)
    assert m["command"] == "tbasis" and m["args"] == {"n": 4, "l": 1}
    assert m["outputs"] == ["a.tsv", "b.json"]
    assert m["run"] == {"wall_time_s": 1.235}
    assert "numpy" in m["versions"]
    bad = json.loads(p.read_text())
    bad["schema"] = 99
    p.write_text(json.dumps(bad))
    with pytest.raises(ValueError):
        io.read_manifest(p)
