"""Degeneracy detection and Kramers pairing."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ensembles import EnsembleSpec, SampledHamiltonian, sample
from .spectra import Spectrum, hamiltonian_spectrum
from .symmetry import s_action

DEGENERACY_THRESHOLD = 1e-10


def _values(s) -> np.ndarray:
    return np.sort(s.values if isinstance(s, Spectrum) else np.asarray(s, dtype=float))


def min_gap(spectrum) -> float:
    """Smallest difference between consecutive sorted eigenvalues."""
    v = _values(spectrum)
    if v.size < 2:
        raise ValueError("need at least two eigenvalues")
    return float(np.min(np.diff(v)))


def symmetry_residual(H: np.ndarray, n: int) -> float:
    """``max |S H - conj(H) S|`` for ``S = prod_j sigma_j^2``, without forming ``S``."""
    rows, vals = s_action(n)
    # S[rows[b], b] = vals[b]
    SH = np.empty_like(H)
    SH[rows, :] = vals[:, None] * H
    HS = H.conj()[:, rows] * vals[None, :]
    return float(np.max(np.abs(SH - HS)))


def pair_up(values: np.ndarray, tol: float) -> tuple[bool, float]:
    """Greedy adjacent pairing ``(v0, v1), (v2, v3), ...``; returns (ok, max intra-pair gap)."""
    v = np.sort(values)
    if v.size % 2:
        return False, float("inf")
    gaps = v[1::2] - v[0::2]
    worst = float(np.max(gaps)) if gaps.size else 0.0
    return worst < tol, worst


@dataclass
class KramersReport:
    paired: bool
    max_pair_gap: float
    symmetry_residual: float
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.paired and self.symmetry_residual < 1e-10


def kramers_check(ham: SampledHamiltonian, tol: float = 1e-8) -> KramersReport:
    """Even multiplicity of every eigenvalue plus the anti-unitary symmetry residual."""
    n = ham.n
    if ham.has_local_terms():
        raise ValueError("Kramers pairing needs a Hamiltonian without one-site terms")
    spec = hamiltonian_spectrum(ham)
    ok, worst = pair_up(spec.values, tol)
    res = symmetry_residual(ham.dense(), n)
    return KramersReport(ok, worst, res, {"n": n, "min_gap": min_gap(spec)})


@dataclass
class CensusRow:
    family: str
    n: int
    samples: int
    nondegenerate_fraction: float

    def tsv(self) -> str:
        return f"{self.family}\t{self.n}\t{self.samples}\t{self.nondegenerate_fraction:.6f}"


CENSUS_HEADER = "# family\tn\tsamples\tnondegenerate_fraction"


def degeneracy_census(spec: EnsembleSpec, samples: int, threshold: float = DEGENERACY_THRESHOLD) -> CensusRow:
    """Share of samples whose spectrum has no gap at or below ``threshold``."""
    if samples < 1:
        raise ValueError("need at least one sample")
    good = sum(min_gap(hamiltonian_spectrum(sample(spec, k))) > threshold for k in range(samples))
    return CensusRow(spec.family.value, spec.n, samples, good / samples)
