"""Spectrum unfolding and nearest-neighbour level-spacing statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma

from .spectra import Spectrum

#: Rescaled spacings below this count as exact degeneracies.
ZERO_SPACING = 1e-6


@dataclass(frozen=True)
class UnfoldingMap:
    """Piecewise-linear map from ``[lo, hi]`` onto ``[0, sum(p)]``.

    ``proportions[j]`` is the pooled fraction of all eigenvalues that fell in
    bin ``j``; ``offsets[j] = sum_{k<j} proportions[k]``.
    """

    lo: float
    hi: float
    proportions: np.ndarray

    @property
    def bins(self) -> int:
        return self.proportions.size

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.bins + 1)

    @property
    def offsets(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum(self.proportions)[:-1]])

    @property
    def total(self) -> float:
        return float(self.proportions.sum())


def _values(s) -> np.ndarray:
    return s.values if isinstance(s, Spectrum) else np.asarray(s, dtype=float)


def build_unfolding(spectra, bins: int = 240, range: tuple[float, float] = (-3.0, 3.0)) -> UnfoldingMap:
    """Averaged per-bin eigenvalue proportions over a pool of spectra."""
    if isinstance(spectra, (Spectrum, np.ndarray)):
        spectra = [spectra]
    lo, hi = float(range[0]), float(range[1])
    if not lo < hi:
        raise ValueError("need lo < hi")
    counts = np.zeros(bins, dtype=np.int64)
    total = 0
    for s in spectra:
        v = _values(s)
        total += v.size
        counts += np.histogram(v, bins=bins, range=(lo, hi))[0]
    if total == 0:
        raise ValueError("empty eigenvalue pool")
    return UnfoldingMap(lo, hi, counts / total)


def unfold(umap: UnfoldingMap, spectrum) -> np.ndarray:
    """Apply ``lambda -> p_j (lambda - x_j) / w + sum_{k<j} p_k`` on bin ``j``.

    ``w`` is the bin width.  Eigenvalues outside ``[lo, hi]`` are dropped.
    """
    v = np.sort(_values(spectrum))
    v = v[(v >= umap.lo) & (v <= umap.hi)]
    w = (umap.hi - umap.lo) / umap.bins
    j = np.clip(np.floor((v - umap.lo) / w).astype(np.int64), 0, umap.bins - 1)
    left = umap.lo + j * w
    return umap.proportions[j] * (v - left) / w + umap.offsets[j]


@dataclass(frozen=True)
class SpacingSample:
    """Pooled unit-mean spacings.

    ``zero_fraction`` is the share of spacings below :data:`ZERO_SPACING`.
    """

    spacings: np.ndarray

    @property
    def zero_mask(self) -> np.ndarray:
        return self.spacings < ZERO_SPACING

    @property
    def zero_fraction(self) -> float:
        return float(np.mean(self.zero_mask))

    def nonzero(self) -> np.ndarray:
        return self.spacings[~self.zero_mask]


def spacing_sample(unfolded) -> SpacingSample:
    """Consecutive differences within each vector, pooled, then scaled to unit mean."""
    parts = []
    for u in unfolded:
        u = np.sort(np.asarray(u, dtype=float))
        if u.size < 2:
            raise ValueError("each unfolded spectrum needs at least two values")
        parts.append(np.diff(u))
    if not parts:
        raise ValueError("no spectra supplied")
    s = np.concatenate(parts)
    mean = s.mean()
    if mean <= 0:
        raise ValueError("all spacings are zero")
    return SpacingSample(s / mean)


def unfolded_spacings(spectra, bins: int = 240, range=(-3.0, 3.0)) -> SpacingSample:
    """Unfold every spectrum against the pooled map and return the spacing sample."""
    spectra = list(spectra)
    umap = build_unfolding(spectra, bins, range)
    return spacing_sample([unfold(umap, s) for s in spectra])


SURMISE_BETAS = (0, 1, 2, 4)


def surmise_constants(beta: int, area: float = 1.0, mean: float = 1.0) -> tuple[float, float]:
    """``(C, c)`` of ``C s^beta exp(-c s^2)`` with given area and conditional mean.

    The conditional mean is ``int s rho / int rho``.  For ``beta = 0`` the
    curve is exponential instead and ``(C, c) = (area / mean, 1 / mean)`` for
    ``C exp(-c s)``.
    """
    if beta not in SURMISE_BETAS:
        raise ValueError(f"beta must be one of {SURMISE_BETAS}")
    if area <= 0 or mean <= 0:
        raise ValueError("area and mean must be positive")
    if beta == 0:
        return area / mean, 1.0 / mean
    # int s^k e^{-c s^2} ds = Gamma((k+1)/2) / (2 c^((k+1)/2))
    g0, g1 = gamma((beta + 1) / 2), gamma((beta + 2) / 2)
    c = (g1 / (mean * g0)) ** 2
    C = area * 2 * c ** ((beta + 1) / 2) / g0
    return float(C), float(c)


def surmise(beta: int, s, area: float = 1.0, mean: float = 1.0) -> np.ndarray:
    """Poisson (``beta = 0``) or Wigner-type surmise on ``s >= 0``."""
    s = np.asarray(s, dtype=float)
    C, c = surmise_constants(beta, area, mean)
    if beta == 0:
        out = C * np.exp(-c * s)
    else:
        out = C * s**beta * np.exp(-c * s**2)
    return np.where(s >= 0, out, 0.0)


def gse_comparison(s):
    """The GSE surmise drawn with area 1/2 and conditional mean 2.

    Matches a unit-mean spacing sample in which half the spacings are exact
    zeros (Kramers pairs).
    """
    return surmise(4, s, area=0.5, mean=2.0)


SPACING_BINS = 120
SPACING_RANGE = (0.0, 3.0)


def spacing_histogram(sample: SpacingSample, drop_zero: bool = False, bins: int = SPACING_BINS, range=SPACING_RANGE):
    """Spacing density on the common grid, normalized by the full spacing count.

    With ``drop_zero`` exact-degeneracy spacings are left out of the bins; the
    normalization still uses every spacing so the histogram integrates to the
    non-zero share.  Returns ``(centers, density)``.
    """
    s = sample.nonzero() if drop_zero else sample.spacings
    counts, edges = np.histogram(s, bins=bins, range=range)
    width = edges[1] - edges[0]
    density = counts / (sample.spacings.size * width)
    return 0.5 * (edges[:-1] + edges[1:]), density


def l1_distance(centers, density, reference) -> float:
    """Riemann L1 distance between a histogram and a reference curve on its grid."""
    centers = np.asarray(centers, dtype=float)
    width = centers[1] - centers[0] if centers.size > 1 else 1.0
    return float(np.sum(np.abs(np.asarray(density) - np.asarray(reference))) * width)


def surmise_distances(sample: SpacingSample, drop_zero: bool = False) -> dict[str, float]:
    """L1 distances of the spacing histogram to every reference curve."""
    centers, density = spacing_histogram(sample, drop_zero)
    refs = {
        "poisson": surmise(0, centers),
        "goe": surmise(1, centers),
        "gue": surmise(2, centers),
        "gse": surmise(4, centers),
        "gse_half": gse_comparison(centers),
    }
    return {k: l1_distance(centers, density, v) for k, v in refs.items()}


def surmise_moments(beta: int, area: float = 1.0, mean: float = 1.0) -> tuple[float, float]:
    """Quadrature ``(int rho, int s rho)`` used to check the closed-form constants."""
    from scipy.integrate import quad

    f = lambda x: float(surmise(beta, x, area, mean))  # noqa: E731
    a = quad(f, 0, math.inf, epsabs=1e-13, epsrel=1e-12)[0]
    m = quad(lambda x: x * f(x), 0, math.inf, epsabs=1e-13, epsrel=1e-12)[0]
    return a, m
