"""Diagonalization, spectral histograms, moments and characteristic functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from . import linalg
from .ensembles import SampledHamiltonian
from .pauli import PauliString, dense_sum
from .symmetry import momentum_blocks, real_form_isometry, real_symmetric_form


@dataclass(frozen=True)
class Spectrum:
    """Sorted real eigenvalues of a ``2**n``-dimensional Hermitian matrix."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite eigenvalue")
        if v.size > 1 and np.any(np.diff(v) < 0):
            v = np.sort(v)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class EigenSystem:
    spectrum: Spectrum
    vectors: np.ndarray | None


@dataclass
class Histogram:
    """Pooled normalized histogram.

    ``density`` is normalized so that ``sum(density) * width`` equals the
    fraction of pooled values that fell inside ``[lo, hi]``.
    """

    lo: float
    hi: float
    bins: int
    density: np.ndarray
    captured_fraction: float
    total: int = 0

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.bins + 1)

    @property
    def centers(self) -> np.ndarray:
        e = self.edges
        return 0.5 * (e[:-1] + e[1:])

    @property
    def width(self) -> float:
        return (self.hi - self.lo) / self.bins


@dataclass
class CharacteristicCurve:
    t: np.ndarray
    values: np.ndarray
    stderr: np.ndarray | None = field(default=None)


def _as_matrix(H) -> np.ndarray:
    if isinstance(H, SampledHamiltonian):
        return H.dense()
    return np.asarray(H)


def check_hermitian(H: np.ndarray, tol: float = 1e-10) -> None:
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("matrix must be square")
    if H.size and np.max(np.abs(H - H.conj().T)) > tol:
        raise ValueError("matrix is not Hermitian within tolerance")


def _qubits(dim: int) -> int:
    n = dim.bit_length() - 1
    return n if (1 << n) == dim else 0


def diagonalize(H, want_vectors: bool = True) -> EigenSystem:
    """Eigen-decomposition of a Hermitian matrix (or a sampled Hamiltonian)."""
    H = _as_matrix(H)
    check_hermitian(H)
    w, v = linalg.eigh(H, want_vectors)
    return EigenSystem(Spectrum(_qubits(H.shape[0]), w), v)


def _two_site_only(ham: SampledHamiltonian) -> bool:
    return not ham.has_local_terms() and all(t.string.weight == 2 for t in ham.terms)


def hamiltonian_spectrum(ham: SampledHamiltonian, method: str = "auto") -> Spectrum:
    """Spectrum of a chain Hamiltonian using the cheapest exact route.

    ``method`` is one of ``auto``, ``dense``, ``real`` (S-symmetric real form,
    even n, two-site terms only) or ``momentum`` (translation-invariant).
    """
    n = ham.n
    if method == "auto":
        invariant = ham.spec is not None and ham.spec.invariant
        if invariant and n >= 6:
            method = "momentum"
        elif n % 2 == 0 and _two_site_only(ham):
            method = "real"
        else:
            method = "dense"
    H = ham.dense()
    if method == "dense":
        return Spectrum(n, linalg.eigvalsh(H))
    if method == "real":
        return Spectrum(n, linalg.eigvalsh(real_symmetric_form(H, n)))
    if method == "momentum":
        vals = np.concatenate([linalg.eigvalsh(B) for B in momentum_blocks(H, n)])
        return Spectrum(n, np.sort(vals))
    raise ValueError(f"unknown method {method!r}")


def hamiltonian_eigensystem(ham: SampledHamiltonian, method: str = "auto") -> EigenSystem:
    """Eigenvalues and eigenvectors; the real form is used for even-n two-site chains."""
    n = ham.n
    H = ham.dense()
    if method == "auto":
        method = "real" if n % 2 == 0 and _two_site_only(ham) else "dense"
    if method == "real":
        w, v = linalg.eigh(real_symmetric_form(H, n))
        return EigenSystem(Spectrum(n, w), real_form_isometry(n) @ v)
    if method == "dense":
        w, v = linalg.eigh(H)
        return EigenSystem(Spectrum(n, w), v)
    raise ValueError(f"unknown method {method!r}")


def _values(s) -> np.ndarray:
    return s.values if isinstance(s, Spectrum) else np.asarray(s, dtype=float)


def spectral_histogram(
    spectra, bins: int = 240, range: tuple[float, float] = (-3.0, 3.0), symmetrize: bool = False
) -> Histogram:
    """Pool spectra into one normalized histogram.

    Values outside ``range`` are dropped and reported through
    ``captured_fraction``.  With ``symmetrize`` each bin is replaced by the mean
    of itself and its mirror bin about zero.
    """
    if isinstance(spectra, (Spectrum, np.ndarray)):
        spectra = [spectra]
    spectra = list(spectra)
    if not spectra:
        raise ValueError("no spectra supplied")
    lo, hi = float(range[0]), float(range[1])
    if not lo < hi:
        raise ValueError("need lo < hi")
    if bins < 1:
        raise ValueError("need at least one bin")
    counts = np.zeros(bins, dtype=np.int64)
    total = 0
    for s in spectra:
        v = _values(s)
        total += v.size
        counts += np.histogram(v, bins=bins, range=(lo, hi))[0]
    if total == 0:
        raise ValueError("empty spectra")
    width = (hi - lo) / bins
    density = counts / (total * width)
    if symmetrize:
        density = 0.5 * (density + density[::-1])
    return Histogram(lo, hi, bins, density, float(counts.sum() / total), total)


def trace_moment(H, m: int) -> float:
    """``2^-n Tr H^m`` as the mean of ``lambda^m`` over the spectrum."""
    if m < 1:
        raise ValueError("m must be positive")
    if isinstance(H, Spectrum):
        v = H.values
    elif isinstance(H, SampledHamiltonian):
        v = hamiltonian_spectrum(H).values
    else:
        v = diagonalize(H, want_vectors=False).spectrum.values
    return float(np.mean(v**m))


def characteristic_values(spectrum, t) -> np.ndarray:
    """``psi(t) = mean_k exp(i t lambda_k)`` on a grid."""
    v = _values(spectrum)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return np.exp(1j * np.outer(t, v)).mean(axis=1)


def characteristic_fn(spectra, t_grid) -> CharacteristicCurve:
    """Characteristic function of one spectrum, or the ensemble mean of several.

    For several spectra ``stderr`` holds the Monte-Carlo standard error of the
    mean (modulus of the complex deviation).
    """
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if isinstance(spectra, (Spectrum, np.ndarray)):
        return CharacteristicCurve(t, characteristic_values(spectra, t))
    per = np.array([characteristic_values(s, t) for s in spectra])
    mean = per.mean(axis=0)
    if per.shape[0] > 1:
        dev = np.abs(per - mean) ** 2
        se = np.sqrt(dev.sum(axis=0) / (per.shape[0] - 1) / per.shape[0])
    else:
        se = np.zeros_like(t)
    return CharacteristicCurve(t, mean, se)


def characteristic_bound(t, n: int) -> np.ndarray:
    """Upper bound ``t^2 (4 sqrt 2 + 9) / sqrt n`` on ``|psi_hat(t) - exp(-t^2/2)|``."""
    t = np.asarray(t, dtype=float)
    return t**2 * (4 * math.sqrt(2) + 9) / math.sqrt(n)


def gaussian_cdf_error(spectrum, x: float) -> float:
    """``|F(x+) - Phi(x)|`` with ``F`` the right-continuous empirical CDF."""
    v = _values(spectrum)
    frac = np.count_nonzero(v <= x) / v.size
    return float(abs(frac - ndtr(x)))


def rescale_unit_variance(H):
    """Scale so that ``2^-n Tr H^2 = 1``.

    Returns ``(scaled, C)``.  For a :class:`SampledHamiltonian` the factor is
    computed from the merged coefficient sum of squares.
    """
    if isinstance(H, SampledHamiltonian):
        ms = H.normalized_trace_sq()
    else:
        H = np.asarray(H)
        ms = float(np.vdot(H, H).real / H.shape[0])
    if ms <= 0:
        raise ValueError("zero Hamiltonian cannot be rescaled")
    c = 1.0 / math.sqrt(ms)
    return (H.scaled(c) if isinstance(H, SampledHamiltonian) else H * c), c


@dataclass
class BlockSplit:
    """Partition of a ring Hamiltonian into blocks and links."""

    blocks: list[tuple[int, int]]  # inclusive 1-based qubit ranges
    block_terms: list[list[int]]  # term indices per block
    link_terms: list[int]


def split_blocks(ham: SampledHamiltonian, l: int) -> BlockSplit:
    """Blocks of ``l`` consecutive qubits; the bond terms ``h_j`` with
    ``j = 0 mod l`` (and the ring bond ``h_n``) become links.

    ``h_j`` collects every term whose ``site`` is ``j``: the bond
    ``sigma_j sigma_{j+1}`` and one-site terms on qubit ``j``.
    """
    n = ham.n
    if not 2 <= l < n:
        raise ValueError(f"block length must satisfy 2 <= l < n, got l={l}, n={n}")
    n_blocks = -(-n // l)
    blocks = [((k * l) + 1, min((k + 1) * l, n)) for k in range(n_blocks)]
    block_terms: list[list[int]] = [[] for _ in blocks]
    link_terms = []
    for idx, t in enumerate(ham.terms):
        j = t.site
        if j % l == 0 or j == n:
            link_terms.append(idx)
            continue
        k = (j - 1) // l
        lo, hi = blocks[k]
        if not (lo <= j and (t.b == 0 or j + 1 <= hi)):
            raise ValueError("term does not fit the block partition")
        block_terms[k].append(idx)
    return BlockSplit(blocks, block_terms, link_terms)


def _restrict(p: PauliString, lo: int, hi: int) -> PauliString:
    labels = p.labels
    if any(labels[j] for j in [*range(0, lo - 1), *range(hi, p.n)]):
        raise ValueError("string acts outside its block")
    return PauliString.from_labels(labels[lo - 1 : hi], p.phase)


def block_split_characteristic(ham: SampledHamiltonian, l: int, t_grid):
    """``phi(t) = prod_k 2^-l_k Tr exp(i t B_k)`` and the bound ``|t| ||L||``.

    ``||L||`` is the normalized Frobenius norm of the link part, i.e. the root of
    the (string-merged) link coefficient sum of squares.
    """
    split = split_blocks(ham, l)
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    phi = np.ones(t.shape, dtype=complex)
    for (lo, hi), idx in zip(split.blocks, split.block_terms):
        lk = hi - lo + 1
        strings = [_restrict(ham.terms[i].string, lo, hi) for i in idx]
        B = dense_sum(strings, ham.coefficients[idx], lk)
        phi *= characteristic_values(linalg.eigvalsh(B), t)
    links = SampledHamiltonian(
        ham.n, [ham.terms[i] for i in split.link_terms], ham.coefficients[split.link_terms]
    )
    link_norm = math.sqrt(links.normalized_trace_sq())
    return CharacteristicCurve(t, phi), np.abs(t) * link_norm


def gue_reference_density(N: int, lam, rescale: bool = True):
    """Exact finite-N GUE one-point density and its semicircle asymptote.

    Uses the weight ``exp(-x^2)`` and the orthonormal Hermite functions
    ``psi_j``, so the density is ``K_N(x, x) / N = sum_{j<N} psi_j(x)^2 / N``.
    With ``rescale`` both curves are mapped to unit variance,
    ``rho(lam) -> s rho(lam s)`` with ``s = sqrt(N / 2)``.

    Returns ``(density, semicircle)``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > 64:
        raise OverflowError("reference density is only supported for N <= 64")
    lam = np.asarray(lam, dtype=float)
    s = math.sqrt(N / 2) if rescale else 1.0
    x = lam * s
    prev = np.zeros_like(x)
    cur = np.pi**-0.25 * np.exp(-(x**2) / 2)
    acc = cur**2
    for j in range(N - 1):
        nxt = math.sqrt(2 / (j + 1)) * x * cur - math.sqrt(j / (j + 1)) * prev
        prev, cur = cur, nxt
        acc = acc + cur**2
    density = s * acc / N
    inside = np.clip(1 - x**2 / (2 * N), 0, None)
    semi = s * math.sqrt(2) / (math.pi * math.sqrt(N)) * np.sqrt(inside)
    return density, semi
