"""Reduced density matrices, purity and the translation operator.

Qubit 1 is the most significant bit of a basis index, so the first ``l``
qubits form the leading factor of ``C^(2^l) (x) C^(2^(n-l))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .ensembles import SampledHamiltonian
from .pauli import PauliString
from .spectra import hamiltonian_eigensystem
from .symmetry import _orbits, momentum_blocks, translate_index

UNIT_TOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    l: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries)
        if m.shape != (1 << self.l, 1 << self.l):
            raise ValueError("shape does not match 2^l")
        object.__setattr__(self, "entries", m)

    def validate(self, tol: float = UNIT_TOL) -> None:
        m = self.entries
        if np.max(np.abs(m - m.conj().T)) > tol:
            raise ValueError("density matrix not Hermitian")
        if abs(np.trace(m) - 1) > tol:
            raise ValueError("density matrix trace is not 1")
        if np.min(np.linalg.eigvalsh(m)) < -tol:
            raise ValueError("density matrix not positive semidefinite")


def _block_view(state: np.ndarray, n: int, start: int, l: int) -> np.ndarray:
    """``(2^l, 2^(n-l))`` matrix of ``state`` with qubits ``start..start+l-1`` as rows.

    Blocks may wrap around the ring.
    """
    psi = np.asarray(state)
    if start != 1:
        # rotate so the block begins at qubit 1: T^-(start-1) moves qubit start to 1
        idx = np.arange(1 << n, dtype=np.int64)
        for _ in range(start - 1):
            idx = translate_index(idx, n)
        psi = psi[idx] if psi.ndim == 1 else psi[idx, :]
    return psi.reshape((1 << l, 1 << (n - l)) + psi.shape[1:])


def _check_state(state: np.ndarray, n_qubits: int | None = None) -> int:
    state = np.asarray(state)
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if dim != 1 << n or n < 1:
        raise ValueError("state dimension must be a power of two")
    norms = np.linalg.norm(state, axis=0)
    if np.max(np.abs(norms - 1)) > UNIT_TOL:
        raise ValueError("state is not normalized")
    return n


def partial_trace(state: np.ndarray, l: int, start: int = 1) -> DensityMatrix:
    """Reduced state of qubits ``start..start+l-1`` (cyclic) of a pure state."""
    n = _check_state(state)
    if not 1 <= l < n:
        raise ValueError(f"need 1 <= l < n, got l={l}, n={n}")
    M = _block_view(state, n, start, l)
    return DensityMatrix(l, M @ M.conj().T)


def purity(rho: DensityMatrix) -> float:
    """``Tr rho^2`` as the squared Frobenius norm of the Hermitian ``rho``."""
    return float(np.sum(np.abs(rho.entries) ** 2))


def linear_entropy(rho: DensityMatrix) -> float:
    return 1.0 - purity(rho)


def schmidt_coefficients(state: np.ndarray, l: int) -> np.ndarray:
    n = _check_state(state)
    return np.linalg.svd(_block_view(state, n, 1, l), compute_uv=False) ** 2


def purities(vectors: np.ndarray, l: int, start: int = 1) -> np.ndarray:
    """Block purity of every column of ``vectors``.

    Uses ``Tr rho^2 = ||M^dagger M||_F^2`` on whichever Gram matrix is smaller.
    """
    vectors = np.asarray(vectors)
    n = _check_state(vectors)
    if not 1 <= l < n:
        raise ValueError(f"need 1 <= l < n, got l={l}, n={n}")
    M = _block_view(vectors, n, start, l)  # (dA, dB, K)
    if 2 * l <= n:
        rho = np.einsum("ack,bck->kab", M, M.conj(), optimize=True)
    else:
        rho = np.einsum("ack,adk->kcd", M.conj(), M, optimize=True)
    return np.sum(np.abs(rho) ** 2, axis=(1, 2))


def single_qubit_states(vectors: np.ndarray, site: int = 1) -> np.ndarray:
    """``(K, 2, 2)`` reduced states of qubit ``site`` for every column."""
    n = _check_state(vectors)
    M = _block_view(vectors, n, site, 1)
    return np.einsum("ack,bck->kab", M, M.conj(), optimize=True)


@dataclass(frozen=True)
class TranslationOp:
    """``T |x_1 .. x_n> = |x_n x_1 .. x_(n-1)>`` as an index permutation."""

    n: int
    perm: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        object.__setattr__(self, "perm", translate_index(np.arange(1 << self.n), self.n))

    def apply(self, state: np.ndarray, power: int = 1) -> np.ndarray:
        out = np.asarray(state)
        for _ in range(power % self.n):
            nxt = np.empty_like(out)
            nxt[self.perm] = out
            out = nxt
        return out

    def matrix(self) -> np.ndarray:
        dim = 1 << self.n
        T = np.zeros((dim, dim))
        T[self.perm, np.arange(dim)] = 1
        return T

    def conjugate(self, p: PauliString) -> PauliString:
        """``T p T^dagger``: every site label moves one site to the right."""
        if p.n != self.n:
            raise ValueError("qubit count mismatch")
        return p.shifted(1)

    def eigenvalues(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.n) / self.n)


def translation(n: int) -> TranslationOp:
    return TranslationOp(n)


def min_gap_of(values: np.ndarray) -> float:
    return float(np.min(np.diff(np.sort(values)))) if len(values) > 1 else np.inf


@dataclass
class TheoremReport:
    applicable: bool
    passed: bool | None
    value: float
    detail: dict = field(default_factory=dict)


def check_single_qubit_theorem(
    ham: SampledHamiltonian, tol: float = 1e-8, degeneracy: float = 1e-10, sites="first"
) -> TheoremReport:
    """Every eigenvector of a chain without one-site terms has ``rho_1 = I/2``.

    Reports ``applicable=False`` if the spectrum is degenerate at the
    ``degeneracy`` threshold.  ``sites`` is ``"first"`` or ``"all"``.
    """
    if ham.has_local_terms():
        raise ValueError("the Hamiltonian has one-site terms")
    es = hamiltonian_eigensystem(ham)
    gap = min_gap_of(es.spectrum.values)
    if gap <= degeneracy:
        return TheoremReport(False, None, float("nan"), {"min_gap": gap})
    site_list = [1] if sites == "first" else range(1, ham.n + 1)
    dev = 0.0
    for j in site_list:
        rho = single_qubit_states(es.vectors, j)
        dev = max(dev, float(np.max(np.abs(rho - 0.5 * np.eye(2)))))
    return TheoremReport(True, dev < tol, dev, {"min_gap": gap, "states": int(es.vectors.shape[1])})


def translation_eigensystem(ham: SampledHamiltonian):
    """Joint eigenvectors of a translation-invariant ``H`` and ``T``.

    Diagonalizes each momentum block and lifts back, so the basis is a joint
    eigenbasis even when the spectrum is degenerate.  Returns
    ``(values, vectors, momenta)``.
    """
    n = ham.n
    H = ham.dense()
    reps, periods, orbit = _orbits(n)
    dim = 1 << n
    vals, vecs, moms = [], [], []
    for k, B in enumerate(momentum_blocks(H, n)):
        keep = np.flatnonzero((k * periods) % n == 0)
        w, u = linalg.eigh(B)
        lift = np.zeros((dim, len(keep)), dtype=complex)
        for col, i in enumerate(keep):
            p = periods[i]
            m = np.arange(p)
            lift[orbit[:p, i], col] = np.exp(-2j * np.pi * k * m / n) / np.sqrt(p)
        vals.append(w)
        vecs.append(lift @ u)
        moms.append(np.full(w.size, k))
    return np.concatenate(vals), np.hstack(vecs), np.concatenate(moms)


def check_block_purity_bound(ham: SampledHamiltonian, l: int, tol: float = 1e-12) -> TheoremReport:
    """``2^-l <= mean_k Tr rho_(l,k)^2 <= 2^-l + 2^l / n`` over a joint T-eigenbasis."""
    n = ham.n
    if not 2 * l < n:
        raise ValueError("need 2 l < n")
    if ham.spec is None or not ham.spec.invariant:
        raise ValueError("Hamiltonian must be translation invariant")
    values, vectors, _ = translation_eigensystem(ham)
    p = purities(vectors, l)
    avg = float(p.mean())
    lo, hi = 2.0**-l, 2.0**-l + 2.0**l / n
    return TheoremReport(
        True,
        lo - tol <= avg <= hi + tol,
        avg,
        {"lower": lo, "upper": hi, "min_gap": min_gap_of(values), "purities": p},
    )


def proportion_above(purities_: np.ndarray, l: int, eps: float) -> tuple[float, float]:
    """Share of states with purity above ``2^-l + eps`` and its bound ``2^l / (n eps)``."""
    p = np.asarray(purities_)
    n = p.size.bit_length() - 1
    return float(np.mean(p > 2.0**-l + eps)), 2.0**l / (n * eps)
