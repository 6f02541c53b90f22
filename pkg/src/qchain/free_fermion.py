"""Jordan-Wigner free-fermion solvers.

Majorana operators ``c_(2j-1) = P_j sigma_j^1`` and ``c_(2j) = P_j sigma_j^2``
with ``P_j = prod_(l<j) sigma_l^3`` turn every XX/XY/YX/YY bond and every
``sigma^3`` one-site term into a bilinear, so that ``H = (i/4) c^T M c`` for a
real antisymmetric ``2n x 2n`` matrix ``M``.  In the fermion variables
``alpha = (a_1..a_n, a_1^dag..a_n^dag)`` the same operator is
``alpha^dag h alpha`` with the Hermitian particle-hole symmetric form ``h``
(:class:`QuadraticForm`).  Diagonalizing ``h`` with a Bogoliubov unitary gives
mode energies from which all ``2^n`` eigenvalues follow.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .ensembles import SampledHamiltonian
from .pauli import PauliString, check_dense_budget, to_dense
from .spectra import Spectrum

#: Largest n for which all 2^n eigenvalues are materialized.
MAX_RECONSTRUCT_QUBITS = 26


def majorana_string(p: int, n: int) -> PauliString:
    """``c_p`` as a Pauli string (1-based ``p`` in ``1..2n``)."""
    if not 1 <= p <= 2 * n:
        raise ValueError(f"Majorana index {p} outside 1..{2 * n}")
    j = (p + 1) // 2
    labels = [3] * (j - 1) + [1 if p % 2 else 2] + [0] * (n - j)
    return PauliString.from_labels(labels)


def jw_dense_operators(n: int, max_qubits: int | None = None) -> list[np.ndarray]:
    """Dense annihilators ``a_j = P_j (sigma_j^1 + i sigma_j^2) / 2``, j = 1..n."""
    check_dense_budget(n, max_qubits)
    out = []
    for j in range(1, n + 1):
        c1 = to_dense(majorana_string(2 * j - 1, n), max_qubits)
        c2 = to_dense(majorana_string(2 * j, n), max_qubits)
        out.append(0.5 * (c1 + 1j * c2))
    return out


def _omega(n: int) -> np.ndarray:
    """``c = Omega alpha`` with ``c_(2j-1) = a_j + a_j^dag``, ``c_(2j) = -i (a_j - a_j^dag)``."""
    O = np.zeros((2 * n, 2 * n), dtype=complex)
    for j in range(n):
        O[2 * j, j] = 1
        O[2 * j, n + j] = 1
        O[2 * j + 1, j] = -1j
        O[2 * j + 1, n + j] = 1j
    return O


def _swap(n: int) -> np.ndarray:
    """``tau`` exchanging the annihilator and creator blocks."""
    return np.block([[np.zeros((n, n)), np.eye(n)], [np.eye(n), np.zeros((n, n))]])


@lru_cache(maxsize=None)
def _pair_phase(a: int, b: int, local: bool) -> tuple[int, int, complex]:
    """``(dp, dq, kappa)`` with the two-qubit term equal to ``kappa c_p c_q``.

    ``p = 2j - 1 + dp`` and ``q = 2j - 1 + dq`` for a term anchored at site ``j``;
    the relation does not depend on ``j`` or on ``n``.
    """
    target = PauliString.from_labels([3, 0]) if local else PauliString.from_labels([a, b])
    for dp in range(4):
        for dq in range(dp + 1, 4):
            prod = majorana_string(1 + dp, 2) * majorana_string(1 + dq, 2)
            if prod.unsigned() == target:
                return dp, dq, (1, 1j, -1, -1j)[(-prod.phase) % 4]
    raise ValueError("term is not a Majorana bilinear")


def majorana_matrix(ham: SampledHamiltonian, parity: int | None = None) -> np.ndarray:
    """Real antisymmetric ``M`` with ``H = (i/4) c^T M c`` (restricted to a parity sector).

    Supported terms: ``sigma_j^3`` and ``sigma_j^a sigma_(j+1)^b`` with
    ``a, b`` in ``{1, 2}``.  A bond closing the ring (site ``n`` to site 1)
    equals ``-P`` times the open-chain bilinear, where ``P = prod sigma^3``;
    it therefore needs ``parity`` (the eigenvalue of ``P``, +1 or -1).
    """
    n = ham.n
    M = np.zeros((2 * n, 2 * n))
    for t, alpha in zip(ham.terms, ham.coefficients):
        if alpha == 0:
            continue
        if t.string.phase:
            raise ValueError("terms must be phase-free")
        if t.b == 0:
            if t.a != 3:
                raise ValueError(f"unsupported one-site term sigma^{t.a}")
            dp, dq, kappa = _pair_phase(3, 0, True)
            factor = 1.0
        else:
            if t.a not in (1, 2) or t.b not in (1, 2):
                raise ValueError(f"unsupported bond sigma^{t.a} sigma^{t.b}")
            dp, dq, kappa = _pair_phase(t.a, t.b, False)
            factor = 1.0
            if t.site == n:
                if parity not in (1, -1):
                    raise ValueError("a ring-closing bond needs a parity sector (+1 or -1)")
                factor = -float(parity)
        p = (2 * t.site - 2 + dp) % (2 * n)
        q = (2 * t.site - 2 + dq) % (2 * n)
        # alpha kappa c_p c_q = (i/4)(M_pq c_p c_q + M_qp c_q c_p) with M_qp = -M_pq
        m = (-2j * alpha * factor * kappa).real
        M[p, q] += m
        M[q, p] -= m
    return M


@dataclass(frozen=True)
class QuadraticForm:
    """``H = alpha^dag h alpha`` with ``h = [[A - I, -conj(B)], [B, -conj(A) + I]]``-type blocks."""

    n: int
    matrix: np.ndarray
    majorana: np.ndarray

    def validate(self, tol: float = 1e-10) -> None:
        h = self.matrix
        if np.max(np.abs(h - h.conj().T)) > tol:
            raise ValueError("quadratic form is not Hermitian")
        n = self.n
        B = h[n:, :n]
        if np.max(np.abs(B + B.T)) > tol:
            raise ValueError("pairing block is not antisymmetric")


def assemble_quadratic_form(ham: SampledHamiltonian, parity: int | None = None) -> QuadraticForm:
    """The ``2n x 2n`` Hermitian form of a Jordan-Wigner solvable chain."""
    n = ham.n
    M = majorana_matrix(ham, parity)
    O = _omega(n)
    h = 0.25j * _swap(n) @ O.T @ M @ O
    h = 0.5 * (h + h.conj().T)
    form = QuadraticForm(n, h, M)
    form.validate()
    return form


@dataclass(frozen=True)
class BogoliubovModes:
    """Mode energies ``mu`` (length 2n, ``mu[j + n] = -mu[j]``) and the unitary ``T``.

    ``T = [[U, V], [conj(V), conj(U)]]`` maps ``alpha`` to the quasi-particle
    vector ``(b, b^dag)`` and ``T h T^dag = diag(mu)``.
    """

    mu: np.ndarray
    transform: np.ndarray

    @property
    def n(self) -> int:
        return self.mu.size // 2

    @property
    def U(self) -> np.ndarray:
        return self.transform[: self.n, : self.n]

    @property
    def V(self) -> np.ndarray:
        return self.transform[: self.n, self.n :]

    def check(self, form: QuadraticForm | None = None, tol: float = 1e-9) -> dict[str, float]:
        U, V = self.U, self.V
        n = self.n
        out = {
            "uu_vv": float(np.max(np.abs(U @ U.conj().T + V @ V.conj().T - np.eye(n)))),
            "uv_vu": float(np.max(np.abs(U @ V.T + V @ U.T))),
            "block": float(
                max(
                    np.max(np.abs(self.transform[n:, :n] - V.conj())),
                    np.max(np.abs(self.transform[n:, n:] - U.conj())),
                )
            ),
        }
        if form is not None:
            D = self.transform @ form.matrix @ self.transform.conj().T
            out["offdiag"] = float(np.max(np.abs(D - np.diag(np.diag(D)))))
            out["diag"] = float(np.max(np.abs(np.diag(D).real - self.mu)))
        return out

    @property
    def vacuum_parity(self) -> int:
        """Eigenvalue of ``prod sigma^3`` on the quasi-particle vacuum (``det T``)."""
        d = np.linalg.det(self.transform)
        return 1 if d.real > 0 else -1


def bogoliubov_diagonalize(form: QuadraticForm, zero_tol: float = 1e-9) -> BogoliubovModes:
    """Bogoliubov unitary for a particle-hole symmetric form.

    Positive modes come from ``eigh`` (descending ``mu``); each partner is
    ``tau conj(w)``.  Zero modes are paired from a real orthonormal kernel basis
    of the Majorana matrix, ``u = Omega^-1 (r_1 + i r_2)``, whose partner is
    ``Omega^-1 (r_1 - i r_2)``.
    """
    n = form.n
    h = form.matrix
    tau = _swap(n)
    scale = max(1.0, float(np.max(np.abs(h))))
    w, v = np.linalg.eigh(h)
    pos = np.flatnonzero(w > zero_tol * scale)
    pos = pos[np.argsort(-w[pos], kind="stable")]
    k = n - pos.size
    cols = [v[:, pos]]
    mus = [w[pos]]
    if k:
        r = scipy.linalg.null_space(form.majorana, rcond=zero_tol)
        if r.shape[1] != 2 * k:
            raise ValueError("zero-mode count does not match the kernel of the Majorana matrix")
        Oinv = _omega(n).conj().T / 2
        z = Oinv @ (r[:, 0::2] + 1j * r[:, 1::2])
        cols.append(z)
        mus.append(np.zeros(k))
    wpos = np.hstack(cols)
    W = np.hstack([wpos, tau @ wpos.conj()])
    mu = np.concatenate(mus)
    modes = BogoliubovModes(np.concatenate([mu, -mu]), W.conj().T)
    chk = modes.check(form)
    if max(chk.values()) > 1e-8 * scale:
        raise ValueError(f"Bogoliubov structure not reached: {chk}")
    return modes


def _word_sums(mu: np.ndarray):
    """All ``sum_j mu_j x_j + mu_(j+n) (1 - x_j)`` and word parities ``(-1)^s``."""
    n = mu.size // 2
    if n > MAX_RECONSTRUCT_QUBITS:
        raise ValueError(f"refusing to materialize 2^{n} eigenvalues (limit 2^{MAX_RECONSTRUCT_QUBITS})")
    vals = np.array([float(np.sum(mu[n:]))])
    par = np.array([1], dtype=np.int8)
    for j in range(n):
        d = mu[j] - mu[j + n]
        vals = np.concatenate([vals, vals + d])
        par = np.concatenate([par, -par])
    return vals, par


def reconstruct_spectrum(modes: BogoliubovModes, parity: int | None = None) -> Spectrum:
    """All eigenvalues ``lambda_x`` over occupation words ``x``.

    With ``parity`` only the words whose state lies in that sector of
    ``prod sigma^3`` are kept.
    """
    vals, par = _word_sums(modes.mu)
    if parity is not None:
        vals = vals[par * modes.vacuum_parity == parity]
    return Spectrum(modes.n, np.sort(vals))


def _has_ring_bond(ham: SampledHamiltonian) -> bool:
    return any(t.b != 0 and t.site == ham.n and c != 0 for t, c in zip(ham.terms, ham.coefficients))


def free_fermion_spectrum(ham: SampledHamiltonian) -> Spectrum:
    """Full spectrum of a JW-solvable chain; ring chains are solved per parity sector."""
    if not _has_ring_bond(ham):
        return reconstruct_spectrum(bogoliubov_diagonalize(assemble_quadratic_form(ham)))
    parts = []
    for eta in (1, -1):
        modes = bogoliubov_diagonalize(assemble_quadratic_form(ham, eta))
        parts.append(reconstruct_spectrum(modes, parity=eta).values)
    vals = np.concatenate(parts)
    if vals.size != 1 << ham.n:
        raise AssertionError("parity sectors did not recover 2^n eigenvalues")
    return Spectrum(ham.n, np.sort(vals))


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def xy_plus_z_closed_form(n: int, eps: float) -> Spectrum:
    """``lambda_x = sum_j (2 x_j - 1)(eps mu_j - sqrt(eps^2 mu_j^2 + 1))``, ``mu_j = sin(2 pi j / n)``."""
    if not (n % 2 and _is_prime(n)):
        warnings.warn(f"n={n} is not an odd prime; the closed form is used without that hypothesis", stacklevel=2)
    mu = np.sin(2 * np.pi * np.arange(1, n + 1) / n)
    e = eps * mu - np.sqrt(eps**2 * mu**2 + 1)
    vals = np.array([-float(np.sum(e))])
    for j in range(n):
        vals = np.concatenate([vals, vals + 2 * e[j]])
    return Spectrum(n, np.sort(vals))


def epsj_z_closed_form(n: int, eps: float) -> Spectrum:
    """``lambda_x = sum_j eps^j (-1)^(x_j)``."""
    vals = np.array([0.0])
    for j in range(1, n + 1):
        vals = np.concatenate([vals + eps**j, vals - eps**j])
    return Spectrum(n, np.sort(vals))


def _creation_tables(n: int):
    """Per mode ``k``: source indices with qubit ``k`` empty, targets and JW signs for ``a_k^dag``."""
    basis = np.arange(1 << n, dtype=np.int64)
    out = []
    for k in range(1, n + 1):
        bit = 1 << (n - k)
        src = basis[(basis & bit) == 0]
        higher = ((1 << n) - 1) ^ ((bit << 1) - 1)  # qubits 1..k-1
        sign = 1.0 - 2.0 * (np.bitwise_count(src & higher) & 1)
        out.append((src, src | bit, sign))
    return out


def translation_mode_matrices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``U_(jk) = w_j^k / sqrt n`` and ``V_(jk) = w_(j - 1/2)^k / sqrt n``, ``w_j = exp(2 pi i j / n)``."""
    j = np.arange(1, n + 1)[:, None]
    k = np.arange(1, n + 1)[None, :]
    U = np.exp(2j * np.pi * j * k / n) / math.sqrt(n)
    V = np.exp(2j * np.pi * (j - 0.5) * k / n) / math.sqrt(n)
    return U, V


def mode_states(n: int, modes: np.ndarray, tables) -> np.ndarray:
    """Columns ``d_1^dag^(x_1) .. d_n^dag^(x_n) |0>`` with ``d_j^dag = sum_k conj(modes_jk) a_k^dag``.

    Word ``x`` stores mode ``j`` in bit ``j - 1``.
    """
    dim = 1 << n
    S = np.zeros((dim, dim), dtype=complex)
    S[0, 0] = 1.0
    coef = modes.conj()
    for x in range(1, dim):
        low = (x & -x).bit_length() - 1  # smallest occupied mode (0-based)
        prev = S[:, x & (x - 1)]
        acc = np.zeros(dim, dtype=complex)
        for k, (src, dst, sign) in enumerate(tables):
            acc[dst] += coef[low, k] * sign * prev[src]
        S[:, x] = acc
    return S


@dataclass(frozen=True)
class TranslationBasis:
    """Joint eigenbasis of ``sum_j sigma_j^3`` and the translation.

    ``states[:, x]`` is ``|x>_t``; ``occupation[x] = s``.
    """

    n: int
    states: np.ndarray
    occupation: np.ndarray

    @property
    def energies(self) -> np.ndarray:
        return self.n - 2.0 * self.occupation


def translation_eigenbasis_z(n: int, max_qubits: int = 12) -> TranslationBasis:
    """Build ``|x>_t`` from periodic modes (odd ``s``) and antiperiodic modes (even ``s``)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    check_dense_budget(n, max_qubits)
    U, V = translation_mode_matrices(n)
    tables = _creation_tables(n)
    occ = np.bitwise_count(np.arange(1 << n, dtype=np.int64)).astype(np.int64)
    odd = occ % 2 == 1
    SB = mode_states(n, U, tables)
    SC = mode_states(n, V, tables)
    states = np.where(odd[None, :], SB, SC)
    return TranslationBasis(n, states, occ)


def translation_basis_purity(n: int, l: int, basis: TranslationBasis | None = None) -> float:
    """``2^-n sum_x Tr rho_(l,x)^2`` over the translation eigenbasis."""
    from .entanglement import purities

    if not 1 <= l < n:
        raise ValueError("need 1 <= l < n")
    if basis is None:
        basis = translation_eigenbasis_z(n)
    return float(np.mean(purities(basis.states, l)))


def single_qubit_purity_closed_form(n: int) -> float:
    return 0.5 + 1.0 / (2 * n)
