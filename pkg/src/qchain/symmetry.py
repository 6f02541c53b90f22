"""Chain symmetries used to speed up diagonalization.

* Translation ``T|x_1..x_n> = |x_n x_1 .. x_{n-1}>``: translation-invariant
  Hamiltonians are block diagonal in momentum sectors.
* ``S = prod_j sigma_j^(2)``: for Hamiltonians built only from two-site terms,
  ``S H = conj(H) S``.  For even n, ``S`` is a real signed permutation with
  ``S^2 = I`` and a unitary ``Q`` with ``conj(Q) = S Q`` makes ``Q^dagger H Q``
  real symmetric, halving the solver cost.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .pauli import PauliString, column_action


def translate_index(b: np.ndarray, n: int) -> np.ndarray:
    """Basis index of ``T|b>``: the last qubit (least significant bit) moves to the front."""
    b = np.asarray(b, dtype=np.int64)
    return (b >> 1) | ((b & 1) << (n - 1))


def translation_permutation(n: int) -> np.ndarray:
    """``perm`` with ``T|b> = |perm[b]>``."""
    return translate_index(np.arange(1 << n, dtype=np.int64), n)


def _orbits(n: int):
    """Orbit representatives (smallest member), periods and the ``T^m r`` table."""
    dim = 1 << n
    table = np.empty((n, dim), dtype=np.int64)
    table[0] = np.arange(dim, dtype=np.int64)
    for m in range(1, n):
        table[m] = translate_index(table[m - 1], n)
    reps = np.flatnonzero(table.min(axis=0) == table[0])
    # period = first m >= 1 with T^m r = r; row m = n is the identity
    back = np.vstack([table[1:, reps] == reps, np.ones((1, reps.size), dtype=bool)])
    periods = np.argmax(back, axis=0) + 1
    return reps, periods, table[:, reps]


def momentum_isometries(n: int) -> list[sp.csr_matrix]:
    """Sparse isometries ``V_k`` (dim x d_k) onto the momentum sectors k = 0..n-1.

    Columns are ``p^-1/2 sum_{m<p} w^(-k m) T^m |r>`` over orbit representatives
    ``r`` of period ``p`` with ``k p = 0 mod n`` and ``w = exp(2 pi i / n)``.
    """
    dim = 1 << n
    reps, periods, orbit = _orbits(n)
    blocks = []
    for k in range(n):
        keep = np.flatnonzero((k * periods) % n == 0)
        rows, cols, vals = [], [], []
        for col, i in enumerate(keep):
            p = periods[i]
            m = np.arange(p)
            rows.append(orbit[:p, i])
            cols.append(np.full(p, col))
            vals.append(np.exp(-2j * np.pi * k * m / n) / np.sqrt(p))
        blocks.append(
            sp.csr_matrix(
                (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                shape=(dim, len(keep)),
            )
        )
    return blocks


def momentum_blocks(H: np.ndarray, n: int) -> list[np.ndarray]:
    """``V_k^dagger H V_k`` for every momentum sector, for ``H`` commuting with ``T``.

    Since ``T|r,k> = w^k |r,k>``, the block entry is
    ``sqrt(p_a) <r_a|H|r_b,k>``, and the sums over ``T^m r_b`` for all k at once
    are one FFT of the representative rows of ``H``.
    """
    reps, periods, orbit = _orbits(n)
    G = H[reps]  # (n_reps, dim)
    Gp = G[:, orbit.T]  # (n_reps, n_reps, n): G[a, T^m r_b]
    F = np.fft.fft(Gp, axis=2)  # sum_m w^(-k m) G[a, T^m r_b]
    out = []
    for k in range(n):
        keep = np.flatnonzero((k * periods) % n == 0)
        p = periods[keep].astype(float)
        # the full-n sum visits each of the p_b orbit members n / p_b times
        blk = F[np.ix_(keep, keep, [k])][:, :, 0] * (np.sqrt(p)[:, None] * np.sqrt(p)[None, :] / n)
        out.append(blk)
    return out


def s_operator(n: int) -> PauliString:
    return PauliString.from_labels([2] * n)


def s_action(n: int):
    """``(rows, values)`` with ``S|b> = values[b] |rows[b]>``."""
    return column_action(s_operator(n))


def real_symmetric_form(H: np.ndarray, n: int, check: float = 1e-10) -> np.ndarray:
    """Real symmetric matrix unitarily similar to ``H`` (even n, ``S H = conj(H) S``).

    Uses ``Q = [v_+ , i v_-]`` with ``v_(+/-) = (e_x +/- c_x e_xbar)/sqrt 2`` over the
    pairs ``x < xbar = x XOR (2^n - 1)``, where ``S e_x = c_x e_xbar``.
    """
    if n % 2:
        raise ValueError("real form needs even n (S^2 = +I)")
    dim = 1 << n
    rows, vals = s_action(n)
    c_all = vals.real
    if np.max(np.abs(vals.imag)) > 0:
        raise AssertionError("S is not real for even n")
    R = np.arange(dim // 2, dtype=np.int64)  # top bit clear
    Rb = R ^ (dim - 1)
    c = c_all[R]
    r2 = np.sqrt(0.5)
    Hp = (H[:, R] + H[:, Rb] * c) * r2
    Hm = (H[:, R] - H[:, Rb] * c) * (1j * r2)
    top = lambda X: (X[R, :] + c[:, None] * X[Rb, :]) * r2  # noqa: E731
    bot = lambda X: (X[R, :] - c[:, None] * X[Rb, :]) * (-1j * r2)  # noqa: E731
    M = np.block([[top(Hp), top(Hm)], [bot(Hp), bot(Hm)]])
    if check is not None:
        scale = max(1.0, float(np.max(np.abs(M))))
        if np.max(np.abs(M.imag)) > check * scale * dim:
            raise ValueError("Hamiltonian does not satisfy S H = conj(H) S")
    return np.ascontiguousarray(M.real)


def real_form_isometry(n: int) -> np.ndarray:
    """Dense ``Q`` of :func:`real_symmetric_form` (for eigenvector back-transforms)."""
    dim = 1 << n
    _, vals = s_action(n)
    R = np.arange(dim // 2)
    Rb = R ^ (dim - 1)
    c = vals.real[R]
    Q = np.zeros((dim, dim), dtype=complex)
    h = dim // 2
    Q[R, np.arange(h)] = np.sqrt(0.5)
    Q[Rb, np.arange(h)] = c * np.sqrt(0.5)
    Q[R, h + np.arange(h)] = 1j * np.sqrt(0.5)
    Q[Rb, h + np.arange(h)] = -1j * c * np.sqrt(0.5)
    return Q
