"""Pauli-string algebra on n qubits.

A Pauli string is stored as two n-bit masks plus a phase exponent ``k`` so that
the operator is ``i**k * sigma^(a_1) (x) ... (x) sigma^(a_n)``.  The single-site
label is encoded by the bit pair (x, z): 0 -> (0, 0), 1 -> (1, 0), 2 -> (1, 1),
3 -> (0, 1).  Qubit 1 is the most significant bit of a standard-basis index, so
site ``j`` lives at bit ``n - j`` of both masks.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

#: Largest qubit count for which dense 2**n x 2**n matrices are built.
MAX_DENSE_QUBITS = 14

_LABEL_BITS = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}
_BITS_LABEL = {v: k for k, v in _LABEL_BITS.items()}

SIGMA = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class DenseBudgetError(ValueError):
    """Raised when a dense matrix would exceed the configured qubit budget."""


def check_dense_budget(n: int, max_qubits: int | None = None) -> None:
    limit = MAX_DENSE_QUBITS if max_qubits is None else max_qubits
    if n > limit:
        raise DenseBudgetError(
            f"dense 2^{n}-dimensional matrix refused: qubit budget is {limit} "
            "(raise qchain.pauli.MAX_DENSE_QUBITS to override)"
        )


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    """Immutable Pauli string ``i**phase * sigma^(labels)``.

    Parameters
    ----------
    n : int
        Number of qubits.
    x, z : int
        Bit masks; site ``j`` (1-based) is bit ``n - j``.
    phase : int
        Exponent of ``i`` modulo 4.
    """

    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full:
            raise ValueError("mask wider than n")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def from_labels(cls, labels, phase: int = 0) -> "PauliString":
        labels = tuple(int(a) for a in labels)
        n = len(labels)
        x = z = 0
        for j, a in enumerate(labels):
            if a not in _LABEL_BITS:
                raise ValueError(f"label {a} not in 0..3")
            bx, bz = _LABEL_BITS[a]
            bit = n - 1 - j
            x |= bx << bit
            z |= bz << bit
        return cls(n, x, z, phase)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 0)

    @property
    def labels(self) -> tuple[int, ...]:
        out = []
        for j in range(self.n):
            bit = self.n - 1 - j
            out.append(_BITS_LABEL[((self.x >> bit) & 1, (self.z >> bit) & 1)])
        return tuple(out)

    @property
    def phase_value(self) -> complex:
        return (1, 1j, -1, -1j)[self.phase]

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def support(self) -> tuple[int, ...]:
        """1-based sites carrying a non-identity label."""
        return tuple(j + 1 for j, a in enumerate(self.labels) if a)

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def unsigned(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, 0)

    def shifted(self, k: int = 1) -> "PauliString":
        """Cyclically move every site label from ``j`` to ``j + k`` (mod n)."""
        labels = self.labels
        k %= self.n
        return PauliString.from_labels(labels[-k:] + labels[:-k] if k else labels, self.phase)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return mul(self, other)

    def __repr__(self):
        ph = ("+", "+i", "-", "-i")[self.phase]
        return f"PauliString({ph}{''.join(map(str, self.labels))})"


def single_site(site: int, a: int, n: int) -> PauliString:
    """The string with label ``a`` at ``site`` (1-based) and identity elsewhere."""
    if not 1 <= site <= n:
        raise ValueError(f"site {site} outside 1..{n}")
    labels = [0] * n
    labels[site - 1] = a
    return PauliString.from_labels(labels)


def two_site(site: int, a: int, b: int, n: int) -> PauliString:
    """``sigma_site^(a) sigma_{site+1}^(b)`` with ``site + 1`` taken cyclically."""
    if not 1 <= site <= n:
        raise ValueError(f"site {site} outside 1..{n}")
    labels = [0] * n
    labels[site - 1] = a
    nxt = site % n
    if nxt == site - 1:
        # n == 1: both factors on the same qubit
        return single_site(site, a, n) * single_site(site, b, n)
    labels[nxt] = b
    return PauliString.from_labels(labels)


def _cyclic_counts(p: PauliString, q: PauliString) -> tuple[int, int]:
    x1, z1, x2, z2 = p.x, p.z, q.x, q.z
    full = (1 << p.n) - 1
    nx1, nz1, nx2, nz2 = ~x1 & full, ~z1 & full, ~x2 & full, ~z2 & full
    s1_1, s1_2, s1_3 = x1 & nz1, x1 & z1, nx1 & z1
    s2_1, s2_2, s2_3 = x2 & nz2, x2 & z2, nx2 & z2
    cyc = (s1_1 & s2_2) | (s1_2 & s2_3) | (s1_3 & s2_1)
    anti = (s1_2 & s2_1) | (s1_3 & s2_2) | (s1_1 & s2_3)
    return _popcount(cyc), _popcount(anti)


def _check_same_n(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise ValueError(f"qubit counts differ: {p.n} vs {q.n}")


def mul(p: PauliString, q: PauliString) -> PauliString:
    """Operator product ``p q``."""
    _check_same_n(p, q)
    cyc, anti = _cyclic_counts(p, q)
    return PauliString(p.n, p.x ^ q.x, p.z ^ q.z, p.phase + q.phase + cyc - anti)


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff ``p`` and ``q`` commute (otherwise they anticommute)."""
    _check_same_n(p, q)
    cyc, anti = _cyclic_counts(p, q)
    return (cyc + anti) % 2 == 0


def nearest_neighbour_strings(n: int) -> list[PauliString]:
    """All ``sigma_j^(a) sigma_{j+1}^(b)``, a, b in 1..3, on the ring."""
    return [two_site(j, a, b, n) for j in range(1, n + 1) for b in (1, 2, 3) for a in (1, 2, 3)]


def anticommuting_neighbours(p: PauliString) -> int:
    """Number of nearest-neighbour two-site ring strings anticommuting with ``p``."""
    n = p.n
    if n < 3:
        raise ValueError("requires n >= 3")
    sup = p.support
    adjacent = len(sup) == 2 and (sup[1] == sup[0] + 1 or (sup[0] == 1 and sup[1] == n))
    if not adjacent or p.phase:
        raise ValueError("p must be a phase-free nearest-neighbour two-site string")
    return sum(not commutes(p, q) for q in nearest_neighbour_strings(n))


def _basis_bits(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def _z_signs(basis: np.ndarray, z: int) -> np.ndarray:
    parity = np.bitwise_count(basis & z) & 1
    return 1.0 - 2.0 * parity


def column_action(p: PauliString, basis: np.ndarray | None = None):
    """Return ``(rows, values)`` with ``p |b> = values[b] |rows[b]>``."""
    if basis is None:
        basis = _basis_bits(p.n)
    ny = _popcount(p.x & p.z)
    vals = _z_signs(basis, p.z) * ((1, 1j, -1, -1j)[(p.phase + ny) % 4])
    return basis ^ p.x, vals


def to_dense(p: PauliString, max_qubits: int | None = None) -> np.ndarray:
    """Dense ``2**n x 2**n`` complex matrix of ``p``."""
    check_dense_budget(p.n, max_qubits)
    dim = 1 << p.n
    rows, vals = column_action(p)
    out = np.zeros((dim, dim), dtype=complex)
    out[rows, np.arange(dim)] = vals
    return out


def kron_dense(p: PauliString) -> np.ndarray:
    """Reference construction by explicit Kronecker products."""
    out = np.array([[p.phase_value]], dtype=complex)
    for a in p.labels:
        out = np.kron(out, SIGMA[a])
    return out


def dense_sum(strings, coefficients, n: int, max_qubits: int | None = None) -> np.ndarray:
    """``sum_k c_k * strings[k]`` as a dense matrix.

    Terms sharing an X-mask are summed into one vector before a single scatter.
    """
    check_dense_budget(n, max_qubits)
    dim = 1 << n
    basis = _basis_bits(n)
    by_x: dict[int, np.ndarray] = {}
    for p, c in zip(strings, coefficients):
        if p.n != n:
            raise ValueError("string qubit count mismatch")
        if c == 0:
            continue
        _, vals = column_action(p, basis)
        acc = by_x.get(p.x)
        by_x[p.x] = vals * c if acc is None else acc + vals * c
    out = np.zeros((dim, dim), dtype=complex)
    for x in sorted(by_x):
        out[basis ^ x, basis] += by_x[x]
    return out


def hs_inner(A: np.ndarray, B: np.ndarray) -> complex:
    """Normalized Hilbert-Schmidt inner product ``Tr(A B^dagger) / dim``."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrices must be square and of equal shape")
    val = np.vdot(B, A) / A.shape[0]
    return val.real if abs(val.imag) < 1e-14 else val


def all_strings(n: int):
    """Every phase-free Pauli string on ``n`` qubits."""
    for labels in product(range(4), repeat=n):
        yield PauliString.from_labels(labels)
