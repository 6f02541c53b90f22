"""Conjectured joint eigenvalue density of the two-qubit generic ensemble.

For ``n = 2`` the chain Hamiltonian is a sum of 9 distinct Pauli strings with
i.i.d. ``N(0, 1/9)`` coefficients.  The conjectured joint density of its four
eigenvalues on the hyperplane ``sum lambda = 0`` is proportional to

    exp(-9 |lambda|^2 / 8) * Delta(lambda) * sum_tau sgn(tau) sgn(l_t2 - l_t3) sgn(l_t1 - l_t4)

with ``Delta(lambda) = prod_(j<k) (lambda_k - lambda_j)``.  The density is used
in the coordinates ``(lambda_1, lambda_2, lambda_3)`` with ``lambda_4`` fixed by
the hyperplane, which is how the delta factor integrates out.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma

from .ensembles import EnsembleSpec, expanded_terms, sample_rng
from .pauli import dense_sum

N_QUBITS = 2
M_TERMS = 9
DIM = 4
#: Gaussian weight exp(-GAUSS * sum lambda^2).
GAUSS = M_TERMS / 2 ** (N_QUBITS + 1)
TRUNCATION = 6.0
HYPERPLANE_TOL = 1e-12


def _perm_sign(p) -> int:
    s = 1
    for i, j in combinations(range(len(p)), 2):
        if p[i] > p[j]:
            s = -s
    return s


def summand_table():
    """The 24 summands grouped into classes of identical functions.

    Each summand ``sgn(tau) sgn(l_t2 - l_t3) sgn(l_t1 - l_t4)`` is reduced to
    ``+- sgn(l_a - l_b) sgn(l_c - l_d)`` with ``a < b``, ``c < d`` and an
    unordered pair of pairs.  Returns ``{((a, b), (c, d)): [signs]}`` with
    1-based indices.
    """
    groups: dict[tuple, list[int]] = {}
    for tau in permutations(range(4)):
        sign = _perm_sign(tau)
        pairs = []
        for a, b in ((tau[1], tau[2]), (tau[0], tau[3])):
            if a > b:
                a, b = b, a
                sign = -sign
            pairs.append((a + 1, b + 1))
        key = tuple(sorted(pairs))
        groups.setdefault(key, []).append(sign)
    return groups


def sign_sum(lam: np.ndarray) -> np.ndarray:
    """The signed permutation sum, summed over all 24 permutations."""
    lam = np.asarray(lam, dtype=float)
    out = np.zeros(lam.shape[:-1])
    for tau in permutations(range(4)):
        out += (
            _perm_sign(tau)
            * np.sign(lam[..., tau[1]] - lam[..., tau[2]])
            * np.sign(lam[..., tau[0]] - lam[..., tau[3]])
        )
    return out


def sign_sum_grouped(lam: np.ndarray) -> np.ndarray:
    """Same sum through the reduced table: multiplicity times each class representative."""
    lam = np.asarray(lam, dtype=float)
    out = np.zeros(lam.shape[:-1])
    for ((a, b), (c, d)), signs in summand_table().items():
        out += sum(signs) * np.sign(lam[..., a - 1] - lam[..., b - 1]) * np.sign(lam[..., c - 1] - lam[..., d - 1])
    return out


def vandermonde(lam: np.ndarray) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    out = np.ones(lam.shape[:-1])
    for j, k in combinations(range(lam.shape[-1]), 2):
        out = out * (lam[..., k] - lam[..., j])
    return out


@lru_cache(maxsize=None)
def normalization_constant() -> float:
    """``Z = int |Delta| exp(-GAUSS |lambda|^2) dl_1 dl_2 dl_3`` on the hyperplane.

    Mehta's integral gives the full-space value for ``exp(-x^2 / (2 s^2))``
    with ``s^2 = 1 / (2 GAUSS)``; the direction ``(1,1,1,1)/2`` carries a free
    Gaussian factor ``sqrt(2 pi s^2)`` and the area element of the
    ``(l_1, l_2, l_3)`` chart is 2.
    """
    s2 = 1.0 / (2 * GAUSS)
    prod = np.prod([gamma(1 + j / 2) / gamma(1.5) for j in range(1, DIM + 1)])
    full = s2 ** ((DIM + DIM * (DIM - 1) / 2) / 2) * (2 * math.pi) ** (DIM / 2) * prod
    return float(full / math.sqrt(2 * math.pi * s2) / 2)


def conjectured_constant() -> complex:
    """``C * C_5`` of the conjectured closed form (``n = 2``, ``m = 9``)."""
    n, m = N_QUBITS, M_TERMS
    d, D = 2**n, 4**n
    num = 2 ** (n * D / 2) * m ** (m / 2) * (2 * math.pi) ** (m / 2) * 1j ** (d // 2)
    den = math.factorial(d) * 2 ** (n * m) * (2 * math.pi) ** (d / 2) * (2 * math.pi) ** (D / 2) * 1j ** (D // 2)
    c5 = -(math.pi**5) / 2**4
    return complex(num / den * c5)


@lru_cache(maxsize=None)
def density_prefactor() -> float:
    """The real constant ``C * C_5`` multiplying ``exp(..) Delta * sign_sum``."""
    c = conjectured_constant()
    if abs(c.imag) > 1e-15 * abs(c):
        raise ArithmeticError("constant is not real")
    return c.real


def _check_hyperplane(lam: np.ndarray) -> None:
    if np.any(np.abs(lam.sum(axis=-1)) > HYPERPLANE_TOL * np.maximum(1.0, np.abs(lam).max(axis=-1))):
        raise ValueError("eigenvalues must sum to zero")


def joint_density_n2(lam) -> np.ndarray:
    """Normalized joint density at points ``(..., 4)`` on the hyperplane."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape[-1] != DIM:
        raise ValueError("need 4 eigenvalues")
    _check_hyperplane(lam)
    return _density(lam)


def _density(lam: np.ndarray) -> np.ndarray:
    g = np.exp(-GAUSS * np.sum(lam**2, axis=-1))
    return density_prefactor() * g * vandermonde(lam) * sign_sum_grouped(lam)


def _sgn(x: float) -> int:
    return int(x > 0) - int(x < 0)


@lru_cache(maxsize=None)
def _scalar_table():
    return tuple((sum(v), a - 1, b - 1, c - 1, d - 1) for ((a, b), (c, d)), v in summand_table().items())


def _density4(l1: float, l2: float, l3: float) -> float:
    """Scalar form of :func:`_density` at ``(l1, l2, l3, -l1 - l2 - l3)`` for quadrature."""
    lam = (l1, l2, l3, -l1 - l2 - l3)
    vdm = 1.0
    for j in range(3):
        for k in range(j + 1, 4):
            vdm *= lam[k] - lam[j]
    if vdm == 0.0:
        return 0.0
    sgn = 0
    for m, a, b, c, d in _scalar_table():
        sgn += m * _sgn(lam[a] - lam[b]) * _sgn(lam[c] - lam[d])
    sq = l1 * l1 + l2 * l2 + l3 * l3 + lam[3] * lam[3]
    return density_prefactor() * math.exp(-GAUSS * sq) * vdm * sgn


def _chamber_nodes(order: int, length: float):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * length * (x + 1), 0.5 * length * w


def hyperplane_normalization(order: int = 48, length: float = 2 * TRUNCATION) -> float:
    """``int rho dl_1 dl_2 dl_3`` by tensor Gauss-Legendre in each ordering chamber.

    In a chamber ``l_(p1) > l_(p2) > l_(p3) > l_(p4)`` the integrand is smooth,
    and the gaps ``g_k = l_(pk) - l_(p(k+1)) >= 0`` parametrize it linearly.
    """
    t, w = _chamber_nodes(order, length)
    G1, G2, G3 = np.meshgrid(t, t, t, indexing="ij")
    W = w[:, None, None] * w[None, :, None] * w[None, None, :]
    # ordered values from gaps: sum = 0 fixes the smallest one
    low = -(3 * G3 + 2 * G2 + G1) / 4
    ordered = np.stack([low + G3 + G2 + G1, low + G3 + G2, low + G3, low], axis=-1)
    total = 0.0
    for perm in permutations(range(4)):
        lam = np.empty_like(ordered)
        lam[..., list(perm)] = ordered
        # chart (l_1, l_2, l_3) versus gap coordinates: constant Jacobian
        A = np.zeros((3, 3))
        for g in range(3):
            e = np.zeros(3)
            e[g] = 1.0
            o = np.array([e.sum(), e[1] + e[2], e[2], 0.0]) - (3 * e[2] + 2 * e[1] + e[0]) / 4
            v = np.empty(4)
            v[list(perm)] = o
            A[:, g] = v[:3]
        total += abs(np.linalg.det(A)) * float(np.sum(W * _density(lam)))
    return total


def _inner_points(lam: float, l2: float):
    return sorted({lam, l2, -2 * lam - l2, -lam - 2 * l2, (-lam - l2) / 2})


def one_point_n2(grid, epsabs: float = 1e-6, limit: int = 200) -> np.ndarray:
    """``rho_(2,1)(lam) = int int rho(lam, l_2, l_3, -lam - l_2 - l_3) dl_2 dl_3``.

    Nested adaptive Gauss-Kronrod on ``[-6, 6]^2`` with breakpoints on every
    line where two eigenvalues coincide.
    """
    L = TRUNCATION
    out = []
    for lam in np.atleast_1d(np.asarray(grid, dtype=float)):

        def inner(l2, lam=lam):
            pts = [p for p in _inner_points(lam, l2) if -L < p < L]
            return quad(lambda l3: _density4(lam, l2, l3), -L, L, points=pts or None, epsabs=epsabs * 0.1, limit=limit)[0]

        outer_pts = [p for p in sorted({lam, -lam, -3 * lam, -lam / 3}) if -L < p < L]
        val, err = quad(inner, -L, L, points=outer_pts or None, epsabs=epsabs, limit=limit)
        if not np.isfinite(val):
            raise ArithmeticError("quadrature did not converge")
        out.append(val)
    return np.array(out)


def two_point_n2(grid, pinned: float = 0.0, epsabs: float = 1e-8, limit: int = 200) -> np.ndarray:
    """``rho_(2,2)(lam, pinned) = int rho(lam, pinned, l_3, -lam - pinned - l_3) dl_3``."""
    L = TRUNCATION
    out = []
    for lam in np.atleast_1d(np.asarray(grid, dtype=float)):
        pts = [p for p in sorted({lam, pinned, -lam - 2 * pinned, -2 * lam - pinned, (-lam - pinned) / 2}) if -L < p < L]
        val = quad(lambda l3: _density4(lam, pinned, l3), -L, L, points=pts or None, epsabs=epsabs, limit=limit)[0]
        out.append(val)
    return np.array(out)


def two_point_normalization(pinned: float = 0.0, epsabs: float = 1e-8) -> float:
    """``int rho_(2,2)(lam, pinned) d lam`` (should equal ``rho_(2,1)(pinned)``)."""
    L = TRUNCATION
    pts = [p for p in sorted({pinned, -pinned, -3 * pinned, -pinned / 3}) if -L < p < L]
    return quad(lambda x: float(two_point_n2([x], pinned, epsabs * 0.1)[0]), -L, L, points=pts or None, epsabs=epsabs, limit=200)[0]


# ---------------------------------------------------------------- Monte Carlo


def _generic_n2_basis() -> np.ndarray:
    spec = EnsembleSpec("generic", 2)
    terms = expanded_terms(spec)
    return np.stack([dense_sum([t.string], [1.0], 2) for t in terms])


def sample_eigenvalues_n2(samples: int, seed: int = 0, chunk: int = 1 << 16) -> np.ndarray:
    """``(samples, 4)`` sorted eigenvalues of the generic two-qubit ensemble.

    Chunk ``k`` draws its coefficients from substream ``(seed, k)``.
    """
    basis = _generic_n2_basis()
    sd = math.sqrt(EnsembleSpec("generic", 2).variance)
    out = []
    done = 0
    k = 0
    while done < samples:
        m = min(chunk, samples - done)
        coef = sample_rng(seed, k).standard_normal((m, basis.shape[0])) * sd
        H = np.einsum("sk,kab->sab", coef, basis)
        out.append(np.linalg.eigvalsh(H))
        done += m
        k += 1
    return np.concatenate(out)


def one_point_histogram(eigs: np.ndarray, bins: int = 80, span=(-4.0, 4.0)):
    counts, edges = np.histogram(eigs.ravel(), bins=bins, range=span)
    w = edges[1] - edges[0]
    return 0.5 * (edges[:-1] + edges[1:]), counts / (eigs.size * w)


def two_point_histogram(eigs: np.ndarray, window: float = 0.01, bins: int = 60, span=(-3.0, 3.0)):
    """Estimate of ``rho_(2,2)(lam, 0)`` from samples.

    Counts ordered pairs ``(i, j)``, ``i != j``, with ``|l_j| < window`` and
    ``l_i`` in a bin, divided by ``12 * samples * bin width * 2 window``.
    """
    near = np.abs(eigs) < window
    others = []
    for j in range(DIM):
        rows = near[:, j]
        if rows.any():
            others.append(np.delete(eigs[rows], j, axis=1).ravel())
    vals = np.concatenate(others) if others else np.zeros(0)
    counts, edges = np.histogram(vals, bins=bins, range=span)
    w = edges[1] - edges[0]
    est = counts / (DIM * (DIM - 1) * eigs.shape[0] * w * 2 * window)
    return 0.5 * (edges[:-1] + edges[1:]), est, int(np.count_nonzero(near.any(axis=1)))


def l1_to_curve(centers, density, curve) -> float:
    w = centers[1] - centers[0]
    return float(np.sum(np.abs(np.asarray(density) - np.asarray(curve))) * w)
