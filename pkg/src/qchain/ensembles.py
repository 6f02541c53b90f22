"""Random nearest-neighbour chain Hamiltonians and a few fixed ones.

Every family is a sum of terms ``alpha * sigma_j^(a) sigma_{j+1}^(b)`` on a ring
of ``n`` qubits (``j + 1`` taken mod n), with the coefficient variance chosen so
that ``E[2^-n Tr H^2] = 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliString, dense_sum, single_site, two_site


class Family(str, enum.Enum):
    GENERIC = "generic"
    UNIFORM = "uniform"
    LOCAL = "local"
    INV = "inv"
    INV_LOCAL = "inv_local"
    JW = "jw"
    HEIS = "heis"

    @classmethod
    def parse(cls, name) -> "Family":
        if isinstance(name, Family):
            return name
        key = str(name).strip().lower().replace("-", "_")
        for f in cls:
            if f.value == key or f.name.lower() == key:
                return f
        raise ValueError(f"unknown family {name!r}; choose from {[f.value for f in cls]}")


class FixedKind(str, enum.Enum):
    EPS_XYPLUSZ = "eps_xyplusz"
    EPSJ_Z = "epsj_z"
    Z_FIELD = "z_field"


TRANSLATION_INVARIANT = {Family.INV, Family.INV_LOCAL}


@dataclass(frozen=True)
class EnsembleSpec:
    """Law of a random chain Hamiltonian.

    Parameters
    ----------
    family : Family
    n : int
        Number of qubits, at least 2.
    seed : int
        Master seed; sample ``k`` uses the substream ``(seed, k)``.
    heis_site_dependent : bool
        HEIS only: independent coefficients per bond (3n of them) instead of
        three shared ones.
    """

    family: Family
    n: int
    seed: int = 0
    heis_site_dependent: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        if self.n < 2:
            raise ValueError("n must be >= 2")

    @property
    def invariant(self) -> bool:
        if self.family is Family.HEIS:
            return not self.heis_site_dependent
        return self.family in TRANSLATION_INVARIANT

    @property
    def variance(self) -> float:
        n = self.n
        return {
            Family.GENERIC: 1 / (9 * n),
            Family.UNIFORM: 1 / (9 * n),
            Family.LOCAL: 1 / (12 * n),
            Family.INV: 1 / (9 * n),
            Family.INV_LOCAL: 1 / (12 * n),
            Family.JW: 1 / (5 * n - 4),
            Family.HEIS: 1 / (3 * n),
        }[self.family]

    @property
    def has_local_terms(self) -> bool:
        return self.family in (Family.LOCAL, Family.INV_LOCAL, Family.JW)


@dataclass(frozen=True)
class Term:
    """One Pauli term ``sigma_site^(a) sigma_{site+1}^(b)``.

    ``b == 0`` marks a one-site term on ``site``.  ``orbit`` is True for the
    generator of a translation orbit whose coefficient is shared by all sites.
    """

    site: int
    a: int
    b: int
    string: PauliString
    orbit: bool = False


def _site_pairs(family: Family, n: int, j: int):
    if family is Family.JW:
        pairs = [(3, 0)]
        if j < n:
            pairs += [(a, b) for b in (1, 2) for a in (1, 2)]
        return pairs
    if family is Family.HEIS:
        return [(a, a) for a in (1, 2, 3)]
    bs = (0, 1, 2, 3) if family in (Family.LOCAL, Family.INV_LOCAL) else (1, 2, 3)
    return [(a, b) for b in bs for a in (1, 2, 3)]


def _make_term(j: int, a: int, b: int, n: int, orbit: bool = False) -> Term:
    s = single_site(j, a, n) if b == 0 else two_site(j, a, b, n)
    return Term(j, a, b, s, orbit)


def expanded_terms(spec: EnsembleSpec) -> list[Term]:
    """All ring terms, site-major then b-major then a."""
    n = spec.n
    return [_make_term(j, a, b, n) for j in range(1, n + 1) for a, b in _site_pairs(spec.family, n, j)]


def term_list(spec: EnsembleSpec) -> list[Term]:
    """Independent-coefficient terms.

    For translation-invariant families only the site-1 orbit generators are
    returned, tagged ``orbit=True``.
    """
    if spec.invariant:
        return [_make_term(1, a, b, spec.n, orbit=True) for a, b in _site_pairs(spec.family, spec.n, 1)]
    return expanded_terms(spec)


def sample_rng(seed: int, index: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed) & ((1 << 64) - 1), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass
class SampledHamiltonian:
    """A concrete chain Hamiltonian ``sum_k coefficients[k] * terms[k].string``."""

    n: int
    terms: list[Term]
    coefficients: np.ndarray
    spec: EnsembleSpec | None = None
    label: str = ""
    _dense: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        if len(self.terms) != len(self.coefficients):
            raise ValueError("terms and coefficients differ in length")
        if not np.all(np.isfinite(self.coefficients)):
            raise ValueError("non-finite coefficient")

    @property
    def strings(self) -> list[PauliString]:
        return [t.string for t in self.terms]

    def coefficient_map(self, drop_zero: bool = True) -> dict[PauliString, complex]:
        """Coefficients merged by phase-free string (phases folded into the value)."""
        out: dict[PauliString, complex] = {}
        for t, c in zip(self.terms, self.coefficients):
            key = t.string.unsigned()
            out[key] = out.get(key, 0) + c * t.string.phase_value
        if drop_zero:
            out = {k: v for k, v in out.items() if v != 0}
        return out

    def normalized_trace_sq(self) -> float:
        """``2^-n Tr H^2`` from the merged coefficients (identity included)."""
        return float(sum(abs(v) ** 2 for v in self.coefficient_map().values()))

    def has_local_terms(self) -> bool:
        return any(t.b == 0 for t in self.terms)

    def dense(self, max_qubits: int | None = None) -> np.ndarray:
        if self._dense is None:
            self._dense = dense_sum(self.strings, self.coefficients, self.n, max_qubits)
        return self._dense

    def scaled(self, factor: float) -> "SampledHamiltonian":
        return SampledHamiltonian(self.n, self.terms, self.coefficients * factor, self.spec, self.label)

    def translated(self, k: int = 1) -> "SampledHamiltonian":
        """Conjugate by ``T^k``: every site label moves from ``j`` to ``j + k``."""
        n = self.n
        terms = [
            Term((t.site - 1 + k) % n + 1, t.a, t.b, t.string.shifted(k), t.orbit) for t in self.terms
        ]
        return SampledHamiltonian(n, terms, self.coefficients.copy(), self.spec, self.label)


def _draw(spec: EnsembleSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    sd = math.sqrt(spec.variance)
    if spec.family is Family.UNIFORM:
        half = math.sqrt(3.0) * sd
        return rng.uniform(-half, half, size)
    return rng.standard_normal(size) * sd


def sample(spec: EnsembleSpec, index: int = 0) -> SampledHamiltonian:
    """Draw sample number ``index`` of the ensemble (deterministic in seed, index)."""
    rng = sample_rng(spec.seed, index)
    terms = expanded_terms(spec)
    if spec.invariant:
        gens = term_list(spec)
        shared = _draw(spec, rng, len(gens))
        coef_of = {(g.a, g.b): c for g, c in zip(gens, shared)}
        coefs = np.array([coef_of[(t.a, t.b)] for t in terms])
    else:
        coefs = _draw(spec, rng, len(terms))
    return SampledHamiltonian(spec.n, terms, coefs, spec, f"{spec.family.value}[{index}]")


def variance_sum(spec: EnsembleSpec) -> float:
    """Sum over expanded terms of the coefficient variance (the naive normalization)."""
    return len(expanded_terms(spec)) * spec.variance


def exact_trace_sq_expectation(spec: EnsembleSpec) -> float:
    """Exact ``E[2^-n Tr H^2]`` accounting for terms that coincide as strings.

    Each distinct string ``s`` has coefficient ``sum_k M[s, k] xi_k`` over the
    independent draws ``xi_k``; the expectation is ``sum_{s,k} M[s,k]^2 var``.
    """
    terms = expanded_terms(spec)
    if spec.invariant:
        key_of = lambda t: (t.a, t.b)  # noqa: E731
    else:
        key_of = lambda t: id(t)  # noqa: E731
    M: dict[tuple, dict] = {}
    for t in terms:
        row = M.setdefault((t.string.x, t.string.z), {})
        k = key_of(t)
        row[k] = row.get(k, 0) + t.string.phase_value
    return float(sum(abs(v) ** 2 for row in M.values() for v in row.values()) * spec.variance)


def fixed_hamiltonian(kind, n: int, eps: float = 1.0) -> SampledHamiltonian:
    """The special deterministic Hamiltonians.

    ``EPS_XYPLUSZ``: ``sum_j eps sigma_j^1 sigma_{j+1}^2 + sigma_j^3`` (ring);
    ``EPSJ_Z``: ``sum_j eps**j sigma_j^3``; ``Z_FIELD``: ``sum_j sigma_j^3``.
    """
    kind = FixedKind(kind) if not isinstance(kind, FixedKind) else kind
    if n < 2:
        raise ValueError("n must be >= 2")
    terms, coefs = [], []
    for j in range(1, n + 1):
        if kind is FixedKind.EPSJ_Z:
            terms.append(_make_term(j, 3, 0, n))
            coefs.append(eps**j)
        else:
            terms.append(_make_term(j, 3, 0, n))
            coefs.append(1.0)
            if kind is FixedKind.EPS_XYPLUSZ and eps != 0:
                terms.append(_make_term(j, 1, 2, n))
                coefs.append(eps)
    label = kind.value if kind is FixedKind.Z_FIELD else f"{kind.value}(eps={eps})"
    return SampledHamiltonian(n, terms, np.array(coefs), None, label)
