import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qchain.ensembles import EnsembleSpec, sample
from qchain.entanglement import (
    DensityMatrix,
    check_block_purity_bound,
    check_single_qubit_theorem,
    linear_entropy,
    partial_trace,
    proportion_above,
    purities,
    purity,
    schmidt_coefficients,
    single_qubit_states,
    translation,
    translation_eigensystem,
)
from qchain.pauli import PauliString, single_site, to_dense


def basis_state(n, bits):
    v = np.zeros(2**n, dtype=complex)
    v[int(bits, 2)] = 1
    return v


def random_state(rng, n):
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return v / np.linalg.norm(v)


def reference_partial_trace(state, n, l):
    """Reduced state via the explicit sum over the traced-out basis."""
    dA, dB = 2**l, 2 ** (n - l)
    rho = np.zeros((dA, dA), dtype=complex)
    for c in range(dB):
        col = np.array([state[a * dB + c] for a in range(dA)])
        rho += np.outer(col, col.conj())
    return rho


def test_product_state():
    rho = partial_trace(basis_state(4, "0000"), 2)
    expect = np.zeros((4, 4))
    expect[0, 0] = 1
    assert np.allclose(rho.entries, expect)
    assert purity(rho) == pytest.approx(1)
    assert linear_entropy(rho) == pytest.approx(0)


def test_singlet():
    s = (basis_state(2, "01") - basis_state(2, "10")) / np.sqrt(2)
    rho = partial_trace(s, 1)
    assert np.allclose(rho.entries, np.eye(2) / 2)
    assert purity(rho) == pytest.approx(0.5)
    assert linear_entropy(rho) == pytest.approx(0.5)


def test_ghz():
    n = 5
    g = (basis_state(n, "0" * n) + basis_state(n, "1" * n)) / np.sqrt(2)
    rho = partial_trace(g, 2)
    assert np.allclose(rho.entries, np.diag([0.5, 0, 0, 0.5]))
    assert purity(rho) == pytest.approx(0.5)


def test_maximally_mixed_values():
    rho = DensityMatrix(3, np.eye(8) / 8)
    rho.validate()
    assert purity(rho) == pytest.approx(1 / 8)
    assert linear_entropy(rho) == pytest.approx(7 / 8)


def test_partial_trace_errors():
    with pytest.raises(ValueError):
        partial_trace(np.ones(8), 1)
    with pytest.raises(ValueError):
        partial_trace(basis_state(3, "000"), 3)
    with pytest.raises(ValueError):
        partial_trace(np.ones(6) / np.sqrt(6), 1)
    with pytest.raises(ValueError):
        DensityMatrix(1, np.eye(2) / 3).validate()


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_partial_trace_fuzz(n, l, seed):
    if l >= n:
        return
    state = random_state(np.random.default_rng(seed), n)
    rho = partial_trace(state, l)
    rho.validate()
    p = purity(rho)
    assert 2.0**-l - 1e-10 <= p <= 1 + 1e-10
    if n <= 6:
        assert np.allclose(rho.entries, reference_partial_trace(state, n, l), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_purity_one_iff_top_schmidt_one(n, seed):
    rng = np.random.default_rng(seed)
    l = 1 + seed % (n - 1)
    for state in (random_state(rng, n), np.kron(random_state(rng, l), random_state(rng, n - l))):
        p = purity(partial_trace(state, l))
        top = schmidt_coefficients(state, l).max()
        assert (abs(p - 1) < 1e-8) == (abs(top - 1) < 1e-8)


def test_batched_purities_match_single():
    rng = np.random.default_rng(3)
    n = 7
    V = np.linalg.qr(rng.standard_normal((2**n, 2**n)) + 1j * rng.standard_normal((2**n, 2**n)))[0][:, :20]
    for l in (1, 3, 5):
        for start in (1, 4, 6):
            batch = purities(V, l, start)
            single = [purity(partial_trace(V[:, k], l, start)) for k in range(20)]
            assert np.allclose(batch, single, atol=1e-13)


def test_wrapped_block_matches_translated_state():
    rng = np.random.default_rng(5)
    n = 6
    T = translation(n)
    psi = random_state(rng, n)
    # block starting at qubit 5 wraps to qubits 5, 6, 1
    direct = partial_trace(psi, 3, start=5).entries
    moved = partial_trace(T.apply(psi, n - 4), 3).entries
    assert np.allclose(direct, moved, atol=1e-13)


def test_translation_examples():
    T = translation(3)
    out = T.apply(basis_state(3, "011"))
    assert np.allclose(out, basis_state(3, "101"))
    M = T.matrix()
    assert np.allclose(np.linalg.matrix_power(M, 3), np.eye(8))
    ev = np.linalg.eigvals(M)
    assert np.allclose(ev**3, 1)
    roots = T.eigenvalues()
    assert all(np.min(np.abs(ev - r)) < 1e-10 for r in roots)
    assert sorted(np.unique(T.perm)) == list(range(8))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_conjugation_consistency(n):
    T = translation(n)
    M = T.matrix()
    for site in range(1, n + 1):
        for a in range(4):
            p = single_site(site, a, n)
            assert np.allclose(to_dense(T.conjugate(p)), M @ to_dense(p) @ M.T)
    q = PauliString.from_labels([1, 2] + [0] * (n - 2)) if n > 2 else PauliString.from_labels([1, 2])
    assert np.allclose(to_dense(T.conjugate(q)), M @ to_dense(q) @ M.T)


def test_single_qubit_theorem_generic():
    rep = check_single_qubit_theorem(sample(EnsembleSpec("generic", 6), 0), sites="all")
    assert rep.applicable and rep.passed and rep.value < 1e-10


def test_single_qubit_theorem_odd_not_applicable():
    rep = check_single_qubit_theorem(sample(EnsembleSpec("generic", 9), 0))
    assert not rep.applicable and rep.passed is None


def test_single_qubit_theorem_rejects_local_terms():
    with pytest.raises(ValueError):
        check_single_qubit_theorem(sample(EnsembleSpec("local", 6), 0))


def test_local_sample_single_qubit_deviation_reported():
    from qchain.spectra import hamiltonian_eigensystem

    h = sample(EnsembleSpec("local", 8), 0)
    es = hamiltonian_eigensystem(h)
    dev = np.max(np.abs(single_qubit_states(es.vectors) - np.eye(2) / 2))
    assert dev > 1e-3


def test_translation_eigensystem_is_joint():
    h = sample(EnsembleSpec("inv_local", 6), 1)
    vals, V, k = translation_eigensystem(h)
    H = h.dense()
    T = translation(6)
    assert np.max(np.abs(H @ V - V * vals)) < 1e-10
    assert np.max(np.abs(V.conj().T @ V - np.eye(64))) < 1e-10
    TV = np.stack([T.apply(V[:, j]) for j in range(64)], axis=1)
    phases = np.exp(2j * np.pi * k / 6)
    assert np.max(np.abs(TV - V * phases)) < 1e-10


@pytest.mark.parametrize("l,n", [(1, 8), (2, 9)])
def test_block_purity_bound(l, n):
    rep = check_block_purity_bound(sample(EnsembleSpec("inv_local", n), 0), l)
    assert rep.passed
    assert rep.detail["lower"] == 2.0**-l


def test_block_purity_neighbouring_blocks_agree():
    h = sample(EnsembleSpec("inv_local", 8), 0)
    vals, V, _ = translation_eigensystem(h)
    for l in (1, 2, 3):
        assert np.max(np.abs(purities(V, l, 1) - purities(V, l, 2))) < 1e-8


def test_proportion_above_bound():
    h = sample(EnsembleSpec("inv_local", 9), 0)
    rep = check_block_purity_bound(h, 2)
    for eps in (0.05, 0.1, 0.3):
        frac, bound = proportion_above(rep.detail["purities"], 2, eps)
        assert frac <= bound


def test_block_purity_requires_invariant():
    with pytest.raises(ValueError):
        check_block_purity_bound(sample(EnsembleSpec("generic", 7), 0), 2)
    with pytest.raises(ValueError):
        check_block_purity_bound(sample(EnsembleSpec("inv", 6), 0), 3)
