import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qchain.pauli import (
    SIGMA,
    DenseBudgetError,
    PauliString,
    all_strings,
    anticommuting_neighbours,
    commutes,
    dense_sum,
    hs_inner,
    kron_dense,
    mul,
    nearest_neighbour_strings,
    single_site,
    to_dense,
    two_site,
)


def strings(max_n=5):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(
            st.lists(st.integers(0, 3), min_size=n, max_size=n),
            st.lists(st.integers(0, 3), min_size=n, max_size=n),
            st.integers(0, 3),
            st.integers(0, 3),
        )
    )


def test_single_site_examples():
    p = single_site(1, 3, 2)
    assert p.labels == (3, 0) and p.phase == 0
    assert single_site(2, 0, 3).is_identity()
    with pytest.raises(ValueError):
        single_site(4, 1, 3)
    with pytest.raises(ValueError):
        single_site(0, 1, 3)


def test_mul_examples():
    x, y = single_site(1, 1, 1), single_site(1, 2, 1)
    r = mul(x, y)
    assert r.labels == (3,) and r.phase_value == 1j
    p = PauliString.from_labels([1, 2, 3, 0])
    assert (p * p) == PauliString.identity(4)
    assert PauliString.identity(4) * p == p


def test_mul_mismatched_n():
    with pytest.raises(ValueError):
        mul(PauliString.identity(2), PauliString.identity(3))
    with pytest.raises(ValueError):
        commutes(PauliString.identity(2), PauliString.identity(3))


def test_commutes_examples():
    n = 6
    zz12 = two_site(1, 3, 3, n)
    assert commutes(zz12, two_site(5, 2, 2, n))
    assert not commutes(zz12, two_site(2, 2, 2, n))
    assert commutes(zz12, zz12)


@pytest.mark.parametrize("n,site,a,b", [(13, 11, 1, 2), (5, 1, 3, 3), (3, 1, 1, 1)])
def test_anticommuting_neighbours_examples(n, site, a, b):
    p = two_site(site, a, b, n)
    assert anticommuting_neighbours(p) == 16
    # independent enumeration through the dense commutator
    if n <= 5:
        P = to_dense(p)
        count = 0
        for q in nearest_neighbour_strings(n):
            Q = to_dense(q)
            count += np.max(np.abs(P @ Q - Q @ P)) > 1e-12
        assert count == 16


@pytest.mark.parametrize("n", [3, 4, 6, 9])
def test_anticommuting_neighbours_every_bond(n):
    for p in nearest_neighbour_strings(n):
        assert anticommuting_neighbours(p) == 16


def test_anticommuting_neighbours_rejects_other_shapes():
    with pytest.raises(ValueError):
        anticommuting_neighbours(PauliString.from_labels([1, 0, 1, 0]))
    with pytest.raises(ValueError):
        anticommuting_neighbours(PauliString.from_labels([1, 1, 1]))
    with pytest.raises(ValueError):
        anticommuting_neighbours(PauliString.from_labels([1, 1]))


def test_to_dense_examples():
    assert np.array_equal(to_dense(PauliString.from_labels([3, 0])), np.diag([1, 1, -1, -1]).astype(complex))
    assert np.array_equal(to_dense(PauliString.identity(3)), np.eye(8))
    assert np.array_equal(to_dense(PauliString.from_labels([1])), np.array([[0, 1], [1, 0]], dtype=complex))


def test_dense_budget():
    with pytest.raises(DenseBudgetError, match="14"):
        to_dense(PauliString.identity(15))
    with pytest.raises(DenseBudgetError):
        to_dense(PauliString.identity(5), max_qubits=4)


def test_hs_inner_examples():
    a = to_dense(PauliString.from_labels([1, 2]))
    b = to_dense(PauliString.from_labels([1, 3]))
    assert hs_inner(a, b) == 0
    assert hs_inner(np.eye(4), np.eye(4)) == 1
    with pytest.raises(ValueError):
        hs_inner(np.eye(2), np.eye(4))


def test_two_site_wraps():
    p = two_site(4, 1, 2, 4)
    assert p.labels == (2, 0, 0, 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exhaustive_products_and_commutation(n):
    """Bitwise algebra against Kronecker products for every pair of strings."""
    strs = list(all_strings(n))
    dense = {p: kron_dense(p) for p in strs}
    for p, q in itertools.product(strs, repeat=2):
        P, Q = dense[p], dense[q]
        r = mul(p, q)
        assert np.max(np.abs(kron_dense(r) - P @ Q)) < 1e-12
        comm = np.max(np.abs(P @ Q - Q @ P)) < 1e-12
        assert commutes(p, q) == comm


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hs_orthonormality(n):
    strs = list(all_strings(n))
    G = np.array([[hs_inner(to_dense(p), to_dense(q)) for q in strs] for p in strs])
    assert np.max(np.abs(G - np.eye(len(strs)))) < 1e-12


def test_traceless_nonidentity():
    for p in all_strings(3):
        tr = np.trace(to_dense(p))
        assert abs(tr) < 1e-12 if not p.is_identity() else tr == 8


@given(strings())
def test_product_phase_and_dense(args):
    la, lb, pa, pb = args
    p, q = PauliString.from_labels(la, pa), PauliString.from_labels(lb, pb)
    assert np.max(np.abs(to_dense(p * q) - to_dense(p) @ to_dense(q))) < 1e-12
    # associativity and the commutation/phase relation p q = +- q p
    pq, qp = p * q, q * p
    assert pq.unsigned() == qp.unsigned()
    assert (pq.phase - qp.phase) % 4 == (0 if commutes(p, q) else 2)
    assert to_dense(p).shape == (1 << len(la),) * 2


@given(strings(4), st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_associativity(args, extra):
    la, lb, pa, pb = args
    n = len(la)
    p, q = PauliString.from_labels(la, pa), PauliString.from_labels(lb, pb)
    r = PauliString.from_labels(extra[:n])
    assert (p * q) * r == p * (q * r)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=6), st.integers(0, 7))
def test_shift_matches_labels(labels, k):
    p = PauliString.from_labels(labels)
    s = p.shifted(k)
    n = len(labels)
    assert all(s.labels[(j + k) % n] == labels[j] for j in range(n))


def test_dense_sum_matches_kron():
    rng = np.random.default_rng(0)
    n = 4
    strs = nearest_neighbour_strings(n)
    c = rng.standard_normal(len(strs))
    H = dense_sum(strs, c, n)
    ref = sum(ci * kron_dense(p) for ci, p in zip(c, strs))
    assert np.max(np.abs(H - ref)) < 1e-12
    assert np.max(np.abs(H - H.conj().T)) < 1e-12


def test_sigma_table():
    s1, s2, s3 = SIGMA[1], SIGMA[2], SIGMA[3]
    assert np.allclose(s1 @ s2 @ s3, 1j * np.eye(2))
