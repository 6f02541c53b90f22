import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qchain.degeneracy import (
    CENSUS_HEADER,
    degeneracy_census,
    kramers_check,
    min_gap,
    pair_up,
    symmetry_residual,
)
from qchain.ensembles import EnsembleSpec, sample
from qchain.pauli import PauliString, to_dense
from qchain.spectra import Spectrum


def explicit_s(n):
    y = to_dense(PauliString.from_labels([2]))
    S = np.array([[1.0]])
    for _ in range(n):
        S = np.kron(S, y)
    return S


def test_min_gap_examples():
    assert min_gap(np.array([0.0, 1.0, 1.5, 4.0])) == 0.5
    assert min_gap(np.array([3.0, -1.0, 3.0])) == 0
    with pytest.raises(ValueError):
        min_gap(np.array([1.0]))
    assert min_gap(Spectrum(1, np.array([0.0, 0.25]))) == 0.25


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-100, 100), min_size=2, max_size=50), st.floats(-10, 10))
def test_min_gap_shift_and_permutation_invariant(vals, shift):
    v = np.array(vals)
    g = min_gap(v)
    assert g >= 0
    assert min_gap(v[::-1]) == g
    assert min_gap(v + shift) == pytest.approx(g, abs=1e-9)


def test_pair_up():
    assert pair_up(np.array([1.0, 1.0, 2.0, 2.0 + 1e-12]), 1e-8) == (True, pytest.approx(1e-12, abs=1e-15))
    assert pair_up(np.array([1.0, 1.0, 2.0]), 1e-8)[0] is False
    assert pair_up(np.array([0.0, 0.5, 1.0, 1.5]), 1e-8)[0] is False


@pytest.mark.parametrize("n", [3, 4, 5])
def test_symmetry_residual_matches_explicit_operator(n):
    H = sample(EnsembleSpec("local", n), 0).dense()
    S = explicit_s(n)
    assert symmetry_residual(H, n) == pytest.approx(np.max(np.abs(S @ H - H.conj() @ S)), abs=1e-12)
    G = sample(EnsembleSpec("generic", n), 0).dense()
    assert symmetry_residual(G, n) < 1e-12
    assert np.allclose(S @ S.conj(), (-1) ** n * np.eye(2**n))


@pytest.mark.parametrize("n", [3, 5, 7])
def test_kramers_odd_generic(n):
    for k in range(3):
        rep = kramers_check(sample(EnsembleSpec("generic", n), k))
        assert rep.passed
        assert rep.max_pair_gap < 1e-8


def test_kramers_fails_for_even_generic():
    rep = kramers_check(sample(EnsembleSpec("generic", 4), 0))
    assert rep.symmetry_residual < 1e-10
    assert not rep.paired and not rep.passed


def test_kramers_rejects_local_terms():
    with pytest.raises(ValueError):
        kramers_check(sample(EnsembleSpec("local", 5), 0))


def test_census_examples():
    row = degeneracy_census(EnsembleSpec("generic", 5), 3)
    assert row.nondegenerate_fraction == 0
    row = degeneracy_census(EnsembleSpec("generic", 4), 5)
    assert row.nondegenerate_fraction == 1
    assert row.tsv().split("\t") == ["generic", "4", "5", "1.000000"]
    assert CENSUS_HEADER.startswith("# family")
    with pytest.raises(ValueError):
        degeneracy_census(EnsembleSpec("generic", 4), 0)
