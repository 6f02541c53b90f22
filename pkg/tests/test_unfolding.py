import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import kstest, norm

from qchain.unfolding import (
    SpacingSample,
    build_unfolding,
    gse_comparison,
    l1_distance,
    spacing_histogram,
    spacing_sample,
    surmise,
    surmise_constants,
    surmise_distances,
    surmise_moments,
    unfold,
    unfolded_spacings,
)


def test_uniform_spectrum_gives_equal_proportions():
    v = np.linspace(-3, 3, 240, endpoint=False) + 0.0125
    m = build_unfolding([v], bins=240)
    assert np.allclose(m.proportions, 1 / 240)


def test_zero_spectrum_central_bins():
    m = build_unfolding([np.zeros(10)])
    assert set(np.flatnonzero(m.proportions)) <= {119, 120}
    assert m.total == pytest.approx(1)


def test_build_errors():
    with pytest.raises(ValueError):
        build_unfolding([np.array([])])
    with pytest.raises(ValueError):
        build_unfolding([np.zeros(3)], range=(1, 0))


def test_proportions_track_gaussian_mass(spectra_cache):
    sp = spectra_cache.get("generic", 10, 64)
    m = build_unfolding(sp)
    mass = np.diff(norm.cdf(m.edges))
    assert np.max(np.abs(m.proportions - mass)) < 0.01
    assert m.total <= 1 + 1e-12


def test_unfold_at_edges():
    rng = np.random.default_rng(0)
    m = build_unfolding([rng.standard_normal(4000)], bins=24)
    e = m.edges
    for j in (0, 5, 12, 23):
        assert unfold(m, np.array([e[j]]))[0] == pytest.approx(m.offsets[j], abs=1e-14)
        just_below = np.nextafter(e[j + 1], -np.inf)
        assert unfold(m, np.array([just_below]))[0] == pytest.approx(m.offsets[j] + m.proportions[j], abs=1e-12)


def test_unfold_drops_out_of_range():
    m = build_unfolding([np.linspace(-3, 3, 100)])
    assert unfold(m, np.array([-4.0, 0.0, 4.0])).size == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3.5, 3.5), min_size=2, max_size=300))
def test_unfold_monotone(vals):
    v = np.array(vals)
    m = build_unfolding([v], bins=30)
    grid = np.linspace(-3, 3, 997)
    u = unfold(m, grid)
    assert np.all(np.diff(u) >= -1e-15)
    assert u.min() >= 0 and u.max() <= m.total + 1e-12


def test_unfolded_values_uniform(spectra_cache):
    sp = spectra_cache.get("generic", 10, 64)
    m = build_unfolding(sp)
    u = np.concatenate([unfold(m, s) for s in sp]) / m.total
    assert kstest(u, "uniform", method="asymp").statistic < 0.02


def test_spacing_sample_examples():
    s = spacing_sample([np.array([0.0, 0.5, 1.0])])
    assert np.allclose(s.spacings, [1, 1])
    deg = spacing_sample([np.repeat(np.arange(5.0), 2)])
    assert deg.zero_fraction == pytest.approx(5 / 9)
    s2 = spacing_sample([np.array([0, 0.1, 0.1, 0.2, 0.2, 0.3])])
    assert np.count_nonzero(s2.spacings == 0) == 2
    assert s2.spacings.mean() == pytest.approx(1, abs=1e-12)
    with pytest.raises(ValueError):
        spacing_sample([np.array([1.0])])
    with pytest.raises(ValueError):
        spacing_sample([])


def test_spacings_never_cross_samples():
    s = spacing_sample([np.array([0.0, 0.1]), np.array([5.0, 5.1])])
    assert s.spacings.size == 2


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.floats(0, 1), min_size=2, max_size=40), min_size=1, max_size=5))
def test_spacing_sample_unit_mean(vectors):
    if all(np.ptp(v) == 0 for v in vectors):
        return
    s = spacing_sample([np.array(v) for v in vectors])
    assert np.all(s.spacings >= 0)
    assert s.spacings.mean() == pytest.approx(1, abs=1e-9)


def test_surmise_closed_forms():
    s = np.linspace(0, 4, 41)
    assert surmise(1, 0.0) == 0
    assert np.allclose(surmise(0, s), np.exp(-s))
    assert np.allclose(surmise(1, s), math.pi / 2 * s * np.exp(-math.pi * s**2 / 4), atol=1e-15)
    assert np.allclose(surmise(2, s), 32 / math.pi**2 * s**2 * np.exp(-4 * s**2 / math.pi), atol=1e-15)
    with pytest.raises(ValueError):
        surmise(3, s)


@pytest.mark.parametrize("beta", [0, 1, 2, 4])
@pytest.mark.parametrize("area,mean", [(1.0, 1.0), (0.5, 2.0), (2.0, 0.7)])
def test_surmise_normalization(beta, area, mean):
    a, m = surmise_moments(beta, area, mean)
    assert a == pytest.approx(area, abs=1e-8)
    assert m == pytest.approx(area * mean, abs=1e-8)


def test_gse_constants_by_root_solve():
    """Independent route: solve the two moment equations numerically."""
    from scipy.integrate import quad
    from scipy.optimize import fsolve

    def eqs(x):
        C, c = x
        a = quad(lambda s: C * s**4 * math.exp(-c * s * s), 0, 20)[0]
        m = quad(lambda s: C * s**5 * math.exp(-c * s * s), 0, 20)[0]
        return [a - 1, m - 1]

    C, c = fsolve(eqs, [3.0, 1.5], xtol=1e-13)
    C0, c0 = surmise_constants(4)
    assert C == pytest.approx(C0, rel=1e-8)
    assert c == pytest.approx(c0, rel=1e-8)
    assert C0 == pytest.approx(2**18 / (3**6 * math.pi**3), rel=1e-12)
    assert c0 == pytest.approx(64 / (9 * math.pi), rel=1e-12)


def test_gse_comparison_half_area():
    s = np.linspace(0, 3, 7)
    assert np.allclose(gse_comparison(s), surmise(4, s, 0.5, 2.0))


def test_spacing_histogram_drop_zero_keeps_normalization():
    sample = SpacingSample(np.array([0.0, 0.0, 2.0, 2.0]))
    c, d = spacing_histogram(sample, drop_zero=True)
    assert np.sum(d) * (c[1] - c[0]) == pytest.approx(0.5)
    c, d = spacing_histogram(sample)
    assert np.sum(d) * (c[1] - c[0]) == pytest.approx(1.0)


def test_l1_distance_zero_for_identical():
    c = np.linspace(0.0125, 2.9875, 120)
    assert l1_distance(c, surmise(1, c), surmise(1, c)) == 0


def test_poisson_and_goe_samples_classified():
    rng = np.random.default_rng(4)
    poisson = [np.sort(rng.uniform(-3, 3, 500)) for _ in range(20)]
    d = surmise_distances(unfolded_spacings(poisson))
    assert d["poisson"] < 0.1 and d["goe"] > 0.3
    goe = []
    for _ in range(40):
        A = rng.standard_normal((200, 200))
        ev = np.linalg.eigvalsh((A + A.T) / 2) / math.sqrt(200)
        goe.append(ev)
    d = surmise_distances(unfolded_spacings(goe, range=(-1.2, 1.2)))
    assert d["goe"] < 0.1 and d["poisson"] > 0.3


def test_kramers_spacings_half_zero():
    vals = np.repeat(np.sort(np.random.default_rng(1).uniform(-2, 2, 64)), 2)
    s = unfolded_spacings([vals])
    assert s.zero_fraction >= 0.49


@pytest.mark.slow
def test_generic_even_spacings_goe_128_samples(spectra_cache):
    sp = spectra_cache.get("generic", 12, 128)
    d = surmise_distances(unfolded_spacings(sp))
    assert d["goe"] < 0.1
