import numpy as np
import pytest

from parspec import spectral as sp
from parspec.errors import VariantMismatch, WorkBudgetExceeded
from parspec.operators import weighted_matrix
from parspec.poly import make_quadratic


def test_sort_spectrum_modulus_then_argument():
    vals = [1j, -1, 1, 0.5, -1j]
    assert sp.sort_spectrum(vals) == [-1j, 1, 1j, -1, 0.5]


def test_eigenvalues_of_triangular_matrix():
    A = np.diag([3, 2j, -1]) + np.triu(np.ones((3, 3)), 1)
    assert sp.eigenvalues(A) == pytest.approx([3, 2j, -1], abs=1e-13)


def test_smallest_singular_value_diagonal():
    assert sp.smallest_singular_value(np.diag([3.0, 0.25, 1.0])) == pytest.approx(0.25)


def test_composition_eigenvalues_are_powers_of_derivative():
    # phi(0) = 0 gives a triangular compression with diagonal phi'(0)^j
    phi = [0, 0.5 + 0.2j, 0.3]
    n = 12
    ev = sp.eigenvalues(weighted_matrix([1], phi, n))
    want = sp.sort_spectrum([(0.5 + 0.2j) ** j for j in range(n)])
    assert np.allclose(ev, want, atol=1e-10)


def test_pseudospectrum_matches_direct_svd():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    g = sp.pseudospectrum_grid(A, (-2, 2, -1, 1), (5, 3), workers=2)
    assert g.values.shape == (3, 5)
    for i, y in enumerate(g.y):
        for j, x in enumerate(g.x):
            direct = np.linalg.svd(A - complex(x, y) * np.eye(6), compute_uv=False).min()
            assert g.values[i, j] == pytest.approx(direct, rel=1e-10, abs=1e-13)


def test_pseudospectrum_budget():
    with pytest.raises(WorkBudgetExceeded):
        sp.pseudospectrum_grid(np.eye(100), (0, 1, 0, 1), 100, work_budget=1e6)
    with pytest.raises(ValueError):
        sp.pseudospectrum_grid(np.eye(2), (0, 1, 0, 1), 2000)


def test_curve_exponents():
    assert sp.curve_exponent(sp.CurveVariant.MAIN, 0.25) == 0.5
    assert sp.curve_exponent(sp.CurveVariant.SQUARED, 0.25 + 0.25j) == pytest.approx(1 + 1j)
    assert sp.curve_exponent(sp.CurveVariant.SPECIAL_HALF) == 0.5
    with pytest.raises(VariantMismatch):
        sp.curve_exponent(sp.CurveVariant.MAIN, 0.5)
    with pytest.raises(VariantMismatch):
        sp.curve_exponent(sp.CurveVariant.SPECIAL_HALF, 0.25)
    with pytest.raises(VariantMismatch):
        sp.curve_exponent(sp.CurveVariant.SQUARED, 0.25)


def test_segment_curve_distance():
    c = sp.analytic_spectrum_curve("Main", 0.25)
    d = sp.curve_distance([0.5, 1.0, 0.0, -0.5, 2.0, 0.5 + 0.1j], c)
    assert d == pytest.approx([0, 0, 0, 0.5, 1.0, 0.1], abs=1e-12)


def test_spiral_curve_distance_against_dense_sampling():
    a = 0.25 + 0.125j
    c = sp.analytic_spectrum_curve("Main", a)
    t = np.linspace(0, c.t_max, 400_001)
    for p in (0.3 + 0.4j, -0.2 - 0.1j, 0.9):
        # coarse scan, then a fine scan around the coarse minimiser
        k = int(np.argmin(np.abs(np.exp(-2 * a * t) - p)))
        fine = np.linspace(t[max(k - 1, 0)], t[min(k + 1, t.size - 1)], 200_001)
        want = min(np.abs(np.exp(-2 * a * fine) - p).min(), abs(p))
        assert sp.curve_distance([p], c)[0] == pytest.approx(want, abs=1e-9)


def test_weight_scales_curve():
    c = sp.analytic_spectrum_curve("Main", 0.25, weight=2j)
    assert c.at(0) == 2j
    assert sp.curve_distance([1j], c)[0] == pytest.approx(0, abs=1e-12)


def test_select_variant():
    assert sp.select_variant(0.25) is sp.CurveVariant.MAIN
    assert sp.select_variant(0.5) is sp.CurveVariant.SPECIAL_HALF
    assert sp.select_variant(0.25 + 0.25j) is sp.CurveVariant.SQUARED
    with pytest.raises(VariantMismatch):
        sp.select_variant(0.9)


def test_ab_ba(rng):
    for k in (1, 3, 8, 16):
        A = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        B = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        assert sp.ab_ba_spectral_check(A, B)


def test_ab_ba_singular_pair():
    A = np.array([[0, 1], [0, 0]], dtype=complex)
    B = np.array([[0, 0], [1, 0]], dtype=complex)
    # AB = diag(1, 0), BA = diag(0, 1)
    assert sp.ab_ba_spectral_check(A, B)


def test_ab_ba_with_identity():
    assert sp.ab_ba_spectral_check(np.eye(2), np.diag([3.0, 4.0]))


def test_diagnostic_quarter_small():
    s = make_quadratic(0.25)
    curve = sp.analytic_spectrum_curve("Main", s.a)
    d = sp.on_off_curve_diagnostic([1], s, curve, n_list=(16, 32, 64))
    assert [p.label for p in d.on_points] == ["on:t=0", "on:t=0.5", "on:t=1", "on:t=2"]
    assert len(d.off_points) == 3
    on_one = d.on_points[0]
    assert all(v < 1e-12 for v in on_one.sigma_min.values())
    assert all(p.non_increasing() for p in d.on_points)
    assert d.separation_ratio() < 0.2


def test_spectrum_report_distances_small():
    s = make_quadratic(0.25)
    curve = sp.analytic_spectrum_curve("Main", s.a)
    rep = sp.spectrum_report([1], s, curve, 32)
    # compressions of C_phi for phi(0) != 0 have eigenvalues near the segment [0, 1]
    assert rep.eigenvalues[0] == pytest.approx(1, abs=1e-10)
    assert max(rep.distances) < 0.1
