import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parspec import dynamics as dyn
from parspec.errors import DomainError, NoContraction, PoleAtOne
from parspec.poly import boundary_parameter, make_quadratic


def brute_sup(a, n, m=200_000):
    """Dense boundary sup of |phi_n - 1| by direct iteration of phi."""
    z = np.exp(2j * np.pi * np.arange(m) / m)
    for _ in range(n):
        z = a * z * z + (1 - 2 * a) * z + a
    return float(np.abs(z - 1).max())


def brute_lens_max(center, r, m=1500):
    """Farthest lens point from a polar grid filling the lens interior and edge."""
    rho = np.linspace(0, 1, m)[:, None]
    th = np.linspace(-np.pi, np.pi, 2 * m)[None, :]
    w = (rho * np.exp(1j * th)).ravel()
    w = w[np.abs(w - 1) <= r]
    return float(np.abs(w - center).max())


# -- boundary case -----------------------------------------------------------

def test_r1_closed_form():
    assert dyn.r1(0.25) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert dyn.r1(0.5) == 1.0
    assert dyn.r1(0.4) == 1.0


@pytest.mark.parametrize("A", [0.05, 0.25, 0.4, 0.5])
def test_r1_oracle_matches_dense_sampling(A):
    s = boundary_parameter(A)
    assert dyn.r1_oracle(s) == pytest.approx(brute_sup(s.a, 1), abs=1e-8)


def test_r1_oracle_exact_value_quarter():
    # |phi - 1| = |a||w - 1||w - z0| peaks at 4/sqrt(5) for a = (1 + i)/4
    assert dyn.r1_oracle(0.25 + 0.25j) == pytest.approx(4 / math.sqrt(5), abs=1e-10)


def test_r1_closed_form_underestimates_sup():
    for A in (0.05, 0.25, 0.4):
        assert dyn.r1(A) < dyn.r1_oracle(boundary_parameter(A)) - 0.05
    assert dyn.r1(0.5) == pytest.approx(dyn.r1_oracle(0.5), abs=1e-12)


@pytest.mark.parametrize("center, r", [(-1 + 2j, 1.0), (-1 + 1j, 1.0), (-1 + 0.5j, 0.3),
                                       (-1 + 2j, 2.0), (0.3 - 0.2j, 1.7)])
def test_lens_max_against_grid(center, r):
    d, w = dyn.lens_max_distance(center, r)
    assert abs(w) <= 1 + 1e-12 and abs(w - 1) <= r + 1e-12
    assert abs(abs(w - center) - d) < 1e-12
    assert d == pytest.approx(brute_lens_max(center, r), abs=5e-3)
    assert d >= brute_lens_max(center, r) - 1e-12


def test_lens_max_exact_vertex_case():
    # A = 1/4, r = 1: the lens vertex 1/2 - i sqrt(3)/2 is farthest from -1 + 2i
    d, w = dyn.lens_max_distance(-1 + 2j, 1.0)
    assert d == pytest.approx(math.sqrt(7 + 2 * math.sqrt(3)), abs=1e-12)
    assert w == pytest.approx(0.5 - 0.5j * math.sqrt(3), abs=1e-9)


def test_farthest_point_paper_value():
    fp = dyn.farthest_point_bound(0.25, 1.0)
    assert fp.paper_value == pytest.approx(math.sqrt(4 - math.sqrt(3)), abs=1e-12)
    assert fp.oracle_value == pytest.approx(math.sqrt(7 + 2 * math.sqrt(3)), abs=1e-9)
    assert fp.relative_gap > 0.5


def test_oracle_factor_is_sound_one_step():
    # sup |phi_2 - 1| <= r1 * f(r1) must hold for a valid factor
    for A in (0.1, 0.25, 0.45, 0.5):
        s = boundary_parameter(A)
        r = dyn.r1_oracle(s)
        f = dyn.contraction_factor(A, r)
        assert brute_sup(s.a, 2) <= r * f + 1e-9


def test_oracle_factor_at_half_is_one():
    assert dyn.contraction_factor(0.5, 1.0) == pytest.approx(1.0, abs=1e-12)


def test_contraction_factor_domain():
    with pytest.raises(DomainError):
        dyn.contraction_factor(0.25, 2.5)
    with pytest.raises(DomainError):
        dyn.contraction_factor(0.25, 1.6, dyn.BoundMode.PAPER)
    with pytest.raises(DomainError):
        dyn.contraction_factor(0.25, -1)


def test_closed_form_recursion_at_half():
    tr = dyn.uci_bound_sequence(0.5, dyn.BoundMode.PAPER)
    assert tr.converged_at == 30
    assert tr.strictly_decreasing
    assert tr.r[1] == pytest.approx(math.sqrt(3) / 2, abs=1e-12)


def test_oracle_recursion_raises_with_trace():
    with pytest.raises(NoContraction) as info:
        dyn.uci_bound_sequence(0.25 + 0.25j)
    assert info.value.trace is not None
    assert info.value.trace.factors[-1] >= 1


def test_non_strict_oracle_bounds_dominate_sampling():
    tr = dyn.uci_bound_sequence(0.25 + 0.25j, strict=False, n_max=20, sample_sup=20)
    for r, m in zip(tr.r, tr.sampled_sup):
        assert m <= r + 1e-9


def test_target_two_converges_immediately():
    assert dyn.uci_bound_sequence(0.5, target=2.0).converged_at == 1


def test_conjugate_parameter_is_mirrored():
    a = dyn.uci_bound_sequence(0.25 - 0.25j, strict=False, n_max=3)
    b = dyn.uci_bound_sequence(0.25 + 0.25j, strict=False, n_max=3)
    assert a.r == b.r


@pytest.mark.parametrize("a, n", [(0.5, 3), (0.25 + 0.25j, 5), (0.3 + 0.1j, 4)])
def test_sampled_sup_against_dense(a, n):
    s = make_quadratic(a)
    assert dyn.sampled_sup_distance(s, n) == pytest.approx(brute_sup(s.a, n), rel=1e-6)


@pytest.mark.parametrize("A", [0.25, 0.5])
def test_sup_decays_like_one_over_An(A):
    # 1/(phi_n - 1) drifts by -a per step and 1/(z - 1) has real part -1/2 on
    # the circle, so sup |phi_n - 1| ~ 1 / (A n - 1/2)
    s = boundary_parameter(A)
    n = 300
    got = dyn.sampled_sup_distance(s, n, cap=2**n)
    assert got == pytest.approx(1 / (A * n - 0.5), rel=0.05)


# -- interior case -----------------------------------------------------------

@given(st.floats(0.01, 0.49), st.floats(-0.24, 0.24), st.floats(-2, 2), st.floats(-2, 2))
@settings(max_examples=200, deadline=None)
def test_conjugacy_residual(ar, ai, x, y):
    a = complex(ar, ai)
    assert dyn.sigma_conjugacy(a).residual(complex(x, y)) < 1e-12


def test_h_pole():
    with pytest.raises(PoleAtOne):
        dyn.h_map(1.0)
    assert dyn.h_map(2.0) == 4.0


def test_region_membership():
    assert dyn.region_contains(dyn.pi_region(), 10 + 0j) is dyn.Membership.INSIDE
    assert dyn.region_contains(dyn.pi_region(), 0j) is dyn.Membership.OUTSIDE
    assert dyn.region_contains(dyn.pi_region(), 3 + 0j) is dyn.Membership.BOUNDARY
    assert dyn.region_contains(dyn.cardioid(), 0.1 + 0j) is dyn.Membership.INSIDE
    assert dyn.region_contains(dyn.parameter_disk(), 0.5 + 0j) is dyn.Membership.BOUNDARY
    assert dyn.region_contains(dyn.disk_da(0.3), 0.3 + 0j) is dyn.Membership.INSIDE


def test_half_plane_is_reciprocal_of_da(rng):
    # |1/w - a| < |a|  <=>  2 Re(a w) > 1
    for _ in range(20):
        a = 0.25 + 0.2 * (rng.random() * np.exp(2j * np.pi * rng.random()))
        w = rng.uniform(-5, 5, 500) + 1j * rng.uniform(-5, 5, 500)
        recip = dyn.region_inside(dyn.disk_da(a), 1 / w)
        half = dyn.region_inside(dyn.half_plane_ha(a), w)
        margin = np.abs(dyn.half_plane_ha(a).margin(w))
        keep = margin > 1e-9
        assert np.array_equal(recip[keep], half[keep])


def test_cardioid_forward_invariant(rng):
    r = rng.random(5000) / 6
    th = rng.uniform(-np.pi, np.pi, 5000)
    z = r * np.exp(1j * th)
    z = z[dyn.region_inside(dyn.cardioid(), z)]
    w = dyn.g_map(z)
    assert np.all(dyn.cardioid().margin(w) > -1e-15)


def test_pi_invariance_suite():
    rep = dyn.check_pi_invariance(500, seed=3)
    assert rep.samples == 500 and rep.passed


def test_parameter_disk_suite():
    rep = dyn.check_parameter_disk_invariance(2000, seed=4)
    assert rep.passed and rep.max_residual < 1e-12


# -- escape grid -------------------------------------------------------------

def test_escape_grid_trivial_cells():
    g = dyn.escape_time_grid((-0.5, 0.5, -0.5, 0.5), 1)
    assert g.status[0, 0] == dyn.CellStatus.CONVERGED_TO_ZERO and g.iterations[0, 0] == 0
    g = dyn.escape_time_grid((9.5, 10.5, -0.5, 0.5), 1)
    assert g.status[0, 0] == dyn.CellStatus.ESCAPED and g.iterations[0, 0] <= 3


def test_escape_grid_without_petal_still_terminates():
    g = dyn.escape_time_grid((0.05, 0.15, -0.05, 0.05), 4, max_iter=50, petal_capture=False)
    assert set(np.unique(g.status)) <= {dyn.CellStatus.UNDECIDED, dyn.CellStatus.CONVERGED_TO_ZERO}


def test_escape_grid_layout():
    g = dyn.escape_time_grid((-1, 2, -1.5, 1.5), (6, 4), max_iter=100)
    assert g.status.shape == (4, 6)
    assert g.x[0] == pytest.approx(-0.75) and g.y[0] == pytest.approx(-1.125)
    assert sum(g.counts().values()) == 24


def test_escape_grid_rejects_bad_arguments():
    with pytest.raises(ValueError):
        dyn.escape_time_grid(resolution=0)
    with pytest.raises(ValueError):
        dyn.escape_time_grid(map="h")
