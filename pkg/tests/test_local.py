import csv
import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from speclab.errors import HypothesisError
from speclab.instances import complex_normal, conditioned_basis, imaginary_semisimple, jordan_block
from speclab.linalg import spectral_decomposition
from speclab.local import (
    carleman_scan,
    check_prop_2_2,
    local_spectral_radius_exact,
    local_spectral_radius_power,
    local_spectrum,
    nilpotency_indices,
    orbit_growth,
    verify_resolvent_representation,
)
from speclab.reports import NOT_APPLICABLE, PASS

seeds = st.integers(0, 2**32 - 1)
NIL = np.array([[0, 1], [0, 0]], dtype=complex)


def pts(loc):
    return sorted(np.round(np.array(loc.points), 9).tolist(), key=lambda z: (z.real, z.imag))


def test_local_spectrum_examples():
    assert pts(local_spectrum(np.diag([1j, 2j]), [1, 0])) == [1j]
    assert pts(local_spectrum(jordan_block(2, 1j), [0, 1])) == [1j]
    loc = local_spectrum(np.diag([1j, 2j]), [0, 0])
    assert loc.points == () and loc.radius == 0
    assert loc.source == "exact-projection"


def test_local_radius_examples():
    assert local_spectral_radius_exact(np.diag([1j, -3j]), [1, 1]) == pytest.approx(3)
    assert local_spectral_radius_exact(np.diag([1j, -3j]), [1, 0]) == pytest.approx(1)
    assert local_spectral_radius_exact(NIL, [0, 1]) == 0


def test_power_estimate_examples():
    est = local_spectral_radius_power(np.diag([2.0]), [1.0])
    assert all(v == pytest.approx(2) for _, v in est.terms)
    assert est.estimate == pytest.approx(2)
    est = local_spectral_radius_power(NIL, [0, 1])
    assert est.terms[0][1] == pytest.approx(1)
    assert all(v == 0 for _, v in est.terms[1:])
    assert est.estimate == 0
    est = local_spectral_radius_power(np.diag([1j, -3j]), [1, 1], n_max=64)
    assert 2.7 <= est.estimate <= 3.0


def test_power_estimate_rescales_large_orbits():
    est = local_spectral_radius_power(np.diag([1e30, 1.0]), [1, 1], n_max=64)
    assert est.rescaled
    assert est.estimate == pytest.approx(1e30, rel=1e-6)


def test_power_estimate_minimum_terms():
    with pytest.raises(ValueError):
        local_spectral_radius_power(np.eye(2), [1, 0], n_max=4)


@given(seeds, st.integers(1, 8))
def test_local_spectrum_inside_spectrum(seed, n):
    rng = np.random.default_rng(seed)
    T = complex_normal(rng, n, n)
    x = complex_normal(rng, n)
    sd = spectral_decomposition(T, 1e-8)
    loc = local_spectrum(T, x, decomposition=sd)
    ev = sd.eigenvalues
    for p in loc.points:
        assert np.min(np.abs(ev - p)) <= 1e-8
    assert loc.radius == pytest.approx(max(abs(p) for p in loc.points))


@given(seeds, st.integers(2, 6))
def test_local_spectrum_shrinks_along_orbit(seed, n):
    rng = np.random.default_rng(seed)
    T, lam = imaginary_semisimple(rng, n)
    sd = spectral_decomposition(T)
    # kill a random subset of components
    x = sum(c.projection @ complex_normal(rng, n) * (rng.random() < 0.6) for c in sd.clusters)
    a = set(local_spectrum(T, x, decomposition=sd).indices)
    b = set(local_spectrum(T, T @ x, decomposition=sd).indices)
    assert b <= a


def test_orbit_growth_examples():
    cert = orbit_growth(np.diag([1j]), [1.0])
    assert cert.polynomial_bidirectional and cert.exact_alpha == 0
    assert abs(cert.fitted_alpha) <= 0.05
    cert = orbit_growth(jordan_block(2, 1j), [0, 1])
    assert cert.exact_alpha == 1
    assert 0.9 <= cert.fitted_alpha <= 1.1
    cert = orbit_growth(np.diag([1.0]), [1.0])
    assert not cert.polynomial_bidirectional
    assert cert.exponential_detected and "1" in cert.reason


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_orbit_growth_fit_tracks_exact(n):
    cert = orbit_growth(jordan_block(n, 0.5j), np.eye(n)[-1], t_max=100, step=0.1)
    assert cert.exact_alpha == n - 1
    assert abs(cert.fitted_alpha - cert.exact_alpha) <= 0.15
    ts = np.array([t for t, _ in cert.sample_grid])
    ns = np.array([v for _, v in cert.sample_grid])
    assert np.all(ns <= cert.bound(ts) * (1 + 1e-12))


def test_nilpotency_indices():
    T = np.zeros((3, 3), dtype=complex)
    T[:2, :2] = jordan_block(2, 1j)
    T[2, 2] = -1j
    idx = nilpotency_indices(T, [0, 1, 1])
    assert {complex(k): v for k, v in idx.items()} == {1j: 2, -1j: 1}


def test_growth_csv():
    cert = orbit_growth(jordan_block(2, 1j), [0, 1], t_max=10, step=0.5)
    rows = list(csv.reader(io.StringIO(cert.to_csv())))
    assert rows[0] == ["t", "norm", "bound"]
    assert len(rows) == 1 + 41
    t, nv, b = map(float, rows[21])
    assert t == 0 and nv == pytest.approx(1) and b >= nv
    exp = orbit_growth(np.diag([1.0]), [1.0], t_max=10, step=0.5).to_csv()
    assert exp.startswith("# exponential")


def test_prop_2_2_examples():
    r = check_prop_2_2(np.diag([1j, -1j]), [1, 1])
    assert r.status == PASS and r.details["max_abs_real_part"] == 0
    assert check_prop_2_2(jordan_block(2, 1j), [0, 1]).status == PASS
    assert check_prop_2_2(np.diag([1.0]), [1.0]).status == NOT_APPLICABLE


def test_prop_2_2_with_hidden_real_part():
    # x avoids the growing eigenvalue, so the hypothesis holds and the conclusion too
    r = check_prop_2_2(np.diag([1j, 2.0]), [1, 0])
    assert r.status == PASS


def test_carleman_examples():
    scan = carleman_scan(np.diag([1j]), [1], [1], np.arange(-2, 2.01, 0.5))
    assert scan.candidates == (1.0,)
    scan = carleman_scan(NIL, [0, 1], [1, 0], np.arange(-1, 1.01, 0.25))
    assert scan.candidates == (0.0,)
    scan = carleman_scan(NIL, [0, 1], [1, 0], [0.3])
    # away from the pole nothing blows up
    assert scan.slopes[0.3] > -0.8
    assert carleman_scan(np.diag([1j, -1j]), [1, 0], [1, 1], np.arange(-2, 2.01, 0.5)).candidates == (1.0,)


def test_carleman_slope_double_pole():
    scan = carleman_scan(NIL, [0, 1], [1, 0], [0.0], offsets=(1e-1, 1e-2, 1e-3), cluster_tol=0.0)
    assert scan.slopes[0.0] == pytest.approx(-2, abs=0.05) or scan.slopes[0.0] == -np.inf


def test_carleman_rejects_bad_offsets():
    with pytest.raises(ValueError):
        carleman_scan(np.eye(1), [1], [1], [0], offsets=(1e-3, 1e-1))
    with pytest.raises(ValueError):
        carleman_scan(np.eye(1), [1], [0], [0])


@pytest.mark.parametrize("seed", range(50))
def test_carleman_agrees_with_projections(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    lam = np.round(rng.choice(np.arange(-3, 3.01, 0.5), n, replace=False), 6)
    V = conditioned_basis(rng, n, 2.0)
    T = V @ np.diag(1j * lam) @ np.linalg.inv(V)
    sd = spectral_decomposition(T)
    keep = rng.random(n) < 0.6
    keep[int(rng.integers(0, n))] = True
    x = V @ (keep * complex_normal(rng, n))
    exact = sorted(np.round(np.array(local_spectrum(T, x, decomposition=sd).points).imag, 6))
    probe = np.linalg.inv(V).conj().T @ np.ones(n)
    scan = carleman_scan(T, x, probe, np.arange(-3.5, 3.51, 0.1))
    assert sorted(np.round(scan.candidates, 6)) == exact


def test_resolvent_representation_examples():
    r = verify_resolvent_representation(np.zeros((2, 2)), [1, 2j], 1.0)
    assert r.residual <= 1e-8
    np.testing.assert_allclose(r.integral, [1, 2j], atol=1e-8)
    r = verify_resolvent_representation(np.diag([1j]), [1], 1.0)
    assert r.residual <= 1e-8
    assert abs(r.integral[0] - 1 / (1 - 1j)) <= 1e-8
    r = verify_resolvent_representation(NIL, [0, 1], 2.0)
    np.testing.assert_allclose(r.integral, [0.25, 0.5], atol=1e-8)
    assert r.residual <= r.budget + 1e-12


def test_resolvent_representation_left_half_plane():
    r = verify_resolvent_representation(jordan_block(2, 1j), [0, 1], -1.0)
    assert r.residual <= 1e-8


def test_resolvent_representation_divergent():
    with pytest.raises(HypothesisError):
        verify_resolvent_representation(np.diag([1.0, -1.0]), [1, 1], 0.5)
