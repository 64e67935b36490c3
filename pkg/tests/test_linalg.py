import numpy as np
import pytest
from hypothesis import given, strategies as st

from speclab.errors import ConvergenceError, ExpmOverflowError, IllConditionedError, MalformedInputError, NearSingularError
from speclab.instances import complex_normal, conditioned_basis, separated_points
from speclab.linalg import (
    Norm,
    expm,
    operator_norm,
    resolvent_apply,
    spectral_decomposition,
    vector_norm,
)

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 8)
norms = st.sampled_from(list(Norm))


def test_vector_norm_examples():
    for nf in Norm:
        assert vector_norm([0, 0], nf) == 0
    assert vector_norm([3, 4], Norm.L2) == pytest.approx(5)
    assert vector_norm([1, -2j], Norm.L1) == pytest.approx(3)
    assert vector_norm([1, -2j], "linf") == pytest.approx(2)


def test_norm_parse():
    assert Norm.parse("L2") is Norm.L2
    assert Norm.parse("linf") is Norm.LINF
    with pytest.raises(ValueError):
        Norm.parse("l3")


def test_operator_norm_examples():
    for nf in Norm:
        for n in (1, 3, 7):
            assert operator_norm(np.eye(n), nf) == pytest.approx(1, abs=1e-14)
    assert operator_norm([[1, 0], [2, 0]], Norm.L2) == pytest.approx(np.sqrt(5), rel=1e-12)
    assert operator_norm([[0, 1], [0, 0]], Norm.LINF) == 1
    assert operator_norm([[0, 1], [0, 0]], Norm.L1) == 1


def test_operator_norm_l2_against_svd(rng):
    for _ in range(30):
        n = int(rng.integers(1, 10))
        M = complex_normal(rng, n, n)
        assert operator_norm(M) == pytest.approx(np.linalg.svd(M, compute_uv=False)[0], rel=1e-10)


def test_operator_norm_close_singular_values(rng):
    U = conditioned_basis(rng, 6, 1.0)
    M = U @ np.diag([1.0, 1.0 - 1e-9, 0.5, 0.2, 0.1, 0.0]) @ U.conj().T
    assert operator_norm(M) == pytest.approx(1.0, rel=1e-9)


def test_operator_norm_stack(rng):
    Ms = complex_normal(rng, 5, 4, 4)
    got = operator_norm(Ms, Norm.L2)
    assert got.shape == (5,)
    np.testing.assert_allclose(got, [np.linalg.norm(M, 2) for M in Ms], rtol=1e-10)


def test_operator_norm_iteration_cap_carries_iterate(rng):
    M = complex_normal(rng, 6, 6)
    M = M @ np.diag([1, 0.999999, 1, 1, 1, 1])
    with pytest.raises(ConvergenceError) as info:
        operator_norm(M, Norm.L2, tol=0.0, max_iter=1)
    assert info.value.last_iterate is not None


@given(seeds, dims, norms)
def test_operator_norm_bounds_action(seed, n, nf):
    rng = np.random.default_rng(seed)
    M = complex_normal(rng, n, n)
    bound = operator_norm(M, nf)
    xs = complex_normal(rng, 100, n)
    lhs = vector_norm(xs @ M.T, nf)
    assert np.all(lhs <= bound * vector_norm(xs, nf) * (1 + 1e-9))


@given(seeds, dims, norms)
def test_operator_norm_submultiplicative(seed, n, nf):
    rng = np.random.default_rng(seed)
    A, B = complex_normal(rng, n, n), complex_normal(rng, n, n)
    assert operator_norm(A @ B, nf) <= operator_norm(A, nf) * operator_norm(B, nf) * (1 + 1e-9)


def test_expm_examples():
    np.testing.assert_allclose(expm(np.zeros((3, 3))), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(expm([[0, 1], [0, 0]]), [[1, 1], [0, 1]], atol=1e-15)
    np.testing.assert_allclose(expm(np.diag([1j * np.pi, 0])), np.diag([-1, 1]), atol=1e-14)


def test_expm_against_eigendecomposition(rng):
    for _ in range(20):
        n = int(rng.integers(1, 9))
        V = conditioned_basis(rng, n, 3.0)
        lam = 3 * complex_normal(rng, n)
        M = V @ np.diag(lam) @ np.linalg.inv(V)
        ref = V @ np.diag(np.exp(lam)) @ np.linalg.inv(V)
        assert np.linalg.norm(expm(M) - ref, 2) <= 1e-8 * np.linalg.norm(ref, 2)


def test_expm_overflow_names_norm():
    with pytest.raises(ExpmOverflowError) as info:
        expm(np.diag([1e6, 0.0]))
    assert info.value.norm >= 1e6


@given(seeds, dims)
def test_expm_commuting_sum(seed, n):
    rng = np.random.default_rng(seed)
    G = complex_normal(rng, n, n) / np.sqrt(n)
    p, q = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
    M1 = sum(c * np.linalg.matrix_power(G, k) for k, c in enumerate(p))
    M2 = sum(c * np.linalg.matrix_power(G, k) for k, c in enumerate(q))
    lhs = expm(M1 + M2)
    rhs = expm(M1) @ expm(M2)
    assert np.linalg.norm(lhs - rhs, 2) <= 1e-8 * np.linalg.norm(rhs, 2)


@given(seeds, st.integers(1, 6))
def test_expm_matches_functional_calculus(seed, n):
    rng = np.random.default_rng(seed)
    lam = separated_points(rng, n, 0.5, -3, 3) + 1j * rng.uniform(-2, 2, n)
    V = conditioned_basis(rng, n, 2.0)
    M = V @ np.diag(lam) @ np.linalg.inv(V)
    sd = spectral_decomposition(M)
    via = sd.apply(lambda z, m: [np.exp(z)] * m)
    oracle = V @ np.diag(np.exp(lam)) @ np.linalg.inv(V)
    assert np.linalg.norm(expm(M) - oracle, 2) <= 1e-8 * np.linalg.norm(oracle, 2)
    assert np.linalg.norm(via - oracle, 2) <= 1e-8 * np.linalg.norm(oracle, 2)


def test_expm_jordan_block_functional_calculus():
    J = np.array([[2, 1, 0], [0, 2, 1], [0, 0, 2]], dtype=complex)
    sd = spectral_decomposition(J)
    got = sd.apply(lambda z, m: [np.exp(z)] * m)
    np.testing.assert_allclose(got, expm(J), rtol=1e-12)


def test_resolvent_examples():
    x = np.array([1.0, 2.0 - 1j])
    np.testing.assert_allclose(resolvent_apply(np.zeros((2, 2)), 1, x), x)
    np.testing.assert_allclose(resolvent_apply(np.diag([1j, -1j]), 2, [1, 1]), [1 / (2 - 1j), 1 / (2 + 1j)])
    np.testing.assert_allclose(resolvent_apply([[0, 1], [0, 0]], 1, [0, 1]), [1, 1])


def test_resolvent_near_eigenvalue_reports_distance():
    with pytest.raises(NearSingularError) as info:
        resolvent_apply(np.diag([1.0, 2.0]), 1 + 1e-12, [1, 1])
    assert info.value.distance == pytest.approx(1e-12, rel=1e-3)


@given(seeds, dims)
def test_first_resolvent_identity(seed, n):
    rng = np.random.default_rng(seed)
    M = complex_normal(rng, n, n)
    r = np.abs(np.linalg.eigvals(M)).max()
    z, w = (r + 1) * np.exp(1j * rng.uniform(0, 6.28, 2)) * rng.uniform(1, 2, 2)
    x = complex_normal(rng, n)
    lhs = resolvent_apply(M, z, x) - resolvent_apply(M, w, x)
    rhs = (w - z) * resolvent_apply(M, z, resolvent_apply(M, w, x))
    assert vector_norm(lhs - rhs) <= 1e-8 * max(vector_norm(lhs), vector_norm(rhs), 1e-12)


def test_spectral_decomposition_examples():
    sd = spectral_decomposition(np.diag([1.0, 2.0]))
    by = {round(c.eigenvalue.real): c for c in sd.clusters}
    assert by[1].multiplicity == 1 and by[2].multiplicity == 1
    np.testing.assert_allclose(by[1].projection, np.diag([1, 0]), atol=1e-14)
    np.testing.assert_allclose(by[2].projection, np.diag([0, 1]), atol=1e-14)

    sd = spectral_decomposition([[0, 1], [0, 0]])
    assert len(sd.clusters) == 1
    c = sd.clusters[0]
    assert c.eigenvalue == 0 and c.multiplicity == 2
    np.testing.assert_allclose(c.projection, np.eye(2))

    sd = spectral_decomposition([[0, 0], [1, 0]])
    np.testing.assert_allclose(sd.eigenvalues, [0])


def test_spectral_decomposition_merges_and_guards():
    sd = spectral_decomposition(np.diag([1.0, 1.0 + 1e-10, 3.0]))
    assert sorted(c.multiplicity for c in sd.clusters) == [1, 2]
    with pytest.raises(IllConditionedError):
        spectral_decomposition(np.diag([1.0, 1.0 + 5e-8]))


def test_spectral_decomposition_dimension_cap():
    with pytest.raises(MalformedInputError):
        spectral_decomposition(np.eye(17))


@given(seeds, st.integers(1, 10))
def test_projection_invariants(seed, n):
    rng = np.random.default_rng(seed)
    lam = separated_points(rng, n, 0.4, -3, 3) + 1j * rng.uniform(-1, 1, n)
    V = conditioned_basis(rng, n, 2.0)
    M = V @ np.diag(lam) @ np.linalg.inv(V)
    sd = spectral_decomposition(M)
    d = sd.invariant_defects()
    tol = 10 * 1e-8
    assert d["idempotent"] <= tol
    assert d["annihilating"] <= tol
    assert d["resolution"] <= tol
    assert d["multiplicity_sum"] == n


@given(seeds)
def test_projection_invariants_with_jordan_blocks(seed):
    rng = np.random.default_rng(seed)
    J = np.zeros((5, 5), dtype=complex)
    J[:3, :3] = np.diag([1.0] * 3) + np.diag([1.0, 1.0], 1)
    J[3:, 3:] = np.diag([-1.0j] * 2) + np.diag([1.0], 1)
    V = conditioned_basis(rng, 5, 2.0)
    sd = spectral_decomposition(V @ J @ np.linalg.inv(V), 1e-3)
    assert sorted(c.multiplicity for c in sd.clusters) == [2, 3]
    d = sd.invariant_defects()
    assert max(d["idempotent"], d["annihilating"], d["resolution"]) <= 1e-8
