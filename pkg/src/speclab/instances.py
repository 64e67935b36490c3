"""Random test instances for the verification suites."""

from __future__ import annotations

import numpy as np
from scipy.linalg import block_diag, null_space

from .beurling import GaussianPoly, gaussian
from .derivation import superoperator, unvec, vec

JORDAN_EIGS = (0.0, 1.0, -1.0, 2.5)


def complex_normal(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng, n):
    Q, R = np.linalg.qr(complex_normal(rng, n, n))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def conditioned_basis(rng, n, spread: float = 3.0):
    """Random invertible matrix with singular values in [1, spread]."""
    return random_unitary(rng, n) @ np.diag(rng.uniform(1.0, spread, n)) @ random_unitary(rng, n)


def separated_points(rng, k, sep: float, lo: float, hi: float):
    """k distinct reals in [lo, hi] with pairwise gaps >= sep."""
    slack = (hi - lo) - sep * (k - 1)
    if slack < 0:
        raise ValueError("interval too short for the requested separation")
    u = np.sort(rng.uniform(0.0, slack, k))
    return lo + u + sep * np.arange(k)


def jordan_block(n, lam):
    return lam * np.eye(n, dtype=complex) + np.diag(np.ones(n - 1), 1)


def triangular_single_point(rng, n, lam):
    """D (lam I + U) D^-1 with U strictly upper triangular inside random diagonal blocks.

    Triangular inputs keep the computed eigenvalues exact, so no defective splitting occurs.
    """
    blocks = random_partition(rng, n, n)
    mask = np.zeros((n, n))
    start = 0
    for b in blocks:
        mask[start:start + b, start:start + b] = 1.0
        start += b
    U = np.triu(complex_normal(rng, n, n), 1) * mask
    D = rng.uniform(0.5, 2.0, n)
    return (lam * np.eye(n) + U) * D[:, None] / D[None, :]


def jordan_family():
    """Single Jordan blocks of size 1..5 at i*lam."""
    return [(n, lam) for n in range(1, 6) for lam in JORDAN_EIGS]


def gaussian_test_functions() -> list[GaussianPoly]:
    return [
        gaussian(1.0),
        gaussian(0.7, 1),
        gaussian(1.3, 2),
        gaussian(1.0, 0, 0.5),
        gaussian(0.8, 3, -0.3),
        gaussian(1.0) + gaussian(0.6, 2, 0.0, 0.5j),
    ]


def imaginary_semisimple(rng, dim, sep: float = 0.3, radius: float = 3.0, spread: float = 3.0):
    """T = V diag(i lam) V^-1 with separated real lam in [-radius, radius]."""
    lam = separated_points(rng, dim, sep, -radius, radius)
    V = conditioned_basis(rng, dim, spread)
    return V @ np.diag(1j * lam) @ np.linalg.inv(V), lam


def real_semisimple(rng, dim, sep: float = 0.3, radius: float = 3.0, spread: float = 3.0):
    lam = separated_points(rng, dim, sep, -radius, radius)
    V = conditioned_basis(rng, dim, spread)
    return V @ np.diag(lam) @ np.linalg.inv(V), lam


def random_partition(rng, n, max_block):
    parts = []
    while n > 0:
        b = int(rng.integers(1, min(max_block, n) + 1))
        parts.append(b)
        n -= b
    return parts


def jordan_form(eigs, blocks):
    return block_diag(*[jordan_block(b, lam) for lam, b in zip(eigs, blocks)]).astype(complex)


def real_spectrum_structure(rng, dim, max_block: int = 3, sep: float = 0.015, spread: float = 0.1,
                            single_point: bool = False):
    """(A, J, V) with A = V J V^-1, J a real Jordan matrix.

    Rounding leaves components of size ~1e-16 on every eigenvalue difference, which the
    conjugation orbit amplifies by e^{|t| spread}; a small spread keeps them invisible on |t| <= 200.
    """
    blocks = random_partition(rng, dim, max_block)
    if single_point:
        eigs = [float(rng.uniform(-2, 2))] * len(blocks)
    else:
        # reuse eigenvalues across blocks now and then
        pool = separated_points(rng, len(blocks), sep, -spread / 2, spread / 2)
        eigs = [pool[int(rng.integers(0, len(pool)))] if rng.random() < 0.3 else p for p in pool]
    J = jordan_form(eigs, blocks)
    V = conditioned_basis(rng, dim, 2.0)
    return V @ J @ np.linalg.inv(V), J, V


def kernel_element(rng, J, n):
    """Random S with Delta_J^n(S) = 0 for a Jordan matrix J (zero matrix when the kernel is trivial).

    Entries pairing different eigenvalues are never in the kernel; on equal-eigenvalue pairs
    Delta_J acts as Delta_N with N the integer nilpotent part, whose null space is exact.
    """
    d = J.shape[0]
    if n == 0:
        return np.zeros_like(J)
    lam = np.diag(J)
    N = np.real(J - np.diag(lam))
    keep = vec(np.equal.outer(lam, lam))
    L = np.linalg.matrix_power(superoperator(N), n)[np.ix_(keep, keep)]
    K = null_space(L, rcond=1e-8)
    if K.shape[1] == 0:
        return np.zeros_like(J)
    s = np.zeros(d * d, dtype=complex)
    s[keep] = K @ complex_normal(rng, K.shape[1])
    S = unvec(s, d)
    return S / np.abs(S).max()


def kernel_index(J, S, n_max=12):
    """Smallest n >= 0 with Delta_J^n(S) = 0, or None."""
    D = S.copy()
    ref = max(np.abs(S).max(), 1e-300)
    for n in range(n_max + 1):
        if np.abs(D).max() <= 1e-12 * ref:
            return n
        D = J @ D - D @ J
    return None


def commuting_polynomials(rng, dim):
    """(M, p(M), q(M)) for a random real-spectrum semisimple M and real polynomials p, q."""
    M, lam = real_semisimple(rng, dim, sep=0.3, radius=2.0)
    p = rng.uniform(-1.0, 1.0, 3)
    q = rng.uniform(-1.0, 1.0, 3)
    P = sum(c * np.linalg.matrix_power(M, k) for k, c in enumerate(p))
    Q = sum(c * np.linalg.matrix_power(M, k) for k, c in enumerate(q))
    return M, P, Q


def off_cut_spectrum(rng, k, r_lo: float = 0.85, r_hi: float = 1.15):
    """k eigenvalues away from (-inf, 0], some sharing a modulus.

    Moduli stay close so that rounding amplified by (r_hi / r_lo)^|n| stays negligible.
    """
    out = []
    while len(out) < k:
        r = rng.uniform(r_lo, r_hi)
        th = rng.uniform(-2.5, 2.5)
        out.append(r * np.exp(1j * th))
        if len(out) < k and rng.random() < 0.5:
            th2 = th + rng.choice([-1, 1]) * rng.uniform(0.4, 0.8)
            th2 = float(np.clip(th2, -2.9, 2.9))
            out.append(r * np.exp(1j * th2))
    return np.array(out)
