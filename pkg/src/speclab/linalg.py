"""Dense complex linear algebra for small matrices (dim <= 16).

Matrices and vectors are plain complex numpy arrays. Most routines accept a
stack of matrices (shape ``(..., n, n)``) so that orbit samples can be
computed in one vectorised pass.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    ConvergenceError,
    ExpmOverflowError,
    IllConditionedError,
    MalformedInputError,
    NearSingularError,
)

MAX_DIM = 16
DEFAULT_CLUSTER_TOL = 1e-8


class Norm(str, enum.Enum):
    L1 = "L1"
    L2 = "L2"
    LINF = "LInf"

    @classmethod
    def parse(cls, value) -> "Norm":
        if isinstance(value, Norm):
            return value
        key = str(value).strip().lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise ValueError(f"unknown norm family {value!r}; expected one of l1, l2, linf")


def as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise MalformedInputError("vector must be one-dimensional and nonempty")
    if not np.all(np.isfinite(v)):
        raise MalformedInputError("vector has non-finite entries")
    return v


def as_matrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise MalformedInputError(f"matrix must be square and nonempty, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise MalformedInputError("matrix has non-finite entries")
    return A


def vector_norm(x, nf=Norm.L2) -> float | np.ndarray:
    """l1 / l2 / l-infinity norm along the last axis."""
    nf = Norm.parse(nf)
    a = np.abs(np.asarray(x, dtype=complex))
    if nf is Norm.L1:
        out = a.sum(axis=-1)
    elif nf is Norm.L2:
        out = np.sqrt((a * a).sum(axis=-1))
    else:
        out = a.max(axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def operator_norm(M, nf=Norm.L2, tol: float = 1e-12, max_iter: int = 10_000):
    """Induced operator norm of ``M`` (or of each matrix in a stack).

    L1 and LInf are the exact column/row modulus sums. L2 is the largest
    singular value, found by power iteration on the Gram matrix ``M^H M``;
    iteration stops once the Rayleigh quotient changes by less than ``tol``
    relative. Raises ConvergenceError (carrying the last estimate) if
    ``max_iter`` sweeps are not enough.
    """
    nf = Norm.parse(nf)
    A = np.asarray(M, dtype=complex)
    a = np.abs(A)
    if nf is Norm.L1:
        out = a.sum(axis=-2).max(axis=-1)
    elif nf is Norm.LINF:
        out = a.sum(axis=-1).max(axis=-1)
    else:
        out = _spectral_norm(A, tol, max_iter)
    return float(out) if np.ndim(out) == 0 else out


def _spectral_norm(A: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    batch_shape = A.shape[:-2]
    n = A.shape[-1]
    A = A.reshape((-1, n, n))
    # scale rows of the stack so that the Gram matrix cannot overflow
    scale = np.abs(A).max(axis=(-2, -1))
    nonzero = scale > 0
    result = np.zeros(A.shape[0])
    if not np.any(nonzero):
        return result.reshape(batch_shape)
    B = A[nonzero] / scale[nonzero, None, None]
    G = np.conj(np.swapaxes(B, -1, -2)) @ B
    # start from the heaviest column of G^(2^20): repeated squaring separates nearly equal
    # leading singular values, which would otherwise stall the plain iteration
    H = G.copy()
    for _ in range(20):
        H = H @ H
        H /= np.maximum(np.abs(H).max(axis=(-2, -1)), 1e-300)[:, None, None]
    cols = np.linalg.norm(H, axis=-2)
    idx = np.argmax(cols, axis=-1)
    v = H[np.arange(H.shape[0]), :, idx]
    v = v / np.linalg.norm(v, axis=-1, keepdims=True)
    est = np.real(np.einsum("ki,kij,kj->k", np.conj(v), G, v))
    active = np.ones(G.shape[0], dtype=bool)
    for _ in range(max_iter):
        if not np.any(active):
            break
        Ga = G[active]
        w = np.einsum("kij,kj->ki", Ga, v[active])
        wn = np.linalg.norm(w, axis=-1)
        wn = np.where(wn > 0, wn, 1.0)
        va = w / wn[:, None]
        new = np.real(np.einsum("ki,kij,kj->k", np.conj(va), Ga, va))
        old = est[active]
        done = np.abs(new - old) <= tol * np.abs(new)
        v[active] = va
        est[active] = new
        idx_active = np.flatnonzero(active)
        active[idx_active[done]] = False
    if np.any(active):
        last = np.sqrt(np.maximum(est, 0.0)) * scale[nonzero]
        raise ConvergenceError(
            f"L2 operator norm power iteration did not converge in {max_iter} sweeps",
            last_iterate=last,
        )
    result[nonzero] = np.sqrt(np.maximum(est, 0.0)) * scale[nonzero]
    return result.reshape(batch_shape)


def expm(M, tol: float = 1e-15, max_terms: int = 60) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a Taylor kernel.

    Each matrix is scaled by 2^-s so that its 1-norm is at most 0.5, the
    Taylor series is summed until the next term is below ``tol`` times the
    partial sum, and the result is squared s times. Works on stacks.
    """
    A = np.asarray(M, dtype=complex)
    single = A.ndim == 2
    if single:
        A = A[None]
    n = A.shape[-1]
    batch_shape = A.shape[:-2]
    A = A.reshape((-1, n, n))
    norms = np.abs(A).sum(axis=-2).max(axis=-1)
    if not np.all(np.isfinite(norms)):
        raise ExpmOverflowError("expm input contains non-finite entries", norm=float(np.max(norms)))
    with np.errstate(divide="ignore"):
        s = np.where(norms > 0.5, np.ceil(np.log2(np.maximum(norms, 1e-300) / 0.5)), 0).astype(int)
    X = A / np.ldexp(1.0, s)[:, None, None]
    eye = np.eye(n, dtype=complex)
    total = np.broadcast_to(eye, X.shape).copy()
    term = total.copy()
    for k in range(1, max_terms + 1):
        term = term @ X / k
        total += term
        tn = np.abs(term).sum(axis=-2).max(axis=-1)
        sn = np.abs(total).sum(axis=-2).max(axis=-1)
        if np.all(tn <= tol * sn):
            break
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(1, int(s.max(initial=0)) + 1):
            sel = s >= j
            total[sel] = total[sel] @ total[sel]
    if not np.all(np.isfinite(total)):
        bad = float(norms[~np.all(np.isfinite(total), axis=(-2, -1))].max())
        raise ExpmOverflowError(f"expm overflowed for input with 1-norm {bad:.3e}", norm=bad)
    total = total.reshape(batch_shape + (n, n))
    return total[0] if single else total


def resolvent_apply(M, z: complex, x, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> np.ndarray:
    """Solve (zI - M) u = x by LU with partial pivoting."""
    A = as_matrix(M)
    v = as_vector(x)
    ev = np.linalg.eigvals(A)
    dist = float(np.min(np.abs(ev - z)))
    if dist <= cluster_tol:
        raise NearSingularError(
            f"z={z} lies within {dist:.3e} of an eigenvalue (cluster_tol={cluster_tol:g})", distance=dist
        )
    S = z * np.eye(A.shape[0]) - A
    try:
        u = np.linalg.solve(S, v)
    except np.linalg.LinAlgError as exc:
        raise NearSingularError(f"singular system; nearest eigenvalue at distance {dist:.3e}", distance=dist) from exc
    res = vector_norm(S @ u - v)
    scale = abs(z) + operator_norm(A, Norm.L1)
    if res > 1e-10 * scale * max(vector_norm(u), 1e-300):
        raise NearSingularError(
            f"resolvent residual {res:.3e} too large; nearest eigenvalue at distance {dist:.3e}", distance=dist
        )
    return u


@dataclass(frozen=True)
class Cluster:
    eigenvalue: complex
    multiplicity: int
    projection: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalue clusters of ``matrix`` with their spectral projections."""

    matrix: np.ndarray = field(repr=False)
    clusters: tuple[Cluster, ...]
    cluster_tol: float

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([c.eigenvalue for c in self.clusters])

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def nilpotent_part(self, j: int) -> np.ndarray:
        c = self.clusters[j]
        return (self.matrix - c.eigenvalue * np.eye(self.dim)) @ c.projection

    def index_of(self, lam: complex, tol: float | None = None) -> int:
        tol = 10 * self.cluster_tol if tol is None else tol
        d = np.abs(self.eigenvalues - lam)
        j = int(np.argmin(d))
        if d[j] > tol:
            raise KeyError(f"{lam} is not an eigenvalue cluster")
        return j

    def apply(self, func_derivs: Callable[[complex, int], Sequence[complex]]) -> np.ndarray:
        """Holomorphic functional calculus g(M) from the Jordan data.

        ``func_derivs(lam, m)`` must return g(lam), g'(lam), ..., g^(m-1)(lam).
        """
        n = self.dim
        out = np.zeros((n, n), dtype=complex)
        for j, c in enumerate(self.clusters):
            N = self.nilpotent_part(j)
            derivs = func_derivs(c.eigenvalue, c.multiplicity)
            power = c.projection.copy()
            for k in range(c.multiplicity):
                out += derivs[k] / math.factorial(k) * power
                power = N @ power
        return out

    def invariant_defects(self) -> dict:
        n = self.dim
        P = [c.projection for c in self.clusters]
        idem = max(operator_norm(p @ p - p, Norm.L2) for p in P)
        cross = 0.0
        for i in range(len(P)):
            for j in range(len(P)):
                if i != j:
                    cross = max(cross, operator_norm(P[i] @ P[j], Norm.L2))
        total = operator_norm(sum(P) - np.eye(n), Norm.L2)
        mult = sum(c.multiplicity for c in self.clusters)
        return {"idempotent": idem, "annihilating": cross, "resolution": total, "multiplicity_sum": mult}


def _cluster(values: np.ndarray, tol: float) -> list[list[int]]:
    """Single-linkage clustering of points in the plane."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: (values[g[0]].real, values[g[0]].imag))


def _taylor_inverse_product(lam: complex, others: list[tuple[complex, int]], order: int) -> np.ndarray:
    """Taylor coefficients at ``lam`` of prod_i (z - mu_i)^(-m_i), up to ``order - 1``."""
    coeffs = np.zeros(order, dtype=complex)
    coeffs[0] = 1.0
    for mu, m in others:
        d = lam - mu
        # (d + w)^(-m) = d^(-m) sum_k binom(-m, k) (w/d)^k
        factor = np.array([math.comb(m + k - 1, k) * (-1) ** k / d ** (m + k) for k in range(order)])
        coeffs = np.convolve(coeffs, factor)[:order]
    return coeffs


def spectral_decomposition(M, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> SpectralDecomposition:
    """Cluster the eigenvalues of M and build the spectral projections.

    The projection of cluster j is p_j(M), where p_j is the Hermite
    interpolation polynomial equal to 1 (derivatives 0) on cluster j and 0 on
    all other clusters, to the order of each algebraic multiplicity.
    """
    A = as_matrix(M)
    n = A.shape[0]
    if n > MAX_DIM:
        raise MalformedInputError(f"dimension {n} exceeds the desk-scale cap {MAX_DIM}")
    try:
        ev = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError("eigenvalue iteration did not converge") from exc
    groups = _cluster(ev, cluster_tol)
    centers = []
    for g in groups:
        vals = ev[g]
        centers.append(vals[0] if np.all(vals == vals[0]) else complex(np.mean(vals)))
    mults = [len(g) for g in groups]
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            if abs(centers[i] - centers[j]) <= 10 * cluster_tol:
                raise IllConditionedError(
                    f"eigenvalue clusters {centers[i]:.6g} and {centers[j]:.6g} are closer than "
                    f"10*cluster_tol; use a larger cluster_tol"
                )
    eye = np.eye(n, dtype=complex)
    clusters = []
    if len(centers) == 1:
        clusters.append(Cluster(complex(centers[0]), n, eye.copy()))
    else:
        for j, (lam, m) in enumerate(zip(centers, mults)):
            others = [(mu, k) for i, (mu, k) in enumerate(zip(centers, mults)) if i != j]
            left = eye.copy()
            for mu, k in others:
                left = left @ np.linalg.matrix_power(A - mu * eye, k)
            h = _taylor_inverse_product(lam, others, m)
            N = A - lam * eye
            right = np.zeros_like(eye)
            power = eye.copy()
            for k in range(m):
                right += h[k] * power
                power = power @ N
            clusters.append(Cluster(complex(lam), m, left @ right))
    return SpectralDecomposition(A, tuple(clusters), cluster_tol)
