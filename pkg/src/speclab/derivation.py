"""Inner derivations T -> AT - TA, conjugation orbits and invariant local spectral subspaces."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    AmbiguityError,
    DomainError,
    ExpmOverflowError,
    HypothesisError,
    InternalConsistencyError,
)
from .linalg import (
    DEFAULT_CLUSTER_TOL,
    Norm,
    SpectralDecomposition,
    as_matrix,
    expm,
    operator_norm,
    spectral_decomposition,
)
from .local import fit_growth, symmetric_grid
from .reports import Hypothesis, TheoremReport

KERNEL_TOL = 1e-10
INVARIANCE_TOL = 1e-9
ALPHA_MARGIN = 0.15


@dataclass
class DerivationContext:
    A: np.ndarray
    norm: Norm = Norm.L2
    cluster_tol: float = DEFAULT_CLUSTER_TOL
    _sd: SpectralDecomposition | None = field(default=None, repr=False)

    def __post_init__(self):
        self.A = as_matrix(self.A)
        self.norm = Norm.parse(self.norm)

    @property
    def decomposition(self) -> SpectralDecomposition:
        if self._sd is None:
            self._sd = spectral_decomposition(self.A, self.cluster_tol)
        return self._sd

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def delta(self, T) -> np.ndarray:
        return self.A @ T - T @ self.A


def _binomial_power(A, T, n):
    out = np.zeros_like(T)
    for k in range(n + 1):
        out += (-1) ** k * math.comb(n, k) * np.linalg.matrix_power(A, n - k) @ T @ np.linalg.matrix_power(A, k)
    return out


def derivation_power(ctx: DerivationContext, T, n: int) -> np.ndarray:
    """Delta_A^n(T), computed recursively and checked against the binomial expansion."""
    if n < 0:
        raise ValueError("n must be >= 0")
    T = as_matrix(T)
    D = T.copy()
    for _ in range(n):
        D = ctx.delta(D)
    B = _binomial_power(ctx.A, T, n)
    scale = (2.0 * max(operator_norm(ctx.A, Norm.L1), 1e-300)) ** n * operator_norm(T, Norm.L1)
    gap = float(operator_norm(D - B, Norm.L1))
    if gap > KERNEL_TOL * max(scale, 1e-300):
        raise InternalConsistencyError(f"recursive and binomial derivation powers differ by {gap:.3e}")
    return D


def superoperator(A) -> np.ndarray:
    """Delta_A as a dim^2 x dim^2 matrix acting on column-major vec(T)."""
    A = as_matrix(A)
    n = A.shape[0]
    eye = np.eye(n)
    return np.kron(eye, A) - np.kron(A.T, eye)


def vec(T):
    return np.asarray(T).reshape(-1, order="F")


def unvec(v, n):
    return np.asarray(v).reshape((n, n), order="F")


@dataclass
class ConjugationOrbit:
    ts: np.ndarray
    norms: np.ndarray
    fitted_alpha: float
    fitted_C: float
    exponential: bool
    crosscheck_defect: float
    reason: str = ""

    def to_csv(self) -> str:
        lines = []
        if self.exponential:
            lines.append(f"# exponential,{self.reason}")
        lines.append("t,norm,bound")
        for t, v in zip(self.ts, self.norms):
            b = self.fitted_C * (1.0 + abs(t)) ** self.fitted_alpha
            lines.append(f"{float(t)!r},{float(v)!r},{float(b)!r}")
        return "\n".join(lines) + "\n"


def conjugation_orbit(ctx: DerivationContext, T, t_grid, crosscheck_points: int = 5) -> ConjugationOrbit:
    """Samples of ||e^{tA} T e^{-tA}|| with a superoperator cross-check."""
    T = as_matrix(T)
    ts = np.asarray(t_grid, dtype=float)
    if not np.allclose(np.sort(ts), np.sort(-ts)):
        raise ValueError("t_grid must be symmetric about 0")
    n = ctx.dim
    reason = ""
    re = ctx.decomposition.eigenvalues.real
    spread = float(re.max() - re.min())
    if spread > ctx.cluster_tol and np.abs(ts).max() * spread > 300.0:
        # exponential conjugation orbit: keep e^{t spread} well inside the floating-point range
        ts = ts[np.abs(ts) <= 300.0 / spread]
        reason = "grid clipped to |t| <= {:.4g} for an exponential orbit".format(300.0 / spread)
    try:
        E = expm(ts[:, None, None] * ctx.A[None])
        Einv = expm(-ts[:, None, None] * ctx.A[None])
        C = E @ T @ Einv
        finite = np.all(np.isfinite(C), axis=(-2, -1))
    except ExpmOverflowError as exc:
        raise HypothesisError(f"conjugation orbit overflowed: {exc}") from exc
    norms = np.full(len(ts), np.inf)
    if np.any(finite):
        norms[finite] = operator_norm(C[finite], ctx.norm)
    # e^{tA} T e^{-tA} = e^{t Delta_A}(T) at a few points
    L = superoperator(ctx.A)
    # beyond |t| ~ 10 the dim^2 exponential itself loses digits, so check inside that window
    near = np.flatnonzero(np.abs(ts) <= min(10.0, np.abs(ts).max()))
    idx = near[np.unique(np.linspace(0, len(near) - 1, crosscheck_points).round().astype(int))]
    cross = 0.0
    for i in idx:
        if not finite[i]:
            continue
        via = unvec(expm(ts[i] * L) @ vec(T), n)
        # rounding in the triple product scales with the factors, not with the result
        ref = max(float(operator_norm(E[i], Norm.L1) * operator_norm(T, Norm.L1) * operator_norm(Einv[i], Norm.L1)),
                  1e-300)
        cross = max(cross, float(operator_norm(via - C[i], Norm.L1) / ref))
    if cross > 1e-8:
        raise InternalConsistencyError(f"superoperator cross-check failed: relative gap {cross:.3e}")
    if not np.all(finite):
        reason = "orbit left the floating-point range"
        return ConjugationOrbit(ts, norms, math.inf, math.inf, True, cross, reason)
    if np.all(norms == 0):
        return ConjugationOrbit(ts, norms, 0.0, 0.0, False, cross, "")
    a_hat, c_hat, per_decade = fit_growth(ts, norms)
    # a polynomial conjugation orbit has degree at most 2(dim - 1)
    exponential = per_decade > 1.0 or a_hat > 2 * (n - 1) + 0.5
    if exponential:
        reason = "; ".join(filter(None, [reason, f"fit residual {per_decade:.3g} per decade, fitted exponent {a_hat:.3g}"]))
    return ConjugationOrbit(ts, norms, a_hat, c_hat, exponential, cross, reason)


def _kernel_member(ctx, T, alpha):
    k = int(math.floor(alpha)) + 1
    D = derivation_power(ctx, T, k)
    size = float(operator_norm(D, ctx.norm))
    ref = float(operator_norm(T, ctx.norm))
    return size <= KERNEL_TOL * max(ref, 1e-300), size, k


def spectrum_route(ctx: DerivationContext) -> str | None:
    ev = ctx.decomposition.eigenvalues
    if np.all(np.abs(ev.imag) <= ctx.cluster_tol):
        return "real-spectrum"
    if len(ev) == 1:
        return "one-point"
    return None


def deddens_membership(
    ctx: DerivationContext, T, alpha: float, t_max: float = 200.0, step: float = 0.1
) -> TheoremReport:
    """Empirical growth membership versus the kernel test Delta^{floor(alpha)+1}(T) = 0."""
    T = as_matrix(T)
    route = spectrum_route(ctx)
    if route is None:
        raise HypothesisError("spectrum of A is neither real nor a single point")
    work = ctx
    if route == "one-point":
        # B = A - lambda I has the same derivation and the same conjugation orbit
        lam = ctx.decomposition.eigenvalues[0]
        work = DerivationContext(ctx.A - lam * np.eye(ctx.dim), ctx.norm, ctx.cluster_tol)
    orb = conjugation_orbit(work, T, symmetric_grid(t_max, step))
    empirical = (not orb.exponential) and orb.fitted_alpha <= alpha + ALPHA_MARGIN
    exact, size, k = _kernel_member(work, T, alpha)
    return TheoremReport(
        "thm3.1" if route == "real-spectrum" else "cor3.2",
        [Hypothesis(f"spectrum of A: {route}", True, list(ctx.decomposition.eigenvalues))],
        conclusion_defect=0.0 if empirical == exact else 1.0,
        tolerance=0.0,
        tolerances={"alpha_margin": ALPHA_MARGIN, "kernel_tol": KERNEL_TOL, "t_max": t_max, "step": step},
        details={
            "alpha": alpha,
            "route": route,
            "empirical_member": empirical,
            "exact_member": exact,
            "fitted_alpha": orb.fitted_alpha,
            "exponential": orb.exponential,
            "kernel_power": k,
            "kernel_norm": size,
            "commutes": bool(operator_norm(ctx.delta(T), Norm.L1) <= KERNEL_TOL * max(operator_norm(T, Norm.L1), 1e-300)),
        },
    )


@dataclass(frozen=True)
class SubspaceBasis:
    basis: np.ndarray  # orthonormal columns
    discs: tuple[tuple[complex, float], ...]
    clusters: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def _clusters_in(ctx: DerivationContext, discs) -> tuple[int, ...]:
    inside = []
    for j, lam in enumerate(ctx.decomposition.eigenvalues):
        hit = False
        for c, r in discs:
            d = abs(lam - complex(c))
            if abs(d - r) <= ctx.cluster_tol:
                raise AmbiguityError(f"eigenvalue {lam:.6g} lies on the boundary of disc ({c}, {r})")
            hit = hit or d < r
        if hit:
            inside.append(j)
    return tuple(inside)


def projection_onto(ctx: DerivationContext, clusters: Sequence[int]) -> np.ndarray:
    P = np.zeros((ctx.dim, ctx.dim), dtype=complex)
    for j in clusters:
        P += ctx.decomposition.clusters[j].projection
    return P


def local_spectral_subspace(ctx: DerivationContext, discs) -> SubspaceBasis:
    """X_A(F) for F a finite union of closed discs (center, radius)."""
    discs = tuple((complex(c), float(r)) for c, r in discs)
    idx = _clusters_in(ctx, discs)
    P = projection_onto(ctx, idx)
    if not idx:
        return SubspaceBasis(np.zeros((ctx.dim, 0), dtype=complex), discs, idx)
    U, s, _ = np.linalg.svd(P)
    rank = sum(ctx.decomposition.clusters[j].multiplicity for j in idx)
    Q = U[:, :rank]
    gram = np.linalg.svd(Q.conj().T @ Q, compute_uv=False)
    if gram.min() < 1e-10:
        raise InternalConsistencyError("subspace basis is numerically dependent")
    return SubspaceBasis(Q, discs, idx)


def _disc_for(ctx, subset):
    ev = ctx.decomposition.eigenvalues
    if len(ev) < 2:
        rad = 1.0
    else:
        rad = 0.25 * min(abs(a - b) for a, b in itertools.combinations(ev, 2))
    return [(ev[j], rad) for j in subset]


def invariance_defects(ctx: DerivationContext, T) -> dict:
    """max ||(I - P_F) T P_F|| / ||T|| for every subset F of eigenvalue clusters."""
    T = as_matrix(T)
    m = len(ctx.decomposition.clusters)
    ref = max(float(operator_norm(T, Norm.L2)), 1e-300)
    eye = np.eye(ctx.dim)
    out = {}
    for r in range(1, m):
        for subset in itertools.combinations(range(m), r):
            sub = local_spectral_subspace(ctx, _disc_for(ctx, subset))
            P = projection_onto(ctx, sub.clusters)
            out[subset] = float(operator_norm((eye - P) @ T @ P, Norm.L2) / ref)
    return out


def check_prop_3_5(ctx: DerivationContext, T, alpha: float, t_max: float = 200.0, step: float = 0.1) -> TheoremReport:
    """T leaves every X_A(F) invariant iff Delta_A^{floor(alpha)+1}(T) = 0."""
    T = as_matrix(T)
    orb = conjugation_orbit(ctx, T, symmetric_grid(t_max, step))
    growth = (not orb.exponential) and orb.fitted_alpha <= alpha + ALPHA_MARGIN
    defects = invariance_defects(ctx, T)
    worst = max(defects.values(), default=0.0)
    inv = worst <= INVARIANCE_TOL
    kern, size, k = _kernel_member(ctx, T, alpha)
    details = {
        "alpha": alpha,
        "invariant": inv,
        "kernel": kern,
        "invariance_defect": worst,
        "subsets": len(defects),
        "kernel_power": k,
        "kernel_norm": size,
        "fitted_alpha": orb.fitted_alpha,
        "exponential": orb.exponential,
    }
    hyp = Hypothesis(
        "||e^{tA} T e^{-tA}|| <= C(1+|t|)^alpha", growth, {"fitted_alpha": orb.fitted_alpha, "reason": orb.reason}
    )
    return TheoremReport(
        "prop3.5",
        [hyp],
        conclusion_defect=0.0 if inv == kern else 1.0,
        tolerance=0.0,
        tolerances={"invariance_tol": INVARIANCE_TOL, "kernel_tol": KERNEL_TOL, "alpha_margin": ALPHA_MARGIN},
        details=details,
    )


def _log_derivs(lam: complex, m: int):
    out = [np.log(lam)]
    for k in range(1, m):
        out.append((-1) ** (k - 1) * math.factorial(k - 1) / lam**k)
    return out


def principal_log(A, cluster_tol: float = DEFAULT_CLUSTER_TOL, sd: SpectralDecomposition | None = None) -> np.ndarray:
    """log A through the holomorphic calculus on the eigenvalue clusters (principal branch)."""
    A = as_matrix(A)
    sd = sd or spectral_decomposition(A, cluster_tol)
    for lam in sd.eigenvalues:
        if abs(lam.imag) <= cluster_tol and lam.real <= cluster_tol:
            raise DomainError(f"eigenvalue {lam:.6g} lies on the branch cut (-inf, 0]")
    B = sd.apply(_log_derivs)
    back = expm(B)
    gap = float(operator_norm(back - A, Norm.L1) / operator_norm(A, Norm.L1))
    if gap > 1e-8:
        raise InternalConsistencyError(f"expm(log A) differs from A by {gap:.3e} (relative)")
    return B


def check_prop_3_7(A, T, alpha: float, n_max: int = 50, nf=Norm.L2, cluster_tol: float = DEFAULT_CLUSTER_TOL):
    """Invariance of every X_A(F) under T versus AT = TA, under integer-power growth."""
    if not 0 <= alpha < 1:
        raise DomainError("alpha must be < 1 (and >= 0)")
    A = as_matrix(A)
    T = as_matrix(T)
    nf = Norm.parse(nf)
    ctx = DerivationContext(A, nf, cluster_tol)
    sd = ctx.decomposition
    off_cut = all(not (abs(l.imag) <= cluster_tol and l.real <= cluster_tol) for l in sd.eigenvalues)
    hyps = [Hypothesis("(i) spectrum off the branch cut", off_cut, list(sd.eigenvalues))]
    if not off_cut:
        return TheoremReport("prop3.7", hyps)
    ns = np.arange(-n_max, n_max + 1)
    Ainv = np.linalg.inv(A)
    samples = []
    for n in ns:
        P = np.linalg.matrix_power(A, n) if n >= 0 else np.linalg.matrix_power(Ainv, -n)
        Q = np.linalg.matrix_power(Ainv, n) if n >= 0 else np.linalg.matrix_power(A, -n)
        samples.append(P @ T @ Q)
    samples = np.array(samples)
    finite = bool(np.all(np.isfinite(samples)))
    norms = operator_norm(samples, nf) if finite else np.full(len(ns), np.inf)
    if finite and np.any(norms > 0):
        a_hat, c_hat, per_decade = fit_growth(ns.astype(float), norms)
        exponential = per_decade > 1.0 or a_hat > 2 * (ctx.dim - 1) + 0.5
    else:
        a_hat, c_hat, exponential = (0.0, 0.0, False) if finite else (math.inf, math.inf, True)
    growth = (not exponential) and a_hat <= alpha + ALPHA_MARGIN
    hyps.append(Hypothesis("(ii) ||A^n T A^-n|| <= C(1+|n|)^alpha", growth,
                           {"fitted_alpha": a_hat, "exponential": exponential}))
    details = {"alpha": alpha, "n_max": n_max, "fitted_alpha": a_hat, "exponential": exponential}
    # both verdicts are recorded even when a hypothesis fails
    comm = float(operator_norm(A @ T - T @ A, Norm.L1) / max(operator_norm(A, Norm.L1) * operator_norm(T, Norm.L1), 1e-300))
    defects = invariance_defects(ctx, T)
    inv_defect = max(defects.values(), default=0.0)
    details.update({"commutator": comm, "invariance_defect": inv_defect,
                    "commutes": comm <= INVARIANCE_TOL, "invariant": inv_defect <= INVARIANCE_TOL})
    if not growth:
        return TheoremReport("prop3.7", hyps, details=details)
    # reduction A = e^B with B the principal logarithm
    B = principal_log(A, cluster_tol, sd)
    roundtrip = float(operator_norm(expm(B) - A, Norm.L1) / operator_norm(A, Norm.L1))
    bctx = DerivationContext(B, nf, cluster_tol)
    borb = conjugation_orbit(bctx, T, symmetric_grid(max(float(n_max), 10.0), 0.25))
    kern, size, _ = _kernel_member(bctx, T, alpha)
    details.update({"log_roundtrip": roundtrip, "B_fitted_alpha": borb.fitted_alpha,
                    "B_exponential": borb.exponential, "B_commutes": kern, "B_kernel_norm": size})
    agree = details["commutes"] == details["invariant"]
    return TheoremReport(
        "prop3.7",
        hyps,
        conclusion_defect=0.0 if agree else 1.0,
        tolerance=0.0,
        tolerances={"invariance_tol": INVARIANCE_TOL, "commutation_tol": INVARIANCE_TOL, "alpha_margin": ALPHA_MARGIN},
        details=details,
    )


def resolvent_derivative(A, z: complex, x, j: int) -> np.ndarray:
    """j-th z-derivative of u(z) = (zI - A)^{-1} x, i.e. (-1)^j j! (zI - A)^{-(j+1)} x."""
    A = as_matrix(A)
    S = z * np.eye(A.shape[0]) - A
    v = np.asarray(x, dtype=complex)
    for _ in range(j + 1):
        v = np.linalg.solve(S, v)
    return (-1) ** j * math.factorial(j) * v


def remark_3_6_residual(ctx: DerivationContext, T, x, z: complex, k: int, literal: bool = False) -> float:
    """||(zI - A) v(z) - Tx|| / ||Tx|| with v = sum_j (-1)^j Delta^j(T) u^(j)(z) / j!.

    ``literal=True`` drops the 1/j! factor; the two agree for k <= 1 only.
    """
    T = as_matrix(T)
    x = np.asarray(x, dtype=complex)
    v = np.zeros(ctx.dim, dtype=complex)
    D = T.copy()
    for j in range(k + 1):
        c = (-1) ** j if literal else (-1) ** j / math.factorial(j)
        v += c * D @ resolvent_derivative(ctx.A, z, x, j)
        D = ctx.delta(D)
    r = (z * np.eye(ctx.dim) - ctx.A) @ v - T @ x
    return float(np.linalg.norm(r) / max(np.linalg.norm(T @ x), 1e-300))


def derivation_spectrum(A) -> np.ndarray:
    """Eigenvalues of the materialised superoperator Delta_A."""
    return np.linalg.eigvals(superoperator(A))
