"""Local spectra, local spectral radii and orbit growth of matrices."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .beurling import Weight
from .errors import HypothesisError, NearSingularError
from .linalg import (
    DEFAULT_CLUSTER_TOL,
    Norm,
    SpectralDecomposition,
    as_matrix,
    as_vector,
    expm,
    resolvent_apply,
    spectral_decomposition,
    vector_norm,
)
from .quadrature import integrate
from .reports import Hypothesis, TheoremReport


@dataclass(frozen=True)
class LocalSpectrum:
    points: tuple[complex, ...]
    source: str = "exact-projection"
    # cluster index of each point in the decomposition that produced it
    indices: tuple[int, ...] = ()

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def radius(self) -> float:
        return max((abs(p) for p in self.points), default=0.0)


def _check_pair(T, x):
    T = as_matrix(T)
    x = as_vector(x)
    if T.shape[0] != x.shape[0]:
        raise ValueError(f"dimension mismatch: matrix {T.shape[0]}, vector {x.shape[0]}")
    return T, x


def local_spectrum(
    T, x, cluster_tol: float = DEFAULT_CLUSTER_TOL, decomposition: SpectralDecomposition | None = None
) -> LocalSpectrum:
    """Eigenvalues lambda_j of T with ||P_j x|| > cluster_tol * ||x||."""
    T, x = _check_pair(T, x)
    sd = decomposition or spectral_decomposition(T, cluster_tol)
    xn = vector_norm(x)
    if xn == 0:
        return LocalSpectrum((), "exact-projection")
    pts, idx = [], []
    for j, c in enumerate(sd.clusters):
        if vector_norm(c.projection @ x) > cluster_tol * xn:
            pts.append(c.eigenvalue)
            idx.append(j)
    return LocalSpectrum(tuple(pts), "exact-projection", tuple(idx))


def local_spectral_radius_exact(T, x, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> float:
    return local_spectrum(T, x, cluster_tol).radius


@dataclass(frozen=True)
class PowerEstimate:
    terms: list[tuple[int, float]]
    estimate: float
    rescaled: bool


def local_spectral_radius_power(T, x, n_max: int = 64, nf=Norm.L2) -> PowerEstimate:
    """The sequence ||T^n x||^(1/n) and the mean of its last quartile.

    The iterate is renormalised every step and the log-norm accumulated, so
    fast-growing orbits never overflow; ``rescaled`` reports whether that
    mattered (a raw iterate would have left the floating-point range).
    """
    if n_max < 8:
        raise ValueError("n_max must be >= 8")
    T, x = _check_pair(T, x)
    v = x.copy()
    log_norm = 0.0
    terms = []
    rescaled = False
    for n in range(1, n_max + 1):
        v = T @ v
        nv = vector_norm(v, nf)
        if nv == 0:
            terms.extend((k, 0.0) for k in range(n, n_max + 1))
            break
        log_norm += math.log(nv)
        v = v / nv
        if abs(log_norm) > 700:
            rescaled = True
        terms.append((n, math.exp(log_norm / n)))
    tail = [r for n, r in terms if n > n_max - n_max // 4]
    return PowerEstimate(terms, float(np.mean(tail)), rescaled)


def orbit(T, x, ts) -> np.ndarray:
    """Rows e^{tT} x for every t in ts."""
    T, x = _check_pair(T, x)
    ts = np.asarray(ts, dtype=float)
    return expm(ts.reshape(-1)[:, None, None] * T[None]) @ x


def symmetric_grid(t_max: float, step: float) -> np.ndarray:
    n = int(math.floor(t_max / step + 1e-9))
    return np.arange(-n, n + 1) * step


@dataclass
class GrowthCertificate:
    polynomial_bidirectional: bool
    exact_alpha: int | None
    nilpotency_index: dict
    fitted_alpha: float
    fitted_C: float
    sample_grid: list[tuple[float, float]] = field(repr=False)
    exponential_detected: bool = False
    reason: str = ""
    nonimaginary: tuple = ()
    norm: str = "L2"

    def bound(self, t):
        return self.fitted_C * (1.0 + np.abs(np.asarray(t, dtype=float))) ** self.fitted_alpha

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.exponential_detected:
            w.writerow(["# exponential", self.reason])
        w.writerow(["t", "norm", "bound"])
        for t, nv in self.sample_grid:
            w.writerow([repr(float(t)), repr(float(nv)), repr(float(self.bound(t)))])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "polynomial_bidirectional": self.polynomial_bidirectional,
            "exact_alpha": self.exact_alpha,
            "nilpotency_index": {f"{complex(k).real!r}{complex(k).imag:+}j": v for k, v in self.nilpotency_index.items()},
            "fitted_alpha": self.fitted_alpha,
            "fitted_C": self.fitted_C,
            "exponential_detected": self.exponential_detected,
            "reason": self.reason,
            "norm": self.norm,
            "samples": len(self.sample_grid),
        }


def nilpotency_indices(T, x, cluster_tol: float = DEFAULT_CLUSTER_TOL, decomposition=None) -> dict:
    """Smallest m with (T - lambda)^m P_lambda x = 0, per point of sigma_T(x)."""
    T, x = _check_pair(T, x)
    sd = decomposition or spectral_decomposition(T, cluster_tol)
    loc = local_spectrum(T, x, cluster_tol, sd)
    scale = max(vector_norm(x), 1e-300)
    out = {}
    for lam, j in zip(loc.points, loc.indices):
        c = sd.clusters[j]
        v = c.projection @ x
        N = sd.nilpotent_part(j)
        thr = cluster_tol * scale * max(1.0, float(np.abs(N).sum(axis=0).max())) ** c.multiplicity
        m = 0
        while vector_norm(v) > thr and m < c.multiplicity:
            v = N @ v
            m += 1
        out[lam] = max(m, 1)
    return out


def fit_growth(ts, norms):
    """Log-log slope over the outer half of the grid and the matching sup constant.

    Returns (alpha_hat, C_hat, rms residual per decade of (1+|t|)).
    """
    ts = np.asarray(ts, dtype=float)
    norms = np.asarray(norms, dtype=float)
    u = np.log10(1.0 + np.abs(ts))
    outer = np.abs(ts) >= 0.5 * np.abs(ts).max()
    y = np.log10(np.maximum(norms, 1e-300))
    A = np.column_stack([u[outer], np.ones(outer.sum())])
    coef, *_ = np.linalg.lstsq(A, y[outer], rcond=None)
    alpha_hat = float(coef[0])
    resid = y[outer] - A @ coef
    span = max(u[outer].max() - u[outer].min(), 1e-12)
    per_decade = float(np.sqrt(np.mean(resid**2)) / span)
    with np.errstate(over="ignore", divide="ignore"):
        C_hat = float(np.max(norms / (1.0 + np.abs(ts)) ** alpha_hat))
    return alpha_hat, C_hat, per_decade


def orbit_growth(
    T,
    x,
    t_max: float = 200.0,
    step: float = 0.05,
    nf=Norm.L2,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    decomposition=None,
) -> GrowthCertificate:
    """Sample ||e^{tT}x|| on a symmetric grid and certify the growth condition."""
    if t_max < 10 or step <= 0:
        raise ValueError("orbit_growth needs t_max >= 10 and step > 0")
    T, x = _check_pair(T, x)
    nf = Norm.parse(nf)
    sd = decomposition or spectral_decomposition(T, cluster_tol)
    loc = local_spectrum(T, x, cluster_tol, sd)
    offending = tuple(p for p in loc.points if abs(p.real) > cluster_tol)
    if offending:
        # exponential growth: the grid would only overflow, sample a short range
        ts = symmetric_grid(min(t_max, 600.0 / max(abs(p.real) for p in offending)), step)
    else:
        ts = symmetric_grid(t_max, step)
    norms = vector_norm(orbit(T, x, ts), nf)
    grid = list(zip(ts.tolist(), np.atleast_1d(norms).tolist()))
    nil = nilpotency_indices(T, x, cluster_tol, sd)
    if vector_norm(x) == 0:
        return GrowthCertificate(True, 0, {}, 0.0, 0.0, grid, norm=nf.value)
    alpha_hat, C_hat, per_decade = fit_growth(ts, norms)
    exponential = per_decade > 1.0 or bool(offending)
    reason = ""
    if offending:
        reason = "eigenvalues with nonzero real part in the local spectrum: " + ", ".join(
            f"{p:.6g}" for p in offending
        )
    elif per_decade > 1.0:
        reason = f"log-log fit residual {per_decade:.3g} per decade exceeds 1"
    poly = not offending
    exact = max(m - 1 for m in nil.values()) if poly and nil else (0 if poly else None)
    return GrowthCertificate(
        polynomial_bidirectional=poly,
        exact_alpha=exact,
        nilpotency_index=nil,
        fitted_alpha=alpha_hat,
        fitted_C=C_hat,
        sample_grid=grid,
        exponential_detected=exponential,
        reason=reason,
        nonimaginary=offending,
        norm=nf.value,
    )


def orbit_constant(
    T, x, weight: Weight, t_max: float = 200.0, step: float = 0.05, nf=Norm.L2, safety: float = 1.01, ts=None, vals=None
) -> float:
    """Grid estimate of sup_t ||e^{tT}x|| / w(t), times a safety factor."""
    if ts is None:
        ts = symmetric_grid(t_max, step)
    if vals is None:
        vals = orbit(T, x, ts)
    norms = vector_norm(vals, nf)
    return float(safety * np.max(norms / weight(ts)))


def check_prop_2_2(T, x, cluster_tol: float = DEFAULT_CLUSTER_TOL, certificate: GrowthCertificate | None = None):
    T, x = _check_pair(T, x)
    cert = certificate or orbit_growth(T, x, 50.0, 0.1, cluster_tol=cluster_tol)
    hyp = Hypothesis("polynomial growth in both directions", cert.polynomial_bidirectional, cert.reason or None)
    if not hyp.holds:
        return TheoremReport("prop2.2", [hyp], details={"reason": cert.reason})
    loc = local_spectrum(T, x, cluster_tol)
    worst = max((abs(p.real) for p in loc.points), default=0.0)
    return TheoremReport(
        "prop2.2",
        [hyp],
        conclusion_defect=worst,
        tolerance=cluster_tol,
        tolerances={"cluster_tol": cluster_tol},
        details={"max_abs_real_part": worst, "points": list(loc.points)},
    )


@dataclass(frozen=True)
class CarlemanScan:
    candidates: tuple[float, ...]
    slopes: dict

    @property
    def points(self) -> LocalSpectrum:
        return LocalSpectrum(tuple(1j * c for c in self.candidates), "carleman-scan")


DEFAULT_OFFSETS = tuple(10.0 ** -k for k in range(1, 7))


def carleman_scan(
    T, x, probe, real_grid, offsets=DEFAULT_OFFSETS, slope_threshold: float = -0.8, cluster_tol: float = 1e-12
) -> CarlemanScan:
    """Locate points i*lambda where <probe, (z - T)^{-1} x> blows up.

    For each lambda the functional is evaluated at z = i*lambda +/- eps over
    the offsets; a log-log slope at or below ``slope_threshold`` (or a
    singular solve) marks lambda as a spectrum candidate.
    """
    T, x = _check_pair(T, x)
    probe = as_vector(probe)
    if vector_norm(probe) == 0:
        raise ValueError("probe must be nonzero")
    eps = np.asarray(offsets, dtype=float)
    if np.any(eps <= 0) or np.any(np.diff(eps) >= 0):
        raise ValueError("offsets must be a decreasing positive sequence")
    candidates, slopes = [], {}
    for lam in np.asarray(real_grid, dtype=float):
        worst = 0.0
        blown = False
        for sign in (1.0, -1.0):
            vals = []
            try:
                for e in eps:
                    u = resolvent_apply(T, 1j * lam + sign * e, x, cluster_tol)
                    vals.append(abs(np.vdot(probe, u)))
            except NearSingularError:
                blown = True
                break
            v = np.maximum(np.array(vals), 1e-300)
            slope = float(np.polyfit(np.log10(eps), np.log10(v), 1)[0])
            worst = min(worst, slope)
        slopes[float(lam)] = -math.inf if blown else worst
        if blown or worst <= slope_threshold:
            candidates.append(float(lam))
    return CarlemanScan(tuple(candidates), slopes)


@dataclass(frozen=True)
class ResolventCheck:
    residual: float
    quad_error: float
    tail_bound: float
    t_cut: float
    integral: np.ndarray
    direct: np.ndarray

    @property
    def budget(self) -> float:
        return self.quad_error + self.tail_bound


def verify_resolvent_representation(
    T,
    x,
    z: complex,
    t_cut: float | None = None,
    quad_tol: float = 1e-10,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    certificate: GrowthCertificate | None = None,
) -> ResolventCheck:
    """Compare the Laplace integral of the orbit with a direct resolvent solve.

    For Re z > beta = max Re sigma_T(x) the integral of e^{-zt} e^{tT} x over
    t > 0 is (z - T)^{-1} x. The orbit bound ||e^{tT}x|| <= C (1+t)^a e^{beta t}
    (a, C from the growth certificate of e^{-beta t} e^{tT} x) gives the tail
    C (1+t_cut)^a e^{-(Re z - beta) t_cut} / (Re z - beta - a / (1 + t_cut)).
    For Re z < min Re sigma_T(x) the integral over t < 0 with a minus sign is
    used instead.
    """
    T, x = _check_pair(T, x)
    z = complex(z)
    n = T.shape[0]
    loc = local_spectrum(T, x, cluster_tol)
    re = [p.real for p in loc.points] or [0.0]
    if z.real > max(re):
        beta, direction = max(re), 1.0
    elif z.real < min(re):
        beta, direction = min(re), -1.0
    else:
        raise HypothesisError(f"Re z = {z.real:g} does not separate z from the local spectrum; integral diverges")
    gap = direction * (z.real - beta)
    shifted = T - beta * np.eye(n)
    cert = certificate or orbit_growth(shifted, x, 100.0, 0.1, cluster_tol=cluster_tol)
    a = max(float(cert.exact_alpha or 0), 0.0)
    if vector_norm(x) == 0:
        zero = np.zeros(n, dtype=complex)
        return ResolventCheck(0.0, 0.0, 0.0, 0.0, zero, zero)
    C = 1.01 * max(float(np.max(np.array([nv for _, nv in cert.sample_grid]) / (1 + np.abs([t for t, _ in cert.sample_grid])) ** a)), 1e-300)

    def tail(tc):
        denom = gap - a / (1.0 + tc)
        if denom <= 0:
            return math.inf
        return C * (1.0 + tc) ** a * math.exp(-gap * tc) / denom

    if t_cut is None:
        t_cut = 1.0
        while tail(t_cut) > 0.5 * quad_tol:
            t_cut *= 1.2
            if t_cut > 1e6:
                raise HypothesisError("tail of the Laplace integral does not decay")
    tb = tail(t_cut)
    if not math.isfinite(tb):
        raise HypothesisError("divergent tail: Re z too close to the local spectrum")

    def integrand(t):
        s = direction * t
        vals = orbit(T, x, s)
        return np.exp(-z * s)[:, None] * vals

    res = integrate(integrand, 0.0, t_cut, abs_tol=0.5 * quad_tol, rel_tol=1e-14, order=20, n_init=max(8, int(t_cut)))
    integral = direction * res.value
    direct = resolvent_apply(T, z, x, cluster_tol)
    residual = float(vector_norm(integral - direct))
    return ResolventCheck(residual, float(res.error), float(tb), float(t_cut), integral, direct)
