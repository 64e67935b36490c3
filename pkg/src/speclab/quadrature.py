"""Vector-valued adaptive Gauss-Legendre quadrature on finite intervals.

The integrand is called with a 1-D array of nodes and must return an array
of shape ``(nodes, d)`` (or ``(nodes,)`` for scalar integrands). All active
subintervals of a refinement round are evaluated in a single call, which
keeps matrix-exponential orbits vectorised.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


@dataclass(frozen=True)
class QuadResult:
    value: np.ndarray | complex
    error: float
    evaluations: int
    intervals: int


def _rule(fun, lo: np.ndarray, hi: np.ndarray, order: int) -> np.ndarray:
    x, w = gauss_legendre(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(fun(nodes.ravel()))
    vals = vals.reshape(nodes.shape + vals.shape[1:])
    return np.tensordot(w, np.moveaxis(vals, 1, 0), axes=(0, 0)) * half.reshape((-1,) + (1,) * (vals.ndim - 2))


def integrate(
    fun,
    a: float,
    b: float,
    abs_tol: float = 1e-10,
    rel_tol: float = 1e-12,
    order: int = 20,
    n_init: int = 8,
    max_intervals: int = 50_000,
    breakpoints=None,
) -> QuadResult:
    """Adaptive bisection with a whole-vs-halves error estimate.

    Each interval's estimate on the whole is compared to the sum over its two
    halves; intervals are accepted when the discrepancy is below their
    length-proportional share of ``max(abs_tol, rel_tol * |I|)``.
    """
    if not b > a:
        raise ValueError("integration interval must satisfy b > a")
    edges = np.linspace(a, b, n_init + 1)
    if breakpoints is not None:
        extra = [p for p in breakpoints if a < p < b]
        edges = np.unique(np.concatenate([edges, extra]))
    lo, hi = edges[:-1], edges[1:]
    whole = _rule(fun, lo, hi, order)
    evals = order * len(lo)
    scalar = whole.ndim == 1
    if scalar:
        whole = whole[:, None]
    total = np.zeros(whole.shape[1], dtype=complex)
    err_total = 0.0
    accepted = 0
    length = b - a
    while len(lo):
        mids = 0.5 * (lo + hi)
        left = _rule(fun, lo, mids, order)
        right = _rule(fun, mids, hi, order)
        if scalar:
            left, right = left[:, None], right[:, None]
        evals += 2 * order * len(lo)
        halves = left + right
        err = np.max(np.abs(whole - halves), axis=1)
        estimate = np.abs(total + halves.sum(axis=0)).max()
        budget = max(abs_tol, rel_tol * estimate)
        ok = err <= budget * (hi - lo) / length
        total += halves[ok].sum(axis=0)
        err_total += float(err[ok].sum())
        accepted += int(ok.sum())
        keep = ~ok
        if not np.any(keep):
            break
        lo_k, hi_k, mid_k = lo[keep], hi[keep], mids[keep]
        if accepted + 2 * len(lo_k) > max_intervals:
            raise ConvergenceError(
                f"adaptive quadrature exceeded {max_intervals} intervals",
                last_iterate=total + halves[keep].sum(axis=0),
            )
        lo = np.concatenate([lo_k, mid_k])
        hi = np.concatenate([mid_k, hi_k])
        whole = np.concatenate([left[keep], right[keep]])
    value = total[0] if scalar else total
    return QuadResult(value, err_total, evals, accepted)
