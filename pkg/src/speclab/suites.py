"""Randomized verification suites, one per checked result."""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import instances as inst
from .calculus import (
    check_corollary_2_8,
    check_corollary_2_13,
    check_lemma_2_12,
    check_prop_2_5,
    check_theorem_2_1,
    check_theorem_2_11,
    check_theorem_2_14,
    eigen_split_cor_2_9,
    exp_stack,
)
from .config import RunConfig
from .derivation import DerivationContext, check_prop_3_5, check_prop_3_7, deddens_membership
from .errors import DomainError
from .local import orbit, symmetric_grid
from .reports import FAIL, NOT_APPLICABLE, PASS, to_jsonable

SUITES = ("thm2.1", "cor2.8", "cor2.9", "lem2.12", "thm2.11", "cor2.13", "thm2.14", "prop2.5",
          "thm3.1", "prop3.5", "prop3.7")


def _alphas(cfg: RunConfig, upper: float | None = 1.0):
    if cfg.alpha is None:
        return [float(a) for a in cfg.alphas]
    if upper is not None and not cfg.alpha < upper:
        raise DomainError("alpha must be < 1")
    return [float(cfg.alpha)]


def _dim(rng, lo=1, hi=6):
    return int(rng.integers(lo, hi + 1))


def case_thm_2_1(cfg, i, rng):
    n, lam = inst.jordan_family()[i % 20]
    T = inst.jordan_block(n, 1j * lam)
    x = inst.complex_normal(rng, n)
    return [check_theorem_2_1(T, x, f, None, cfg.tol("thm2.1"), cfg.quad_tol) for f in inst.gaussian_test_functions()]


def case_cor_2_8(cfg, i, rng):
    n = _dim(rng, 1, 5)
    T = inst.triangular_single_point(rng, n, 1j * float(rng.uniform(-3, 3)))
    x = inst.complex_normal(rng, n)
    return [check_corollary_2_8(T, x, cfg.tol("cor2.8"))]


def case_cor_2_9(cfg, i, rng):
    T, _ = inst.imaginary_semisimple(rng, _dim(rng), sep=0.3, radius=3.0)
    x = inst.complex_normal(rng, T.shape[0])
    a = _alphas(cfg)[i % len(_alphas(cfg))]
    return [eigen_split_cor_2_9(T, x, a, None, cfg.tol("cor2.9"), cfg.quad_tol, cfg.cluster_tol)[1]]


def case_lem_2_12(cfg, i, rng):
    a = (0.5, 1.0, 3.0)[i % 3]
    alpha = _alphas(cfg)[i % len(_alphas(cfg))]
    d = _dim(rng, 1, 4)
    T, _ = inst.imaginary_semisimple(rng, d, sep=0.8 * a / d, radius=0.8 * a)
    x = inst.complex_normal(rng, d)
    return [check_lemma_2_12(T, x, a, alpha, cfg.K, cfg.tol("lem2.12"), cfg.cluster_tol)]


def case_thm_2_11(cfg, i, rng):
    T, _ = inst.imaginary_semisimple(rng, _dim(rng), sep=0.3, radius=3.0)
    x = inst.complex_normal(rng, T.shape[0])
    vals = orbit(T, x, symmetric_grid(cfg.t_max, cfg.step))
    return [
        check_theorem_2_11(T, x, a, cfg.inequality_slack, nf, cfg.t_max, cfg.step, cfg.cluster_tol, vals=vals)
        for a in _alphas(cfg)
        for nf in cfg.norms
    ]


def case_cor_2_13(cfg, i, rng):
    T, _ = inst.real_semisimple(rng, _dim(rng), sep=0.3, radius=3.0)
    xs = inst.complex_normal(rng, 5, T.shape[0])
    stack = exp_stack(T, cfg.t_max, cfg.step)
    return [
        check_corollary_2_13(T, a, cfg.inequality_slack, nf, xs, cfg.t_max, cfg.step, cfg.cluster_tol, stack=stack)
        for a in _alphas(cfg)
        for nf in cfg.norms
    ]


def case_thm_2_14(cfg, i, rng):
    _, P, Q = inst.commuting_polynomials(rng, _dim(rng))
    alphas = _alphas(cfg)
    nf = cfg.norms[i % len(cfg.norms)]
    seed = int(rng.integers(0, 2**31))
    return [check_theorem_2_14(P, Q, alphas[i % len(alphas)], None, cfg.inequality_slack, nf, cfg.t_max, cfg.step,
                               cfg.cluster_tol, seed=seed)]


def case_prop_2_5(cfg, i, rng):
    if i % 4 == 3:
        n = _dim(rng, 1, 3)
        T = inst.jordan_block(n, 1j * float(rng.uniform(-2, 2)))
    else:
        T, _ = inst.imaginary_semisimple(rng, _dim(rng, 1, 4), sep=1.0, radius=3.0)
    x = inst.complex_normal(rng, T.shape[0])
    if i % 5 == 4 and T.shape[0] > 1:
        # vector supported on part of the spectrum
        from .linalg import spectral_decomposition

        sd = spectral_decomposition(T, cfg.cluster_tol)
        x = sd.clusters[0].projection @ x
    return [check_prop_2_5(T, x, None, cfg.tol("prop2.5"), None, 1e-8, cfg.cluster_tol)]


def _strata_alpha(rng, index):
    """Either a member exponent (>= index - 1) or a non-member one (< index - 1)."""
    member = [index - 1, index - 0.5]
    non = [index - 2, index - 1.5] if index >= 2 else []
    pool = member + non
    return float(max(0.0, pool[int(rng.integers(0, len(pool)))]))


def case_thm_3_1(cfg, i, rng):
    d = _dim(rng)
    A, J, V = inst.real_spectrum_structure(rng, d, max_block=3, single_point=(i % 10 == 9))
    Vi = np.linalg.inv(V)
    generic = rng.random() < 0.2
    if generic:
        # mixes distinct eigenvalues, so no power of Delta annihilates it
        S = inst.complex_normal(rng, d, d)
    else:
        S = np.zeros((d, d), dtype=complex)
        for _ in range(10):
            S = inst.kernel_element(rng, J, int(rng.integers(1, 2 * 3)))
            if np.abs(S).max() > 0:
                break
        if not np.abs(S).max() > 0:
            S = np.eye(d, dtype=complex)
    k = None if generic and len(set(np.diag(J).tolist())) > 1 else inst.kernel_index(J, S)
    alpha = _strata_alpha(rng, k) if k is not None else float(rng.choice([0.0, 0.5, 1.0, 2.0]))
    T = V @ S @ Vi
    ctx = DerivationContext(A, cfg.norm, cfg.defective_cluster_tol)
    rep = deddens_membership(ctx, T, alpha, cfg.t_max, cfg.derivation_step)
    rep.details["stratum"] = k
    return [rep]


def case_prop_3_5(cfg, i, rng):
    kind = i % 4
    d = _dim(rng, 2, 5)
    if kind == 3:
        # equal real parts: bounded oscillating orbit, T mixes the eigenspaces
        re = float(rng.uniform(-1, 1))
        ims = inst.separated_points(rng, d, 0.5, -3.0, 3.0)
        V = inst.conditioned_basis(rng, d, 2.0)
        A = V @ np.diag(re + 1j * ims) @ np.linalg.inv(V)
        T = V @ inst.complex_normal(rng, d, d) @ np.linalg.inv(V)
        alpha = 0.0
    else:
        blocks = inst.random_partition(rng, d, 3)
        pool = inst.separated_points(rng, len(blocks), 0.015, -0.05, 0.05) + 1j * rng.uniform(-2, 2, len(blocks))
        eigs = [pool[0] if (j > 0 and rng.random() < 0.3) else pool[j] for j in range(len(blocks))]
        J = inst.jordan_form(eigs, blocks)
        V = inst.conditioned_basis(rng, d, 2.0)
        Vi = np.linalg.inv(V)
        A = V @ J @ Vi
        if kind == 0:
            c = inst.complex_normal(rng, 3)
            T = c[0] * np.eye(d) + c[1] * A + c[2] * A @ A
        elif kind == 1:
            # block-diagonal with respect to the generalized eigenspaces of J
            S = np.zeros((d, d), dtype=complex)
            lab = np.concatenate([[e] * b for e, b in zip(eigs, blocks)])
            for e in set(lab.tolist()):
                idx = np.flatnonzero(lab == e)
                S[np.ix_(idx, idx)] = inst.complex_normal(rng, len(idx), len(idx))
            T = V @ S @ Vi
        else:
            T = V @ inst.complex_normal(rng, d, d) @ Vi
        S = Vi @ T @ V
        k = inst.kernel_index(J, S)
        alpha = float(k - 1 + 0.5 * (i % 2)) if k is not None and k >= 1 else 0.0
    ctx = DerivationContext(A, cfg.norm, cfg.defective_cluster_tol)
    return [check_prop_3_5(ctx, T, alpha, cfg.t_max, cfg.derivation_step)]


def _separated_off_cut(rng, k, sep=0.3):
    for _ in range(100):
        ev = inst.off_cut_spectrum(rng, k)
        if k < 2 or min(abs(a - b) for j, a in enumerate(ev) for b in ev[j + 1:]) >= sep:
            return ev
    raise RuntimeError("could not draw a separated spectrum")


def case_prop_3_7(cfg, i, rng):
    alphas = _alphas(cfg)
    alpha = alphas[i % len(alphas)]
    k = _dim(rng, 1, 4)
    ev = _separated_off_cut(rng, k)
    mult = [int(rng.integers(1, 3)) for _ in range(k)]
    lab = np.concatenate([[e] * m for e, m in zip(ev, mult)])
    d = len(lab)
    V = inst.conditioned_basis(rng, d, 2.0)
    Vi = np.linalg.inv(V)
    A = V @ np.diag(lab) @ Vi
    # commuting part: block diagonal on the eigenspaces
    S = np.zeros((d, d), dtype=complex)
    for e in ev:
        idx = np.flatnonzero(lab == e)
        S[np.ix_(idx, idx)] = inst.complex_normal(rng, len(idx), len(idx))
    if i % 2 == 1:
        # couple eigenspaces of equal modulus: the integer orbit stays bounded
        for a in range(k):
            for b in range(k):
                if a != b and abs(abs(ev[a]) - abs(ev[b])) < 1e-12:
                    ia, ib = np.flatnonzero(lab == ev[a]), np.flatnonzero(lab == ev[b])
                    S[np.ix_(ia, ib)] = inst.complex_normal(rng, len(ia), len(ib))
    T = V @ S @ Vi
    return [check_prop_3_7(A, T, alpha, cfg.n_max, cfg.norm, cfg.cluster_tol)]


CASES: dict[str, Callable] = {
    "thm2.1": case_thm_2_1,
    "cor2.8": case_cor_2_8,
    "cor2.9": case_cor_2_9,
    "lem2.12": case_lem_2_12,
    "thm2.11": case_thm_2_11,
    "cor2.13": case_cor_2_13,
    "thm2.14": case_thm_2_14,
    "prop2.5": case_prop_2_5,
    "thm3.1": case_thm_3_1,
    "prop3.5": case_prop_3_5,
    "prop3.7": case_prop_3_7,
}


@dataclass
class SuiteResult:
    suite: str
    seed: int
    reports: list
    config: dict

    @property
    def counts(self) -> dict:
        c = {PASS: 0, FAIL: 0, NOT_APPLICABLE: 0}
        for r in self.reports:
            c[r.status] += 1
        return c

    @property
    def ok(self) -> bool:
        return self.counts[FAIL] == 0

    def summary_line(self) -> str:
        c = self.counts
        applicable = c[PASS] + c[FAIL]
        return (f"{self.suite}: {c[PASS]}/{applicable} pass, {c[FAIL]} fail, "
                f"{c[NOT_APPLICABLE]} not-applicable -> {'PASS' if self.ok else 'FAIL'}")

    @property
    def run_id(self) -> str:
        key = json.dumps({"suite": self.suite, "config": to_jsonable(self.config)}, sort_keys=True)
        return hashlib.sha256(key.encode()).hexdigest()[:16]

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "suite": self.suite,
            "seed": self.seed,
            "config": to_jsonable(self.config),
            "summary": {**self.counts, "total": len(self.reports), "ok": self.ok},
            "reports": [r.to_dict() for r in self.reports],
        }

    def to_csv_rows(self):
        for r in self.reports:
            yield [self.suite, r.details.get("instance", ""), r.theorem_id, r.status, repr(float(r.conclusion_defect)),
                   repr(float(r.tolerance)), self.seed]


def _run_case(args):
    suite, cfg, index, child = args
    rng = np.random.default_rng(child)
    reports = CASES[suite](cfg, index, rng)
    for r in reports:
        r.seed = cfg.seed
        r.details["instance"] = index
    return reports


def run_suite(suite: str, cfg: RunConfig) -> SuiteResult:
    if suite not in CASES:
        raise KeyError(suite)
    if suite in ("thm2.11", "cor2.13", "thm2.14", "lem2.12", "prop3.7"):
        _alphas(cfg)  # domain guard before any work
    n = cfg.size(suite)
    # one independent stream per instance index, per suite
    salt = int.from_bytes(hashlib.sha256(suite.encode()).digest()[:4], "little")
    children = np.random.SeedSequence([cfg.seed, salt]).spawn(n)
    jobs = [(suite, cfg, i, children[i]) for i in range(n)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(_run_case, jobs, chunksize=max(1, n // (4 * cfg.workers))))
    else:
        chunks = [_run_case(j) for j in jobs]
    reports = [r for chunk in chunks for r in chunk]
    return SuiteResult(suite, cfg.seed, reports, {**cfg.to_dict(), "suite_size": n})


def run_all(cfg: RunConfig, suites=SUITES) -> list[SuiteResult]:
    return [run_suite(s, cfg) for s in suites]
