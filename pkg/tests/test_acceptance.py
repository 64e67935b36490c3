"""Acceptance criteria 1-13, each printing one PASS/FAIL line."""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from speclab.beurling import c_alpha_details, triangular_measure, triangular_measure_norm
from speclab.calculus import check_corollary_2_8
from speclab.config import make_config
from speclab.derivation import DerivationContext, conjugation_orbit, deddens_membership
from speclab.instances import complex_normal, conditioned_basis, imaginary_semisimple, jordan_block, jordan_family
from speclab.local import orbit_growth, verify_resolvent_representation
from speclab.reports import FAIL, NOT_APPLICABLE, PASS
from speclab.suites import run_suite

pytestmark = pytest.mark.acceptance


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n:2d}] {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def suite(name):
    t0 = time.perf_counter()
    res = run_suite(name, make_config())
    return res, time.perf_counter() - t0


def test_criterion_01_c_alpha_at_zero(verdict):
    t0 = time.perf_counter()
    res = c_alpha_details(0.0, tail_tol=1e-9)
    dt = time.perf_counter() - t0
    err = abs(res.value - 1.0)
    verdict(1, err <= 1e-8 and dt < 1.0, f"C(0)={res.value:.12f} |err|={err:.2e} K={res.K} time={dt:.3f}s")


def test_criterion_02_triangular_measure(verdict):
    t0 = time.perf_counter()
    worst_norm, worst_wave, ok = 0.0, 0.0, True
    for a in (0.5, 1.0, 3.0):
        s = np.linspace(-a, a, 20)
        for alpha in (0.0, 0.3, 0.7):
            mu = triangular_measure(a, alpha, 5000)
            gap = abs(mu.norm() - triangular_measure_norm(a, alpha, 1e-13))
            ok &= gap <= mu.tail_bound
            worst_norm = max(worst_norm, gap / mu.tail_bound)
            wave = float(np.max(np.abs(mu.transform(s) - s)))
            ok &= wave <= 1e-3
            worst_wave = max(worst_wave, wave)
    dt = time.perf_counter() - t0
    verdict(2, bool(ok) and dt < 10, f"norm gap <= {worst_norm:.3f} x tail bound; wave defect {worst_wave:.2e}; "
                                     f"time={dt:.2f}s")


def test_criterion_03_one_point_formula(verdict):
    res, dt = suite("thm2.1")
    reps = res.reports
    worst = max(r.conclusion_defect for r in reps)
    ok = len(reps) == 20 * 6 and all(r.status == PASS for r in reps) and worst <= 1e-5 and dt < 60
    verdict(3, ok, f"{sum(r.status == PASS for r in reps)}/{len(reps)} pass, max defect {worst:.2e}, time={dt:.1f}s")


def test_criterion_04_nilpotency_power(verdict):
    rng = np.random.default_rng(4)
    worst, count, ok = 0.0, 0, True
    for n, lam in jordan_family():
        T = jordan_block(n, 1j * lam)
        for x in (np.eye(n)[-1], complex_normal(rng, n)):
            r = check_corollary_2_8(T, x, 1e-10)
            ok &= r.status == PASS and r.details["alpha"] == n - 1
            worst = max(worst, r.conclusion_defect)
            count += 1
    res, _ = suite("cor2.8")
    ok &= res.counts[PASS] == len(res.reports)
    verdict(4, bool(ok), f"{count} Jordan-family checks, max residual {worst:.2e}; random suite "
                         f"{res.counts[PASS]}/{len(res.reports)}")


def test_criterion_05_eigen_split(verdict):
    res, dt = suite("cor2.9")
    d = [r.details for r in res.reports if r.status != NOT_APPLICABLE]
    proj = max(x["projection_defect"] for x in d)
    tot = max(x["sum_defect"] for x in d)
    ok = len(res.reports) == 50 and len(d) == 50 and res.counts[PASS] == 50 and proj <= 1e-5 and tot <= 1e-5
    verdict(5, ok, f"{res.counts[PASS]}/50 pass, projection defect {proj:.2e}, sum defect {tot:.2e}, time={dt:.1f}s")


def test_criterion_06_triangular_calculus(verdict):
    res, dt = suite("lem2.12")
    worst = max(r.conclusion_defect for r in res.reports)
    ratio = max(r.details["r"] / r.details["a"] for r in res.reports)
    ok = len(res.reports) == 20 and res.counts[PASS] == 20 and worst <= 1e-3 and ratio <= 0.8 + 1e-12
    verdict(6, ok, f"{res.counts[PASS]}/20 pass, max defect {worst:.2e}, max r/a {ratio:.3f}, time={dt:.1f}s")


def test_criterion_07_norm_bounds(verdict):
    lines, ok = [], True
    for name in ("thm2.11", "cor2.13"):
        res, dt = suite(name)
        margins = [r.details["margin"] for r in res.reports if r.status != NOT_APPLICABLE]
        combos = {(r.details["norm"],) for r in res.reports}
        violations = sum(m <= 0 for m in margins)
        ok &= len(margins) == 200 * 9 and violations == 0 and res.counts[FAIL] == 0 and len(combos) == 3
        lines.append(f"{name}: {len(margins)} checks, {violations} violations, min margin {min(margins):.3e} "
                     f"({dt:.0f}s)")
    verdict(7, bool(ok), "; ".join(lines))


def test_criterion_08_commuting_pairs(verdict):
    res, dt = suite("thm2.14")
    gaps15 = max(r.details["lemma_2_15_gap"] for r in res.reports)
    gaps16 = max(r.details["lemma_2_16_gap"] for r in res.reports)
    ok = len(res.reports) == 100 and res.counts[PASS] == 100 and all(r.details["lemmas_hold"] for r in res.reports)
    verdict(8, ok, f"{res.counts[PASS]}/100 pass, radius gaps {gaps15:.1e} / {gaps16:.1e}, time={dt:.1f}s")


def test_criterion_09_nilpotent_conjugation_example(verdict):
    A = np.array([[0, 0], [1, 0]], dtype=complex)
    T = np.array([[1, 0], [0, 0]], dtype=complex)
    ctx = DerivationContext(A)
    ts = np.round(np.arange(-100, 101) * 0.1, 12)
    orb = conjugation_orbit(ctx, T, ts)
    err = float(np.max(np.abs(orb.norms - np.sqrt(1 + ts**2))))
    rep = deddens_membership(ctx, T, 1.0)
    d = rep.details
    ok = err <= 1e-10 and rep.status == PASS and d["exact_member"] and d["empirical_member"] and not d["commutes"]
    verdict(9, ok, f"orbit error {err:.1e}; member of the alpha=1 class: {d['exact_member']}, "
                   f"fitted alpha {d['fitted_alpha']:.3f}, commutes: {d['commutes']}")


def test_criterion_10_kernel_characterization(verdict):
    res, dt = suite("thm3.1")
    agree = res.counts[PASS]
    strata = sorted({str(r.details["stratum"]) for r in res.reports})
    ok = len(res.reports) == 100 and agree == 100
    verdict(10, ok, f"{agree}/100 verdicts agree, strata {strata}, time={dt:.1f}s")


def _resolvent_instances(count=50):
    rng = np.random.default_rng(11)
    out = []
    for i in range(count):
        tol = 1e-8
        if i % 5 == 4:
            # conjugated Jordan block: rounding splits the eigenvalue by ~eps^(1/n)
            n = int(rng.integers(2, 4))
            V = conditioned_basis(rng, n, 1.5)
            T = V @ jordan_block(n, 1j * float(rng.uniform(-2, 2))) @ np.linalg.inv(V)
            tol = 1e-3
        else:
            T, _ = imaginary_semisimple(rng, int(rng.integers(1, 5)), sep=0.3, radius=3.0)
        x = complex_normal(rng, T.shape[0])
        z = (0.5, 1.0, 2.0)[i % 3] + 1j * float(rng.uniform(-3, 3))
        out.append((T, x, z, tol))
    return out


def test_criterion_11_resolvent_representation(verdict):
    t0 = time.perf_counter()
    worst, certified = 0.0, 0
    for T, x, z, tol in _resolvent_instances():
        cert = orbit_growth(T, x, 100.0, 0.1, cluster_tol=tol)
        certified += cert.polynomial_bidirectional
        r = verify_resolvent_representation(T, x, z, quad_tol=1e-10, cluster_tol=tol)
        worst = max(worst, r.residual)
    dt = time.perf_counter() - t0
    verdict(11, certified == 50 and worst <= 1e-8,
            f"{certified}/50 certified, max residual {worst:.2e}, time={dt:.1f}s")


def test_criterion_12_integer_power_conjugation(verdict):
    res, dt = suite("prop3.7")
    app = [r for r in res.reports if r.status != NOT_APPLICABLE]
    rt = max((r.details["log_roundtrip"] for r in app), default=math.inf)
    agree = sum(r.details["commutes"] == r.details["invariant"] for r in res.reports)
    ok = len(res.reports) == 50 and len(app) == 50 and res.counts[PASS] == 50 and rt <= 1e-8 and agree == 50
    verdict(12, ok, f"{res.counts[PASS]}/50 pass ({len(app)} applicable), log round trip {rt:.1e}, "
                    f"verdicts agree {agree}/50, time={dt:.1f}s")


def test_criterion_13_verify_all(verdict, tmp_path):
    out = tmp_path / "all.json"
    t0 = time.perf_counter()
    p = subprocess.run([sys.executable, "-m", "speclab", "verify", "all", "--out", str(out)],
                       capture_output=True, text=True, timeout=900)
    dt = time.perf_counter() - t0
    runs = json.loads(out.read_text())["result"]["runs"] if out.exists() else []
    ok = p.returncode == 0 and dt < 600 and len(runs) == 11
    verdict(13, ok, f"exit {p.returncode}, {len(runs)} suites, time={dt:.0f}s")
