"""Acceptance gate: ten go/no-go checks, each recording one [C{n}] PASS/FAIL
line that the conftest terminal-summary hook prints after the run.

C1, C3 and C9 are expected to fail; the failure messages state the measured
values.  See notes in the repository root README for how to run this file
alone.
"""

import math
import os
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES

from wl1min import (
    ExperimentGrid,
    ProblemSpec,
    SchemeCell,
    SolverConfig,
    check_nsp,
    check_wnsp,
    compute_ric,
    compute_roc,
    dominant_support,
    downweight_interval,
    kernel_basis,
    l1_min_exact,
    l1ball_section_vertices,
    recovery_trial,
    ric_bound_plain_order_infimum,
    ric_bound_scaled_order,
    run_experiment,
    solve,
    Identity,
)

JOBS = max(1, min(4, os.cpu_count() or 1))


def _verdict(criterion: int, ok: bool, detail: str = "") -> str:
    tail = f" - {detail}" if detail else ""
    line = f"[C{criterion}] {'PASS' if ok else 'FAIL'}{tail}"
    print(line, flush=True)
    ACCEPTANCE_LINES.append(line)
    return line


def _topk_mass(vertex: np.ndarray, k: int) -> float:
    return float(np.sort(np.abs(vertex))[::-1][:k].sum())


def test_c1_exact_ric_regression(ex1_phi, ex2_phi):
    t0 = time.perf_counter()
    d1 = compute_ric(ex1_phi, 2).value
    t1 = time.perf_counter() - t0
    t0 = time.perf_counter()
    d2 = compute_ric(ex2_phi, 2).value
    t2 = time.perf_counter() - t0
    ok = abs(d1 - 0.9224) <= 5e-5 and abs(d2 - 0.9572) <= 5e-5 and t1 < 1.0 and t2 < 1.0
    line = _verdict(1, ok, f"delta2 = {d1:.6f} (target 0.9224), {d2:.6f} (target 0.9572)")
    assert ok, line


def test_c2_scaled_order_table(ex1_phi):
    surds = [
        (2.0, 1.0, math.sqrt(2) / 2),
        (3.0, 1.0, math.sqrt(6) / 3),
        (4.0, 1.0, math.sqrt(3) / 2),
    ]
    decimals = [
        (2.0, 0.75, 0.800), (3.0, 0.75, 0.883), (4.0, 0.75, 0.917),
        (2.0, 0.50, 0.894), (3.0, 0.50, 0.942), (4.0, 0.50, 0.960),
        (2.0, 0.25, 0.970), (3.0, 0.25, 0.984), (4.0, 0.25, 0.989),
    ]
    bad = []
    for a, gamma, target in surds:
        value = ric_bound_scaled_order(a, gamma)
        if abs(value - target) > 1e-12:
            bad.append((a, gamma, value, target))
    for a, gamma, target in decimals:
        value = ric_bound_scaled_order(a, gamma)
        if abs(value - target) > 1e-3:
            bad.append((a, gamma, value, target))
    line = _verdict(2, not bad, f"{12 - len(bad)}/12 entries match" + (f", bad: {bad}" if bad else ""))
    assert not bad, line


def test_c3_plain_order_table():
    # (gamma, k_start, target, tolerance); range entries read as infima
    cells = [
        (Fraction(1), 2, 1 / 3, 1e-12),
        (Fraction(1), 3, 0.3203, 1e-4),
        (Fraction(3, 4), 4, 3 / 8, 1e-12),
        (Fraction(3, 4), 5, 0.3797, 1e-4),
        (Fraction(1, 2), 2, 1 / 2, 1e-12),
        (Fraction(1, 2), 5, math.sqrt(6) - 2, 1e-12),
        (Fraction(1, 4), 4, 2 / 3, 1e-12),
        (Fraction(1, 4), 5, 3 - math.sqrt(6), 1e-12),
        (Fraction(1, 6), 6, 3 / 4, 1e-12),
        (Fraction(1, 6), 5, 0.7101, 1e-4),
    ]
    bad = []
    for gamma, k_start, target, tol in cells:
        value, at_k = ric_bound_plain_order_infimum(gamma, k_start)
        if abs(value - target) > tol:
            bad.append(f"gamma={gamma} k>={k_start}: inf {value:.6f} (at k={at_k}) vs {target:.6f}")
    detail = f"{10 - len(bad)}/10 cells match"
    if bad:
        detail += "; " + "; ".join(bad)
    line = _verdict(3, not bad, detail)
    assert not bad, line


def test_c4_lp_oracle_regression(ex1_phi, ex1_b, ex2_phi, ex2_b):
    cases = [
        (ex1_phi, ex1_b, None, np.array([0.75, 0.75, 0.0])),
        (ex1_phi, ex1_b, np.array([1.0, 1.0, 0.7]), np.array([0.0, 0.0, 2.0])),
        (ex2_phi, ex2_b, None, np.array([1 / 3, -0.5, 0.0, 0.0, 0.0])),
        (ex2_phi, ex2_b, np.array([1.0, 2 / 3, 1.0, 0.5, 1.0]), np.array([0.0, 0.0, 0.0, 1.0, 0.0])),
    ]
    worst = 0.0
    for phi, b, w, target in cases:
        x = l1_min_exact(phi, b, w)
        worst = max(worst, float(np.abs(x - target).max()))
    ok = worst <= 1e-8
    line = _verdict(4, ok, f"worst deviation {worst:.2e}")
    assert ok, line


def test_c5_certificate_regression(ex1_phi, ex2_phi):
    problems = []
    nsp = check_nsp(ex1_phi, 1)
    dom1 = dominant_support(ex1_phi, 1)
    iv1 = downweight_interval(ex1_phi, 1, ric_budget=(2.0, 0.9224))
    if nsp.holds or abs(_topk_mass(nsp.witness_vertex, 1) - 4 / 7) > 1e-12:
        problems.append("example 1 NSP witness")
    if dom1.support != (2,) or abs(dom1.mass - 4 / 7) > 1e-12:
        problems.append("example 1 dominant support")
    if abs(iv1.lo - 3 / 8) > 1e-12 or abs(iv1.hi_nullspace - 3 / 4) > 1e-12:
        problems.append("example 1 interval")
    if abs(iv1.hi_ric - 0.4187) > 1e-3:
        problems.append(f"example 1 isometry-route bound {iv1.hi_ric:.6f}")
    dom2 = dominant_support(ex2_phi, 1)
    iv2 = downweight_interval(ex2_phi, 1, ric_budget=(2.0, 0.9572))
    if dom2.support != (3,) or abs(dom2.mass - 6 / 11) > 1e-9:
        problems.append("example 2 dominant support")
    if not 0.0 < 0.3 < iv2.hi_ric:
        problems.append(f"example 2: 0.3 outside (0, {iv2.hi_ric:.6f})")
    line = _verdict(5, not problems, "; ".join(problems) if problems else "both fixtures match")
    assert not problems, line


def test_c6_weighted_recovery_equivalence():
    rng = np.random.default_rng(601)
    checked_holds = checked_fails = 0
    problems = []
    for i in range(25):
        phi = rng.standard_normal((6, 10))
        if i % 4 == 0:
            w = np.ones(10)
        elif i % 4 == 1:
            w = rng.uniform(0.4, 1.0, 10)
        elif i % 4 == 2:
            # targeted downweight on the coordinate carrying the most kernel mass
            w = np.ones(10)
            w[dominant_support(phi, 1).support[0]] = 0.3
        else:
            w = rng.uniform(0.8, 1.2, 10)
        for k in (1, 2):
            report = check_wnsp(phi, w, k)
            if report.holds:
                checked_holds += 1
                rate = recovery_trial(phi, w, k, 100, seed=1000 + i)
                if rate != 1.0:
                    problems.append(f"matrix {i} k={k}: WNSP holds but rate {rate}")
            else:
                checked_fails += 1
                v = np.asarray(report.witness_vertex)
                mask = np.zeros(10, dtype=bool)
                mask[list(report.witness_set)] = True
                x_hat = np.where(mask, v, 0.0)
                gap = float(np.sum(w * np.abs(x_hat)) - np.sum(w * np.abs(x_hat - v)))
                if gap < -1e-10:
                    problems.append(f"matrix {i} k={k}: witness gap {gap:.2e}")
    ok = not problems and checked_holds > 0 and checked_fails > 0
    line = _verdict(
        6, ok,
        f"{checked_holds} holds-cases, {checked_fails} fails-cases"
        + ("; " + "; ".join(problems[:3]) if problems else ""),
    )
    assert ok, line


def test_c7_isometry_orthogonality_inequalities():
    rng = np.random.default_rng(701)
    problems = []
    for i in range(20):
        a = rng.standard_normal((6, 12))
        a /= np.linalg.norm(a, axis=0)
        d2 = compute_ric(a, 2).value
        d3 = compute_ric(a, 3).value
        t11 = compute_roc(a, 1, 1).value
        t12 = compute_roc(a, 1, 2).value
        t22 = compute_roc(a, 2, 2).value
        t33 = compute_roc(a, 3, 3).value
        if not t22 < 2.0 * d2:
            problems.append(f"matrix {i}: theta22 {t22:.4f} >= 2*delta2 {2 * d2:.4f}")
        if not t33 < (6.0 / math.sqrt(8.0)) * d3:
            problems.append(f"matrix {i}: theta33 bound")
        if not t12 <= math.sqrt(2.0) * t11 + 1e-10:
            problems.append(f"matrix {i}: theta12 bound")
    line = _verdict(7, not problems, "; ".join(problems) if problems else "20/20 matrices")
    assert not problems, line


def test_c8_solver_matches_oracle():
    # scoped to instances with unique LP solutions; the implementable proxy
    # is exact LP recovery of the planted 2-sparse signal (instances where
    # the LP lands on a dense alternative vertex have near-tied optima that
    # no finite continuation can separate)
    rng = np.random.default_rng(801)
    worst_gap = 0.0
    monotone_violation = 0.0
    kept = 0
    while kept < 50:
        phi = rng.standard_normal((10, 30))
        x0 = np.zeros(30)
        support = rng.permutation(30)[:2]
        x0[support] = rng.standard_normal(2)
        b = phi @ x0
        reference = l1_min_exact(phi, b)
        if np.abs(reference - x0).max() > 1e-8:
            continue
        kept += 1
        report = solve(phi, b, Identity())
        worst_gap = max(worst_gap, float(np.abs(report.x - reference).max()))
        for objectives in report.objective_history:
            diffs = np.diff(np.asarray(objectives))
            if diffs.size:
                monotone_violation = max(monotone_violation, float(diffs.max()))
    ok = worst_gap <= 1e-3 and monotone_violation <= 1e-12
    line = _verdict(
        8, ok,
        f"worst solver-vs-oracle gap {worst_gap:.2e}, "
        f"worst objective increase {monotone_violation:.2e}",
    )
    assert ok, line


def test_c9_scaled_benchmark_cell():
    grid = ExperimentGrid(
        specs=(ProblemSpec(m=128, n=512, k=20),),
        cells=(SchemeCell("nullspace", q=0.5),),
        samples=10,
        base_seed=2024,
    )
    # tightest faithful stop tolerance; the documented solver override route
    config = SolverConfig(eta_factor=1e-8)
    t0 = time.perf_counter()
    results = run_experiment(grid, config, jobs=JOBS)
    elapsed = time.perf_counter() - t0
    rate = sum(r.sparsity == 20 for r in results) / len(results)
    mean_err2 = float(np.mean([r.err2 for r in results]))
    ok = rate >= 0.9 and mean_err2 <= 1e-3 and elapsed < 120.0
    line = _verdict(
        9, ok,
        f"sparsity-20 rate {rate:.1f} (need >= 0.9), mean err2 {mean_err2:.2e} "
        f"(need <= 1e-3), runtime {elapsed:.0f}s (need < 120s); "
        f"eta_factor=1e-8 is the tightest faithful configuration",
    )
    assert ok, line


@pytest.mark.skipif(not os.environ.get("RUN_SLOW"), reason="set RUN_SLOW=1 to run the full cell")
def test_c9_full_benchmark_cell():
    grid = ExperimentGrid(
        specs=(ProblemSpec(m=512, n=2048, k=85),),
        cells=(SchemeCell("nullspace", q=0.5),),
        samples=10,
        base_seed=2024,
    )
    config = SolverConfig(eta_factor=1e-8)
    results = run_experiment(grid, config, jobs=JOBS)
    rate = sum(r.sparsity == 85 for r in results) / len(results)
    mean_err2 = float(np.mean([r.err2 for r in results]))
    ok = rate >= 0.9 and mean_err2 <= 7e-3
    line = _verdict(9, ok, f"full cell: sparsity-85 rate {rate:.1f}, mean err2 {mean_err2:.2e}")
    assert ok, line


def test_c10_nsp_scale_invariance(ex1_phi, ex2_phi):
    problems = []
    for name, phi in (("example 1", ex1_phi), ("example 2", ex2_phi)):
        vertices = l1ball_section_vertices(kernel_basis(phi)).vertices
        for k in (1, 2):
            verdict = check_nsp(phi, k).holds
            for s in (0.5, 2.0):
                scaled = max(_topk_mass(s * v, k) for v in vertices)
                if (scaled < s / 2) != verdict:
                    problems.append(f"{name} k={k} scale {s}")
    line = _verdict(10, not problems, "; ".join(problems) if problems else "verdicts stable")
    assert not problems, line
