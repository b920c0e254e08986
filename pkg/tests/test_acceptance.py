"""Acceptance criteria 1-9, each at its stated tolerance and runtime budget.

Every test records one PASS/FAIL line that is printed in the terminal
summary, whether or not the assertion below it holds.
"""
import time

import numpy as np
import pytest

from relent import published
from relent.analysis import (
    ContinuityInput,
    additivity_check,
    continuity_bound,
    lambda_audit,
    mregs_balance,
    necessary_residual,
)
from relent.entropy import es_bc_closed_form, necnew_rhs, relative_entropy
from relent.qlinalg import DensityMatrix, is_ppt, partial_transpose_array, trace_norm
from relent.reeopt import (
    OptimizerConfig,
    _MixtureProblem,
    constrained_cross_entropy,
    lemma2_certificate,
    ree_constrained,
    ree_mixture,
    stationarity_inverse,
)
from relent.states import StateFamilyParams, lambda_reduced, reduced, w_reduced, w_state
from relent.symmetry import ConstrainedSigmaParams, constrained_sigma, twirl, w_ab_symmetry_group

from conftest import bell_state, random_density, random_state, record_criterion

CASES = 1000


@pytest.fixture(scope="module")
def rho_ab():
    return w_reduced(StateFamilyParams.w(e2=2 / 3, f2=1 / 6), "AB")


def test_criterion_1_headline_value():
    t0 = time.perf_counter()
    params = ConstrainedSigmaParams(*published.SIGMA_XYZ)
    value = relative_entropy(stationarity_inverse(params), constrained_sigma(params))
    elapsed = time.perf_counter() - t0
    err = abs(value - published.ES_RHO_A)
    ok = err <= 1e-9 and elapsed < 1.0
    record_criterion(1, ok, f"E_S(rho_a) = {value:.12f}, |err| = {err:.2e} (tol 1e-9), {elapsed:.3f} s")
    assert err <= 1e-9
    assert elapsed < 1.0


def test_criterion_2_constrained_optimizer(rho_ab):
    t0 = time.perf_counter()
    res = ree_constrained(rho_ab)
    elapsed = time.perf_counter() - t0
    err = abs(res.value - published.ES_RHO_A)
    xyz = np.array([res.params[k] for k in "xyz"])
    perr = float(np.max(np.abs(xyz - np.array(published.SIGMA_XYZ))))
    ok = err <= 1e-5 and perr <= 1e-5 and elapsed < 10.0
    record_criterion(2, ok, f"value {res.value:.10f} (|err| {err:.2e}), max param err {perr:.2e} "
                            f"(tol 1e-5), {elapsed:.3f} s")
    assert err <= 1e-5
    assert perr <= 1e-5
    assert elapsed < 10.0


def test_criterion_3_prediction_mismatch(rho_ab):
    t0 = time.perf_counter()
    prediction = necnew_rhs(1 / 6)
    computed = ree_constrained(rho_ab).value
    residual = necessary_residual(1 / 6, computed)
    elapsed = time.perf_counter() - t0
    four_sig = float(f"{prediction:.4g}")
    ok = four_sig == 0.3167 and abs(residual - 0.038) < 5e-4 and elapsed < 1.0
    record_criterion(3, ok, f"prediction {prediction:.6f} -> {four_sig}, residual {residual:+.5f} "
                            f"(expected +0.038), {elapsed:.3f} s")
    assert four_sig == 0.3167
    assert abs(residual - 0.038) < 5e-4
    assert elapsed < 1.0


def test_criterion_4_continuity_bound():
    t0 = time.perf_counter()
    delta = trace_norm(published.PERTURBATION)
    bound = continuity_bound(ContinuityInput(delta, 4))
    elapsed = time.perf_counter() - t0
    ok = 2.8e-8 <= bound <= 3.4e-8 and elapsed < 1.0
    record_criterion(4, ok, f"delta {delta:.4e}, bound {bound:.4e} in [2.8e-8, 3.4e-8], {elapsed:.3f} s")
    assert 2.8e-8 <= bound <= 3.4e-8
    assert elapsed < 1.0


def test_criterion_5_closed_form_cross_validation():
    t0 = time.perf_counter()
    grid = [round(0.05 * k, 2) for k in range(1, 10)]
    errors = []
    for f2 in grid:
        rho = w_reduced(StateFamilyParams.w(f2=f2), "BC")
        errors.append(abs(ree_mixture(rho).value - es_bc_closed_form(f2)))
    bell = ree_mixture(bell_state()).value
    elapsed = time.perf_counter() - t0
    worst = max(errors)
    ok = worst <= 1e-4 and abs(bell - 1.0) <= 1e-4 and elapsed < 120.0
    record_criterion(5, ok, f"max grid err {worst:.2e}, Bell {bell:.8f} (tol 1e-4), {elapsed:.1f} s")
    assert worst <= 1e-4
    assert abs(bell - 1.0) <= 1e-4
    assert elapsed < 120.0


def test_criterion_6_symmetric_point():
    t0 = time.perf_counter()
    psi = w_state(StateFamilyParams.w(e2=1 / 3, f2=1 / 3))
    values = {}
    for pair in ("AB", "AC", "BC"):
        values[pair] = (ree_mixture(reduced(psi, pair)).value, "mixture")
    rep = mregs_balance(psi, values)
    elapsed = time.perf_counter() - t0
    worst = max(abs(r) for r in rep.residuals)
    ok = worst <= 1e-3 and rep.consistent and elapsed < 30.0
    record_criterion(6, ok, f"max residual {worst:.2e} (tol 1e-3), consistent={rep.consistent}, "
                            f"{elapsed:.1f} s")
    assert worst <= 1e-3
    assert rep.consistent
    assert elapsed < 30.0


def test_criterion_7_two_copy_additivity(rho_ab):
    t0 = time.perf_counter()
    rep = additivity_check(rho_ab)
    elapsed = time.perf_counter() - t0
    ok = abs(rep.gap) <= 1e-3 and elapsed <= 600.0
    record_criterion(7, ok, f"gap {rep.gap:+.6f} (two-copy {rep.two_copy:.9f}, 2x single "
                            f"{2 * rep.single_copy:.9f}; tol 1e-3), {elapsed:.1f} s")
    assert abs(rep.gap) <= 1e-3
    assert elapsed <= 600.0


def test_criterion_8_lambda_audit():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    rows, problems = [], []
    for a2 in rng.uniform(0.02, 0.98, size=10):
        params = StateFamilyParams.lambda_(a2=a2)
        bc_ok, bc_min = is_ppt(lambda_reduced(params, "BC"))
        ab_ok, _ = is_ppt(lambda_reduced(params, "AB"))
        audit = lambda_audit(a2)
        rows.append(audit)
        if not (bc_ok and bc_min >= -1e-10):
            problems.append(f"a2={a2:.3f}: BC not PPT")
        if ab_ok:
            problems.append(f"a2={a2:.3f}: AB is PPT")
        if not np.isfinite(audit.prediction) or audit.gap != audit.upper_bound - audit.prediction:
            problems.append(f"a2={a2:.3f}: prediction/gap not reported")
    elapsed = time.perf_counter() - t0
    gaps = [r.gap for r in rows]
    ok = not problems and elapsed < 300.0
    record_criterion(8, ok, f"10 draws, gaps in [{min(gaps):.4f}, {max(gaps):.4f}], "
                            f"{len(problems)} problems, {elapsed:.1f} s")
    assert not problems, problems
    assert elapsed < 300.0


def _fd(fun, x, h=1e-6):
    g = np.empty_like(x)
    for i in range(x.size):
        d = np.zeros_like(x)
        d[i] = h
        g[i] = (fun(x + d) - fun(x - d)) / (2 * h)
    return g


def test_criterion_9_property_suites():
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    failures = {}

    def check(name, cond):
        failures.setdefault(name, 0)
        if not cond:
            failures[name] += 1

    group = w_ab_symmetry_group()
    for _ in range(CASES):
        # partial transpose is an involution, on either factor and unequal dims
        dims = [(2, 2), (2, 3), (3, 2)][rng.integers(3)]
        n = dims[0] * dims[1]
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        sys = int(rng.integers(2))
        check("pt involution", np.array_equal(partial_transpose_array(partial_transpose_array(a, dims, sys), dims, sys), a))

        sigma = random_state(rng, rank=int(rng.integers(1, 5)))
        once = twirl(sigma, group)
        check("twirl idempotent", np.max(np.abs(twirl(once, group).data - once.data)) <= 1e-14)

        rho = w_reduced(StateFamilyParams.w(f2=rng.uniform(0.0, 0.5)), "AB")
        check("twirl non-increasing", relative_entropy(rho, once) <= relative_entropy(rho, sigma) + 1e-10)

        r1, r2, s1, s2 = (random_state(rng) for _ in range(4))
        check("non-negativity", relative_entropy(r1, s1) >= 0.0)
        p = rng.uniform()
        mix_r = DensityMatrix(p * r1.data + (1 - p) * r2.data, (2, 2))
        mix_s = DensityMatrix(p * s1.data + (1 - p) * s2.data, (2, 2))
        lhs = relative_entropy(mix_r, mix_s)
        rhs = p * relative_entropy(r1, s1) + (1 - p) * relative_entropy(r2, s2)
        check("joint convexity", lhs <= rhs + 1e-12)

        # constrained gradient at a feasible interior point
        while True:
            x, y, z, u = rng.dirichlet(np.ones(4))
            if min(x, y, z, u) > 0.02 and x * u > 1.1 * y * z:
                break
        _, g = constrained_cross_entropy(rho.data, x, y, z)
        fd = _fd(lambda q: constrained_cross_entropy(rho.data, *q, grad=False)[0], np.array([x, y, z]))
        check("constrained gradient", np.linalg.norm(g - fd) <= 1e-5 * np.linalg.norm(fd))

        # mixture gradient at a random ansatz point
        problem = _MixtureProblem(random_density(rng), (2, 2), 4)
        theta = problem.random_start(rng, 0.5)
        _, g = problem(theta)
        fd = _fd(lambda q: problem(q)[0], theta)
        check("mixture gradient", np.linalg.norm(g - fd) <= 1e-5 * np.linalg.norm(fd))

    # boundary certificate on every converged NPT run
    config = OptimizerConfig(restarts=1)
    npt_runs = converged_runs = 0
    while npt_runs < CASES:
        rho = random_state(rng, rank=int(rng.integers(1, 5)))
        if is_ppt(rho)[0]:
            continue
        npt_runs += 1
        res = ree_mixture(rho, config)
        if res.converged:
            converged_runs += 1
            check("boundary certificate", lemma2_certificate(res, 1e-6))

    elapsed = time.perf_counter() - t0
    bad = {k: v for k, v in failures.items() if v}
    ok = not bad and elapsed < 300.0
    record_criterion(9, ok, f"{len(failures)} properties x {CASES} cases, {converged_runs}/{npt_runs} NPT runs "
                            f"converged, failures {bad or 'none'}, {elapsed:.1f} s")
    assert not bad, bad
    assert elapsed < 300.0
