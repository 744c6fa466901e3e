"""Acceptance gate. Each test records one PASS/FAIL line in the terminal summary."""

import json
import math
import subprocess
import sys
import time

import numpy as np

from bettiwalk import SpectralParams, instances
from bettiwalk.io import write_complex
from bettiwalk.chebyshev import approximation_degree, build_expansion, estimate_betti
from bettiwalk.laplacian import laplacian_row
from bettiwalk.oracle import dense_laplacian, exact_betti, exact_spectrum, exact_trace_power, oracle_params
from bettiwalk.walks import column_norm_bound, estimate_trace_power, hoeffding_budget

from conftest import ACCEPTANCE_LINES
from families import clique_family, general_family, small_estimator_instances

FIFTY = general_family(25, seed=101) + clique_family(25, seed=202)


def record(number, title, passed, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}: {detail}")
    return passed


def test_1_sparse_rows_match_dense():
    t0 = time.perf_counter()
    mismatches = checked = 0
    for cplx in FIFTY:
        for k in range(1, cplx.dim + 1):
            faces = cplx.faces(k)
            dense = dense_laplacian(cplx, k)
            for a, f in enumerate(faces):
                row = laplacian_row(cplx, f).entries()
                sparse = [row.get(g, 0) for g in faces]
                checked += 1
                mismatches += sparse != dense[a].tolist()
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 60
    assert record(1, "sparse Laplacian rows", ok, f"{checked} rows, {mismatches} mismatches, {elapsed:.1f}s")


def test_2_row_and_spectrum_facts():
    violations = checked = 0
    for cplx in FIFTY:
        n = cplx.n
        for k in range(1, cplx.dim + 1):
            for f in cplx.faces(k):
                row = laplacian_row(cplx, f)
                checked += 1
                violations += row.diagonal != cplx.up_degree(f) + k + 1
                violations += row.diagonal > n
                violations += len(row.off_diagonal) > (n - k - 1) * (k + 1)
            lam = exact_spectrum(cplx, k).lambda_max
            violations += not (cplx.max_up_degree(k) + k + 1 - 1e-9 <= lam <= n + 1e-9)
    assert record(2, "diagonal, sparsity and lambda_max bounds", violations == 0, f"{checked} rows, {violations} violations")


def test_3_clique_structure():
    graphs = clique_family(30, seed=303)
    violations = checked = 0
    for g in graphs:
        assert g.n <= 12
        for k in range(1, g.dim + 1):
            lam = exact_spectrum(g, k).lambda_max
            params = SpectralParams(lam)
            for f in g.faces(k):
                row = laplacian_row(g, f, params)
                checked += 1
                violations += 1 + len(row.off_diagonal) > g.n - k - row.up_degree
                violations += row.h_column_norm > 2 * g.n / lam + 1e-12
    assert record(3, "clique sparsity and column norms", violations == 0, f"{checked} rows, {violations} violations")


def test_4_unbiasedness():
    t0 = time.perf_counter()
    cells = hits = 0
    misses = []
    for name, cplx, k in small_estimator_instances():
        assert cplx.num_faces(k) <= 50
        params = oracle_params(cplx, k)
        for z in range(1, 5):
            exact = exact_trace_power(cplx, k, z, params.lambda_hat)
            est = estimate_trace_power(cplx, k, z, params, 100_000, np.random.default_rng(1000 * cells + 17))
            cells += 1
            if abs(est.mean - exact) <= 4 * est.empirical_std_error + 1e-12:
                hits += 1
            else:
                misses.append(f"{name} z={z}")
    elapsed = time.perf_counter() - t0
    ok = hits >= 38 and elapsed < 300
    detail = f"{hits}/{cells} cells within 4 SE, {elapsed:.1f}s" + (f" (missed {', '.join(misses)})" if misses else "")
    assert record(4, "walk estimator unbiased", ok, detail)


def test_5_hoeffding_guarantee():
    delta, phi = 0.1, 0.05
    cases = small_estimator_instances()[:5]
    worst = 40
    report = []
    for name, cplx, k in cases:
        params = oracle_params(cplx, k)
        bound = column_norm_bound(cplx, k, params)
        for z in (1, 2, 3):
            exact = exact_trace_power(cplx, k, z, params.lambda_hat)
            budget = hoeffding_budget(bound, z, delta, phi)
            seeds = np.random.SeedSequence([5, z, len(report)]).spawn(40)
            good = sum(
                abs(estimate_trace_power(cplx, k, z, params, budget, np.random.default_rng(s)).mean - exact) <= delta
                for s in seeds
            )
            report.append(good)
            worst = min(worst, good)
    ok = worst >= 36
    assert record(5, "Hoeffding sample budget", ok, f"{len(report)} cells, worst cell {worst}/40 within delta")


def sandwich_cases():
    out = [(c, k) for c in FIFTY for k in range(0, c.dim + 1) if c.num_faces(k) <= 200]
    out += [(c, k) for _, c, k in instances.benchmark_set()]
    return out


def test_6_power_sandwich():
    violations = checked = 0
    for cplx, k in sandwich_cases():
        s = exact_spectrum(cplx, k)
        d_k = cplx.num_faces(k)
        beta = exact_betti(cplx, k)
        lam = s.lambda_max if s.lambda_max > 0 else 1.0
        gamma = 1.0 if s.gap is None else s.gap / lam
        for eps in (0.1, 0.01):
            r = math.ceil(math.log(1 / eps) / gamma)
            trace = exact_trace_power(cplx, k, r, lam) * d_k
            checked += 1
            violations += not (beta - 1e-8 <= trace <= beta + eps * d_k + 1e-8)
    assert record(6, "trace of H^r sandwich", violations == 0, f"{checked} (instance, k, eps) cases, {violations} violations")


def test_7_chebyshev_suite():
    violations = checked = 0
    worst_exact = 0.0
    for r in range(5, 61):
        for dc in (0.1, 0.01):
            # for small r the degree formula exceeds r; degree r is then exact
            d = min(r, approximation_degree(r, dc))
            e = build_expansion(r, d)
            checked += 1
            violations += e.grid_error() > dc
            violations += any(abs(b) > 2 ** (3 * d) for b in e.b)
        worst_exact = max(worst_exact, build_expansion(r, r).grid_error())
    violations += worst_exact > 1e-10
    detail = f"{checked} (r, delta) pairs, {violations} violations, worst d=r error {worst_exact:.1e}"
    assert record(7, "Chebyshev truncation", violations == 0, detail)


def test_8_end_to_end():
    t0 = time.perf_counter()
    eps = 0.25
    octa = instances.octahedron()
    octa_ok = exact_betti(octa, 2) == 1 and octa.num_faces(2) == 8
    results = []
    for name, cplx, k in instances.benchmark_set():
        truth = exact_betti(cplx, k) / cplx.num_faces(k)
        params = oracle_params(cplx, k)
        good = sum(
            abs(estimate_betti(cplx, k, params, eps, np.random.default_rng(seed)).nu_tilde - truth) <= eps
            for seed in range(20)
        )
        results.append(f"{name} {good}/20")
    elapsed = time.perf_counter() - t0
    ok = octa_ok and all(int(r.split()[-1].split("/")[0]) >= 19 for r in results) and elapsed < 600
    detail = ", ".join(results) + f"; octahedron beta_2=1 {'confirmed' if octa_ok else 'NOT confirmed'}, {elapsed:.1f}s"
    assert record(8, "end-to-end Betti estimate", ok, detail)


def test_9_cli_reproducible(tmp_path):
    path = tmp_path / "octa.txt"
    write_complex(instances.octahedron(), path)
    cmd = [sys.executable, "-m", "bettiwalk", "estimate", str(path), "--k", "2", "--seed", "11", "--workers", "2"]
    outs = []
    for _ in range(2):
        proc = subprocess.run(cmd, capture_output=True, text=True, check=True)
        data = json.loads(proc.stdout)
        data.pop("wall_time")
        outs.append(json.dumps(data, sort_keys=True).encode())
    assert record(9, "CLI estimate reproducible", outs[0] == outs[1], f"{len(outs[0])} bytes, identical={outs[0] == outs[1]}")
