"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines; every
tolerance is pinned here, not configured elsewhere.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

import ripramsey as rr
from ripramsey.klbound import batch_trial_stats

TOL_PROP = 1e-9  # property-suite tolerance
TOL_EIG = 1e-12  # eigen-solver / float cross-check tolerance


def _report(criterion, ok, detail):
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {criterion}: {detail}"


# --- shared runs -----------------------------------------------------------

DEVORE_CASES = [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (7, 2)]
RANDOM_WHITE_SEEDS = list(range(20))  # n cycles {4, 8, 16}, p = 40
RIP_SEEDS = list(range(20))  # n = 8, p = 14, s = 7


@pytest.fixture(scope="module")
def devore_runs():
    """Exact two-color colorings plus exact white/blue cliques per case."""
    runs = []
    for z, r in DEVORE_CASES:
        params = rr.DeVoreParams(z=z, r=r)
        coloring = rr.color_edges_exact_devore(params)
        white = rr.max_clique_exact(rr.ColorClassGraph.from_coloring(coloring, rr.WHITE))
        blue = rr.max_clique_exact(rr.ColorClassGraph.from_coloring(coloring, rr.BLUE))
        matrix = rr.ColumnMatrix(rr.to_dense(params))
        runs.append(
            {"params": params, "coloring": coloring, "white": white,
             "blue": blue, "matrix": matrix}
        )
    return runs


@pytest.fixture(scope="module")
def random_runs():
    """Seeded random colorings with exact cliques for every color."""
    runs = []
    for seed in RANDOM_WHITE_SEEDS:
        n = (4, 8, 16)[seed % 3]
        matrix = rr.random_baseline(n, 40, seed=seed)
        coloring = rr.color_edges(matrix)
        cliques = {
            color: rr.max_clique_exact(rr.ColorClassGraph.from_coloring(coloring, color))
            for color in (rr.WHITE, rr.BLUE, rr.RED)
        }
        runs.append({"n": n, "matrix": matrix, "coloring": coloring,
                     "cliques": cliques})
    return runs


@pytest.fixture(scope="module")
def rip_runs():
    """n=8, p=14 instances with exhaustive delta at s=7; most fail delta < 1."""
    runs = []
    for seed in RIP_SEEDS:
        matrix = rr.random_baseline(8, 14, seed=seed)
        cert = rr.delta_exhaustive(matrix, 7)
        entry = {"seed": seed, "matrix": matrix, "cert": cert, "qualifies": cert.valid}
        if cert.valid:
            coloring = rr.color_edges(matrix)
            entry["coloring"] = coloring
            entry["cliques"] = {
                color: rr.max_clique_exact(
                    rr.ColorClassGraph.from_coloring(coloring, color))
                for color in (rr.BLUE, rr.RED)
            }
        runs.append(entry)
    return runs


# --- criteria --------------------------------------------------------------

def test_criterion_1_devore_structural_facts():
    params = rr.DeVoreParams(z=5, r=1)
    ok = params.n == 25 and params.p == 25
    value = 1.0 / math.sqrt(5)
    dense = rr.to_dense(params)
    for j in range(params.p):
        support = rr.column_support(rr.poly_from_index(j, params), params)
        col = dense[:, j]
        ok = ok and len(support) == 5 and len(set(support)) == 5
        ok = ok and np.count_nonzero(col) == 5
        ok = ok and all(col[row] == value for row in support)
    coherence, _ = rr.coherence_exact(params)
    ok = ok and coherence.as_fraction() == Fraction(1, 5)
    ok = ok and coherence.as_fraction() <= Fraction(params.r, params.z)
    for s in range(1, 6):
        cert = rr.rip_certificate_coherence(params, s)
        ok = ok and cert.delta_exact == Fraction(s, 5)
        ok = ok and cert.valid == (Fraction(s, 5) < 1)
    _report(1, ok, "z=5 r=1: n=p=25, 5 nonzeros of 1/sqrt(5) per column, "
                   "coherence exactly 1/5, certificate delta = s/5")


def test_criterion_2_devore_coherence_z7():
    params = rr.DeVoreParams(z=7, r=2)
    pairs = params.p * (params.p - 1) // 2
    coherence, witness = rr.coherence_exact(params)
    ok = pairs == 58653
    ok = ok and coherence.as_fraction() == Fraction(2, 7)
    ok = ok and coherence.as_fraction() == Fraction(params.r, params.z)  # attained
    wi = rr.inner_product_exact(
        rr.poly_from_index(witness[0], params),
        rr.poly_from_index(witness[1], params), params)
    ok = ok and wi.as_fraction() == Fraction(2, 7)

    matrix = rr.ColumnMatrix(rr.to_dense(params))
    cert = rr.delta_exhaustive(matrix, 2)
    ok = ok and cert.support_count == 58653
    # s=2 eigenvalues are 1 +- |<u_i, u_j>|: the exhaustive delta equals the
    # max pair coherence 2/7 up to eigen-solver precision
    ok = ok and abs(cert.delta - 2 / 7) <= TOL_EIG
    gram = matrix.gram()
    max_pair = float(np.max(np.abs(gram - np.diag(np.diag(gram)))))
    ok = ok and abs(cert.delta - max_pair) <= TOL_EIG
    _report(2, ok, f"z=7 r=2: coherence 2/7 over {pairs} pairs, bound attained, "
                   f"exhaustive s=2 delta {cert.delta:.15f} = 2/7")


def test_criterion_3_pair_coherence_property_suite():
    trials = 1000
    failures = 0
    for n in range(1, 21):
        bound = rr.kl_lower_bound(n)
        max_abs, square_sum = batch_trial_stats(n, trials, seed=0)
        failures += int(np.sum(max_abs < bound - TOL_PROP))
        failures += int(np.sum(square_sum < n - TOL_PROP))
    ok = failures == 0
    _report(3, ok, f"20000 trials (1000 per n in 1..20): coherence >= "
                   f"1/sqrt(2(2n-1)) and trace sum >= n, failures={failures}")


def test_criterion_4_white_bound(devore_runs, random_runs):
    violations = []
    for run in devore_runs:
        params = run["params"]
        if not (run["white"].exact and run["white"].size < 2 * params.n):
            violations.append(f"devore z={params.z} r={params.r}")
    for seed, run in zip(RANDOM_WHITE_SEEDS, random_runs):
        white = run["cliques"][rr.WHITE]
        if not (white.exact and white.size < 2 * run["n"]):
            violations.append(f"random seed={seed}")
    ok = not violations
    _report(4, ok, f"exact white max < 2n for {len(devore_runs)} colorings "
                   f"(z in 3,5,7) and {len(random_runs)} random matrices; "
                   f"violations={violations}")


def test_criterion_5_signed_bounds_under_verified_rip(rip_runs):
    qualifying = [run for run in rip_runs if run["qualifies"]]
    skipped = len(rip_runs) - len(qualifying)
    violations = []
    for run in qualifying:
        for color in (rr.BLUE, rr.RED):
            found = run["cliques"][color]
            if not (found.exact and (found.size - 1) ** 2 < 32):  # size < 2*sqrt(8)+1
                violations.append((run["seed"], color))
    ok = not violations
    _report(5, ok, f"n=8 p=14 s=7: {len(qualifying)}/{len(rip_runs)} qualify "
                   f"(skip rate {skipped / len(rip_runs):.0%}); blue/red <= 6 "
                   f"among qualifying, violations={violations}")


def test_criterion_6_proof_inequality(devore_runs, random_runs, rip_runs):
    checked = 0
    violations = 0
    for run in devore_runs:
        blue = run["blue"]
        if blue.size >= 2:
            check = rr.blue_clique_contradiction_check(
                run["matrix"], blue.witness, run["coloring"])
            checked += 1
            violations += not (check.lhs >= check.rhs - TOL_PROP)
    for run in random_runs:
        for color, checker in ((rr.BLUE, rr.blue_clique_contradiction_check),
                               (rr.RED, rr.red_clique_contradiction_check)):
            found = run["cliques"][color]
            if found.size >= 2:
                check = checker(run["matrix"], found.witness, run["coloring"])
                checked += 1
                violations += not (check.lhs >= check.rhs - TOL_PROP)
    for run in rip_runs:
        if not run["qualifies"]:
            continue
        for color, checker in ((rr.BLUE, rr.blue_clique_contradiction_check),
                               (rr.RED, rr.red_clique_contradiction_check)):
            found = run["cliques"][color]
            if found.size >= 2:
                check = checker(run["matrix"], found.witness, run["coloring"])
                checked += 1
                violations += not (check.lhs >= check.rhs - TOL_PROP)
    ok = violations == 0 and checked > 0
    _report(6, ok, f"isometry-defect inequality on {checked} blue/red cliques "
                   f"from criteria 4-5 runs, violations={violations}")


def test_criterion_7_two_color_agreement(tmp_path):
    mismatches = 0
    red_edges = 0
    for z, r in [(2, 1), (3, 1), (3, 2), (5, 1), (5, 2), (7, 2)]:
        params = rr.DeVoreParams(z=z, r=r)
        exact = rr.color_edges_exact_devore(params)
        red_edges += exact.counts()[rr.RED]
        path = tmp_path / f"devore_{z}_{r}.txt"
        rr.save_dense(rr.ColumnMatrix(rr.to_dense(params)), path)
        floated = rr.color_edges(rr.load_dense(path))
        mismatches += int(np.sum(exact.colors != floated.colors))
        red_edges += floated.counts()[rr.RED]
    ok = mismatches == 0 and red_edges == 0
    _report(7, ok, f"two-color variant: zero red edges, exact vs exported-dense "
                   f"float path mismatches={mismatches}")


def test_criterion_8_regime_arithmetic():
    report = rr.regime_calculator(101, 0.5)
    ok = (report.r, report.n, report.s) == (11, 10201, 4)
    ok = ok and report.s == (101 // (2 * 11))
    ok = ok and report.p == 101**12
    ok = ok and report.polylog_ok
    _report(8, ok, f"z=101 eps=0.5: r={report.r} n={report.n} s={report.s}, "
                   f"log n {report.log_n:.4f} <= {report.polylog_rhs_log:.4f}")


def test_criterion_9_oracle_equivalence():
    clique_mismatches = 0
    for seed in range(50):
        p = 8 + 2 * (seed % 5)  # 8..16
        n = (3, 4, 6)[seed % 3]
        coloring = rr.color_edges(rr.random_baseline(n, p, seed=seed))
        for color in (rr.WHITE, rr.BLUE, rr.RED):
            graph = rr.ColorClassGraph.from_coloring(coloring, color)
            if rr.max_clique_exact(graph).size != rr.max_clique_brute(graph).size:
                clique_mismatches += 1

    delta_mismatches = 0
    for seed in range(10):
        matrix = rr.random_baseline(5, 8, seed=100 + seed)
        full = rr.delta_exhaustive(matrix, 3)
        covered = rr.delta_sampled(matrix, 3, trials=math.comb(8, 3), seed=seed)
        if covered.delta != full.delta:
            delta_mismatches += 1
    ok = clique_mismatches == 0 and delta_mismatches == 0
    _report(9, ok, f"exact vs brute force on 150 color classes (p <= 16): "
                   f"{clique_mismatches} mismatches; full-coverage sampled vs "
                   f"exhaustive delta: {delta_mismatches} mismatches")
