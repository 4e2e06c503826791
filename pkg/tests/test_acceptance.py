"""The ten acceptance criteria, each printing one PASS/FAIL line."""

import itertools
import math
import sys
import time

import numpy as np

from oracles import in_schreier
from smallideals import suites
from smallideals.constructions import schreier_dyadic_family
from smallideals.diagnostics import curve_decreasing, separation_curve
from smallideals.schlumprecht import enumerate_functionals, norming_oracle, schlumprecht_norm
from smallideals.schreier import schreier_norm
from smallideals.trees import generate_params
from smallideals.vectors import SparseVector


def line(number: int, ok: bool, detail: str) -> None:
    sys.__stdout__.write(f"\n[acceptance {number:2d}] {'PASS' if ok else 'FAIL'}  {detail}\n")
    sys.__stdout__.flush()


def test_01_schlumprecht_dp_matches_oracle():
    start = time.time()
    funcs = np.array(enumerate_functionals(6, 4))
    worst = 0.0
    for w in itertools.product((0, 1, 2), repeat=6):
        x = SparseVector({i + 1: c for i, c in enumerate(w)})
        oracle = float(max((funcs @ np.array(w, dtype=float)).max(), max(w)))
        worst = max(worst, abs(schlumprecht_norm(x).value - oracle))
    elapsed = time.time() - start
    ok = worst <= 1e-9 and elapsed < 300
    line(1, ok, f"3^6 vectors, worst |DP - oracle| = {worst:.2e}, {elapsed:.1f}s")
    assert ok


def test_02_constant_one_vectors():
    worst = 0.0
    for k in range(1, 31):
        x = SparseVector({i: 1 for i in range(1, k + 1)})
        value = schlumprecht_norm(x).value
        worst = max(worst, abs(value - k / math.log2(k + 1)))
        if k <= 7:
            worst = max(worst, abs(value - norming_oracle(x, 4)))
    ok = worst <= 1e-9
    line(2, ok, f"k <= 30, worst deviation from k/log2(k+1) = {worst:.2e}")
    assert ok


def _admissible_masks(N: int, size: int) -> np.ndarray:
    sets = []
    for mask in range(1, 1 << size):
        A = tuple(i + 1 for i in range(size) if mask >> i & 1)
        if in_schreier(A, N):
            sets.append(mask)
    maximal = [m for m in sets if not any(o != m and o & m == m for o in sets)]
    return np.array([[m >> i & 1 for i in range(size)] for m in maximal], dtype=np.int64)


def test_03_schreier_dp_matches_enumeration():
    start = time.time()
    size = 12
    weights = np.array(list(itertools.product((0, 1, 2), repeat=size)), dtype=np.int64)
    mismatches = 0
    for N in (1, 2):
        masks = _admissible_masks(N, size)
        expected = np.zeros(len(weights), dtype=np.int64)
        for chunk in range(0, len(weights), 20000):
            block = weights[chunk:chunk + 20000]
            expected[chunk:chunk + 20000] = (block @ masks.T).max(axis=1)
        for w, e in zip(weights.tolist(), expected.tolist()):
            x = SparseVector({i + 1: c for i, c in enumerate(w) if c})
            if schreier_norm(x, N) != e:
                mismatches += 1
    elapsed = time.time() - start
    ok = mismatches == 0 and elapsed < 600
    line(3, ok, f"3^12 vectors x N in {{1,2}}, {mismatches} mismatches, {elapsed:.1f}s")
    assert ok


def test_04_repeated_averages_two_equivalent():
    reports = suites.sch_av_suite(seed=0, count=4, vectors=200)
    failures = sum(r["verdict"] != "pass" for r in reports)
    checks = sum(r["rhs"] for r in reports)
    ok = failures == 0 and len(reports) == 200
    line(4, ok, f"200 seeded vectors, {checks} exact checks over N = 1..3, count <= 4, {failures} failures")
    assert ok


def test_05_est_vectors_lower_bound():
    reports = suites.est_vectors_suite()
    failures = [r for r in reports if r["verdict"] != "pass"]
    above_14 = sum(not r["upper_ok"] for r in reports)
    ok = not failures
    line(5, ok, f"{len(reports)} toy cases, {len(failures)} lower-bound failures, "
                f"{above_14} cases with certified upper ratio above 14 (informational)")
    assert ok


def test_06_block_evaluation_contraction():
    reports = suites.contraction_suite(seed=0, count=500)
    failures = sum(r["verdict"] != "pass" for r in reports)
    ok = failures == 0 and len(reports) == 500
    line(6, ok, f"500 seeded block families, {failures} failures")
    assert ok


def test_07_parameter_engine_and_separation():
    start = time.time()
    reports = suites.params_suite(4)
    bad = [r for r in reports if r["verdict"] != "pass"]
    curves_ok = True
    for depth in (2, 4):
        scheme = generate_params(depth, "dyadic_scheme")
        for pair in itertools.combinations(scheme.leaves(), 2):
            rows = separation_curve(scheme, pair)
            if not rows:
                continue
            curves_ok &= curve_decreasing(rows) and all(r["within_28_over_N"] == "pass" for r in rows)
    elapsed = time.time() - start
    ok = not bad and curves_ok and elapsed < 60
    line(7, ok, f"depths 1-4 all modes: {len(bad)} failing or indeterminate reports; "
                f"separation curves decreasing and <= 28/N: {curves_ok}; {elapsed:.1f}s")
    assert ok


def test_08_schreier_dyadic_family():
    outcomes, witnesses = [], 0
    for N in (1, 2):
        for depth in range(1, 6):
            try:
                reports = suites.sch_dyadic_suite(depth, N)
            except ValueError as exc:
                outcomes.append((N, depth, f"error: {exc}"))
                continue
            rij = [r for r in reports if r["claim"] == "rij certificate"]
            missing = sum(r["verdict"] != "pass" for r in rij)
            broken = [r for r in reports if r["claim"] != "rij certificate" and r["verdict"] == "fail"]
            if N == 1:
                witnesses += sum(r["claim"] == "no domination at constant C" and r["verdict"] == "pass"
                                 for r in reports)
            status = "ok" if not (missing or broken) else f"{missing}/{len(rij)} pairs lack rij, {len(broken)} broken"
            outcomes.append((N, depth, status))
    failing = [o for o in outcomes if o[2] != "ok"]
    ok = not failing and witnesses > 0
    summary = "; ".join(f"N={n} d={d}: {s[:48]}" for n, d, s in failing) or "all depths and levels"
    summary += f"; N=1 domination witnesses: {witnesses}"
    line(8, ok, summary)
    assert ok


def test_09_strict_singularity_witness():
    start = time.time()
    reports = suites.witness_suite(2)
    elapsed = time.time() - start
    ok = all(r["verdict"] == "pass" for r in reports) and elapsed < 600
    norms = ", ".join(f"K={i + 1}: S2={r['lhs'][0]}, S1={r['lhs'][1]}" for i, r in enumerate(reports))
    line(9, ok, f"{norms}, {elapsed:.2f}s")
    assert ok


def test_10_biorthogonality():
    reports = suites.biorthogonality_suite()
    failures = sum(r["verdict"] != "pass" for r in reports)
    ok = failures == 0
    line(10, ok, f"{len(reports)} toy operators, every f(x) = 1 and T x_m = e_m exactly, {failures} failures")
    assert ok
