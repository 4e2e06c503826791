"""Desk-scale verification suites shared by the command line and the test harness."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable

from .constructions import (
    associated_functional,
    build_tree_vector,
    pairing_value,
    phi_certificate,
    repeated_average_sequence,
    schreier_dyadic_family,
    strict_singularity_witness,
    validate_dyadic_family,
)
from .diagnostics import (
    apply_operator,
    block_contraction,
    curve_decreasing,
    dominates,
    random_block_family,
    report,
    rij_certificate,
    sch_av_check,
    separation_curve,
    support_range,
    toy_operator,
    truncate,
    verify_est_functionals2,
    verify_est_vectors,
)
from .trees import check_conditions, check_coupling, check_scheme, generate_params, uniform_core_tree
from .vectors import SparseVector

TOY_MAX_M = 6


def toy_trees(max_m: int = TOY_MAX_M, levels=(2, 3)):
    for h in levels:
        for ms in itertools.product(range(1, max_m + 1), repeat=h):
            yield uniform_core_tree(list(ms)), ms


def est_vectors_suite(max_m: int = TOY_MAX_M) -> list[dict]:
    out = []
    for tree, ms in toy_trees(max_m):
        h = len(ms)
        for N in range(1, h):
            for k in range(1, ms[N] + 1):
                r = verify_est_vectors(tree, N, k, height=h)
                r["tree"] = list(ms)
                out.append(r)
    return out


def est_functionals2_suite(seed: int = 0, count: int = 20) -> list[dict]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        ms = [rng.randint(1, 3) for _ in range(3)]
        T = toy_operator(uniform_core_tree(ms), [1, 1, 2, 2])
        top = support_range(T.functionals[-1])[1]
        size = min(top, 50)
        y = SparseVector({j: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for j in rng.sample(range(1, top + 1), size)})
        r = verify_est_functionals2(T, y, j0=2)
        r["tree"] = ms
        out.append(r)
    return out


def contraction_suite(seed: int = 0, count: int = 500) -> list[dict]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        hs = random_block_family(rng, rng.randint(1, 6), 6)
        top = support_range(hs[-1])[1] + rng.randint(0, 2)
        z = SparseVector({j: Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for j in range(1, top + 1)})
        out.append(block_contraction(hs, z))
    return out


def sch_av_suite(seed: int = 0, count: int = 4, vectors: int = 200) -> list[dict]:
    rng = random.Random(seed)
    out = []
    for i in range(vectors):
        checks = []
        for N in (1, 2, 3):
            for c in range(1, count + 1):
                blocks = repeated_average_sequence(c, N)
                a = [Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(c)]
                checks.append(sch_av_check(blocks, a, N))
        failed = [c for c in checks if c["verdict"] != "pass"]
        out.append(report("repeated averages are 2-equivalent to e_{s_m}", len(checks) - len(failed),
                          len(checks), "fail" if failed else "pass", witness=failed[:1] or None, item=i))
    return out


def sch_dyadic_suite(depth: int = 5, N: int = 1, k_max: int = 4, stride: int = 1) -> list[dict]:
    """Invariants, phi certificates, rij certificates per branch pair, one domination witness."""
    fam = schreier_dyadic_family(depth, N)
    problems = validate_dyadic_family(fam)
    out = [report("dyadic family invariants", len(problems), 0, "fail" if problems else "pass",
                  witness=problems[:5] or None, depth=depth, N=N)]
    leaves = fam.leaves()[::stride]
    for b, a in itertools.permutations(leaves, 2):
        I, J = fam.branch_set(b), fam.branch_set(a)
        n = min(I.size, J.size)
        I, J = truncate(I, n), truncate(J, n)
        bad = []
        for k in range(1, k_max + 1):
            cert = rij_certificate(I, J, N, k)
            if not (cert["found"] and cert["revalidated"]):
                bad.append(k)
        # no certificate inside a finite truncation says nothing about the infinite sets
        out.append(report("rij certificate", [b, a], k_max, "inconclusive" if bad else "pass", witness=bad or None))
    if depth >= 1 and len(leaves) >= 2:
        b, a = leaves[0], leaves[-1]
        I, J = fam.branch_set(b), fam.branch_set(a)
        n = min(I.size, J.size)
        r = dominates(truncate(I, n), truncate(J, n), N, C=4)
        r["pair"] = [b, a]
        out.append(r)
        node = b
        cert = phi_certificate(fam, b, a, node)
        ok = cert["defined"] and cert["above_max"] and cert["image_in_S1"]
        out.append(report("phi(G_d) lies above max F_d and in S_1", cert, None, "pass" if ok else "fail"))
    return out


def witness_suite(K: int = 2) -> list[dict]:
    out = []
    for k in range(1, K + 1):
        w = strict_singularity_witness(2, k)
        out.append(report("||z||_S2 >= K and ||z||_S1 <= 2", [str(w.norm_top), str(w.norm_mid)], [k, 2],
                          "pass" if w.passed else "fail", witness=w.to_json()))
    return out


def separation_suite(depth: int = 2) -> tuple[list[dict], list[dict]]:
    scheme = generate_params(depth, "dyadic_scheme")
    leaves = scheme.leaves()
    rows, reports = [], []
    for b, a in itertools.combinations(leaves, 2):
        curve = separation_curve(scheme, (b, a))
        if not curve:
            continue
        within = all(r["within_28_over_N"] == "pass" for r in curve)
        ok = within and curve_decreasing(curve)
        reports.append(report("separation bound decreases and stays <= 28/N",
                              [r["bound_upper_log2"] for r in curve], "28/N", "pass" if ok else "fail",
                              pair=[b, a]))
        for r in curve:
            rows.append({"pair": f"{b}|{a}", "level": r["level"], "N": r["N"],
                         "bound_upper_log2": r["bound_upper_log2"]})
    return reports, rows


def params_suite(max_depth: int = 4) -> list[dict]:
    out = []
    for depth in range(1, max_depth + 1):
        T = generate_params(depth, "single")
        rep = check_conditions(T, which=("F4", "F5", "F6", "F7"))
        out.append(_from_condition_report("single", depth, rep))
        T, R = generate_params(depth, "coupled_pair")
        rep = check_conditions(T, which=("F4", "F5", "F6", "F7"))
        out.append(_from_condition_report("coupled_pair T", depth, rep))
        rep = check_conditions(R, which=("F4", "F5", "F6", "F7"))
        out.append(_from_condition_report("coupled_pair R", depth, rep))
        for level in range(1, depth):
            out.append(_from_condition_report("coupled_pair L", depth, check_coupling(T, R, level)))
        out.append(_from_condition_report("dyadic_scheme", depth, check_scheme(generate_params(depth, "dyadic_scheme"))))
    return out


def _from_condition_report(mode: str, depth: int, rep: dict) -> dict:
    verdict = "pass" if rep["passed"] and not rep["indeterminate"] else "fail"
    return report(f"growth and coupling conditions ({mode})", len(rep["results"]), rep["indeterminate"],
                  verdict, mode=mode, depth=depth)


def biorthogonality_suite(max_m: int = 4) -> list[dict]:
    out = []
    for tree, ms in toy_trees(max_m, levels=(3,)):
        T = toy_operator(tree, [1, 2, 2, 3])
        bad = []
        for n, x in enumerate(T.companions, start=1):
            if apply_operator(T, x) != SparseVector.unit(n):
                bad.append(n)
            value = pairing_value(x)
            if value["exact"] != 1 or not value["enclosure"].contains(1):
                bad.append(("pairing", n))
        out.append(report("f_n(x_m) = delta_nm", bad, [], "fail" if bad else "pass", tree=list(ms)))
    return out


SUITES: dict[str, Callable] = {
    "est-vectors": est_vectors_suite,
    "est-functionals2": est_functionals2_suite,
    "sch-av": sch_av_suite,
    "sch-dyadic": sch_dyadic_suite,
    "witness": witness_suite,
    "separation": separation_suite,
}
