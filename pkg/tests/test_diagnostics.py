import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from smallideals.constructions import repeated_average_sequence
from smallideals.diagnostics import (
    SeqOperator,
    apply_operator,
    block_contraction,
    ck_bracket,
    dk_surrogate,
    dominates,
    norm_j,
    random_block_family,
    rij_certificate,
    sch_av_check,
    separation_curve,
    toy_operator,
    validate_rij,
    verify_est_functionals2,
    verify_est_vectors,
)
from smallideals.schlumprecht import Leaf, Node
from smallideals.trees import build_core_tree, generate_params, uniform_core_tree
from smallideals.vectors import IntervalSet, SparseVector

L3 = math.log2(3)


def unit_operator(n):
    return SeqOperator([Leaf(1, i) for i in range(1, n + 1)])


def test_apply_operator_examples():
    T = SeqOperator([Node(2, (Leaf(1, 1), Leaf(1, 2)))])
    out = apply_operator(T, SparseVector({1: 1, 2: 1}))
    assert float(out[1]) == pytest.approx(2 / L3)
    T = toy_operator(uniform_core_tree([2, 3]), [1, 1, 2])
    assert apply_operator(T, T.companions[1]) == SparseVector({2: 1})
    assert apply_operator(T, SparseVector()) == SparseVector()


def test_successive_supports_enforced():
    with pytest.raises(ValueError):
        SeqOperator([Leaf(1, 2), Leaf(1, 1)])


def test_norm_j_examples():
    T = unit_operator(3)
    y = SparseVector({1: 3, 2: 1, 3: 2})
    assert norm_j(y, T, 2) == 5
    assert norm_j(y, T, 7) == 6
    assert norm_j(SparseVector(), T, 2) == 0


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=8))
def test_norm_j_over_j_non_increasing(values):
    T = unit_operator(len(values))
    y = SparseVector({i + 1: v for i, v in enumerate(values)})
    ratios = [norm_j(y, T, j) / j for j in range(1, len(values) + 2)]
    assert all(b <= a + 1e-12 for a, b in zip(ratios, ratios[1:]))


def test_dk_examples():
    units = [SparseVector.unit(i) for i in range(1, 5)]
    assert dk_surrogate(units, 3)["value"] == pytest.approx(1.5)
    assert dk_surrogate(units, 1)["value"] == pytest.approx(1)
    ys = [b.vector() for b in repeated_average_sequence(3)]
    assert dk_surrogate(ys, 3, ("schreier", 1))["value"] <= 2
    with pytest.raises(ValueError, match="k too large"):
        dk_surrogate(units, 5)


def test_ck_examples():
    b = ck_bracket(unit_operator(5), 3)["bracket"]
    assert b.contains(2) and b.upper == pytest.approx(3)
    assert ck_bracket(unit_operator(2), 1)["bracket"].contains(1)
    T = toy_operator(uniform_core_tree([2, 2, 2]), [2, 2, 2])
    out = ck_bracket(T, 2, level=1)
    assert out["bracket"].lower <= out["bracket"].upper


def test_ck_bracket_grows_with_candidates():
    T = toy_operator(uniform_core_tree([3, 2]), [1, 1, 2, 2])
    small = ck_bracket(SeqOperator(T.functionals), 2)["bracket"]
    full = ck_bracket(T, 2)["bracket"]
    assert full.lower >= small.lower


def test_est_vectors_examples():
    r = verify_est_vectors(uniform_core_tree([2, 2, 2]), 1, 2, height=2)
    assert r["verdict"] == "pass" and 0.5 <= r["ratio"][0] and r["ratio"][1] <= 14
    r = verify_est_vectors(uniform_core_tree([3, 3]), 1, 1)
    assert r["ratio"][0] >= 0.5
    for k in range(1, 4):
        r = verify_est_vectors(uniform_core_tree([1, 1, 1]), 1, k)
        assert r["ratio"][0] == pytest.approx(1 / math.log2(k + 1), abs=1e-9)


def test_est_functionals2_examples():
    T = toy_operator(uniform_core_tree([2, 3, 2]), [1, 1, 2])
    r = verify_est_functionals2(T, T.companions[0], 2)
    assert r["lhs"] == pytest.approx(1)
    r = verify_est_functionals2(T, SparseVector(), 2)
    assert r["lhs"] == 0 and r["rhs"] == 0 and r["verdict"] == "pass"
    rng = random.Random(3)
    y = SparseVector({i: F(rng.randint(-5, 5), 3) for i in range(1, 20)})
    r = verify_est_functionals2(T, y, 2)
    assert {"lhs", "rhs", "verdict", "hypotheses_hold"} <= set(r)


def test_block_contraction_random_families():
    rng = random.Random(7)
    for _ in range(40):
        hs = random_block_family(rng, rng.randint(1, 4), 5)
        z = SparseVector({i: rng.randint(-3, 3) for i in range(1, 30)})
        assert block_contraction(hs, z)["verdict"] == "pass"


def test_separation_examples():
    scheme = generate_params(2, "dyadic_scheme")
    rows = separation_curve(scheme, ("00", "11"))
    assert rows and all(r["within_28_over_N"] == "pass" for r in rows)
    swapped = separation_curve(scheme, ("11", "00"))
    assert [r["dominant"] for r in swapped] == [r["dominant"] for r in rows]
    with pytest.raises(ValueError, match="branches equal"):
        separation_curve(scheme, ("01", "01"))


def test_rij_examples():
    I = IntervalSet([(1, 40)])
    assert not rij_certificate(I, I, 1, 2)["found"]
    J = IntervalSet([(1, 3), (100, 136)])
    cert = rij_certificate(I, J, 1, 1)
    assert cert["found"] and cert["revalidated"] and validate_rij(cert, I, J, 1)
    with pytest.raises(ValueError, match="arity mismatch"):
        rij_certificate(I, J.select_ranks(0, 5), 1, 1)


def test_dominates_examples():
    I = list(range(1, 11))
    assert dominates(I, I, 1, C=1)["verdict"] == "inconclusive"
    spread = [2 * i for i in I]
    assert dominates(I, spread, 1, C=2)["verdict"] == "inconclusive"
    with pytest.raises(ValueError, match="arity mismatch"):
        dominates(I, spread[:-1], 1)


def test_dominates_monotone_in_c():
    I, J = list(range(1, 11)), [2 * i for i in range(1, 11)]
    hit = dominates(I, J, 1, C=1)
    assert hit["verdict"] == "pass"
    ratio = F(hit["lhs"])
    for C in (F(1, 2), F(1), ratio - F(1, 100)):
        assert dominates(I, J, 1, C=C)["verdict"] == "pass"


def test_sch_av_small_example():
    blocks = repeated_average_sequence(2)
    r = sch_av_check(blocks, [1, 1], 1)
    assert r["verdict"] == "pass" and F(r["lhs"]) == 1 and F(r["rhs"]) == 1
