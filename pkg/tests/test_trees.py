from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from smallideals.towers import Enclosure, Int, Pow2m1, cmp, rat, tower_to_json
from smallideals.trees import (
    DyadicScheme,
    branching_product,
    build_core_tree,
    check_conditions,
    check_coupling,
    check_scheme,
    coeffs,
    coupled_levels,
    dominant_is_earlier,
    generate_params,
    scheme_pairs,
    uniform_core_tree,
)


def exact(e: Enclosure):
    assert e.is_exact
    return e.lo.rat


def test_build_examples():
    t = build_core_tree([2, 2, 2], [], 1)
    assert t.levels == [0, 1, 1]
    c, d = coeffs(t, 1)
    assert c.contains(1) is False and cmp(c.lo, rat(F(63, 100))) > 0
    t = build_core_tree([3], [], 1)
    assert [exact(x) for x in coeffs(t, 1)] == [F(1, 2), F(2, 3)]
    t = build_core_tree([Pow2m1(Int(4))], [], 1)
    assert exact(coeffs(t, 1)[0]) == F(1, 4)
    with pytest.raises(ValueError, match="insufficient parameters"):
        build_core_tree([2], [], 2)


def test_coeff_examples():
    t = build_core_tree([3, 1, 1, 1], [], 2)
    assert [exact(x) for x in coeffs(t, 0)] == [1, 1]
    u = uniform_core_tree([Pow2m1(Int(4)), Pow2m1(Int(30))])
    assert exact(coeffs(u, u.first_at_level(2))[0]) == F(1, 120)
    with pytest.raises((ValueError, IndexError)):
        coeffs(t, 10 ** 6)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=3, max_size=3))
def test_c_d_product_brackets_one(ms):
    t = uniform_core_tree(ms)
    for j in t.nodes_at_level(2):
        c, d = coeffs(t, j)
        assert (c * d * branching_product(t, j)).contains(1)


def test_condition_examples():
    t = build_core_tree([3, 15, 15, 15], [], 1)
    rep = check_conditions(t, ["F4", "F7"])
    verdicts = {(e["condition"], e["index"]): e["verdict"] for e in rep["results"]}
    assert verdicts[("F4", 1)] == "pass"
    assert verdicts[("F7", 1)] == "fail"


def test_generate_single_examples():
    t1 = generate_params(1)
    assert tower_to_json(t1.m[0]) == {"pow2m1": 4}
    t2 = generate_params(2)
    assert tower_to_json(t2.m[1]) == {"pow2m1": 30}
    with pytest.raises(ValueError, match="tower budget"):
        generate_params(5)


@pytest.mark.parametrize("depth", [1, 2, 3, 4])
def test_generated_parameters_pass(depth):
    rep = check_conditions(generate_params(depth), which=("F4", "F5", "F6", "F7"))
    assert rep["passed"] and rep["indeterminate"] == 0
    T, R = generate_params(depth, "coupled_pair")
    for N in range(1, depth):
        rep = check_coupling(T, R, N)
        assert rep["passed"] and rep["indeterminate"] == 0
    rep = check_scheme(generate_params(depth, "dyadic_scheme"))
    assert rep["passed"] and rep["indeterminate"] == 0


def test_generation_is_deterministic_and_round_trips():
    a = generate_params(3, "dyadic_scheme")
    b = generate_params(3, "dyadic_scheme")
    assert a.to_json() == b.to_json()
    assert DyadicScheme.from_json(a.to_json()).to_json() == a.to_json()


def test_coupling_examples():
    t = build_core_tree([15, 1, 1], [1, 1, 1], 1)
    r = build_core_tree([1, 1], [], 1)
    rep = check_coupling(t, r, 1)
    assert rep["results"][0]["verdict"] == "pass"
    high_q = build_core_tree([15, 1, 1], [40, 1, 1], 1)
    rep = check_coupling(high_q, build_core_tree([3, 1, 1, 1], [], 1), 1)
    assert {e["condition"]: e["verdict"] for e in rep["results"]}["L2-lower"] == "fail"
    with pytest.raises(ValueError, match="insufficient depth"):
        check_coupling(t, r, 3)


def test_dyadic_direction_pattern():
    assert coupled_levels(6) == [2, 4, 6]
    assert dominant_is_earlier(4) and not dominant_is_earlier(2)
    pairs = scheme_pairs(generate_params(2, "dyadic_scheme"), 2)
    assert ("10", "00") in pairs and all(a[:-1] != b[:-1] for a, b in pairs)
