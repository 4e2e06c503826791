from fractions import Fraction as F

from hypothesis import given, strategies as st

from smallideals.towers import (
    Enclosure,
    Int,
    Pow2m1,
    at_least,
    cmp,
    log2p1,
    log2_text,
    materialize,
    mul_lo,
    mul_up,
    pow2,
    rat,
    recip,
    tower,
    tower_cmp,
    tower_enclosure,
    tower_to_json,
    verdict_le,
)

SMALL = ([Int(v) for v in range(0, 40)] + [Pow2m1(Int(e)) for e in range(0, 8)]
         + [Pow2m1(Pow2m1(Int(e))) for e in range(0, 4)])


def test_tower_cmp_agrees_with_integers():
    for a in SMALL:
        for b in SMALL:
            va, vb = materialize(a, 4096), materialize(b, 4096)
            assert tower_cmp(a, b) == (va > vb) - (va < vb)


def test_tower_json_round_trip_and_materialize():
    t = tower({"pow2m1": {"pow2m1": 3}})
    assert t == Pow2m1(Pow2m1(Int(3)))
    assert tower(tower_to_json(t)) == t
    assert materialize(t) == 127
    assert materialize(Pow2m1(Int(100)), 64) is None


def test_log2p1_is_exact_for_pow2m1_and_encloses_ints():
    lo, hi = log2p1(Pow2m1(Int(30)))
    assert cmp(lo, rat(30)) == 0 and cmp(hi, rat(30)) == 0
    lo, hi = log2p1(Int(14))
    assert cmp(lo, rat(F(390689060, 10 ** 8))) < 0 < cmp(hi, rat(F(390689059, 10 ** 8)))


def test_huge_magnitudes_compare_exactly():
    big, bigger = pow2(rat(10 ** 6)), pow2(pow2(rat(70000)))
    assert cmp(big, bigger) < 0
    assert cmp(recip(big), rat(0)) > 0
    assert cmp(recip(big), rat(F(1, 10 ** 9))) < 0
    assert cmp(mul_lo(big, big), big) > 0
    assert cmp(mul_up(big, recip(bigger)), rat(1)) < 0
    assert log2_text(recip(bigger)).startswith("-2^(")


def test_enclosure_verdicts():
    e = Enclosure.of(Pow2m1(Pow2m1(Int(70000))))
    assert verdict_le(Enclosure.of(Int(5)), e) == "pass"
    assert verdict_le(e, Enclosure.of(Int(5))) == "fail"
    wide = Enclosure(rat(1), rat(3))
    assert verdict_le(wide, Enclosure.exact(2)) == "indeterminate"
    assert wide.contains(2) and not wide.contains(4)


def test_at_least_reaches_its_bound():
    for X in (rat(7), rat(F(9, 2)), pow2(rat(100000))):
        t = at_least(X)
        lo, _ = tower_enclosure(t)
        assert cmp(lo, X) >= 0


@given(st.integers(0, 10 ** 30), st.integers(0, 10 ** 30))
def test_enclosure_arithmetic_contains_exact_results(a, b):
    s = Enclosure.exact(a) + Enclosure.exact(b)
    p = Enclosure.exact(a) * Enclosure.exact(b)
    assert s.contains(a + b)
    assert p.contains(a * b)
    if a:
        assert Enclosure.exact(a).recip().contains(F(1, a))
