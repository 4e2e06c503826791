"""Certified arithmetic for power-tower sized parameters.

``Mag`` is an exact non-negative number: either a rational of bounded size or
``2**(+X)`` / ``2**(-X)`` where the exponent ``X`` is itself an integer-valued
``Mag`` too large to materialise. Comparison of two ``Mag`` values is exact.
Sums, products and differences are returned as one-sided bounds (``*_up`` /
``*_lo``), which is all the inequality checks need.

``TowerNumeral`` is the user-facing parameter type: an exact integer or
``2**e - 1`` with ``e`` another ``TowerNumeral``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

# rationals must stay below 2**LIMIT_BITS in numerator and denominator
LIMIT_BITS = 1 << 16


@dataclass(frozen=True)
class Mag:
    rat: Optional[Fraction] = None
    exp: Optional["Mag"] = None
    neg: bool = False

    def __repr__(self) -> str:
        if self.rat is not None:
            return f"Mag({self.rat})"
        return f"Mag(2^{'-' if self.neg else ''}{self.exp!r})"

    @property
    def is_rat(self) -> bool:
        return self.rat is not None

    def __lt__(self, other):
        return cmp(self, other) < 0

    def __le__(self, other):
        return cmp(self, other) <= 0

    def __gt__(self, other):
        return cmp(self, other) > 0

    def __ge__(self, other):
        return cmp(self, other) >= 0


ZERO = Mag(Fraction(0))
ONE = Mag(Fraction(1))


def _fits(r: Fraction) -> bool:
    return r.numerator.bit_length() <= LIMIT_BITS and r.denominator.bit_length() <= LIMIT_BITS


def rat(value) -> Mag:
    r = Fraction(value)
    if r < 0:
        raise ValueError("Mag values are non-negative")
    if not _fits(r):
        raise OverflowError("rational too large for an exact Mag")
    return Mag(rat=r)


def _floor_log2(r: Fraction) -> int:
    """Exact floor(log2 r) for r > 0."""
    n, d = r.numerator, r.denominator
    k = n.bit_length() - d.bit_length()
    # 2**k <= n/d < 2**(k+1) after one correction step
    if (n << max(-k, 0)) < (d << max(k, 0)):
        k -= 1
    return k


def _ceil_log2(r: Fraction) -> int:
    k = _floor_log2(r)
    exact = (r == Fraction(2) ** k)
    return k if exact else k + 1


def _rat_up(r: Fraction) -> Mag:
    if _fits(r):
        return Mag(rat=r)
    return pow2(rat(_ceil_log2(r))) if r >= 1 else pow2(rat(_floor_log2(1 / r)), neg=True)


def _rat_lo(r: Fraction) -> Mag:
    if _fits(r):
        return Mag(rat=r)
    return pow2(rat(_floor_log2(r))) if r >= 1 else ZERO


def pow2(X: Mag, neg: bool = False) -> Mag:
    """Exactly ``2**X`` (or ``2**-X``) for an integer-valued ``X >= 0``."""
    if X.is_rat:
        if X.rat.denominator != 1 or X.rat < 0:
            raise ValueError("exponent must be a non-negative integer")
        if X.rat <= LIMIT_BITS - 1:
            v = Fraction(1 << int(X.rat))
            return Mag(rat=1 / v if neg else v)
    return Mag(exp=X, neg=neg)


def cmp(a: Mag, b: Mag) -> int:
    if a.is_rat and b.is_rat:
        return (a.rat > b.rat) - (a.rat < b.rat)
    if a.is_rat:
        return -cmp(b, a)
    # a is a power form with |exponent| > LIMIT_BITS
    if b.is_rat:
        if a.neg:
            return 1 if b.rat == 0 else -1
        return 1
    if a.neg != b.neg:
        return -1 if a.neg else 1
    c = cmp(a.exp, b.exp)
    return -c if a.neg else c


def mag_max(a: Mag, b: Mag) -> Mag:
    return a if cmp(a, b) >= 0 else b


def mag_min(a: Mag, b: Mag) -> Mag:
    return a if cmp(a, b) <= 0 else b


def shift_up(a: Mag, k: int) -> Mag:
    """Upper bound of ``a * 2**k``."""
    return _shift(a, k, up=True)


def shift_lo(a: Mag, k: int) -> Mag:
    return _shift(a, k, up=False)


def _shift(a: Mag, k: int, up: bool) -> Mag:
    if a.is_rat:
        r = a.rat * Fraction(2) ** k
        return _rat_up(r) if up else _rat_lo(r)
    if not a.neg:
        # 2**(X + k)
        X = add_int_up(a.exp, k) if up else add_int_lo(a.exp, k)
        return pow2(X)
    # 2**-(X - k)
    X = add_int_lo(a.exp, -k) if up else add_int_up(a.exp, -k)
    return pow2(X, neg=True)


def add_int_up(X: Mag, k: int) -> Mag:
    """Upper bound of ``X + k`` for an exponent ``X`` (result kept >= 0)."""
    if X.is_rat:
        return _rat_up(max(X.rat + k, Fraction(0)))
    if X.neg:
        raise ValueError("exponents are never below one")
    if k <= 0:
        return X
    return pow2(add_int_up(X.exp, 1))


def add_int_lo(X: Mag, k: int) -> Mag:
    if X.is_rat:
        return _rat_lo(max(X.rat + k, Fraction(0)))
    if X.neg:
        raise ValueError("exponents are never below one")
    if k >= 0:
        return X
    return pow2(add_int_lo(X.exp, -1))


def add_up(a: Mag, b: Mag) -> Mag:
    if a.is_rat and b.is_rat:
        return _rat_up(a.rat + b.rat)
    big = mag_max(a, b)
    small = mag_min(a, b)
    if small.is_rat and small.rat == 0:
        return big
    return shift_up(big, 1)


def add_lo(a: Mag, b: Mag) -> Mag:
    if a.is_rat and b.is_rat:
        return _rat_lo(a.rat + b.rat)
    return mag_max(a, b)


def sub_lo(a: Mag, b: Mag) -> Mag:
    """Lower bound of ``max(a - b, 0)``."""
    if a.is_rat and b.is_rat:
        return _rat_lo(max(a.rat - b.rat, Fraction(0)))
    if cmp(a, shift_up(b, 1)) >= 0:
        return shift_lo(a, -1)
    return ZERO


def sub_up(a: Mag, b: Mag) -> Mag:
    if a.is_rat and b.is_rat:
        return _rat_up(max(a.rat - b.rat, Fraction(0)))
    return a


def mul_up(a: Mag, b: Mag) -> Mag:
    return _mul(a, b, up=True)


def mul_lo(a: Mag, b: Mag) -> Mag:
    return _mul(a, b, up=False)


def _mul(a: Mag, b: Mag, up: bool) -> Mag:
    if (a.is_rat and a.rat == 0) or (b.is_rat and b.rat == 0):
        return ZERO
    if a.is_rat and b.is_rat:
        r = a.rat * b.rat
        return _rat_up(r) if up else _rat_lo(r)
    if a.is_rat:
        a, b = b, a
    if b.is_rat:
        k = _ceil_log2(b.rat) if up else _floor_log2(b.rat)
        return _shift(a, k, up)
    if a.neg == b.neg:
        # same direction: exponents add
        grow = up != a.neg
        X = add_up(a.exp, b.exp) if grow else add_lo(a.exp, b.exp)
        return pow2(X, neg=a.neg)
    pos, negp = (a, b) if not a.neg else (b, a)
    if cmp(pos.exp, negp.exp) >= 0:
        X = sub_up(pos.exp, negp.exp) if up else sub_lo(pos.exp, negp.exp)
        return pow2(_integral(X, up))
    X = sub_lo(negp.exp, pos.exp) if up else sub_up(negp.exp, pos.exp)
    return pow2(_integral(X, not up), neg=True)


def _integral(X: Mag, up: bool) -> Mag:
    if X.is_rat and X.rat.denominator != 1:
        return rat(math.ceil(X.rat) if up else math.floor(X.rat))
    return X


def recip(a: Mag) -> Mag:
    if a.is_rat:
        if a.rat == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return Mag(rat=1 / a.rat)
    return Mag(exp=a.exp, neg=not a.neg)


def log2_float(a: Mag) -> float:
    """Float value of log2(a); +-inf once the exponent itself overflows."""
    if a.is_rat:
        if a.rat == 0:
            return -math.inf
        n, d = a.rat.numerator, a.rat.denominator
        return _log2_int(n) - _log2_int(d)
    x = to_float(a.exp)
    return -x if a.neg else x


def log2_text(a: Mag) -> str:
    """log2(a) as text, exact in shape when the float would overflow."""
    value = log2_float(a)
    if math.isfinite(value) or a.is_rat:
        return repr(value)
    return ("-" if a.neg else "") + mag_text(a.exp)


def mag_text(a: Mag) -> str:
    if a.is_rat:
        return str(a.rat)
    return "2^(%s%s)" % ("-" if a.neg else "", mag_text(a.exp))


def _log2_int(n: int) -> float:
    shift = max(n.bit_length() - 60, 0)
    return math.log2(n >> shift) + shift


def to_float(a: Mag) -> float:
    if a.is_rat:
        try:
            return float(a.rat)
        except OverflowError:
            return math.inf
    return 0.0 if a.neg else math.inf


def mag_to_json(a: Mag):
    if a.is_rat:
        return str(a.rat)
    return {"pow2": mag_to_json(a.exp), "neg": a.neg}


# -- tower numerals ---------------------------------------------------------

@dataclass(frozen=True)
class Int:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("tower integers are non-negative")


@dataclass(frozen=True)
class Pow2m1:
    exponent: "TowerNumeral"


TowerNumeral = Union[Int, Pow2m1]


def tower(value) -> TowerNumeral:
    """Coerce ints and nested ``{"pow2m1": ...}`` dicts to a TowerNumeral."""
    if isinstance(value, (Int, Pow2m1)):
        return value
    if isinstance(value, int):
        return Int(value)
    if isinstance(value, dict) and "pow2m1" in value:
        return Pow2m1(tower(value["pow2m1"]))
    raise TypeError(f"not a tower expression: {value!r}")


def tower_to_json(t: TowerNumeral):
    if isinstance(t, Int):
        return t.value
    return {"pow2m1": tower_to_json(t.exponent)}


def materialize(t: TowerNumeral, max_bits: int = 64) -> Optional[int]:
    """Exact integer value if it fits in ``max_bits`` bits, else None."""
    if isinstance(t, Int):
        return t.value if t.value.bit_length() <= max_bits else None
    e = materialize(t.exponent, max_bits=max(max_bits.bit_length(), 16))
    if e is None or e > max_bits:
        return None
    return (1 << e) - 1


def height(t: TowerNumeral) -> int:
    return 0 if isinstance(t, Int) else 1 + height(t.exponent)


def tower_cmp(a: TowerNumeral, b: TowerNumeral) -> int:
    """Exact three-way comparison of tower numerals."""
    if isinstance(a, Int) and isinstance(b, Int):
        return (a.value > b.value) - (a.value < b.value)
    if isinstance(a, Pow2m1) and isinstance(b, Pow2m1):
        return tower_cmp(a.exponent, b.exponent)
    if isinstance(a, Pow2m1):
        return -tower_cmp(b, a)
    # v versus 2**e - 1, i.e. v + 1 versus 2**e
    v1 = a.value + 1
    bl = v1.bit_length()
    if v1 == 1 << (bl - 1):
        return -tower_cmp(b.exponent, Int(bl - 1))
    # 2**(bl-1) < v + 1 < 2**bl
    return -1 if tower_cmp(b.exponent, Int(bl)) >= 0 else 1


def tower_enclosure(t: TowerNumeral) -> tuple[Mag, Mag]:
    """Certified ``(lo, hi)`` Mag bounds of the value of ``t``."""
    if isinstance(t, Int):
        if t.value.bit_length() <= LIMIT_BITS:
            m = rat(t.value)
            return m, m
        bl = t.value.bit_length()
        return pow2(rat(bl - 1)), pow2(rat(bl))
    lo, hi = plus_one_enclosure(t)
    if lo.is_rat and hi.is_rat and lo == hi:
        return rat(lo.rat - 1), rat(hi.rat - 1)
    # 2**e - 1 >= 2**(e-1) for e >= 1
    return shift_lo(lo, -1), hi


def plus_one_enclosure(t: TowerNumeral) -> tuple[Mag, Mag]:
    """Bounds of ``t + 1``; exact powers of two for ``2**e - 1``."""
    if isinstance(t, Int):
        lo, hi = tower_enclosure(t)
        return add_lo(lo, ONE), add_up(hi, ONE)
    elo, ehi = tower_enclosure(t.exponent)
    return pow2(_integral(elo, False)), pow2(_integral(ehi, True))


def log2p1(t: TowerNumeral) -> tuple[Mag, Mag]:
    """Certified bounds of ``log2(t + 1)``; exact for ``2**e - 1``."""
    if isinstance(t, Pow2m1):
        return tower_enclosure(t.exponent)
    v1 = t.value + 1
    bl = v1.bit_length()
    if v1 == 1 << (bl - 1):
        return rat(bl - 1), rat(bl - 1)
    approx = _log2_int(v1)
    margin = 1e-9 * max(1.0, approx)
    lo = Fraction(approx - margin).limit_denominator(1 << 40)
    hi = Fraction(approx + margin).limit_denominator(1 << 40)
    # guard the float approximation with the exact bit-length bracket
    lo = max(lo, Fraction(bl - 1))
    hi = min(hi, Fraction(bl))
    return rat(lo), rat(hi)


def at_least(X: Mag) -> TowerNumeral:
    """A tower numeral whose value is at least ``X``."""
    if X.is_rat:
        return Int(math.ceil(X.rat))
    if X.neg:
        return Int(1)
    # 2**(Y+1) - 1 >= 2**Y
    return Pow2m1(at_least(add_int_up(X.exp, 1)))


def pow2m1_at_least(B: Mag) -> Pow2m1:
    """Smallest-exponent ``2**e - 1`` with value at least ``B`` (up to bound slack)."""
    if B.is_rat:
        return Pow2m1(Int(math.ceil(B.rat).bit_length()))
    if B.neg:
        return Pow2m1(Int(1))
    return Pow2m1(at_least(add_int_up(B.exp, 1)))


# -- enclosures and verdicts -----------------------------------------------

@dataclass(frozen=True)
class Enclosure:
    lo: Mag
    hi: Mag

    @classmethod
    def exact(cls, value) -> "Enclosure":
        m = value if isinstance(value, Mag) else rat(value)
        return cls(m, m)

    @classmethod
    def of(cls, t: TowerNumeral) -> "Enclosure":
        return cls(*tower_enclosure(t))

    def __add__(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(add_lo(self.lo, other.lo), add_up(self.hi, other.hi))

    def __mul__(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(mul_lo(self.lo, other.lo), mul_up(self.hi, other.hi))

    def recip(self) -> "Enclosure":
        return Enclosure(recip(self.hi), recip(self.lo))

    def contains(self, value) -> bool:
        value = value if isinstance(value, Mag) else rat(value)
        return cmp(self.lo, value) <= 0 <= cmp(self.hi, value)

    @property
    def is_exact(self) -> bool:
        return self.lo.is_rat and self.hi.is_rat and self.lo.rat == self.hi.rat

    def to_json(self):
        return {"lo": mag_to_json(self.lo), "hi": mag_to_json(self.hi)}


def enclosure_sum(items) -> Enclosure:
    total = Enclosure.exact(0)
    for item in items:
        total = total + item
    return total


def verdict_le(a: Enclosure, b: Enclosure) -> str:
    """'pass' if a <= b is certain, 'fail' if a > b is certain, else 'indeterminate'."""
    if cmp(a.hi, b.lo) <= 0:
        return "pass"
    if cmp(a.lo, b.hi) > 0:
        return "fail"
    return "indeterminate"
