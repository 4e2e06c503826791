"""Finitely supported vectors with exact rational coefficients.

Indices are 1-based, matching the unit vector basis e_1, e_2, ...
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


def to_fraction(value) -> Fraction:
    """Parse ints, Fractions, and ``"num/den"`` or decimal strings exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        # floats are accepted only through their exact binary value
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


class IndexSet(tuple):
    """Strictly increasing finite tuple of positive integers."""

    def __new__(cls, elements: Iterable[int] = ()):
        items = tuple(int(e) for e in elements)
        for a, b in zip(items, items[1:]):
            if a >= b:
                raise ValueError(f"index set not strictly increasing: {items}")
        if items and items[0] < 1:
            raise ValueError("indices must be positive")
        return super().__new__(cls, items)

    @classmethod
    def from_unsorted(cls, elements: Iterable[int]) -> "IndexSet":
        return cls(sorted(set(elements)))

    @property
    def min(self) -> int:
        return self[0]

    @property
    def max(self) -> int:
        return self[-1]

    def __repr__(self) -> str:
        return "IndexSet(%s)" % list(self)


class SparseVector:
    """Immutable finitely supported vector; zero coefficients are never stored."""

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        if isinstance(entries, Mapping):
            entries = entries.items()
        data: dict[int, Fraction] = {}
        for index, value in entries:
            index = int(index)
            if index < 1:
                raise ValueError(f"index {index} is not positive")
            if index in data:
                raise ValueError(f"duplicate index {index}")
            coef = to_fraction(value)
            if coef:
                data[index] = coef
        self._entries = tuple(sorted(data.items()))
        self._hash = None

    @classmethod
    def unit(cls, index: int, value=1) -> "SparseVector":
        return cls({index: value})

    @classmethod
    def constant(cls, indices: Iterable[int], value=1) -> "SparseVector":
        return cls({i: value for i in indices})

    def items(self) -> tuple[tuple[int, Fraction], ...]:
        return self._entries

    @property
    def support(self) -> IndexSet:
        return IndexSet(i for i, _ in self._entries)

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(c for _, c in self._entries)

    def __getitem__(self, index: int) -> Fraction:
        for i, c in self._entries:
            if i == index:
                return c
        return Fraction(0)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._entries)
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {c}" for i, c in self._entries)
        return "SparseVector({%s})" % body

    def __add__(self, other: "SparseVector") -> "SparseVector":
        data = dict(self._entries)
        for i, c in other._entries:
            data[i] = data.get(i, 0) + c
        return SparseVector(data)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return self + other * -1

    def __mul__(self, scalar) -> "SparseVector":
        s = to_fraction(scalar)
        return SparseVector((i, c * s) for i, c in self._entries)

    __rmul__ = __mul__

    def __neg__(self) -> "SparseVector":
        return self * -1

    def abs(self) -> "SparseVector":
        return SparseVector((i, abs(c)) for i, c in self._entries)

    def with_signs(self, signs: Iterable[int]) -> "SparseVector":
        return SparseVector((i, c * s) for (i, c), s in zip(self._entries, signs, strict=True))

    def l1(self) -> Fraction:
        return sum((abs(c) for _, c in self._entries), Fraction(0))

    def linf(self) -> Fraction:
        return max((abs(c) for _, c in self._entries), default=Fraction(0))

    def to_json(self) -> dict:
        return {"entries": [[i, str(c)] for i, c in self._entries]}

    @classmethod
    def from_json(cls, obj) -> "SparseVector":
        if isinstance(obj, Mapping):
            obj = obj.get("entries", [])
        pairs = [(int(i), to_fraction(v)) for i, v in obj]
        indices = [i for i, _ in pairs]
        if any(a >= b for a, b in zip(indices, indices[1:])):
            raise ValueError("vector indices must be strictly increasing")
        return cls(pairs)


def pair(f: SparseVector, x: SparseVector) -> Fraction:
    """Exact value of the functional ``f`` on ``x``."""
    if len(f) > len(x):
        f, x = x, f
    xs = dict(x.items())
    return sum((c * xs[i] for i, c in f.items() if i in xs), Fraction(0))


def spread(x: SparseVector, target: Iterable[int]) -> SparseVector:
    """Move the k-th coefficient of ``x`` onto the k-th element of ``target``."""
    target = IndexSet(target)
    if len(target) != len(x):
        raise ValueError("spread arity: %d coefficients, %d targets" % (len(x), len(target)))
    return SparseVector(zip(target, x.coefficients))


def restrict(x: SparseVector, lo: int, hi: int) -> SparseVector:
    """Keep entries with ``lo <= index <= hi``."""
    if lo > hi:
        raise ValueError("empty interval [%d, %d]" % (lo, hi))
    return SparseVector((i, c) for i, c in x.items() if lo <= i <= hi)


def restrict_to(x: SparseVector, indices: Iterable[int]) -> SparseVector:
    keep = set(indices)
    return SparseVector((i, c) for i, c in x.items() if i in keep)


class IntervalSet:
    """Finite set of positive integers stored as disjoint sorted ranges ``(lo, hi)``.

    Sizes may be astronomically large; nothing is ever expanded unless asked.
    """

    __slots__ = ("ranges",)

    def __init__(self, ranges: Iterable[tuple[int, int]] = ()):
        merged: list[tuple[int, int]] = []
        for lo, hi in sorted((int(a), int(b)) for a, b in ranges):
            if lo > hi:
                raise ValueError(f"empty range ({lo}, {hi})")
            if lo < 1:
                raise ValueError("indices must be positive")
            if merged and lo <= merged[-1][1] + 1:
                if lo <= merged[-1][1]:
                    raise ValueError("ranges overlap")
                merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        self.ranges = tuple(merged)

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> "IntervalSet":
        return cls((i, i) for i in sorted(set(indices)))

    @classmethod
    def union(cls, parts: Iterable["IntervalSet"]) -> "IntervalSet":
        return cls(r for p in parts for r in p.ranges)

    @property
    def size(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.ranges)

    @property
    def min(self) -> int:
        return self.ranges[0][0]

    @property
    def max(self) -> int:
        return self.ranges[-1][1]

    def __bool__(self) -> bool:
        return bool(self.ranges)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalSet) and self.ranges == other.ranges

    def __hash__(self) -> int:
        return hash(self.ranges)

    def __repr__(self) -> str:
        return "IntervalSet(%s)" % list(self.ranges)

    def __contains__(self, x: int) -> bool:
        return any(lo <= x <= hi for lo, hi in self.ranges)

    def to_index_set(self, limit: int = 1 << 20) -> IndexSet:
        if self.size > limit:
            raise ValueError("scale exceeded: %d elements" % self.size)
        return IndexSet(i for lo, hi in self.ranges for i in range(lo, hi + 1))

    def rank(self, x: int) -> int:
        """0-based position of ``x`` inside the set."""
        before = 0
        for lo, hi in self.ranges:
            if lo <= x <= hi:
                return before + x - lo
            before += hi - lo + 1
        raise KeyError(x)

    def select_ranks(self, first: int, last: int) -> "IntervalSet":
        """Elements whose 0-based positions lie in ``first..last``."""
        out = []
        before = 0
        for lo, hi in self.ranges:
            size = hi - lo + 1
            a, b = max(first, before), min(last, before + size - 1)
            if a <= b:
                out.append((lo + a - before, lo + b - before))
            before += size
            if before > last:
                break
        if sum(h - l + 1 for l, h in out) != last - first + 1:
            raise IndexError("rank range exceeds the set")
        return IntervalSet(out)

    def map_into(self, subset: "IntervalSet", target: "IntervalSet") -> "IntervalSet":
        """Order-preserving image of ``subset`` (a subset of self) in ``target``, by position."""
        parts = []
        for lo, hi in subset.ranges:
            r = self.rank(lo)
            if self.rank(hi) - r != hi - lo:
                raise ValueError("subset is not contained in the set")
            parts.append(target.select_ranks(r, r + hi - lo))
        return IntervalSet.union(parts)
