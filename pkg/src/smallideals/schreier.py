"""Schreier families S_N and the Schreier norms.

S_0 holds the empty set and the singletons; a set belongs to S_{N+1} when it
is a union E_1 < ... < E_k of S_N sets with k <= min E_1.
"""

from __future__ import annotations

import math
import sys
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .vectors import IndexSet, IntervalSet, SparseVector


def _check_level(N: int) -> int:
    if N < 0:
        raise ValueError("Schreier level must be non-negative")
    return int(N)


def greedy_blocks(A: Iterable[int], N: int) -> list[IndexSet]:
    """Split ``A`` left to right into maximal initial S_{N-1} segments.

    A belongs to S_N exactly when the number of blocks is at most ``min A``.
    """
    N = _check_level(N)
    if N == 0:
        raise ValueError("greedy_blocks needs N >= 1")
    A = IndexSet(A)
    blocks = []
    i = 0
    while i < len(A):
        j = i + 1
        while j < len(A) and is_schreier(A[i:j + 1], N - 1):
            j += 1
        blocks.append(IndexSet(A[i:j]))
        i = j
    return blocks


def is_schreier(A: Iterable[int], N: int) -> bool:
    """Membership in S_N, decided by the greedy fill-lowest-level scan.

    The scan keeps, for every level l = 1..N, how many S_{l-1} pieces the
    currently open S_l set may still receive; each new element goes into the
    lowest level with room left, opening fresh sets below it.
    """
    N = _check_level(N)
    A = tuple(A)
    if not A:
        return True
    if N == 0:
        return len(A) == 1
    room = [A[0] - 1] * N
    for a in A[1:]:
        for level in range(N):
            if room[level] > 0:
                room[level] -= 1
                for lower in range(level):
                    room[lower] = a - 1
                break
        else:
            return False
    return True


def is_maximal_schreier(A: Iterable[int], N: int) -> bool:
    """True iff ``A`` is in S_N but ``A + {max A + 1}`` is not."""
    A = tuple(A)
    if not A:
        raise ValueError("maximality is undefined for the empty set")
    return is_schreier(A, N) and not is_schreier(A + (A[-1] + 1,), N)


MAX_CLOSED_FORM_BITS = 1 << 24


def maximal_end(start: int, N: int) -> int:
    """Largest element of the maximal S_N set of consecutive integers from ``start``.

    Closed forms: ``start`` for N = 0, ``2 start - 1`` for N = 1 and
    ``start 2^start - 1`` for N = 2 (each S_1 piece doubles the position).
    """
    if N == 0:
        return start
    if N == 1:
        return 2 * start - 1
    if N == 2:
        if start > MAX_CLOSED_FORM_BITS:
            raise ValueError("scale exceeded: maximal S_2 set from %d" % start)
        return (start << start) - 1
    if start > 64:
        raise ValueError("scale exceeded: maximal S_%d set from %d" % (N, start))
    cur = start
    for _ in range(start):
        end = maximal_end(cur, N - 1)
        cur = end + 1
    return end


_maximal_end = maximal_end


def next_maximal_set(start: int, N: int) -> IndexSet:
    """The maximal S_N set of consecutive integers beginning at ``start``."""
    N = _check_level(N)
    if start < 1:
        raise ValueError("start must be positive")
    return IndexSet(range(start, _maximal_end(start, N) + 1))


def maximal_set_size(start: int, N: int) -> int:
    return _maximal_end(start, _check_level(N)) - start + 1


def decompose_maximal(F: Iterable[int], N: int) -> list[IndexSet]:
    """Split a maximal S_N set into maximal S_1 sets F_1 < ... < F_k.

    The block minima form an S_{N-1} set. Both facts are re-checked here.
    """
    N = _check_level(N)
    if N < 1:
        raise ValueError("decomposition needs N >= 1")
    F = IndexSet(F)
    if not F or not is_maximal_schreier(F, N):
        raise ValueError("not maximal: %s is not a maximal S_%d set" % (list(F), N))
    blocks = []
    i = 0
    while i < len(F):
        size = F[i]
        if i + size > len(F):
            raise ValueError("not maximal: trailing block %s is short" % list(F[i:]))
        blocks.append(IndexSet(F[i:i + size]))
        i += size
    if not all(is_maximal_schreier(b, 1) for b in blocks):
        raise ValueError("decomposition produced a non-maximal S_1 block")
    if not is_schreier([b[0] for b in blocks], N - 1):
        raise ValueError("block minima do not form an S_%d set" % (N - 1))
    return blocks


def _integer_weights(x: SparseVector) -> tuple[list[int], int]:
    den = 1
    for c in x.coefficients:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(abs(c) * den) for c in x.coefficients], den


def _norm_level1(positions: list[int], weights: list[int]) -> int:
    # best S_1 set with minimum at position j: w_j plus the p_j - 1 largest later weights
    counts: dict[int, int] = {}
    best = 0
    for j in range(len(positions) - 1, -1, -1):
        need = positions[j] - 1
        total = weights[j]
        if need and counts:
            for value in sorted(counts, reverse=True):
                take = min(need, counts[value])
                total += take * value
                need -= take
                if not need:
                    break
        best = max(best, total)
        counts[weights[j]] = counts.get(weights[j], 0) + 1
    return best


def _norm_dp(positions: list[int], weights: list[int], N: int) -> int:
    s = len(positions)

    @lru_cache(maxsize=None)
    def value(i: int, room: tuple[int, ...]) -> int:
        if i == s or not any(room):
            return 0
        best = value(i + 1, room)
        left = s - i - 1
        reset = min(positions[i] - 1, left)
        for level in range(N):
            if room[level] > 0:
                nxt = tuple(
                    reset if l < level else min(room[l] - 1 if l == level else room[l], left)
                    for l in range(N)
                )
                cand = weights[i] + value(i + 1, nxt)
                if cand > best:
                    best = cand
        return best

    best = 0
    for i in range(s):
        left = s - i - 1
        start = tuple([min(positions[i] - 1, left)] * N)
        best = max(best, weights[i] + value(i + 1, start))
    value.cache_clear()
    return best


def schreier_norm(x: SparseVector, N: int) -> Fraction:
    """Exact ``max_{A in S_N, A nonempty} sum_{n in A} |x_n|``.

    Dynamic programming over (position, level budgets); S_0 and S_1 use
    closed forms and any vector whose whole support is admissible returns its
    l1 mass directly.
    """
    N = _check_level(N)
    if not x:
        return Fraction(0)
    positions = list(x.support)
    weights, den = _integer_weights(x)
    if is_schreier(positions, N):
        return Fraction(sum(weights), den)
    if N == 0:
        return Fraction(max(weights), den)
    if N == 1:
        return Fraction(_norm_level1(positions, weights), den)
    limit = sys.getrecursionlimit()
    if limit < 4 * len(positions) + 100:
        sys.setrecursionlimit(4 * len(positions) + 100)
    return Fraction(_norm_dp(positions, weights, N), den)


# -- interval-structured sets ------------------------------------------------

def is_schreier_intervals(A: IntervalSet, N: int) -> bool:
    """Same scan as ``is_schreier`` but consuming runs of consecutive elements at once."""
    N = _check_level(N)
    if not A:
        return True
    if N == 0:
        return A.size == 1
    room = [A.min - 1] * N
    for idx, (lo, hi) in enumerate(A.ranges):
        x = lo + 1 if idx == 0 else lo
        while x <= hi:
            if room[0] > 0:
                take = min(room[0], hi - x + 1)
                room[0] -= take
                x += take
                continue
            for level in range(1, N):
                if room[level] > 0:
                    room[level] -= 1
                    for lower in range(level):
                        room[lower] = x - 1
                    break
            else:
                return False
            x += 1
    return True


def is_maximal_interval(lo: int, hi: int, N: int) -> bool:
    """Whether the consecutive set ``lo..hi`` is a maximal S_N set."""
    return hi == maximal_end(lo, N)


Piece = tuple  # (lo, hi, weight)


def _rightmost(pieces: list, counts: list) -> IntervalSet:
    return IntervalSet((hi - c + 1, hi) for (lo, hi, _), c in zip(pieces, counts) if c)


MAX_COUNT_COMBOS = 200_000


def block_norm(pieces: Iterable[Piece], N: int) -> Fraction:
    """Exact S_N norm of a vector that is constant on each range ``lo..hi``.

    For a fixed number of chosen elements per range, taking the rightmost ones
    is optimal because S_N is spreading; the search is over those counts.
    """
    N = _check_level(N)
    pieces = sorted((int(lo), int(hi), abs(Fraction(w))) for lo, hi, w in pieces)
    pieces = [p for p in pieces if p[2]]
    if not pieces:
        return Fraction(0)
    for (l1, h1, _), (l2, h2, _) in zip(pieces, pieces[1:]):
        if l2 <= h1:
            raise ValueError("pieces overlap")
    if N == 0:
        return max(w for _, _, w in pieces)
    whole = IntervalSet((lo, hi) for lo, hi, _ in pieces)
    if is_schreier_intervals(whole, N):
        return sum((w * (hi - lo + 1) for lo, hi, w in pieces), Fraction(0))
    if N == 1:
        return _block_norm_level1(pieces)
    return _block_norm_search(pieces, N)


def _greedy_top(pieces: list, cap: int) -> Fraction:
    total = Fraction(0)
    for lo, hi, w in sorted(pieces, key=lambda p: -p[2]):
        if cap <= 0:
            break
        take = min(cap, hi - lo + 1)
        total += take * w
        cap -= take
    return total


def _block_norm_level1(pieces: list) -> Fraction:
    best = Fraction(0)
    for m0, (lo, hi, w) in enumerate(pieces):
        rest = pieces[m0 + 1:]
        top = min(hi - lo + 1, (hi + 1) // 2)
        if top < 1:
            continue
        # f(c) = w c + G(hi + 1 - 2c) is concave; check ends and greedy breakpoints
        cands = {1, top}
        cum = 0
        for plo, phi, _ in sorted(rest, key=lambda p: -p[2]):
            cum += phi - plo + 1
            for c in ((hi + 1 - cum) // 2, (hi + 2 - cum) // 2):
                if 1 <= c <= top:
                    cands.add(c)
        for c in cands:
            best = max(best, w * c + _greedy_top(rest, hi + 1 - 2 * c))
    return best


def _block_norm_search(pieces: list, N: int) -> Fraction:
    sizes = [hi - lo + 1 for lo, hi, _ in pieces]
    combos = 1
    for size in sizes[:-1]:
        combos *= size + 1
        if combos > MAX_COUNT_COMBOS:
            raise ValueError("scale exceeded: %d count combinations" % combos)
    best = Fraction(0)

    def search(prefix: list) -> None:
        nonlocal best
        if len(prefix) == len(pieces) - 1:
            if prefix and not is_schreier_intervals(_rightmost(pieces, prefix + [0]), N):
                return
            lo_c, hi_c = 0, sizes[-1]
            while lo_c < hi_c:
                mid = (lo_c + hi_c + 1) // 2
                if is_schreier_intervals(_rightmost(pieces, prefix + [mid]), N):
                    lo_c = mid
                else:
                    hi_c = mid - 1
            value = sum((c * p[2] for c, p in zip(prefix + [lo_c], pieces)), Fraction(0))
            best = max(best, value)
            return
        for c in range(sizes[len(prefix)] + 1):
            trial = prefix + [c]
            if c and not is_schreier_intervals(_rightmost(pieces, trial + [0] * (len(pieces) - len(trial))), N):
                break
            search(trial)

    search([])
    return best
