"""Independent brute-force references used only by the tests."""

from functools import lru_cache
from itertools import combinations
from fractions import Fraction


@lru_cache(maxsize=None)
def in_schreier(A: tuple, N: int) -> bool:
    """Direct recursive definition: A splits into k <= min A successive S_{N-1} sets."""
    if not A:
        return True
    if N == 0:
        return len(A) == 1

    def splits(rest: tuple, budget: int) -> bool:
        if not rest:
            return True
        if budget == 0:
            return False
        return any(in_schreier(rest[:i], N - 1) and splits(rest[i:], budget - 1)
                   for i in range(1, len(rest) + 1))

    return splits(A, A[0])


def schreier_sets(universe, N: int):
    items = sorted(universe)
    for r in range(1, len(items) + 1):
        for A in combinations(items, r):
            if in_schreier(A, N):
                yield A


def schreier_norm_bruteforce(x: dict, N: int) -> Fraction:
    best = Fraction(0)
    for A in schreier_sets(x.keys(), N):
        best = max(best, sum(abs(Fraction(x[i])) for i in A))
    return best
