"""The Schlumprecht norm and its norming functionals.

The norming set K contains the signed unit functionals and is closed under
weighted averages ``(f_1 + ... + f_n) / log2(m + 1)`` of block sequences with
``n <= m``. Evaluation uses a bottom-up dynamic programme over intervals of
the support:

    N(I) = max( max_{i in I} |x_i|,
                max_{n >= 2} max_{I = E_1 < ... < E_n} (N(E_1) + ... + N(E_n)) / log2(n + 1) )

Taking ``m = n`` is optimal because ``log2(m + 1)`` increases with ``m``, and
interval-shaped blocks lose nothing: the norm is 1-unconditional, so a block
can always be enlarged to the interval between its neighbours without
decreasing its contribution. Both claims are cross-checked against the
exhaustive ``norming_oracle``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .vectors import SparseVector

_EPS = 2.0 ** -52


@dataclass(frozen=True)
class NormEstimate:
    """A float value with a certified absolute error bound."""

    value: float
    error: float

    @property
    def lower(self) -> float:
        return self.value - self.error

    @property
    def upper(self) -> float:
        return self.value + self.error

    def __float__(self) -> float:
        return self.value


# -- functionals -----------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    sign: int
    index: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("malformed functional: leaf sign must be +1 or -1")
        if self.index < 1:
            raise ValueError("malformed functional: leaf index must be positive")


@dataclass(frozen=True)
class Node:
    weight: int
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


FunctionalTree = Union[Leaf, Node]


def support_range(f: FunctionalTree) -> tuple[int, int]:
    if isinstance(f, Leaf):
        return f.index, f.index
    return support_range(f.children[0])[0], support_range(f.children[-1])[1]


def validate_functional(f: FunctionalTree) -> None:
    """Raise ``ValueError('malformed functional ...')`` on any broken invariant."""
    if isinstance(f, Leaf):
        return
    if not isinstance(f, Node):
        raise ValueError("malformed functional: unknown node %r" % (f,))
    if f.weight < 1:
        raise ValueError("malformed functional: weight must be >= 1")
    if not f.children:
        raise ValueError("malformed functional: internal node without children")
    if len(f.children) > f.weight:
        raise ValueError("malformed functional: %d children exceed weight %d"
                         % (len(f.children), f.weight))
    prev_hi = 0
    for child in f.children:
        validate_functional(child)
        lo, hi = support_range(child)
        if lo <= prev_hi:
            raise ValueError("malformed functional: children are not successive blocks")
        prev_hi = hi


def functional_coefficients(f: FunctionalTree) -> dict[int, float]:
    """Leaf coefficients: sign times the product of ``1/log2(m+1)`` over ancestors."""
    out: dict[int, float] = {}

    def walk(g, scale):
        if isinstance(g, Leaf):
            out[g.index] = g.sign * scale
        else:
            inner = scale / math.log2(g.weight + 1)
            for child in g.children:
                walk(child, inner)

    walk(f, 1.0)
    return out


def eval_functional(f: FunctionalTree, x: SparseVector) -> float:
    validate_functional(f)
    coefs = functional_coefficients(f)
    return math.fsum(coefs[i] * float(c) for i, c in x.items() if i in coefs)


def weight(f: FunctionalTree) -> int:
    """Weight of a functional: the parameter at its root (1 for a leaf)."""
    return f.weight if isinstance(f, Node) else 1


def functional_to_json(f: FunctionalTree):
    if isinstance(f, Leaf):
        return {"leaf": [f.sign, f.index]}
    return {"m": f.weight, "children": [functional_to_json(c) for c in f.children]}


def functional_from_json(obj) -> FunctionalTree:
    if "leaf" in obj:
        sign, index = obj["leaf"]
        return Leaf(int(sign), int(index))
    f = Node(int(obj["m"]), tuple(functional_from_json(c) for c in obj["children"]))
    validate_functional(f)
    return f


def average(weight_m: int, children: Iterable[FunctionalTree]) -> Node:
    f = Node(weight_m, tuple(children))
    validate_functional(f)
    return f


# -- the norm --------------------------------------------------------------

def interval_norms(weights) -> np.ndarray:
    """Table ``T[a, b]`` of the norm restricted to support positions a..b."""
    w = np.abs(np.asarray(weights, dtype=float))
    s = len(w)
    table = np.zeros((s, s))
    if s == 0:
        return table
    inv_log = np.zeros(s + 2)
    inv_log[1:] = 1.0 / np.log2(np.arange(2, s + 3))
    for a in range(s - 1, -1, -1):
        span = s - a
        # best[n, t]: best sum over partitions of positions a..a+t into n intervals
        best = np.full((span + 2, span), -np.inf)
        running_max = 0.0
        for t in range(span):
            running_max = max(running_max, w[a + t])
            value = running_max
            if t > 0:
                tails = table[a + 1:a + t + 1, a + t]
                combos = best[1:t + 1, 0:t] + tails[None, :]
                best[2:t + 2, t] = combos.max(axis=1)
                value = max(value, float((best[2:t + 2, t] * inv_log[2:t + 2]).max()))
            table[a, a + t] = value
            best[1, t] = value
    return table


def _error_bound(value: float, size: int) -> float:
    if value == 0.0:
        return 0.0
    # each nesting level of the recursion adds at most (size + 3) roundings
    return 2.0 * value * (size * (size + 3) + 2) * _EPS


def schlumprecht_norm(x: SparseVector) -> NormEstimate:
    """The Schlumprecht norm of ``x`` with a certified absolute error bound."""
    if not x:
        return NormEstimate(0.0, 0.0)
    weights = [abs(float(c)) for c in x.coefficients]
    value = float(interval_norms(weights)[0, -1])
    return NormEstimate(value, _error_bound(value, len(weights)))


def norm_value(x: SparseVector) -> float:
    return schlumprecht_norm(x).value


def l1_average_constant(x: SparseVector, q: int) -> float:
    """Max over E_1 < ... < E_q of ``sum_s ||E_s x||``."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if not x:
        return 0.0
    table = interval_norms([float(c) for c in x.coefficients])
    s = table.shape[0]
    pieces = min(q, s)
    # best[n][b]: positions 0..b split into n intervals
    best = np.full((pieces + 1, s), -np.inf)
    best[1] = table[0]
    for n in range(2, pieces + 1):
        for b in range(n - 1, s):
            best[n, b] = max(best[n - 1, c - 1] + table[c, b] for c in range(n - 1, b + 1))
    return float(best[1:, s - 1].max())


# -- brute-force oracle ------------------------------------------------------

ORACLE_MAX_SUPPORT = 8
ORACLE_MAX_DEPTH = 4


def _pareto(vectors: list[tuple]) -> list[tuple]:
    vectors = sorted(set(vectors), key=lambda v: -sum(v))
    kept: list[tuple] = []
    for v in vectors:
        if not any(all(a >= b - 1e-15 for a, b in zip(k, v)) for k in kept):
            kept.append(v)
    return kept


def enumerate_functionals(size: int, max_depth: int) -> list[tuple[float, ...]]:
    """Coefficient vectors of all non-negative functionals on positions 0..size-1.

    Every functional of depth at most ``max_depth`` with ``n = m`` at internal
    nodes is generated explicitly; only functionals dominated coordinatewise
    by another one with the same support hull are discarded, which cannot
    change any maximum over non-negative vectors.
    """
    by_hull: dict[tuple[int, int], list[tuple]] = {}
    for i in range(size):
        by_hull[(i, i)] = [tuple(1.0 if k == i else 0.0 for k in range(size))]
    for _ in range(max_depth):
        items = [(hull, v) for hull, vs in by_hull.items() for v in vs]
        # chains[n][(lo, hi)]: sums of n successive blocks
        chains = {1: {}}
        for hull, v in items:
            chains[1].setdefault(hull, []).append(v)
        fresh: dict[tuple[int, int], list[tuple]] = {h: list(vs) for h, vs in by_hull.items()}
        for n in range(2, size + 1):
            nxt: dict[tuple[int, int], list[tuple]] = {}
            for (lo, hi), sums in chains[n - 1].items():
                for (lo2, hi2), v in items:
                    if lo2 <= hi:
                        continue
                    for acc in sums:
                        nxt.setdefault((lo, hi2), []).append(tuple(a + b for a, b in zip(acc, v)))
            nxt = {h: _pareto(vs) for h, vs in nxt.items()}
            if not nxt:
                break
            chains[n] = nxt
            scale = 1.0 / math.log2(n + 1)
            for hull, vs in nxt.items():
                fresh.setdefault(hull, []).extend(tuple(scale * a for a in v) for v in vs)
        by_hull = {h: _pareto(vs) for h, vs in fresh.items()}
    return [v for vs in by_hull.values() for v in vs]


def norming_oracle(x: SparseVector, max_depth: int) -> float:
    """Lower bound of the norm by exhaustive search over shallow functionals."""
    if len(x) > ORACLE_MAX_SUPPORT or max_depth > ORACLE_MAX_DEPTH or max_depth < 0:
        raise ValueError("oracle scale: support <= %d and depth <= %d required"
                         % (ORACLE_MAX_SUPPORT, ORACLE_MAX_DEPTH))
    if not x:
        return 0.0
    w = np.array([abs(float(c)) for c in x.coefficients])
    funcs = np.array(enumerate_functionals(len(w), max_depth))
    return float(max((funcs @ w).max(), w.max()))
