"""Quantitative checks: operator application, c_k/d_k surrogates, norm estimates,
the separation curve and Schreier domination tests.

Reports are plain dicts ``{"claim", "lhs", "rhs", "verdict", "witness"}`` with
verdict ``pass``, ``fail`` or ``inconclusive``.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .constructions import VectorAnalysis, build_block_sequences
from .schlumprecht import (
    FunctionalTree,
    Leaf,
    Node,
    NormEstimate,
    functional_coefficients,
    schlumprecht_norm,
    support_range,
    validate_functional,
)
from .schreier import block_norm, is_maximal_interval, is_maximal_schreier, is_schreier_intervals, maximal_end, schreier_norm
from .towers import Enclosure, cmp, log2_float, log2_text, materialize, to_float, verdict_le
from .trees import (
    CoreTree,
    DyadicScheme,
    _log_enc,
    check_conditions,
    check_coupling,
    coeffs,
    coupled_levels,
    dominant_is_earlier,
)
from .vectors import IndexSet, IntervalSet, SparseVector, restrict

SUBSET_CUTOFF = 20
EXACT_NORM_SUPPORT = 160


def report(claim: str, lhs, rhs, verdict: str, witness=None, **extra) -> dict:
    out = {"claim": claim, "lhs": lhs, "rhs": rhs, "verdict": verdict, "witness": witness}
    out.update(extra)
    return out


def _float_up(x: float) -> float:
    return math.nextafter(x, math.inf) if x else 0.0


def _float_lo(x: float) -> float:
    return math.nextafter(x, -math.inf) if x else 0.0


# -- exact pairing of tree functionals with tree vectors -----------------------

def _log_monomials(f: FunctionalTree) -> dict:
    """Leaf index -> (sign, Counter of m -> power of log2(m+1))."""
    out: dict = {}

    def walk(g, powers: Counter):
        if isinstance(g, Leaf):
            out[g.index] = (g.sign, powers)
            return
        inner = powers.copy()
        inner[g.weight] -= 1
        for child in g.children:
            walk(child, inner)

    walk(f, Counter())
    return out


def _vector_monomials(va: VectorAnalysis) -> dict:
    """Index -> (rational factor, Counter of m -> power of log2(m+1))."""
    t = va.tree
    out = {}
    for node, index in va.terminal_indices.items():
        factor, powers = Fraction(1), Counter()
        for a in t.ancestors(node):
            m = int(materialize(t.m[a], 64))
            factor /= m
            powers[m] += 1
        out[index] = (factor, powers)
    return out


def _reduce(factor: Fraction, powers: Counter) -> tuple[Fraction, tuple]:
    """Fold rational logs (m + 1 a power of two) into the factor."""
    rest = []
    for m, p in powers.items():
        if p == 0:
            continue
        if (m + 1) & m == 0:
            factor *= Fraction((m + 1).bit_length() - 1) ** p
        else:
            rest.append((m, p))
    return factor, tuple(sorted(rest))


def exact_pairing(f: FunctionalTree, va: VectorAnalysis) -> tuple[Optional[Fraction], float]:
    """``f(x)`` symbolically: an exact rational when all logs cancel, and a float value."""
    fm = _log_monomials(f)
    groups: dict = {}
    for index, (factor, powers) in _vector_monomials(va).items():
        if index not in fm:
            continue
        sign, fpow = fm[index]
        total = powers.copy()
        total.update(fpow)
        c, key = _reduce(sign * factor, total)
        groups[key] = groups.get(key, Fraction(0)) + c
    groups = {k: v for k, v in groups.items() if v != 0}
    value = math.fsum(float(v) * math.prod(math.log2(m + 1) ** p for m, p in k) for k, v in groups.items())
    if not groups:
        return Fraction(0), 0.0
    if set(groups) == {()}:
        return groups[()], value
    return None, value


# -- sequence operators ----------------------------------------------------------

@dataclass
class SeqOperator:
    """``T x = sum_n f_n(x) e_n`` with companion vectors ``x_m``, ``f_n(x_m) = delta_nm``."""

    functionals: list
    companions: list = field(default_factory=list)  # VectorAnalysis or SparseVector
    tree: Optional[CoreTree] = None

    def __post_init__(self):
        prev = 0
        for f in self.functionals:
            validate_functional(f)
            lo, hi = support_range(f)
            if lo <= prev:
                raise ValueError("functional supports must be successive blocks")
            prev = hi

    def __len__(self) -> int:
        return len(self.functionals)


def toy_operator(tree: CoreTree, heights: Sequence[int], start_index: int = 1) -> SeqOperator:
    """Operator built from the block sequence of tree vectors and associated functionals."""
    pairs = build_block_sequences(tree, list(heights), start_index)
    return SeqOperator([f for _, f in pairs], [va for va, _ in pairs], pairs[0][0].tree if pairs else tree)


def _as_sparse(x) -> SparseVector:
    return x.vector() if isinstance(x, VectorAnalysis) else x


def functional_values(T: SeqOperator, x) -> list:
    """``f_n(x)`` for every n: exact rationals for tree vectors when logs cancel, floats otherwise."""
    out = []
    if isinstance(x, VectorAnalysis):
        for f in T.functionals:
            exact, value = exact_pairing(f, x)
            out.append(exact if exact is not None else value)
        return out
    for f in T.functionals:
        coefs = functional_coefficients(f)
        out.append(math.fsum(coefs[i] * float(c) for i, c in x.items() if i in coefs))
    return out


def apply_operator(T: SeqOperator, x) -> SparseVector:
    """``T x`` with n-th coefficient ``f_n(x)``."""
    values = functional_values(T, x)
    return SparseVector({n + 1: Fraction(v) for n, v in enumerate(values) if v != 0})


def norm_j(y, T: SeqOperator, j: int) -> float:
    """Sum of the j largest ``|f_n(y)|``; exact for disjoint block functionals."""
    if j < 1:
        raise ValueError("j must be >= 1")
    values = sorted((abs(float(v)) for v in functional_values(T, y)), reverse=True)
    return math.fsum(values[:j])


# -- c_k and d_k surrogates ------------------------------------------------------

def _norm(x: SparseVector, norm) -> NormEstimate:
    if norm == "schlumprecht":
        return schlumprecht_norm(x)
    if isinstance(norm, tuple) and norm[0] == "schreier":
        return NormEstimate(float(schreier_norm(x, norm[1])), 0.0)
    raise ValueError(f"unknown norm {norm!r}")


def _subsets(n: int, k: int) -> Iterable[tuple]:
    if n <= SUBSET_CUTOFF:
        return itertools.combinations(range(n), k)
    start = n - SUBSET_CUTOFF
    return (tuple(range(i, i + k)) for i in range(start, n - k + 1))


def dk_surrogate(xs: Sequence[SparseVector], k: int, norm="schlumprecht") -> dict:
    """Max of ``||x_{i_1} + ... + x_{i_k}||`` over subsets (tail windows above the cutoff)."""
    if k < 1 or k > len(xs):
        raise ValueError("k too large: %d vectors available" % len(xs))
    best, arg = -1.0, None
    cache: dict = {}
    for idx in _subsets(len(xs), k):
        total = SparseVector()
        for i in idx:
            total = total + xs[i]
        key = total.abs().coefficients
        if key not in cache:
            cache[key] = _norm(total, norm).value
        if cache[key] > best:
            best, arg = cache[key], idx
    return {"value": best, "subset": [i + 1 for i in arg]}


@dataclass(frozen=True)
class NormBracket:
    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("bracket lower exceeds upper")

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def _candidates(T: SeqOperator, idx: tuple) -> list[SparseVector]:
    lo = min(support_range(T.functionals[i])[0] for i in idx)
    hi = max(support_range(T.functionals[i])[1] for i in idx)
    out = [SparseVector.unit(i) for i in range(lo, hi + 1)]
    out.append(SparseVector.constant(range(lo, hi + 1)))
    for i in idx:
        lo_i, hi_i = support_range(T.functionals[i])
        out.append(SparseVector.constant(range(lo_i, hi_i + 1)))
    if T.companions:
        total = SparseVector()
        for i in idx:
            total = total + _as_sparse(T.companions[i])
        out.append(total)
    return out


def analytic_functional_bound(T: SeqOperator, level: int) -> Optional[float]:
    """``2 * sum_{j < j0} m_j`` when the tree of T passes F3 to F5; else None."""
    if T.tree is None:
        return None
    rep = check_conditions(T.tree, which=("F3", "F4", "F5"))
    if not rep["passed"]:
        return None
    j0 = T.tree.first_at_level(level)
    return 2.0 * sum(to_float(Enclosure.of(T.tree.m[j]).hi) for j in range(j0))


def ck_bracket(T: SeqOperator, k: int, level: Optional[int] = None) -> dict:
    """Certified bracket of the finite surrogate of ``c_k(T)``.

    Lower: best ratio ``(sum f_i)(v) / ||v||`` over candidate vectors; all-plus
    signs are worst case for disjoint non-negative functionals. Upper: l1 mass
    of the coefficients, capped by the analytic bound when it applies.
    """
    if k < 1 or k > len(T):
        raise ValueError("k exceeds the number of functionals")
    lower, upper, arg = 0.0, 0.0, None
    norms: dict = {}
    for idx in _subsets(len(T), k):
        coefs: dict = {}
        for i in idx:
            coefs.update(functional_coefficients(T.functionals[i]))
        upper = max(upper, _float_up(math.fsum(abs(c) for c in coefs.values()) * (1 + 1e-12)))
        for v in _candidates(T, idx):
            key = v.abs().coefficients
            if key not in norms:
                norms[key] = schlumprecht_norm(v)
            est = norms[key]
            num = math.fsum(coefs[i] * float(c) for i, c in v.items() if i in coefs)
            ratio = abs(num) * (1 - 1e-12) / est.upper
            if ratio > lower:
                lower, arg = ratio, [i + 1 for i in idx]
    analytic = analytic_functional_bound(T, level) if level is not None else None
    if analytic is not None:
        upper = min(upper, analytic)
    return {"bracket": NormBracket(lower, max(upper, lower)), "subset": arg, "analytic": analytic}


# -- norm estimates for tree vectors --------------------------------------------

@functools.lru_cache(maxsize=4096)
def _pattern_norm(coefficients: tuple) -> NormEstimate:
    """Norm of any vector with these successive coefficients (the basis is subsymmetric)."""
    return schlumprecht_norm(SparseVector({i + 1: c for i, c in enumerate(coefficients)}))


def _atom_lower_bound(total: SparseVector, atoms: list[tuple[int, int]]) -> float:
    """Certified lower bound of ``||total||`` from norms of its interval pieces.

    Replacing each leaf of a norming functional on the atom sequence by a
    norming functional of that atom stays inside the norming set, and the
    norm is monotone in non-negative coefficients.
    """
    values = [max(_pattern_norm(restrict(total, lo, hi).coefficients).lower, 0.0) for lo, hi in atoms]
    return max(_pattern_norm(tuple(Fraction(v) for v in values)).lower, 0.0)


def _tree_vector_norm(pairs: list, k: int, level: int) -> tuple[float, float, str]:
    total = SparseVector()
    for va, _ in pairs[:k]:
        total = total + va.vector()
    if len(total) <= EXACT_NORM_SUPPORT:
        est = _pattern_norm(total.coefficients)
        return est.lower, est.upper, "exact"
    atoms = []
    for va, _ in pairs[:k]:
        t = va.tree
        for node in t.nodes_at_level(level):
            leaves = _terminals_below(va, node)
            atoms.append((min(leaves), max(leaves)))
    lower = _atom_lower_bound(total, atoms)
    single = _pattern_norm(pairs[0][0].vector().coefficients)
    return lower, _float_up(k * single.upper), "atoms"


def _terminals_below(va: VectorAnalysis, node: int) -> list[int]:
    t = va.tree
    frontier = [node]
    while t.levels[frontier[0]] < va.height:
        frontier = [c for j in frontier for c in t.children(j)]
    return [va.terminal_indices[j] for j in frontier]


def verify_est_vectors(tree: CoreTree, N: int, k: int, count: Optional[int] = None,
                       height: Optional[int] = None) -> dict:
    """``(1/2) k d_{j0} <= ||x_{n_1} + ... + x_{n_k}||`` and the ratio against ``14``.

    ``j0`` is the first node on level ``N``; all vectors have tree-analysis of
    the same ``height > N`` (default ``N + 1``).
    """
    height = N + 1 if height is None else height
    count = k if count is None else count
    if height <= N or count < k or k < 1:
        raise ValueError("need k <= count and height > N")
    pairs = build_block_sequences(tree, [height] * count)
    t = pairs[0][0].tree
    j0 = t.first_at_level(N)
    d = coeffs(t, j0)[1]
    d_lo, d_hi = _float_lo(to_float(d.lo)), _float_up(to_float(d.hi))
    lower, upper, method = _tree_vector_norm(pairs, k, N)
    lower_ok = lower >= 0.5 * k * d_hi * (1 + 1e-12)
    ratio = (lower / (k * d_hi), upper / (k * d_lo))
    slack = k <= int(to_float(Enclosure.of(t.m[j0]).hi)) + 2
    verdict = "pass" if lower_ok else ("fail" if slack else "inconclusive")
    return report(
        "lower bound (1/2) k d_j0 <= ||x_n1 + ... + x_nk||",
        [lower, upper], 0.5 * k * d_hi, verdict,
        ratio=list(ratio), upper_ok=ratio[1] <= 14, method=method, j0=j0, k=k, N=N, height=height,
    )


def verify_est_functionals2(T: SeqOperator, y, j0: int, tolerance: float = 1e-9) -> dict:
    """``||T y|| <= sum_{j=1}^{j0} ||y||_{m_j} + 7 ||y|| / 2^{j0}`` with m_j read from T's tree."""
    if T.tree is None:
        raise ValueError("operator carries no core tree")
    lhs = schlumprecht_norm(apply_operator(T, y))
    ys = _as_sparse(y)
    y_norm = schlumprecht_norm(ys)
    widths = [int(materialize(T.tree.m[j], 64)) for j in range(1, j0 + 1) if T.tree.has_m(j)]
    rhs = math.fsum(norm_j(y, T, m) for m in widths) + 7.0 * y_norm.upper / 2 ** j0
    rep = check_conditions(T.tree, which=("F6", "F7"))
    holds = lhs.lower <= rhs + tolerance
    verdict = "pass" if holds else ("fail" if rep["passed"] else "inconclusive")
    return report("||T y|| <= sum_j ||y||_{m_j} + 7 ||y|| / 2^j0", lhs.value, rhs, verdict,
                  hypotheses_hold=rep["passed"], j0=j0)


# -- block evaluation contraction ---------------------------------------------

def random_functional(rng: random.Random, lo: int, hi: int, depth: int) -> FunctionalTree:
    """A random member of the norming set supported inside ``lo..hi``."""
    if depth == 0 or lo == hi or rng.random() < 0.25:
        return Leaf(rng.choice((1, -1)), rng.randint(lo, hi))
    cuts = sorted(rng.sample(range(lo + 1, hi + 1), min(hi - lo, rng.randint(1, 3))))
    bounds = list(zip([lo] + cuts, [c - 1 for c in cuts] + [hi]))
    children = [random_functional(rng, a, b, depth - 1) for a, b in bounds if rng.random() < 0.8]
    if not children:
        children = [random_functional(rng, *bounds[0], depth - 1)]
    return Node(len(children) + rng.randint(0, 2), tuple(children))


def random_block_family(rng: random.Random, count: int, width: int, depth: int = 3) -> list:
    out, start = [], 1
    for _ in range(count):
        w = rng.randint(1, width)
        out.append(random_functional(rng, start, start + w - 1, depth))
        start += w + rng.randint(0, 2)
    return out


def block_contraction(hs: Sequence[FunctionalTree], z: SparseVector, tolerance: float = 1e-9) -> dict:
    """``||sum_k h_k(z) e_k|| <= ||z||`` for successive norming functionals ``h_k``."""
    T = SeqOperator(list(hs))
    lhs = schlumprecht_norm(apply_operator(T, z))
    rhs = schlumprecht_norm(z)
    ok = lhs.value <= rhs.value + tolerance
    return report("||sum_k h_k(z) e_k|| <= ||z||", lhs.value, rhs.value, "pass" if ok else "fail")


# -- separation curve ---------------------------------------------------------

def _split_level(a: str, b: str) -> int:
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    return min(len(a), len(b))


def separation_curve(scheme: DyadicScheme, branch_pair: tuple[str, str], N_max: Optional[int] = None) -> list:
    """Upper bounds of ``c_k(R) d_k(T) / k`` at ``k = k_{i_N}`` on coupled levels past the split.

    At level N the dominating branch T gives ``d_k <= 14 k log2(m_prev + 1) / m_prev`` and
    the dominated branch R gives ``c_k <= 2 sum_{|gamma| < N} k_gamma``; their product
    over k is at most 28/N once (L1) holds.
    """
    b1, b2 = branch_pair
    if b1 == b2:
        raise ValueError("branches equal")
    split = _split_level(b1, b2)
    top = min(len(b1), len(b2)) if N_max is None else min(N_max, len(b1), len(b2))
    rows = []
    for level in coupled_levels(scheme.depth):
        if level < split + 2 or level > top:
            continue
        a, b = b1[:level], b2[:level]
        dom, sub = (a, b) if (a < b) == dominant_is_earlier(level) else (b, a)
        T, R = scheme.branch_tree(dom), scheme.branch_tree(sub)
        coupling = check_coupling(T, R, level)
        if not coupling["passed"]:
            raise ValueError(f"coupling fails at level {level}")
        m_prev = T.m[T.first_at_level(level - 1)]
        m_enc = Enclosure.of(m_prev)
        bound = Enclosure.exact(28) * _log_enc(m_prev) * m_enc.recip() * R.mass_below(level)
        limit = Enclosure.exact(Fraction(28, level))
        rows.append({
            "level": level,
            "N": level,
            "dominant": dom,
            "dominated": sub,
            "bound": bound,
            "bound_upper_log2": log2_text(bound.hi),
            "within_28_over_N": verdict_le(bound, limit),
        })
    return rows


def curve_decreasing(rows: list) -> bool:
    """Each bound's upper end lies strictly below the previous bound's lower end."""
    return all(cmp(b["bound"].hi, a["bound"].lo) < 0 for a, b in zip(rows, rows[1:]))


# -- Schreier domination ---------------------------------------------------------

MAX_CHAIN = 8
EXHAUSTIVE_STARTS = 4096
MAX_PATTERN_SUPPORT = 14


def _interval_set(A) -> IntervalSet:
    return A if isinstance(A, IntervalSet) else IntervalSet.from_indices(A)


def truncate(A, size: int) -> IntervalSet:
    """The first ``size`` elements of A."""
    return _interval_set(A).select_ranks(0, size - 1)


def _range_of(I: IntervalSet, x: int) -> Optional[tuple[int, int]]:
    for lo, hi in I.ranges:
        if lo <= x <= hi:
            return lo, hi
    return None


def _next_element(I: IntervalSet, x: int) -> Optional[int]:
    for lo, hi in I.ranges:
        if x < lo:
            return lo
        if x < hi:
            return x + 1
    return None


def _chain_end(s: int, count: int, N: int) -> Optional[int]:
    """Last index of ``count`` consecutive maximal S_N intervals from ``s``; None past scale."""
    e = s - 1
    try:
        for _ in range(count):
            e = maximal_end(e + 1, N)
    except ValueError:
        return None
    return e


def _latest_start(lo: int, hi: int, count: int, N: int) -> Optional[int]:
    """Largest s in lo..hi whose chain of ``count`` maximal intervals ends by hi."""
    end = _chain_end(lo, count, N)
    if end is None or end > hi:
        return None
    a, b = lo, hi
    while a < b:
        mid = (a + b + 1) // 2
        end = _chain_end(mid, count, N)
        if end is not None and end <= hi:
            a = mid
        else:
            b = mid - 1
    return a


def _candidate_starts(I: IntervalSet, N: int) -> list[int]:
    starts = set()
    for lo, hi in I.ranges:
        starts.add(lo)
        for count in range(1, MAX_CHAIN + 1):
            s = _latest_start(lo, hi, count, N)
            if s is not None:
                starts.add(s)
    if I.size <= EXHAUSTIVE_STARTS:
        starts.update(I.to_index_set())
    return sorted(starts)


def _chain(I: IntervalSet, s: int, k: int, N: int) -> Optional[list[tuple[int, int]]]:
    """k successive maximal S_N intervals inside I, the first starting at s."""
    blocks = []
    x = s
    for _ in range(k):
        if x is None:
            return None
        e = _chain_end(x, 1, N)
        host = _range_of(I, x)
        if e is None or host is None or e > host[1]:
            return None
        blocks.append((x, e))
        x = _next_element(I, e)
    return blocks


def validate_rij(cert: dict, I, J, N: int) -> bool:
    """Re-check a certificate: maximal blocks inside I, successive, image in S_1."""
    I, J = _interval_set(I), _interval_set(J)
    blocks = [tuple(b) for b in cert["sets"]]
    prev = 0
    for lo, hi in blocks:
        host = _range_of(I, lo)
        if lo <= prev or host is None or hi > host[1]:
            return False
        small = hi - lo < EXHAUSTIVE_STARTS
        if not (is_maximal_schreier(range(lo, hi + 1), N) if small else is_maximal_interval(lo, hi, N)):
            return False
        prev = hi
    image = I.map_into(IntervalSet(blocks), J)
    return is_schreier_intervals(image, 1)


def rij_certificate(I, J, N: int, k: int) -> dict:
    """Search maximal S_N sets ``F_1 < ... < F_k`` in I with ``phi_{I,J}(F_1 u ... u F_k)`` in S_1."""
    I, J = _interval_set(I), _interval_set(J)
    if I.size != J.size:
        raise ValueError("arity mismatch: |I| = %d, |J| = %d" % (I.size, J.size))
    for s in _candidate_starts(I, N):
        blocks = _chain(I, s, k, N)
        if blocks is None:
            continue
        image = I.map_into(IntervalSet(blocks), J)
        if is_schreier_intervals(image, 1):
            cert = {"found": True, "N": N, "k": k, "sets": [list(b) for b in blocks],
                    "image": [list(r) for r in image.ranges]}
            cert["revalidated"] = validate_rij(cert, I, J, N)
            return cert
    return {"found": False, "N": N, "k": k, "note": "no certificate within the truncation"}


def _pieces_norm(pieces: list, N: int) -> Fraction:
    return block_norm(pieces, N)


def _average_pattern(I: IntervalSet, J: IntervalSet, blocks: list, N: int) -> tuple[Fraction, Fraction]:
    i_side, j_side = [], []
    for lo, hi in blocks:
        w = Fraction(1, hi - lo + 1)
        i_side.append((lo, hi, w))
        for a, b in I.map_into(IntervalSet([(lo, hi)]), J).ranges:
            j_side.append((a, b, w))
    return _pieces_norm(i_side, N), _pieces_norm(j_side, N)


def dominates(I, J, N: int, support_cap: int = 10, C=4) -> dict:
    """Look for ``a`` with ``||sum a_m e_{j_m}|| > C ||sum a_m e_{i_m}||`` in the S_N norm.

    Only a found witness is conclusive; otherwise the answer is inconclusive.
    """
    I, J = _interval_set(I), _interval_set(J)
    if I.size != J.size:
        raise ValueError("arity mismatch: |I| = %d, |J| = %d" % (I.size, J.size))
    C = Fraction(C)
    best = None
    for s in _candidate_starts(I, N):
        for count in range(1, MAX_CHAIN + 1):
            blocks = _chain(I, s, count, N)
            if blocks is None:
                break
            lhs_i, lhs_j = _average_pattern(I, J, blocks, N)
            if lhs_j > C * lhs_i and (best is None or lhs_j / lhs_i > best[0]):
                best = (lhs_j / lhs_i, {"kind": "block averages", "blocks": [list(b) for b in blocks],
                                        "norm_I": str(lhs_i), "norm_J": str(lhs_j)})
    if best is None:
        cap = min(support_cap, MAX_PATTERN_SUPPORT, I.size)
        i_pos = [I.select_ranks(r, r).min for r in range(cap)]
        j_pos = [J.select_ranks(r, r).min for r in range(cap)]
        for mask in range(1, 1 << cap):
            chosen = [r for r in range(cap) if mask >> r & 1]
            ni = schreier_norm(SparseVector({i_pos[r]: 1 for r in chosen}), N)
            nj = schreier_norm(SparseVector({j_pos[r]: 1 for r in chosen}), N)
            if nj > C * ni and (best is None or nj / ni > best[0]):
                best = (nj / ni, {"kind": "0/1 pattern", "ranks": chosen, "norm_I": str(ni), "norm_J": str(nj)})
    if best is None:
        return report("no domination at constant C", None, str(C), "inconclusive",
                      note="no witness found")
    return report("no domination at constant C", str(best[0]), str(C), "pass", witness=best[1])


# -- repeated averages against their maxima -------------------------------------

def sch_av_check(blocks: Sequence, a: Sequence, N: int) -> dict:
    """``(1/2)||sum a_m e_{s_m}||_{N-1} <= ||sum a_m y_m||_N <= 2||sum a_m e_{s_m}||_{N-1}``, exactly."""
    if len(a) != len(blocks) or N < 1:
        raise ValueError("one coefficient per block and N >= 1 required")
    pieces = [b.piece(abs(Fraction(c))) for b, c in zip(blocks, a) if c != 0]
    middle = block_norm(pieces, N) if pieces else Fraction(0)
    spikes = SparseVector({b.s: Fraction(c) for b, c in zip(blocks, a)})
    side = schreier_norm(spikes, N - 1)
    ok = side / 2 <= middle <= 2 * side
    return report("repeated averages are 2-equivalent to e_{s_m}", str(middle), str(side),
                  "pass" if ok else "fail", N=N, coefficients=[str(Fraction(c)) for c in a])
