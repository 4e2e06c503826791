"""Concrete vectors, functionals and index families.

* tree-analysis vectors ``x`` over a core tree and their associated functionals;
* the Schreier dyadic family ``F_d = H_d u G_d``;
* repeated averages over fast growing sets;
* the strict-singularity witness ``z = z_{K+1} + ... + z_{2K}``.

Index sets that grow beyond memory are kept as ``IntervalSet`` ranges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .schlumprecht import Leaf, Node, FunctionalTree
from .schreier import (
    block_norm,
    is_maximal_interval,
    is_maximal_schreier,
    is_schreier,
    is_schreier_intervals,
    maximal_end,
)
from .towers import Enclosure, materialize
from .trees import CoreTree, build_core_tree, coeffs
from .vectors import IndexSet, IntervalSet, SparseVector

MAX_TERMINALS = 50_000


# -- tree-analysis vectors ---------------------------------------------------

def _explicit(tree: CoreTree, height: int) -> CoreTree:
    """Explicit copy of ``tree`` enumerated down to ``height``."""
    if not tree.uniform:
        return build_core_tree(tree.m, tree.q, height)
    widths = []
    for level in range(height):
        w = materialize(tree.m[level], 32)
        if w is None:
            raise ValueError("not materializable: level %d parameter is a tower" % level)
        widths.append(w)
    m, q, count = [], [], 1
    for level in range(height + 1):
        if count > MAX_TERMINALS:
            raise ValueError("not materializable: level %d has %d nodes" % (level, count))
        if level < len(tree.m):
            m += [tree.m[level]] * count
        if level < len(tree.q):
            q += [tree.q[level]] * count
        if level < height:
            count *= widths[level]
    return build_core_tree(m, q, height)


def _log_ratio(width: int) -> tuple[float, Optional[Fraction]]:
    """``log2(m+1)/m`` as a float and, when m+1 is a power of two, exactly."""
    exact = None
    if (width + 1) & width == 0:
        exact = Fraction((width + 1).bit_length() - 1, width)
    return math.log2(width + 1) / width, exact


@dataclass
class VectorAnalysis:
    """A vector with a tree-analysis of given height over an explicit core tree."""

    tree: CoreTree
    height: int
    start_index: int
    terminal_indices: dict  # terminal node -> index t_alpha
    node_vectors: dict  # node -> {index: float coefficient}
    exact_vectors: dict = field(default_factory=dict)  # node -> {index: Fraction} when exact

    @property
    def support(self) -> IndexSet:
        return IndexSet(sorted(self.terminal_indices.values()))

    @property
    def is_exact(self) -> bool:
        return 0 in self.exact_vectors

    def float_vector(self, node: int = 0) -> dict:
        return dict(self.node_vectors[node])

    def vector(self, node: int = 0) -> SparseVector:
        """Coefficients as rationals; exact when every log factor is rational."""
        if node in self.exact_vectors:
            return SparseVector(self.exact_vectors[node])
        return SparseVector({i: Fraction(c) for i, c in self.node_vectors[node].items()})

    def coefficient_enclosure(self, terminal: int) -> Enclosure:
        """Certified enclosure of the root coefficient at a terminal node (its d-product)."""
        return coeffs(self.tree, terminal)[1]

    def nodes_at_level(self, level: int) -> list[int]:
        return self.tree.nodes_at_level(level)


def build_tree_vector(tree: CoreTree, height: int, start_index: int = 1) -> VectorAnalysis:
    """Tree-analysis vector of ``height`` with terminals placed consecutively from ``start_index``."""
    if height < 0:
        raise ValueError("height must be non-negative")
    if start_index < 1:
        raise ValueError("start_index must be positive")
    t = _explicit(tree, height)
    terminals = t.nodes_at_level(height)
    if len(terminals) > MAX_TERMINALS:
        raise ValueError("not materializable: %d terminals" % len(terminals))
    terminal_indices = {node: start_index + r for r, node in enumerate(terminals)}
    node_vectors: dict = {}
    exact_vectors: dict = {}
    for node in sorted(range(t.num_nodes()), key=lambda j: -t.levels[j]):
        if t.levels[node] > height:
            continue
        if t.levels[node] == height:
            node_vectors[node] = {terminal_indices[node]: 1.0}
            exact_vectors[node] = {terminal_indices[node]: Fraction(1)}
            continue
        width = int(materialize(t.m[node], 64))
        ratio, exact_ratio = _log_ratio(width)
        vec: dict = {}
        exact: Optional[dict] = {} if exact_ratio is not None else None
        for child in t.children(node):
            for i, c in node_vectors[child].items():
                vec[i] = ratio * c
            if exact is not None and child in exact_vectors:
                for i, c in exact_vectors[child].items():
                    exact[i] = exact_ratio * c
            else:
                exact = None
        node_vectors[node] = vec
        if exact is not None:
            exact_vectors[node] = exact
    return VectorAnalysis(t, height, start_index, terminal_indices, node_vectors, exact_vectors)


def associated_functional(va: VectorAnalysis) -> FunctionalTree:
    """Functional with the same tree shape: leaves ``e*_{t_alpha}``, weights ``m_alpha``."""
    t = va.tree

    def build(node: int) -> FunctionalTree:
        if t.levels[node] == va.height:
            return Leaf(1, va.terminal_indices[node])
        return Node(int(materialize(t.m[node], 64)), tuple(build(c) for c in t.children(node)))

    return build(0)


def pairing_value(va: VectorAnalysis) -> dict:
    """``f(x)`` for the associated functional, exactly and as a certified enclosure.

    Each terminal contributes ``c_t d_t = prod 1/m_gamma``, so the exact value
    is a rational; the enclosure is assembled from the separate c and d bounds.
    """
    t = va.tree
    exact = Fraction(0)
    enclosure = Enclosure.exact(0)
    for node in va.terminal_indices:
        share = Fraction(1)
        for a in t.ancestors(node):
            share /= int(materialize(t.m[a], 64))
        exact += share
        c, d = coeffs(t, node)
        enclosure = enclosure + c * d
    return {"exact": exact, "enclosure": enclosure}


def build_block_sequences(tree: CoreTree, heights: list[int], start_index: int = 1) -> list:
    """Successive pairs ``(x_n, f_n)``; ``x_n`` has tree-analysis of height ``heights[n]``."""
    if any(a > b for a, b in zip(heights, heights[1:])):
        raise ValueError("heights must be non-decreasing")
    out = []
    start = start_index
    for h in heights:
        va = build_tree_vector(tree, h, start)
        out.append((va, associated_functional(va)))
        start = va.support.max + 1
    return out


# -- Schreier dyadic family --------------------------------------------------

MAX_DYADIC_DEPTH = 6


def dyadic_addresses(depth: int) -> list[str]:
    """Nodes of the dyadic tree in level-then-lexicographic order."""
    out = [""]
    for level in range(1, depth + 1):
        out += [format(i, "b").zfill(level) for i in range(2 ** level)]
    return out


@dataclass
class DyadicFamily:
    depth: int
    N: int
    H: dict  # address -> (lo, hi) or None for the root
    G: dict  # address -> list of (lo, hi) blocks

    def F(self, address: str) -> IntervalSet:
        if address == "":
            return IntervalSet([(1, 1)])
        return IntervalSet([self.H[address]] + list(self.G[address]))

    def addresses(self) -> list[str]:
        return dyadic_addresses(self.depth)

    def leaves(self) -> list[str]:
        return [a for a in self.addresses() if len(a) == self.depth]

    def branch_set(self, leaf: str) -> IntervalSet:
        """``J_B``: union of ``F_d`` along the branch ending at ``leaf``."""
        return IntervalSet.union(self.F(leaf[:i]) for i in range(len(leaf) + 1))

    def to_json(self) -> dict:
        nodes = {"": {"H": [], "G": [], "F": [[1, 1]]}}
        for a in self.addresses()[1:]:
            nodes[a] = {"H": list(self.H[a]), "G": [list(b) for b in self.G[a]]}
        return {"depth": self.depth, "N": self.N, "nodes": nodes}

    @classmethod
    def from_json(cls, obj) -> "DyadicFamily":
        H, G = {"": None}, {"": []}
        for a, v in obj["nodes"].items():
            if a == "":
                continue
            H[a] = tuple(int(x) for x in v["H"])
            G[a] = [tuple(int(x) for x in b) for b in v["G"]]
        return cls(int(obj["depth"]), int(obj["N"]), H, G)


def schreier_dyadic_family(depth: int, N: int) -> DyadicFamily:
    """Build ``F_d`` in level-then-lex order with smallest admissible choices."""
    if depth < 0 or depth > MAX_DYADIC_DEPTH or N < 1 or N > 2:
        raise ValueError("scale exceeded: depth <= %d and N in {1, 2} required" % MAX_DYADIC_DEPTH)
    H: dict = {"": None}
    G: dict = {"": []}
    total = 1  # #F of everything built so far
    top = 1  # current maximum index
    for address in dyadic_addresses(depth)[1:]:
        h_lo, h_hi = top + 1, top + total
        blocks = []
        s = h_hi + 1
        for _ in range(len(address)):
            e = maximal_end(s, N)
            blocks.append((s, e))
            s = e + 1
        H[address] = (h_lo, h_hi)
        G[address] = blocks
        size = (h_hi - h_lo + 1) + (s - (h_hi + 1))
        total += size
        top = s - 1
    return DyadicFamily(depth, N, H, G)


EXPLICIT_CHECK_LIMIT = 4096


def validate_dyadic_family(fam: DyadicFamily) -> list[str]:
    """Independent re-check of the four defining conditions; returns the violations."""
    problems = []
    order = fam.addresses()
    sizes = {a: fam.F(a).size for a in order}
    for prev, cur in zip(order, order[1:]):
        if fam.F(cur).min <= fam.F(prev).max:
            problems.append(f"(1) F_{cur} does not follow F_{prev}")
    running = 0
    for a in order:
        if a == "":
            running += sizes[a]
            continue
        h_lo, h_hi = fam.H[a]
        blocks = fam.G[a]
        if blocks and h_hi >= blocks[0][0]:
            problems.append(f"(2) H_{a} is not below G_{a}")
        if h_hi - h_lo + 1 != running:
            problems.append(f"(3) #H_{a} = {h_hi - h_lo + 1}, expected {running}")
        if len(blocks) != len(a):
            problems.append(f"(4) G_{a} has {len(blocks)} blocks, expected {len(a)}")
        for (lo, hi), nxt in zip(blocks, blocks[1:] + [None]):
            if nxt is not None and nxt[0] <= hi:
                problems.append(f"(4) blocks of G_{a} are not successive")
            if hi - lo < EXPLICIT_CHECK_LIMIT:
                ok = is_maximal_schreier(range(lo, hi + 1), fam.N)
            else:
                ok = is_maximal_interval(lo, hi, fam.N)
            if not ok:
                problems.append(f"(4) block {lo}..{hi} of G_{a} is not a maximal S_{fam.N} set")
        running += sizes[a]
    return problems


def phi_certificate(fam: DyadicFamily, leaf_b: str, leaf_a: str, node: str) -> dict:
    """Check ``phi_{J_B,J_A}(G_d) > max F_d`` and ``phi_{J_B,J_A}(G_d)`` in S_1 for ``d`` on B only.

    ``H_d`` pads the ranks of ``G_d`` in ``J_B`` past every index of ``J_A``
    below ``max F_d``; the image of ``H_d`` itself may land lower.
    """
    if not leaf_b.startswith(node) or leaf_a.startswith(node):
        raise ValueError("node must lie on the first branch and off the second")
    JB, JA = fam.branch_set(leaf_b), fam.branch_set(leaf_a)
    Fd = fam.F(node)
    Gd = IntervalSet(fam.G[node])
    if JB.rank(Gd.max) > JA.size:
        return {"node": node, "defined": False, "note": "image leaves the truncated J_A"}
    image_G = JB.map_into(Gd, JA)
    return {
        "node": node,
        "defined": True,
        "image_G_min": image_G.min,
        "max_F": Fd.max,
        "above_max": image_G.min > Fd.max,
        "G_size": Gd.size,
        "image_G": [list(r) for r in image_G.ranges],
        "image_in_S1": is_schreier_intervals(image_G, 1),
    }


# -- repeated averages ---------------------------------------------------------

MAX_AVERAGE_COUNT = 6


@dataclass(frozen=True)
class AverageBlock:
    lo: int
    hi: int

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    @property
    def s(self) -> int:
        return self.hi

    def vector(self, limit: int = 1 << 20) -> SparseVector:
        if self.size > limit:
            raise ValueError("scale exceeded: average over %d indices" % self.size)
        w = Fraction(1, self.size)
        return SparseVector({i: w for i in range(self.lo, self.hi + 1)})

    def piece(self, coefficient=1) -> tuple:
        return (self.lo, self.hi, Fraction(coefficient) / self.size)


def repeated_average_sequence(count: int, N: int = 1, start: int = 1) -> list[AverageBlock]:
    """Sets ``E_m`` with ``#E_m <= min E_m`` and ``#E_{m+1} > 2 #E_m max E_m``, smallest choices.

    Each block carries its average ``y_m`` (``vector()``) and ``s_m = max E_m``.
    """
    if count < 1 or count > MAX_AVERAGE_COUNT:
        raise ValueError("scale exceeded: count must be 1..%d" % MAX_AVERAGE_COUNT)
    if N < 1:
        raise ValueError("averages are normalised in S_N for N >= 1")
    blocks = []
    size, lo = 1, max(start, 1)
    for m in range(count):
        if m:
            prev = blocks[-1]
            size = 2 * prev.size * prev.hi + 1
            lo = max(prev.hi + 1, size)
        lo = max(lo, size)
        blocks.append(AverageBlock(lo, lo + size - 1))
    return blocks


# -- strict-singularity witness ------------------------------------------------

MAX_WITNESS_K = 2


@dataclass
class WitnessResult:
    N: int
    K: int
    blocks: list  # (n, lo, hi) for every constructed z_n, n = 1..2K
    norm_top: Fraction  # ||z||_{S_N}
    norm_mid: Fraction  # ||z||_{S_{N-1}}
    block_checks: list = field(default_factory=list)

    @property
    def pieces(self) -> list:
        return [(lo, hi, Fraction(1, hi - lo + 1)) for n, lo, hi in self.blocks if n > self.K]

    @property
    def passed(self) -> bool:
        return (self.norm_top >= self.K and self.norm_mid <= 2
                and all(c["mid_is_one"] and c["low_ok"] for c in self.block_checks))

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "K": self.K,
            "blocks": [{"n": n, "lo": lo, "hi": hi} for n, lo, hi in self.blocks],
            "norm_top": str(self.norm_top),
            "norm_mid": str(self.norm_mid),
            "block_checks": [{k: (str(v) if isinstance(v, Fraction) else v) for k, v in c.items()}
                             for c in self.block_checks],
            "passed": self.passed,
        }


def strict_singularity_witness(N: int = 2, K: int = 1) -> WitnessResult:
    """Blocks ``z_n`` = averages over maximal S_{N-1} sets with ``#E_n = 2^n max supp z_{n-1}``.

    Then ``||z_n||_{S_{N-1}} = 1`` and ``||z_n||_{S_{N-2}} = 1/#E_n`` meets the
    required bound with equality; ``z`` sums the blocks ``n = K+1..2K``.
    """
    if N != 2 or K < 1 or K > MAX_WITNESS_K:
        raise ValueError("scale exceeded: N = 2 and 1 <= K <= %d supported" % MAX_WITNESS_K)
    blocks = []
    prev_max = 1
    for n in range(1, 2 * K + 1):
        lo = (1 << n) * prev_max
        hi = maximal_end(lo, N - 1)
        blocks.append((n, lo, hi))
        prev_max = hi
    checks = []
    prev_max = 1
    for n, lo, hi in blocks:
        piece = [(lo, hi, Fraction(1, hi - lo + 1))]
        mid = block_norm(piece, N - 1)
        low = block_norm(piece, N - 2)
        bound = Fraction(1, (1 << n) * prev_max)
        checks.append({"n": n, "mid": mid, "low": low, "bound": bound,
                       "mid_is_one": mid == 1, "low_ok": low <= bound})
        prev_max = hi
    chosen = [(lo, hi, Fraction(1, hi - lo + 1)) for n, lo, hi in blocks if n > K]
    return WitnessResult(N, K, blocks, block_norm(chosen, N), block_norm(chosen, N - 1), checks)
