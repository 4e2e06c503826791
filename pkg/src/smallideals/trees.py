"""Core trees, their coefficient products and the growth conditions.

Two storage modes are supported.

* ``explicit``: every node is enumerated in lexicographic order (level by
  level, starting at the root) and carries its own ``m`` and ``q``. Needs
  small integer parameters.
* ``uniform``: all nodes on one level share the same ``(m, q)``. Parameters
  may be power towers. Node indices in this mode are level numbers, and the
  growth conditions indexed by ``j`` are read with ``j`` the level.

Conditions evaluated here:

F3  sum_{s <= q_{j-1}} ||E_s x_{alpha_j}|| <= 4      (explicit mode, numerically)
F4  log2(m_j + 1) >= 2 log2(m_{j-1} + 1)
F5  #level N <= log2(q_{s_N} + 1), s_N the last node on level N - 1
F6  2^j sum_{t<j} m_t <= log2(m_j + 1)
F7  c_j <= 2^-(j+1)
L1  N log2(m_{j_{N-1}} + 1) sum_{|g|<N} k_g <= m_{j_{N-1}}
L2  q_{j_N - 1} <= k_{i_N} <= m_{j_N}
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .towers import (
    Enclosure,
    Int,
    Mag,
    Pow2m1,
    TowerNumeral,
    add_int_up,
    add_up,
    at_least,
    cmp,
    enclosure_sum,
    log2p1,
    mag_max,
    mag_to_json,
    materialize,
    pow2,
    rat,
    recip,
    tower,
    tower_cmp,
    tower_enclosure,
    tower_to_json,
    verdict_le,
)

MAX_EXPLICIT_NODES = 200_000
MAX_TOWER_DEPTH = 4
F3_MAX_SUPPORT = 160
CONDITIONS = ("F3", "F4", "F5", "F6", "F7")


def _log_enc(t: TowerNumeral) -> Enclosure:
    return Enclosure(*log2p1(t))


def _pow2_enc(j: int) -> Enclosure:
    return Enclosure.exact(pow2(rat(j)))


@dataclass
class CoreTree:
    """A core tree truncated at ``depth`` together with its parameters."""

    m: list
    q: list
    depth: int
    uniform: bool = False
    levels: list = field(default_factory=list)
    parents: list = field(default_factory=list)
    first_child: list = field(default_factory=list)

    # -- structure -------------------------------------------------------
    @property
    def mode(self) -> str:
        return "uniform" if self.uniform else "explicit"

    def num_nodes(self) -> int:
        if self.uniform:
            raise ValueError("uniform trees are not enumerated node by node")
        return len(self.levels)

    def level_of(self, j: int) -> int:
        return j if self.uniform else self.levels[j]

    def first_at_level(self, level: int) -> int:
        if self.uniform:
            return level
        return self.levels.index(level)

    def last_at_level(self, level: int) -> int:
        if self.uniform:
            return level
        return len(self.levels) - 1 - self.levels[::-1].index(level)

    def nodes_at_level(self, level: int) -> list[int]:
        return [j for j, l in enumerate(self.levels) if l == level]

    def children(self, j: int) -> range:
        start = self.first_child[j]
        return range(start, start + int(materialize(self.m[j], 64)))

    def ancestors(self, j: int) -> list[int]:
        """Strict ancestors, root first."""
        if self.uniform:
            return list(range(j))
        out = []
        while self.parents[j] is not None:
            j = self.parents[j]
            out.append(j)
        return out[::-1]

    def address(self, j: int) -> tuple[int, ...]:
        path = self.ancestors(j) + [j]
        return tuple(path[i + 1] - self.first_child[path[i]] + 1 for i in range(len(path) - 1))

    def has_m(self, j: int) -> bool:
        return j < len(self.m)

    def has_q(self, j: int) -> bool:
        return j < len(self.q)

    def check_index(self, j: int) -> None:
        top = self.depth if self.uniform else len(self.levels) - 1
        if not 0 <= j <= top:
            raise IndexError(f"node {j} outside the stored tree (0..{top})")

    # -- counts ----------------------------------------------------------
    def level_size(self, level: int) -> Enclosure:
        if self.uniform:
            size = Enclosure.exact(1)
            for u in range(level):
                size = size * Enclosure.of(self.m[u])
            return size
        return Enclosure.exact(self.levels.count(level))

    def mass_below(self, level: int) -> Enclosure:
        """Sum of ``m_gamma`` over all nodes with ``|gamma| < level``."""
        if self.uniform:
            return enclosure_sum(self.level_size(t) * Enclosure.of(self.m[t]) for t in range(level))
        return enclosure_sum(Enclosure.of(self.m[j]) for j, l in enumerate(self.levels) if l < level)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "depth": self.depth,
            "m": [tower_to_json(t) for t in self.m],
            "q": [tower_to_json(t) for t in self.q],
        }


def build_core_tree(m: Sequence, q: Sequence = (), depth: int = 1) -> CoreTree:
    """Enumerate the core tree with branching ``m`` (lexicographic order) up to ``depth``."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    m = [tower(v) for v in m]
    q = [tower(v) for v in q]
    levels, parents, first_child = [0], [None], []
    frontier = [0]
    for level in range(depth):
        nxt = []
        for j in frontier:
            if j >= len(m):
                raise ValueError(f"insufficient parameters: node {j} on level {level} has no m value")
            width = materialize(m[j], 64)
            if width is None or len(levels) + width > MAX_EXPLICIT_NODES:
                raise ValueError("not materializable: use uniform_core_tree for tower parameters")
            if width < 1:
                raise ValueError("every node needs at least one successor")
            first_child.append(len(levels))
            for _ in range(width):
                nxt.append(len(levels))
                levels.append(level + 1)
                parents.append(j)
        frontier = nxt
    first_child += [None] * (len(levels) - len(first_child))
    return CoreTree(m=m, q=q, depth=depth, levels=levels, parents=parents, first_child=first_child)


def uniform_core_tree(level_m: Sequence, level_q: Sequence = (), depth: Optional[int] = None) -> CoreTree:
    """Level-uniform core tree: every node on level ``l`` has ``level_m[l]`` successors."""
    level_m = [tower(v) for v in level_m]
    level_q = [tower(v) for v in level_q]
    depth = len(level_m) if depth is None else depth
    if len(level_m) < depth:
        raise ValueError(f"insufficient parameters: {depth} levels need {depth} m values")
    for t in level_m:
        if tower_cmp(t, Int(1)) < 0:
            raise ValueError("every node needs at least one successor")
    return CoreTree(m=level_m, q=level_q, depth=depth, uniform=True)


def coeffs(tree: CoreTree, j: int) -> tuple[Enclosure, Enclosure]:
    """Certified enclosures of ``c_j`` and ``d_j``."""
    tree.check_index(j)
    c = Enclosure.exact(1)
    d = Enclosure.exact(1)
    for a in tree.ancestors(j):
        log = _log_enc(tree.m[a])
        c = c * log.recip()
        d = d * log * Enclosure.of(tree.m[a]).recip()
    return c, d


def branching_product(tree: CoreTree, j: int) -> Enclosure:
    out = Enclosure.exact(1)
    for a in tree.ancestors(j):
        out = out * Enclosure.of(tree.m[a])
    return out


# -- reports -----------------------------------------------------------------

def _entry(condition: str, index: int, lhs: Enclosure, rhs: Enclosure,
           verdict: Optional[str] = None, note: str = "") -> dict:
    out = {
        "condition": condition,
        "index": index,
        "verdict": verdict or verdict_le(lhs, rhs),
        "lhs": lhs.to_json(),
        "rhs": rhs.to_json(),
    }
    if note:
        out["note"] = note
    return out


def _report(tree_mode: str, entries: list[dict]) -> dict:
    return {
        "indexing": "level" if tree_mode == "uniform" else "node",
        "results": entries,
        "passed": all(e["verdict"] in ("pass", "not checkable") for e in entries),
        "indeterminate": sum(e["verdict"] == "indeterminate" for e in entries),
    }


def subtree_weights(tree: CoreTree, j: int, height: int) -> list[float]:
    """Coefficients of ``x_{alpha_j}`` for a tree-analysis of total height ``height``.

    Terminal nodes sit on level ``height``; entries are listed in support order.
    """
    weights: list[float] = []

    def walk(node: int, scale: float) -> None:
        if tree.levels[node] == height:
            weights.append(scale)
            return
        width = int(materialize(tree.m[node], 64))
        factor = math.log2(width + 1) / width
        for child in tree.children(node):
            walk(child, scale * factor)

    walk(j, 1.0)
    return weights


def _check_f3(tree: CoreTree) -> list[dict]:
    from .schlumprecht import l1_average_constant
    from .vectors import SparseVector

    out = []
    for j in range(1, tree.num_nodes()):
        if not tree.has_q(j - 1):
            continue
        q_prev = materialize(tree.q[j - 1], 64)
        for height in range(tree.levels[j], tree.depth + 1):
            if height > tree.levels[j] and not all(tree.has_m(k) for k in range(j + 1)):
                break
            try:
                weights = subtree_weights(tree, j, height)
            except TypeError:
                break
            if len(weights) > F3_MAX_SUPPORT:
                out.append({"condition": "F3", "index": j, "height": height,
                            "verdict": "not checkable", "note": "support too large"})
                continue
            x = SparseVector({i + 1: w for i, w in enumerate(weights)})
            value = l1_average_constant(x, q_prev)
            lhs = Enclosure.exact(rat(value))
            entry = _entry("F3", j, lhs, Enclosure.exact(4),
                           note="numerical: sum of ||E_s x|| over the best partition")
            entry["height"] = height
            out.append(entry)
    return out


def check_conditions(tree: CoreTree, which: Optional[Iterable[str]] = None) -> dict:
    """Evaluate the requested growth conditions; never guesses on indeterminate bounds."""
    which = set(CONDITIONS if which is None else which)
    unknown = which - set(CONDITIONS)
    if unknown:
        raise ValueError(f"unknown conditions: {sorted(unknown)}")
    entries: list[dict] = []
    if tree.uniform:
        with_m = range(min(len(tree.m), tree.depth))
        stored = range(tree.depth + 1)
    else:
        with_m = [j for j in range(tree.num_nodes()) if tree.has_m(j)]
        stored = range(tree.num_nodes())

    if "F3" in which:
        if tree.uniform:
            entries.append({"condition": "F3", "index": None, "verdict": "not checkable",
                            "note": "needs materialized vectors"})
        else:
            entries.extend(_check_f3(tree))
    for j in with_m:
        if j == 0:
            continue
        if "F4" in which:
            lhs = Enclosure.exact(2) * _log_enc(tree.m[j - 1])
            entries.append(_entry("F4", j, lhs, _log_enc(tree.m[j])))
        if "F6" in which:
            total = enclosure_sum(Enclosure.of(tree.m[t]) for t in range(j))
            entries.append(_entry("F6", j, _pow2_enc(j) * total, _log_enc(tree.m[j])))
    if "F5" in which:
        for N in range(1, tree.depth + 1):
            s = tree.last_at_level(N - 1)
            if not tree.has_q(s):
                continue
            entries.append(_entry("F5", N, tree.level_size(N), _log_enc(tree.q[s])))
    if "F7" in which:
        for j in stored:
            if j == 0:
                continue
            c, _ = coeffs(tree, j)
            bound = Enclosure.exact(recip(pow2(rat(j + 1))))
            entries.append(_entry("F7", j, c, bound))
    return _report(tree.mode, entries)


def check_coupling(T: CoreTree, R: CoreTree, N: int) -> dict:
    """Verdicts for L1 and L2 between ``T`` (dominating) and ``R`` at level ``N``."""
    if N < 1:
        raise ValueError("coupling is defined for N >= 1")
    for name, tree in (("T", T), ("R", R)):
        if tree.depth < N or not tree.has_m(tree.first_at_level(N)):
            raise ValueError(f"insufficient depth: tree {name} has no parameters on level {N}")
    j_prev = T.first_at_level(N - 1)
    j_N = T.first_at_level(N)
    i_N = R.first_at_level(N)
    m_prev = T.m[j_prev]
    lhs = Enclosure.exact(N) * _log_enc(m_prev) * R.mass_below(N)
    entries = [_entry("L1", N, lhs, Enclosure.of(m_prev))]
    if not T.has_q(j_N - 1):
        raise ValueError("insufficient parameters: q on level %d missing" % (N - 1))
    q_last, k, m_N = T.q[j_N - 1], R.m[i_N], T.m[j_N]
    for label, a, b in (("L2-lower", q_last, k), ("L2-upper", k, m_N)):
        verdict = "pass" if tower_cmp(a, b) <= 0 else "fail"
        entries.append(_entry(label, N, Enclosure.of(a), Enclosure.of(b), verdict=verdict))
    report = _report("uniform" if T.uniform else "explicit", entries)
    report.update({"N": N, "j_N": j_N, "i_N": i_N, "j_prev": j_prev})
    return report


# -- parameter generation ----------------------------------------------------

def _log2_ceil(X: Mag) -> Mag:
    """An integer-valued upper bound of log2(X) (0 for X <= 1)."""
    if X.is_rat:
        if X.rat <= 1:
            return rat(0)
        return rat(math.ceil(math.log2(X.rat.numerator)) - math.floor(math.log2(X.rat.denominator)) + 1)
    return rat(0) if X.neg else X.exp


def _tower_max(items: Iterable[TowerNumeral]) -> TowerNumeral:
    best = None
    for t in items:
        if best is None or tower_cmp(t, best) > 0:
            best = t
    return best


def _exp_for_m_at_least(B: Mag) -> TowerNumeral:
    """Exponent e with 2^e - 1 >= B."""
    return at_least(add_int_up(_log2_ceil(add_up(B, rat(1))), 0))


@dataclass
class _Level:
    """Constraints gathered for one new ``m = 2^e - 1``."""

    e_lower: list = field(default_factory=list)  # Mags the exponent must reach
    m_lower: list = field(default_factory=list)  # Mags m must reach
    dominate: list = field(default_factory=list)  # (N, mass Enclosure): N e mass <= m


def _choose_m(req: _Level) -> Pow2m1:
    cands = [at_least(x) for x in req.e_lower] + [_exp_for_m_at_least(x) for x in req.m_lower]
    e = _tower_max(cands + [Int(1)])
    for _ in range(64):
        m = Pow2m1(e)
        bad = None
        for N, mass in req.dominate:
            lhs = Enclosure.exact(N) * Enclosure.of(e) * mass
            if verdict_le(lhs, Enclosure.of(m)) != "pass":
                bad = lhs
                break
        if bad is None:
            return m
        # 2^e' - 1 >= N e mass once e' >= log2(N mass) + log2(e) + 2
        grow = add_up(_log2_ceil((Enclosure.exact(N) * mass).hi), _log2_ceil(tower_enclosure(e)[1]))
        nxt = at_least(add_int_up(grow, 2))
        if tower_cmp(nxt, e) <= 0:
            nxt = at_least(add_int_up(tower_enclosure(e)[1], 1))
        e = nxt
    raise RuntimeError("parameter search did not converge")


def _growth_requirements(ms: list, qs: list) -> _Level:
    """F4, F6, F7 and ordering requirements for the next level after ``ms``."""
    req = _Level()
    level = len(ms)
    if level:
        req.e_lower.append(tower_enclosure(ms[-1].exponent)[1] if isinstance(ms[-1], Pow2m1)
                           else _log_enc(ms[-1]).hi)
        req.e_lower[-1] = add_up(req.e_lower[-1], req.e_lower[-1])
        total = enclosure_sum(Enclosure.of(t) for t in ms)
        req.e_lower.append((_pow2_enc(level) * total).hi)
        req.m_lower.append(add_up(Enclosure.of(qs[-1]).hi, rat(1)))
    # F7 one level down: prod_{u <= level} 1/e_u <= 2^-(level+2)
    c = Enclosure.exact(1)
    for t in ms:
        c = c * _log_enc(t).recip()
    req.e_lower.append((_pow2_enc(level + 2) * c).hi)
    return req


def _choose_q(ms: list, m_new: Pow2m1) -> Pow2m1:
    """q with log2(q + 1) >= prod of m's (F5) and q > m_new."""
    count = Enclosure.exact(1)
    for t in ms + [m_new]:
        count = count * Enclosure.of(t)
    e = _tower_max([at_least(count.hi), at_least(add_up(tower_enclosure(m_new.exponent)[1], rat(1)))])
    return Pow2m1(e)


def _uniform_mass(ms: list) -> Enclosure:
    size = Enclosure.exact(1)
    total = Enclosure.exact(0)
    for t in ms:
        total = total + size * Enclosure.of(t)
        size = size * Enclosure.of(t)
    return total


def _generate_single(depth: int) -> CoreTree:
    ms, qs = [], []
    for _ in range(depth):
        m = _choose_m(_growth_requirements(ms, qs))
        qs.append(_choose_q(ms, m))
        ms.append(m)
    return uniform_core_tree(ms, qs)


def _generate_pair(depth: int) -> tuple[CoreTree, CoreTree]:
    ms, qs, ks, ps = [], [], [], []
    for level in range(depth):
        req_k = _growth_requirements(ks, ps)
        if level:
            req_k.m_lower.append(Enclosure.of(qs[-1]).hi)
        k = _choose_m(req_k)
        req_m = _growth_requirements(ms, qs)
        req_m.m_lower.append(Enclosure.of(k).hi)
        if level + 1 < depth:
            req_m.dominate.append((level + 1, _uniform_mass(ks + [k])))
        m = _choose_m(req_m)
        ps.append(_choose_q(ks, k))
        qs.append(_choose_q(ms, m))
        ks.append(k)
        ms.append(m)
    return uniform_core_tree(ms, qs), uniform_core_tree(ks, ps)


def coupled_levels(depth: int) -> list[int]:
    """Dyadic levels carrying a coupling: 4N (N > 0) and 4N + 2."""
    return [l for l in range(2, depth + 1) if l % 2 == 0]


def dominant_is_earlier(level: int) -> bool:
    """At levels 4N the lexicographically earlier branch dominates; at 4N+2 the later one."""
    return level % 4 == 0


@dataclass
class DyadicScheme:
    """Parameters ``(m^d, q^d)`` attached to the nodes of a dyadic tree of given depth."""

    depth: int
    params: dict  # address string -> (m, q)

    def path(self, address: str) -> list[str]:
        return [address[:i] for i in range(len(address) + 1)]

    def leaves(self) -> list[str]:
        return sorted((a for a in self.params if len(a) == self.depth), key=lambda a: a)

    def branch_tree(self, address: str) -> CoreTree:
        if address not in self.params:
            raise KeyError(f"unknown dyadic node {address!r}")
        ms = [self.params[a][0] for a in self.path(address)]
        qs = [self.params[a][1] for a in self.path(address)]
        return uniform_core_tree(ms, qs)

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "nodes": {a: {"m": tower_to_json(m), "q": tower_to_json(q)}
                      for a, (m, q) in sorted(self.params.items(), key=lambda kv: (len(kv[0]), kv[0]))},
        }

    @classmethod
    def from_json(cls, obj) -> "DyadicScheme":
        return cls(int(obj["depth"]), {a: (tower(v["m"]), tower(v["q"])) for a, v in obj["nodes"].items()})


def _level_nodes(level: int) -> list[str]:
    return [format(i, "b").zfill(level) if level else "" for i in range(2 ** level)]


def _generate_dyadic(depth: int) -> DyadicScheme:
    params: dict = {}
    for level in range(depth + 1):
        nodes = _level_nodes(level)
        couple_here = level in coupled_levels(depth)
        couple_next = (level + 1) in coupled_levels(depth)
        if couple_here:
            order = nodes[::-1] if dominant_is_earlier(level) else nodes
        elif couple_next:
            order = nodes[::-1] if dominant_is_earlier(level + 1) else nodes
        else:
            order = nodes
        q_top = None
        if couple_here:
            q_top = _tower_max(params[p][1] for p in _level_nodes(level - 1))
        done: list[str] = []
        for d in order:
            anc = [d[:i] for i in range(level)]
            ms = [params[a][0] for a in anc]
            qs = [params[a][1] for a in anc]
            req = _growth_requirements(ms, qs)
            if couple_here:
                req.m_lower.append(Enclosure.of(q_top).hi)
                for other in done:
                    if other[:-1] != d[:-1]:
                        req.m_lower.append(Enclosure.of(params[other][0]).hi)
            if couple_next:
                for other in done:
                    path = [other[:i] for i in range(level + 1)]
                    mass = _uniform_mass([params[a][0] for a in path])
                    req.dominate.append((level + 1, mass))
            m = _choose_m(req)
            params[d] = (m, _choose_q(ms, m))
            done.append(d)
    return DyadicScheme(depth, params)


def generate_params(depth: int, mode: str = "single"):
    """Deterministic parameters of the form ``2^e - 1`` meeting the growth conditions.

    ``single`` returns a uniform CoreTree with ``depth`` levels of parameters,
    ``coupled_pair`` returns ``(T, R)`` with T dominating R at every level
    ``1..depth-1``, and ``dyadic_scheme`` returns a DyadicScheme whose nodes on
    levels ``0..depth`` carry parameters.
    """
    if depth > MAX_TOWER_DEPTH:
        raise ValueError(f"tower budget: depth {depth} exceeds {MAX_TOWER_DEPTH}")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if mode == "single":
        return _generate_single(depth)
    if mode == "coupled_pair":
        return _generate_pair(depth)
    if mode == "dyadic_scheme":
        return _generate_dyadic(depth)
    raise ValueError(f"unknown mode {mode!r}")


def scheme_pairs(scheme: DyadicScheme, level: int) -> list[tuple[str, str]]:
    """Ordered (dominant, dominated) node pairs on a coupled level, parents distinct."""
    nodes = _level_nodes(level)
    out = []
    for a in nodes:
        for b in nodes:
            if a < b and a[:-1] != b[:-1]:
                out.append((a, b) if dominant_is_earlier(level) else (b, a))
    return out


def check_scheme(scheme: DyadicScheme) -> dict:
    """All per-branch growth conditions and every coupling of the scheme."""
    entries = []
    for leaf in scheme.leaves():
        rep = check_conditions(scheme.branch_tree(leaf), which=("F4", "F5", "F6", "F7"))
        for e in rep["results"]:
            entries.append({**e, "branch": leaf})
    for level in coupled_levels(scheme.depth):
        for a, b in scheme_pairs(scheme, level):
            rep = check_coupling(scheme.branch_tree(a), scheme.branch_tree(b), level)
            for e in rep["results"]:
                entries.append({**e, "pair": [a, b]})
    return _report("uniform", entries)
