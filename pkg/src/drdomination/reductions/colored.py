"""Compression of (1,r)-domination on connected graphs to Colored Domination.

The r-th power is split along its top-level modular partition and each part
becomes one vertex of the quotient H.  A part is coloured W when some vertex
of it is adjacent to all the others inside the part (so one chosen vertex
dominates the whole part by itself) and B otherwise.  A multi-way join root
is cut into its first co-component and the rest, keeping H at most
max(mw, 2) vertices.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from ..decomposition import JOIN, UNION, modular_decomposition
from ..graph import Graph, OracleCapExceeded, all_minimum_solutions, bits_to_tuple, graph_power, iter_bits, oracle_cap


@dataclass
class ColoredInstance:
    quotient: Graph
    colors: str
    budget: int
    modules: list[tuple[int, ...]] = field(default_factory=list)
    anchors: list[int] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({
            "h_edges": [list(e) for e in self.quotient.edges()],
            "colors": self.colors,
            "budget": self.budget,
        })

    @classmethod
    def from_json(cls, text: str) -> "ColoredInstance":
        data = json.loads(text)
        colors = data["colors"]
        h = Graph.from_edges(len(colors), [tuple(e) for e in data["h_edges"]])
        return cls(h, colors, int(data["budget"]))


def top_partition(g: Graph) -> list[int]:
    """Top-level modular partition of a connected graph, as vertex masks."""
    root = modular_decomposition(g).root
    if root.kind == UNION:
        raise ValueError("graph is disconnected")
    parts = [c.mask for c in root.children]
    if root.kind == JOIN and len(parts) > 2:
        rest = 0
        for p in parts[1:]:
            rest |= p
        parts = [parts[0], rest]
    return parts


def _anchor(g: Graph, module: int) -> int | None:
    for v in iter_bits(module):
        if module & ~(g.adj[v] | 1 << v) == 0:
            return v
    return None


def reduce_to_colored(g: Graph, r: int, k: int) -> ColoredInstance:
    """Build the colored instance; answers agree with "(1,r)-dominating set of size <= k"."""
    if g.n < 2:
        raise ValueError("colored compression needs at least two vertices")
    if r < 1 or k < 1:
        raise ValueError("radius and budget must be positive")
    if not g.is_connected():
        raise ValueError("colored compression requires a connected graph")
    gp = graph_power(g, r)
    parts = top_partition(gp)
    reps = [(p & -p).bit_length() - 1 for p in parts]
    h = Graph.from_edges(len(parts), [(i, j) for i, j in combinations(range(len(parts)), 2)
                                      if gp.has_edge(reps[i], reps[j])])
    colors, anchors = [], []
    for p in parts:
        a = _anchor(gp, p)
        colors.append("W" if a is not None else "B")
        anchors.append(a if a is not None else (p & -p).bit_length() - 1)
    return ColoredInstance(h, "".join(colors), min(k, len(parts)), [bits_to_tuple(p) for p in parts], anchors)


def is_colored_dominating(ci: ColoredInstance, s) -> bool:
    smask = 0
    for v in s:
        smask |= 1 << v
    if smask.bit_count() > ci.budget:
        return False
    for v in range(ci.quotient.n):
        if (ci.colors[v] == "B" or not smask >> v & 1) and not ci.quotient.adj[v] & smask:
            return False
    return True


def solve_colored_bruteforce(ci: ColoredInstance, cap: int | None = None) -> tuple[int, ...] | None:
    """Smallest colored dominating set within the budget, or ``None`` if none exists."""
    cap = oracle_cap() if cap is None else cap
    if ci.quotient.n > cap:
        raise OracleCapExceeded(f"colored brute force refuses {ci.quotient.n} > cap {cap}")
    for size in range(min(ci.budget, ci.quotient.n) + 1):
        for s in combinations(range(ci.quotient.n), size):
            if is_colored_dominating(ci, s):
                return s
    return None


def lift_colored_solution(ci: ColoredInstance, s) -> tuple[int, ...]:
    """One vertex per selected part: its anchor (a dominating vertex when coloured W)."""
    return tuple(sorted(ci.anchors[i] for i in s))


@dataclass
class StructureCheck:
    partition: list[tuple[int, ...]]
    witness: tuple[int, ...] | None
    minimum_solutions: int

    @property
    def ok(self) -> bool:
        return self.witness is not None


def solution_structure_check(g: Graph, cap: int | None = None) -> StructureCheck:
    """Search all minimum dominating sets for one that picks at most one vertex per part,
    leaves no part undominated from a neighbouring part, and uses a lone part only
    when one of its vertices dominates the whole part.
    """
    if not g.is_connected():
        raise ValueError("structure check requires a connected graph")
    parts = top_partition(g) if g.n > 1 else [g.full_mask]
    owner = {}
    for i, p in enumerate(parts):
        for v in iter_bits(p):
            owner[v] = i
    reps = [(p & -p).bit_length() - 1 for p in parts]
    h_adj = [{j for j in range(len(parts)) if j != i and g.has_edge(reps[i], reps[j])} for i in range(len(parts))]
    sols = all_minimum_solutions(g, 1, 1, cap)
    for sol in sols:
        counts = [0] * len(parts)
        for v in sol:
            counts[owner[v]] += 1
        if any(c > 1 for c in counts):
            continue
        good = True
        for i, c in enumerate(counts):
            neighbour_hit = any(counts[j] for j in h_adj[i])
            if c == 0 and not neighbour_hit:
                good = False
            if c == 1 and not neighbour_hit and _anchor(g, parts[i]) is None:
                good = False
        if good:
            return StructureCheck([bits_to_tuple(p) for p in parts], sol, len(sols))
    return StructureCheck([bits_to_tuple(p) for p in parts], None, len(sols))
