"""Cost-table dynamic programming over the modular decomposition.

For every module M and demand t in 0..d the table stores the size of a
smallest (t,1)-dominating set of G[M].  An internal node combines its
children's tables by choosing, for each child i, a demand t_i it must meet
internally and a number p_i of solution vertices it contributes; child i is
satisfied when ``t_i + sum(p_j for j adjacent to i) >= t``.

Two variants share the search engine:

``paper``
    p_i is tied to the child's cost, p_i = c_i(t_i).  This is the
    ModuleCostComputation recurrence taken literally.
``extended``
    p_i = max(c_i(t_i), s_i) for any padding s_i <= min(d, |M_i|).  Extra
    vertices never hurt domination, so this search space is exactly the set
    of achievable (demand, size) pairs and the tables are true minima.

Join and union nodes with many children are folded into binary nodes, so
every quotient the search sees has at most ``max(width, 2)`` vertices.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Sequence

from .decomposition import JOIN, LEAF, PRIME, UNION, ParseTree, modular_decomposition
from .graph import Graph, InvariantError, Solution, bits_to_tuple, graph_power, is_dr_dominating, iter_bits

UNREACHABLE = math.inf
PAPER, EXTENDED = "paper", "extended"
VARIANTS = (PAPER, EXTENDED)

# Cross-check the union fast path against the general search (small nodes only).
DEBUG_UNION = bool(os.environ.get("DRDOM_DEBUG"))


@dataclass
class CostTable:
    """Minimum (t,1)-dominating set sizes of one module for t = 0..d.

    ``choices[t]`` lists the (t_i, p_i) picked for each child, which is all
    backtracking needs.  ``iterations`` counts search steps spent on the node.
    """

    values: list[float]
    size: int
    choices: list[tuple[tuple[int, int], ...] | None] = field(default_factory=list)
    iterations: int = 0

    @property
    def d(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, t: int) -> float:
        return self.values[t]

    def as_list(self) -> list:
        return [v if v != UNREACHABLE else None for v in self.values]


def leaf_table(d: int) -> CostTable:
    return CostTable([0] + [1] * d, 1, [None] * (d + 1))


def independent_table(size: int, d: int) -> CostTable:
    return CostTable([0] + [size] * d, size, [None] * (d + 1))


def _paper_options(table: CostTable, t: int) -> list[tuple[int, int]]:
    best: dict[float, int] = {}
    for ti in range(t + 1):
        p = table.values[ti]
        if p != UNREACHABLE:
            best[p] = max(best.get(p, 0), ti)
    return sorted(best.items())


def _extended_options(table: CostTable, t: int, d: int) -> list[tuple[int, int]]:
    best: dict[float, int] = {}
    for ti in range(t + 1):
        c = table.values[ti]
        if c == UNREACHABLE:
            continue
        for pad in range(min(d, table.size) + 1):
            p = max(c, pad)
            best[p] = max(best.get(p, 0), ti)
    return sorted(best.items())


def _search(adj: Sequence[int], options: list[list[tuple[int, int]]], t: int, bound: float):
    """Branch and bound over per-child options in index order.

    Returns ``(cost, picks, steps)``; ``picks[i]`` is ``(t_i, p_i)``.  Only
    strictly better completions replace the incumbent, so the first optimum
    found (the lexicographically smallest option vector) is kept.
    """
    k = len(options)
    nbrs = [list(iter_bits(a)) for a in adj]
    max_p = [opts[-1][0] for opts in options]
    recv = [0] * k
    rest = [sum(max_p[j] for j in nbrs[i]) for i in range(k)]
    own: list[int | None] = [None] * k
    picks: list[tuple[int, int] | None] = [None] * k
    best_cost = bound
    best: tuple | None = None
    steps = 0

    def satisfiable(i: int) -> bool:
        ti = own[i] if own[i] is not None else t
        return ti + recv[i] + rest[i] >= t

    def dfs(i: int, cost: float) -> None:
        nonlocal best_cost, best, steps
        if i == k:
            best_cost, best = cost, tuple(picks)
            return
        for p, ti in options[i]:
            steps += 1
            if cost + p >= best_cost:
                break
            own[i] = ti
            picks[i] = (ti, p)
            for j in nbrs[i]:
                recv[j] += p
                rest[j] -= max_p[i]
            if satisfiable(i) and all(satisfiable(j) for j in nbrs[i]):
                dfs(i + 1, cost + p)
            for j in nbrs[i]:
                recv[j] -= p
                rest[j] += max_p[i]
        own[i] = None
        picks[i] = None

    dfs(0, 0)
    return best_cost, best, steps


def _combine(quotient: Graph, child_tables: Sequence[CostTable], d: int, variant: str) -> CostTable:
    if quotient.n != len(child_tables):
        raise ValueError("quotient size must match the number of child tables")
    values: list[float] = [0]
    choices: list = [tuple((0, 0) for _ in child_tables)]
    steps = 0
    for t in range(1, d + 1):
        if variant == PAPER:
            options = [_paper_options(c, t) for c in child_tables]
        else:
            options = [_extended_options(c, t, d) for c in child_tables]
        # every child meeting demand t on its own is always feasible
        fallback = sum(c.values[t] for c in child_tables)
        cost, picks, n_steps = _search(quotient.adj, options, t, fallback + 1)
        steps += n_steps
        if picks is None:
            values.append(UNREACHABLE)
            choices.append(None)
        else:
            values.append(cost)
            choices.append(picks)
    return CostTable(values, sum(c.size for c in child_tables), choices, steps)


def cost_table_paper(quotient: Graph, child_tables: Sequence[CostTable], d: int) -> CostTable:
    """Combine child tables with p_i = c_i(t_i) (the literal recurrence)."""
    return _combine(quotient, child_tables, d, PAPER)


def cost_table_extended(quotient: Graph, child_tables: Sequence[CostTable], d: int) -> CostTable:
    """Combine child tables allowing padded contributions; exact minima."""
    return _combine(quotient, child_tables, d, EXTENDED)


def union_table(child_tables: Sequence[CostTable], d: int) -> CostTable:
    """Edgeless quotient: every child fends for itself."""
    values: list[float] = [0]
    choices: list = [tuple((0, 0) for _ in child_tables)]
    for t in range(1, d + 1):
        values.append(sum(c.values[t] for c in child_tables))
        choices.append(tuple((t, c.values[t]) for c in child_tables))
    return CostTable(values, sum(c.size for c in child_tables), choices, len(child_tables) * d)


def _complete(k: int) -> Graph:
    full = (1 << k) - 1
    return Graph(k, tuple(full & ~(1 << i) for i in range(k)))


def _edgeless(k: int) -> Graph:
    return Graph(k, (0,) * k)


K2 = _complete(2)


@dataclass
class DpNode:
    kind: str  # "leaf", "union" or "quotient"
    mask: int
    children: list["DpNode"] = field(default_factory=list)
    quotient: Graph | None = None
    vertex: int | None = None
    origin: str = LEAF
    tables: dict[str, CostTable] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.mask.bit_count()


def build_dp_tree(tree: ParseTree) -> DpNode:
    """Translate the parse tree, folding multi-way joins into binary joins."""
    mapped: dict[int, DpNode] = {}
    order = list(tree.root.walk())
    for node in reversed(order):
        if node.kind == LEAF:
            mapped[id(node)] = DpNode(LEAF, node.mask, vertex=node.vertex)
            continue
        kids = [mapped.pop(id(c)) for c in node.children]
        if node.kind == UNION:
            dp = DpNode(UNION, node.mask, kids, origin=UNION)
        elif node.kind == JOIN:
            dp = kids[0]
            for kid in kids[1:]:
                dp = DpNode("quotient", dp.mask | kid.mask, [dp, kid], K2, origin=JOIN)
        else:
            dp = DpNode("quotient", node.mask, kids, node.quotient, origin=PRIME)
        mapped[id(node)] = dp
    return mapped[id(tree.root)]


def _walk(root: DpNode) -> list[DpNode]:
    out, stack = [], [root]
    while stack:
        node = stack.pop()
        out.append(node)
        stack.extend(reversed(node.children))
    return out


class ModularDP:
    """Bottom-up cost tables for one graph and demand bound ``d``."""

    def __init__(self, g: Graph, d: int, tree: ParseTree | None = None):
        if d < 1:
            raise ValueError("demand must be positive")
        self.g = g
        self.d = d
        self.tree = modular_decomposition(g) if tree is None else tree
        self.root = build_dp_tree(self.tree)
        self.nodes = _walk(self.root)

    def run(self, variant: str = EXTENDED) -> CostTable:
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        d = self.d
        for node in reversed(self.nodes):
            if variant in node.tables:
                continue
            if node.kind == LEAF:
                table = leaf_table(d)
            else:
                kids = [c.tables[variant] for c in node.children]
                if node.kind == UNION:
                    table = union_table(kids, d)
                    if DEBUG_UNION and len(kids) <= 8:
                        general = _combine(_edgeless(len(kids)), kids, d, variant)
                        if general.values != table.values:
                            raise InvariantError("union fast path disagrees with general search")
                else:
                    table = _combine(node.quotient, kids, d, variant)
            node.tables[variant] = table
        return self.root.tables[variant]

    def value(self, variant: str = EXTENDED, t: int | None = None) -> float:
        return self.run(variant).values[self.d if t is None else t]

    def iterations(self, variant: str = EXTENDED) -> int:
        self.run(variant)
        return sum(node.tables[variant].iterations for node in self.nodes)

    def node_tables(self, variant: str) -> list[list[float]]:
        self.run(variant)
        return [node.tables[variant].values for node in self.nodes]

    def witness(self, variant: str = EXTENDED, t: int | None = None) -> tuple[int, ...]:
        """Rebuild a set of size c_root(t) by following the recorded choices.

        A child asked for p_i vertices but whose optimum for t_i is smaller is
        padded with its smallest unused vertices.
        """
        t = self.d if t is None else t
        root_table = self.run(variant)
        if root_table.values[t] == UNREACHABLE:
            raise InvariantError("no witness for an unreachable entry")
        results: list[int] = []
        stack: list = [("enter", self.root, t, root_table.values[t])]
        while stack:
            item = stack.pop()
            if item[0] == "exit":
                _, node, want, count = item
                chosen = 0
                for _ in range(count):
                    chosen |= results.pop()
                results.append(_pad(chosen, node.mask, want))
                continue
            _, node, demand, want = item
            if demand == 0 or node.kind == LEAF:
                base = node.mask if (node.kind == LEAF and demand > 0) else 0
                results.append(_pad(base, node.mask, want))
                continue
            picks = node.tables[variant].choices[demand]
            stack.append(("exit", node, want, len(node.children)))
            for child, (ti, pi) in zip(reversed(node.children), reversed(picks)):
                stack.append(("enter", child, ti, pi))
        chosen = results.pop()
        return bits_to_tuple(chosen)

    def tables_json(self, variant: str = EXTENDED) -> str:
        self.run(variant)
        rows = []
        for node in self.nodes:
            table = node.tables[variant]
            rows.append({
                "kind": node.origin if node.kind != LEAF else LEAF,
                "vertices": list(bits_to_tuple(node.mask)),
                "table": table.as_list(),
                "iterations": table.iterations,
            })
        return json.dumps({"variant": variant, "d": self.d, "nodes": rows})


def _pad(chosen: int, module: int, want: float) -> int:
    have = chosen.bit_count()
    if have > want:
        raise InvariantError("witness larger than its table entry")
    free = module & ~chosen
    while have < want:
        low = free & -free
        if not low:
            raise InvariantError("cannot pad beyond the module size")
        chosen |= low
        free ^= low
        have += 1
    return chosen


def solve_d1_modular(g: Graph, d: int, variant: str = EXTENDED, tree: ParseTree | None = None) -> Solution:
    """Minimum (d,1)-dominating set via the cost-table DP (exact for ``extended``)."""
    dp = ModularDP(g, d, tree)
    return Solution(dp.witness(variant), f"dp-{variant}")


def solve_dr(g: Graph, d: int, r: int, variant: str = EXTENDED) -> Solution:
    """Solve on the r-th power, then re-verify against the original graph."""
    if d < 1 or r < 1:
        raise ValueError("demand and radius must be positive")
    sol = solve_d1_modular(graph_power(g, r), d, variant)
    if not is_dr_dominating(g, d, r, sol.vertices):
        raise InvariantError(f"dp-{variant} returned a set that is not ({d},{r})-dominating")
    return sol
