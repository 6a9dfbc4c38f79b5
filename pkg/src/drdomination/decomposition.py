"""Modular decomposition, neighbourhood diversity and iterated type partition.

The decomposition follows the textbook recursive scheme: a disconnected
vertex set becomes a union node over its components, a set whose complement
is disconnected becomes a join node over the co-components, and otherwise
the maximal strong modules are found by partition refinement and the node is
prime.  Children are ordered by their smallest vertex.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

import numpy as np

from .graph import Graph, InvariantError, bits_to_tuple, iter_bits, select_bits, to_mask

LEAF, UNION, JOIN, PRIME = "leaf", "union", "join", "prime"

PRIMALITY_EXHAUSTIVE_CAP = 12


@dataclass
class ParseNode:
    kind: str
    mask: int
    children: list["ParseNode"] = field(default_factory=list)
    vertex: int | None = None
    quotient: Graph | None = None

    @property
    def vertices(self) -> tuple[int, ...]:
        return bits_to_tuple(self.mask)

    def walk(self):
        """Pre-order traversal without recursion."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind}
        if self.kind == LEAF:
            out["vertex"] = self.vertex
        if self.kind == PRIME:
            out["quotient_edges"] = [list(e) for e in self.quotient.edges()]
        out["children"] = [c.to_dict() for c in self.children]
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any], n: int | None = None) -> "ParseNode":
        kind = data["kind"]
        if kind == LEAF:
            v = data["vertex"]
            return cls(LEAF, 1 << v, vertex=v)
        children = [cls.from_dict(c) for c in data.get("children", [])]
        mask = 0
        for c in children:
            mask |= c.mask
        quotient = None
        if kind == PRIME:
            quotient = Graph.from_edges(len(children), [tuple(e) for e in data.get("quotient_edges", [])])
        return cls(kind, mask, children, quotient=quotient)


@dataclass
class ParseTree:
    root: ParseNode
    n: int

    @property
    def width(self) -> int:
        """Largest prime-node arity, or 2 when there is no prime node."""
        primes = [len(node.children) for node in self.root.walk() if node.kind == PRIME]
        return max(primes, default=2)

    def nodes(self) -> list[ParseNode]:
        return list(self.root.walk())

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.root.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str, n: int) -> "ParseTree":
        return cls(ParseNode.from_dict(json.loads(text)), n)


def _co_components(g: Graph, within: int) -> list[int]:
    remaining = within
    comps = []
    while remaining:
        comp = frontier = remaining & -remaining
        while frontier:
            grow = 0
            for u in iter_bits(frontier):
                grow |= remaining & ~g.adj[u]
            frontier = grow & ~comp
            comp |= frontier
        comps.append(comp)
        remaining &= ~comp
    return comps


def _refine_away_from(g: Graph, v: int, within: int) -> list[int]:
    """Coarsest partition of ``within - {v}`` into modules of ``G[within]``.

    Starting from the split induced by ``v``'s neighbourhood, any vertex that
    distinguishes two members of a part outside itself splits that part.  A
    vertex only needs rechecking after its own part has been split.
    """
    rest = within & ~(1 << v)
    parts = [p for p in (rest & g.adj[v], rest & ~g.adj[v]) if p]
    queue = deque(iter_bits(rest))
    queued = set(queue)
    while queue:
        z = queue.popleft()
        queued.discard(z)
        zbit = 1 << z
        adj = g.adj[z]
        new_parts = []
        for part in parts:
            if part & zbit:
                new_parts.append(part)
                continue
            inside = part & adj
            if inside and inside != part:
                new_parts.append(inside)
                new_parts.append(part & ~adj)
                for u in iter_bits(part):
                    if u not in queued:
                        queued.add(u)
                        queue.append(u)
            else:
                new_parts.append(part)
        parts = new_parts
    return parts


def _maximal_strong_modules(g: Graph, within: int) -> list[int]:
    # G[within] and its complement are connected here, so maximal modules are
    # strong and partition the set.
    # Parts away from v are strong modules or lie inside v's own strong
    # module; the latter are exactly the parts q whose minimal module with v
    # (taken in the quotient) is proper.
    v = (within & -within).bit_length() - 1
    parts = _refine_away_from(g, v, within)
    q = _quotient(g, [1 << v] + parts)
    with_v = 1
    for i in range(1, q.n):
        if not with_v >> i & 1:
            closure = _module_closure(q, 1 | 1 << i)
            if closure != q.full_mask:
                with_v |= closure
    own = 1 << v
    rest = []
    for i, part in enumerate(parts, 1):
        if with_v >> i & 1:
            own |= part
        else:
            rest.append(part)
    return rest + [own]


def _quotient(g: Graph, parts: list[int]) -> Graph:
    """Quotient on pairwise disjoint modules; adjacency between representatives decides."""
    reps = [(p & -p).bit_length() - 1 for p in parts]
    if len(reps) > 64:
        positions = np.array(reps, dtype=np.intp)
        return Graph(len(parts), tuple(select_bits(g.adj[rep], positions, g.n) for rep in reps))
    index = {rep: i for i, rep in enumerate(reps)}
    rep_mask = to_mask(reps)
    masks = [to_mask(index[u] for u in iter_bits(g.adj[rep] & rep_mask)) for rep in reps]
    return Graph(len(parts), tuple(masks))


def _split(g: Graph, mask: int) -> tuple[str, list[int]]:
    comps = g.components(mask)
    if len(comps) > 1:
        return UNION, comps
    co = _co_components(g, mask)
    if len(co) > 1:
        return JOIN, co
    return PRIME, _maximal_strong_modules(g, mask)


def modular_decomposition(g: Graph, within: int | None = None) -> ParseTree:
    """Canonical modular decomposition tree of ``g`` (or of ``g[within]``)."""
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    start = g.full_mask if within is None else within
    holder: list[ParseNode] = []
    stack = [(start, holder)]
    while stack:
        mask, out = stack.pop()
        if mask & (mask - 1) == 0:
            v = mask.bit_length() - 1
            out.append(ParseNode(LEAF, mask, vertex=v))
            continue
        kind, parts = _split(g, mask)
        parts.sort(key=lambda p: p & -p)
        node = ParseNode(kind, mask)
        if kind == PRIME:
            node.quotient = _quotient(g, parts)
        out.append(node)
        for part in reversed(parts):
            stack.append((part, node.children))
    return ParseTree(holder[0], g.n)


# --- validation -----------------------------------------------------------

def is_module(g: Graph, module: set[int], within: set[int]) -> bool:
    """N(u) - M agrees for all u in M, inside the subgraph induced on ``within``."""
    outside = within - module
    signature = None
    for u in module:
        nb = frozenset(x for x in g.neighbors(u) if x in outside)
        if signature is None:
            signature = nb
        elif nb != signature:
            return False
    return True


def _module_closure(h: Graph, seed: int) -> int:
    full = h.full_mask
    mod = seed
    while True:
        grow = 0
        for z in iter_bits(full & ~mod):
            hit = h.adj[z] & mod
            if hit and hit != mod:
                grow |= 1 << z
        if not grow:
            return mod
        mod |= grow


def is_prime_graph(h: Graph) -> bool:
    """True when ``h`` has only trivial modules.

    Exhaustive over vertex subsets up to the validation cap; above it the
    minimal module around every vertex pair is grown to closure instead.
    """
    verts = set(range(h.n))
    if h.n <= PRIMALITY_EXHAUSTIVE_CAP:
        for size in range(2, h.n):
            for sub in combinations(range(h.n), size):
                if is_module(h, set(sub), verts):
                    return False
        return True
    for u, v in combinations(range(h.n), 2):
        if _module_closure(h, (1 << u) | (1 << v)) != h.full_mask:
            return False
    return True


def validate_parse_tree(g: Graph, tree: ParseTree) -> list[str]:
    """Return a list of human-readable violations (empty when the tree is valid)."""
    problems: list[str] = []
    seen: list[int] = []
    for node in tree.root.walk():
        if node.kind == LEAF:
            if node.vertex is None or node.mask != 1 << node.vertex:
                problems.append(f"leaf {node.vertex} covers {node.vertices}")
            seen.append(node.vertex)
            continue
        where = f"{node.kind} node over {list(node.vertices)}"
        if len(node.children) < 2:
            problems.append(f"{where}: fewer than two children")
        covered = set()
        for c in node.children:
            cv = set(c.vertices)
            if covered & cv:
                problems.append(f"{where}: children overlap")
            covered |= cv
        if covered != set(node.vertices):
            problems.append(f"{where}: children do not cover the node")
        within = set(node.vertices)
        for c in node.children:
            if not is_module(g, set(c.vertices), within):
                problems.append(f"{where}: child {list(c.vertices)} is not a module")
        for c in node.children:
            if node.kind in (UNION, JOIN) and c.kind == node.kind:
                problems.append(f"{where}: {c.kind} child of a {node.kind} node")
        k = len(node.children)
        adjacency = {}
        for i, j in combinations(range(k), 2):
            a, b = node.children[i].vertices, node.children[j].vertices
            links = sum(g.has_edge(u, v) for u in a for v in b)
            if links == len(a) * len(b):
                adjacency[i, j] = True
            elif links == 0:
                adjacency[i, j] = False
            else:
                problems.append(f"{where}: children {i},{j} neither adjacent nor independent")
        if node.kind == UNION and any(adjacency.values()):
            problems.append(f"{where}: kind mismatch, union has adjacent children")
        if node.kind == JOIN and not all(adjacency.values()):
            problems.append(f"{where}: kind mismatch, join has non-adjacent children")
        if node.kind == PRIME:
            h = node.quotient
            if h is None or h.n != k:
                problems.append(f"{where}: quotient missing or wrong size")
                continue
            for (i, j), adjacent in adjacency.items():
                if h.has_edge(i, j) != adjacent:
                    problems.append(f"{where}: quotient edge {i}-{j} disagrees with the graph")
            if not is_prime_graph(h):
                problems.append(f"{where}: quotient is not prime")
    if sorted(seen) != list(range(g.n)):
        problems.append("leaves do not partition the vertex set")
    return problems


# --- structural parameters ------------------------------------------------

@dataclass(frozen=True)
class TypeClass:
    kind: str  # "clique" or "independent"
    vertices: tuple[int, ...]


def type_partition(g: Graph) -> list[TypeClass]:
    """Twin classes: u ~ v iff N(u) - {v} = N(v) - {u}.

    Classes are ordered by smallest vertex; singletons count as independent.
    """
    false_twins: dict[int, list[int]] = {}
    true_twins: dict[int, list[int]] = {}
    for v in range(g.n):
        false_twins.setdefault(g.adj[v], []).append(v)
        true_twins.setdefault(g.adj[v] | 1 << v, []).append(v)
    placed = set()
    classes = []
    for group, kind in ((true_twins, "clique"), (false_twins, "independent")):
        for members in group.values():
            if len(members) > 1:
                classes.append(TypeClass(kind, tuple(members)))
                placed.update(members)
    classes.extend(TypeClass("independent", (v,)) for v in range(g.n) if v not in placed)
    classes.sort(key=lambda c: c.vertices[0])
    return classes


def neighborhood_diversity(g: Graph) -> int:
    return len(type_partition(g))


def contract(g: Graph, groups: list[tuple[int, ...]]) -> Graph:
    """Quotient of ``g`` by a modular partition ``groups``."""
    return _quotient(g, [to_mask(grp) for grp in groups])


@dataclass
class ItpResult:
    itp: int
    trace: list[Graph]
    modules: list[tuple[int, ...]]  # original vertices behind each final vertex

    @property
    def quotient(self) -> Graph:
        return self.trace[-1]


def itp_number(g: Graph) -> ItpResult:
    """Contract clique/independent twin classes until none remain."""
    members = [(v,) for v in range(g.n)]
    current = g
    trace = [g]
    while True:
        classes = type_partition(current)
        if len(classes) == current.n:
            break
        current = contract(current, [c.vertices for c in classes])
        members = [tuple(sorted(x for i in c.vertices for x in members[i])) for c in classes]
        trace.append(current)
    return ItpResult(current.n, trace, members)


@dataclass(frozen=True)
class StructuralParams:
    mw: int
    nd: int
    itp: int

    def as_dict(self) -> dict[str, int]:
        return {"mw": self.mw, "nd": self.nd, "itp": self.itp}


def structural_params(g: Graph, tree: ParseTree | None = None) -> StructuralParams:
    tree = modular_decomposition(g) if tree is None else tree
    params = StructuralParams(tree.width, neighborhood_diversity(g), itp_number(g).itp)
    # width 2 is a convention for prime-free trees, so compare against max(itp, 2)
    if g.n > 1 and not (params.mw <= max(params.itp, 2) and params.itp <= params.nd):
        raise InvariantError(f"parameter chain violated: {params}")
    return params
