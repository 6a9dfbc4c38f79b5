"""Undirected graphs, edge-list I/O, distances, powers and domination checks.

Adjacency is stored as one Python int per vertex, used as a bitset.  This
keeps dense graphs (substituted families with quadratically many edges)
cheap and makes module and neighbourhood tests single big-int operations.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_ORACLE_CAP = 24
ORACLE_CAP_ENV = "DRDOM_ORACLE_CAP"


class GraphParseError(ValueError):
    """Malformed edge-list input; the message names the offending line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class OracleCapExceeded(ValueError):
    pass


class InvariantError(RuntimeError):
    """An internal consistency check failed (implementation bug signal)."""


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of set bits in increasing order."""
    if mask.bit_length() <= 256 or mask.bit_count() <= 16:
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low
        return
    # clearing bits one by one is quadratic on wide, dense masks; scan the binary string
    offset = (mask & -mask).bit_length() - 1
    digits = bin(mask >> offset)[:1:-1]
    i = 0
    while i >= 0:
        yield i + offset
        i = digits.find("1", i + 1)


def bits_to_tuple(mask: int) -> tuple[int, ...]:
    return tuple(iter_bits(mask))


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def select_bits(mask: int, positions: np.ndarray, width: int) -> int:
    """Bit i of the result is bit ``positions[i]`` of ``mask`` (a bit gather)."""
    nbytes = (width + 7) // 8
    bits = np.unpackbits(np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8), bitorder="little")
    return int.from_bytes(np.packbits(bits[positions], bitorder="little").tobytes(), "little")


def oracle_cap() -> int:
    return int(os.environ.get(ORACLE_CAP_ENV, DEFAULT_ORACLE_CAP))


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``adj[v]`` is the neighbourhood of ``v`` as a bitmask.  Use
    :meth:`from_edges` for untrusted input; it enforces the invariants.
    """

    n: int
    adj: tuple[int, ...] = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def from_masks(cls, masks: Sequence[int], validate: bool = True) -> "Graph":
        g = cls(len(masks), tuple(masks))
        if validate:
            g.check()
        return g

    def check(self) -> None:
        full = (1 << self.n) - 1
        for v, a in enumerate(self.adj):
            if a & ~full:
                raise InvariantError(f"neighbour of {v} out of range")
            if a >> v & 1:
                raise InvariantError(f"self-loop at {v}")
            for u in iter_bits(a):
                if not self.adj[u] >> v & 1:
                    raise InvariantError(f"asymmetric edge {v}-{u}")

    @property
    def m(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> tuple[int, ...]:
        return bits_to_tuple(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Subgraph induced on ``vertices``, relabelled in sorted order."""
        order = sorted(set(vertices))
        index = {v: i for i, v in enumerate(order)}
        masks = []
        for v in order:
            masks.append(to_mask(index[u] for u in iter_bits(self.adj[v]) if u in index))
        return Graph(len(order), tuple(masks))

    def complement(self) -> "Graph":
        full = self.full_mask
        return Graph(self.n, tuple(full & ~a & ~(1 << v) for v, a in enumerate(self.adj)))

    def components(self, within: int | None = None) -> list[int]:
        """Connected components of the subgraph induced on ``within`` as masks."""
        remaining = self.full_mask if within is None else within
        comps = []
        while remaining:
            comp = frontier = remaining & -remaining
            while frontier:
                grow = 0
                for u in iter_bits(frontier):
                    grow |= self.adj[u]
                frontier = grow & remaining & ~comp
                comp |= frontier
            comps.append(comp)
            remaining &= ~comp
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def ball(self, v: int, r: int) -> int:
        """Closed ball ``N_r[v]``: vertices at BFS distance at most ``r``."""
        reach = frontier = 1 << v
        for _ in range(r):
            grow = 0
            for u in iter_bits(frontier):
                grow |= self.adj[u]
            frontier = grow & ~reach
            if not frontier:
                break
            reach |= frontier
        return reach

    def bfs_distances(self, source: int) -> list[int | None]:
        dist: list[int | None] = [None] * self.n
        dist[source] = 0
        seen = frontier = 1 << source
        level = 0
        while frontier:
            level += 1
            grow = 0
            for u in iter_bits(frontier):
                grow |= self.adj[u]
            frontier = grow & ~seen
            seen |= frontier
            for u in iter_bits(frontier):
                dist[u] = level
        return dist

    def diameter(self) -> int | None:
        """Largest finite distance, or ``None`` when disconnected."""
        best = 0
        for v in range(self.n):
            dist = self.bfs_distances(v)
            if any(x is None for x in dist):
                return None
            best = max(best, max(dist))
        return best


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list format: ``#`` comments, a ``n m`` header, m ``u v`` lines."""
    header = None
    n = m = 0
    seen: set[tuple[int, int]] = set()
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise GraphParseError(lineno, f"expected integers, got {line!r}") from None
        if len(values) != 2:
            raise GraphParseError(lineno, f"expected two integers, got {line!r}")
        if header is None:
            n, m = values
            if n < 0 or m < 0:
                raise GraphParseError(lineno, "negative vertex or edge count")
            header = lineno
            continue
        u, v = values
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(lineno, f"vertex id out of range [0, {n})")
        if u == v:
            raise GraphParseError(lineno, f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(lineno, f"duplicate edge {key[0]}-{key[1]}")
        if len(edges) == m:
            raise GraphParseError(lineno, f"more than the {m} declared edges")
        seen.add(key)
        edges.append(key)
    if header is None:
        raise GraphParseError(0, "missing 'n m' header")
    if len(edges) != m:
        raise GraphParseError(header, f"header declares {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def read_edge_list(path: str | os.PathLike) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def format_edge_list(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    edges = g.edges()
    lines.append(f"{g.n} {len(edges)}")
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def graph_power(g: Graph, r: int) -> Graph:
    """Same vertices; ``u``-``v`` adjacent iff ``1 <= dist(u, v) <= r``."""
    if r < 1:
        raise ValueError("radius must be at least 1")
    if r == 1:
        return g
    return Graph(g.n, tuple(g.ball(v, r) & ~(1 << v) for v in range(g.n)))


def balls(g: Graph, r: int) -> list[int]:
    return [g.ball(v, r) for v in range(g.n)]


def is_dr_dominating(g: Graph, d: int, r: int, s: Iterable[int]) -> bool:
    """Every vertex outside ``s`` has at least ``d`` members of ``s`` within distance ``r``."""
    smask = to_mask(s)
    for v in range(g.n):
        if smask >> v & 1:
            continue
        if (g.ball(v, r) & smask).bit_count() < d:
            return False
    return True


def forced_vertices(g: Graph, d: int, r: int) -> tuple[int, ...]:
    """Vertices with fewer than ``d`` others within distance ``r``; they lie in every solution."""
    return tuple(v for v in range(g.n) if g.ball(v, r).bit_count() - 1 < d)


@dataclass(frozen=True)
class DominationInstance:
    graph: Graph
    d: int
    r: int
    budget: int | None = None

    def __post_init__(self):
        if self.d < 1 or self.r < 1:
            raise ValueError("demand and radius must be positive")
        if self.budget is not None and not 0 <= self.budget <= self.graph.n:
            raise ValueError("budget must lie in [0, n]")


@dataclass(frozen=True)
class Solution:
    vertices: tuple[int, ...]
    method: str

    @property
    def size(self) -> int:
        return len(self.vertices)


def _subset_masks_by_size(n: int) -> tuple[np.ndarray, np.ndarray]:
    masks = np.arange(1 << n, dtype=np.uint32)
    return masks, np.bitwise_count(masks)


def _valid_masks(masks: np.ndarray, ball_masks: list[int], d: int) -> np.ndarray:
    ok = np.ones(masks.shape, dtype=bool)
    for v, b in enumerate(ball_masks):
        inside = (masks >> np.uint32(v)) & np.uint32(1)
        count = np.bitwise_count(masks & np.uint32(b))
        ok &= inside.astype(bool) | (count >= d)
        if not ok.any():
            break
    return ok


def _check_cap(n: int, cap: int | None) -> int:
    cap = oracle_cap() if cap is None else cap
    if n > cap:
        raise OracleCapExceeded(f"brute force refuses n={n} > cap {cap}")
    if n > 32:
        raise OracleCapExceeded("brute force supports at most 32 vertices")
    return cap


def _lex_key(mask: int) -> tuple[int, ...]:
    return bits_to_tuple(mask)


def all_minimum_solutions(g: Graph, d: int, r: int, cap: int | None = None) -> list[tuple[int, ...]]:
    """Every minimum (d,r)-dominating set, in lexicographic order."""
    _check_cap(g.n, cap)
    if g.n == 0:
        return [()]
    ball_masks = balls(g, r)
    masks, sizes = _subset_masks_by_size(g.n)
    for k in range(g.n + 1):
        batch = masks[sizes == k]
        ok = _valid_masks(batch, ball_masks, d)
        if ok.any():
            return sorted(_lex_key(int(x)) for x in batch[ok])
    raise InvariantError("the full vertex set always dominates")


def brute_force_min(inst: DominationInstance | Graph, d: int | None = None, r: int | None = None,
                    cap: int | None = None) -> Solution:
    """Exhaustive minimum (d,r)-dominating set, subsets tried by increasing size.

    Ties are broken towards the lexicographically smallest sorted vertex list.
    """
    if isinstance(inst, DominationInstance):
        g, d, r = inst.graph, inst.d, inst.r
    else:
        g = inst
    return Solution(all_minimum_solutions(g, d, r, cap)[0], "brute")


def brute_force_min_slow(g: Graph, d: int, r: int) -> tuple[int, ...]:
    """Pure-Python reference used to cross-check the vectorised oracle."""
    for k in range(g.n + 1):
        for s in combinations(range(g.n), k):
            if is_dr_dominating(g, d, r, s):
                return s
    raise InvariantError("the full vertex set always dominates")
