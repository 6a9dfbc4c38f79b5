"""Seeded instance families for tests and the harness.

All generators take a ``random.Random`` so every instance is reproducible
from an integer seed.  Random connected graphs are drawn from G(n, p) and
rejected until connected.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import Graph, iter_bits


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        return path(n)
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves: int) -> Graph:
    """K_{1,leaves} with the centre as vertex 0."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def gnp(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def connected_gnp(n: int, p: float, rng: random.Random, max_tries: int = 10_000) -> Graph:
    for _ in range(max_tries):
        g = gnp(n, p, rng)
        if g.is_connected():
            return g
    raise RuntimeError(f"no connected G({n}, {p}) sample after {max_tries} tries")


def _range_mask(lo: int, hi: int) -> int:
    return ((1 << (hi - lo)) - 1) << lo


def _add_random_cograph(adj: list[int], lo: int, hi: int, rng: random.Random, p_join: float) -> None:
    # random cotree: split the block at a uniform point, join or union the halves
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        if b - a < 2:
            continue
        s = rng.randint(a + 1, b - 1)
        if rng.random() < p_join:
            left, right = _range_mask(a, s), _range_mask(s, b)
            for u in range(a, s):
                adj[u] |= right
            for u in range(s, b):
                adj[u] |= left
        stack.append((a, s))
        stack.append((s, b))


def random_cograph(n: int, rng: random.Random, p_join: float = 0.5) -> Graph:
    adj = [0] * n
    _add_random_cograph(adj, 0, n, rng, p_join)
    return Graph(n, tuple(adj))


def substituted(quotient: Graph, module_sizes: list[int], rng: random.Random, p_join: float = 0.5) -> Graph:
    """Substitute a random cograph for every vertex of ``quotient``.

    Modules occupy consecutive id ranges in quotient order, so the modular
    width is at most ``max(quotient.n, 2)``.
    """
    if len(module_sizes) != quotient.n or min(module_sizes, default=1) < 1:
        raise ValueError("need one positive module size per quotient vertex")
    offsets = [0]
    for s in module_sizes:
        offsets.append(offsets[-1] + s)
    n = offsets[-1]
    adj = [0] * n
    masks = []
    for i in range(quotient.n):
        lo, hi = offsets[i], offsets[i + 1]
        _add_random_cograph(adj, lo, hi, rng, p_join)
        masks.append(_range_mask(lo, hi))
    for i in range(quotient.n):
        outside = 0
        for j in iter_bits(quotient.adj[i]):
            outside |= masks[j]
        if outside:
            for u in range(offsets[i], offsets[i + 1]):
                adj[u] |= outside
    return Graph(n, tuple(adj))


NAMED_QUOTIENTS = {
    "p4": lambda: path(4),
    "c5": lambda: cycle(5),
    "bull": lambda: Graph.from_edges(5, [(0, 1), (1, 2), (2, 0), (1, 3), (2, 4)]),
}


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int = 10
    p: float | None = None
    module_size: int = 3
    quotient: str = "p4"
    seed: int = 0

    def generate(self, rng: random.Random) -> Graph:
        fam = self.family
        if fam == "gnp":
            n = rng.randint(2, self.n)
            p = self.p if self.p is not None else rng.uniform(0.15, 0.7)
            return connected_gnp(n, p, rng)
        if fam == "substituted":
            h = NAMED_QUOTIENTS[self.quotient]()
            return substituted(h, [self.module_size] * h.n, rng)
        if fam in ("bipartite", "complete-bipartite"):
            a = rng.randint(1, max(1, self.n - 1))
            return complete_bipartite(a, max(1, self.n - a))
        if fam == "path":
            return path(rng.randint(1, self.n))
        if fam == "cycle":
            return cycle(rng.randint(3, max(3, self.n)))
        if fam == "star":
            return star(rng.randint(1, max(1, self.n - 1)))
        if fam == "complete":
            return complete(rng.randint(1, self.n))
        raise ValueError(f"unknown family {fam!r}")


FAMILIES = ("gnp", "substituted", "bipartite", "complete-bipartite", "path", "cycle", "star", "complete")
