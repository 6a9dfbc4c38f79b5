"""Twin-class pruning kernel for (d,r)-domination parameterized by nd + d."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass

from ..decomposition import type_partition
from ..graph import (Graph, InvariantError, all_minimum_solutions, bits_to_tuple, is_dr_dominating,
                     iter_bits, to_mask)


@dataclass(frozen=True)
class KernelReport:
    original_n: int
    original_m: int
    kernel_n: int
    kernel_m: int
    nd: int
    d: int
    r: int
    bound: int
    budget_offset: int
    forced_pruned: tuple[int, ...]
    elapsed_ms: float

    def kernel_budget(self, k: int) -> int:
        """Budget for the pruned graph that answers the same question as ``k`` on the input.

        Differs from ``k`` only when a pruned class consisted of vertices
        that cannot be dominated d times (they belong to every solution).
        """
        return k - self.budget_offset

    def as_dict(self) -> dict:
        out = asdict(self)
        out["forced_pruned"] = list(self.forced_pruned)
        return out


def kernelize_nd(g: Graph, d: int, r: int) -> tuple[Graph, tuple[int, ...], KernelReport]:
    """Keep the 2d smallest vertices of every twin class, drop the rest.

    Returns the pruned graph, the surviving original ids (kernel vertex i is
    ``vertex_map[i]``) and a report.  Distances between surviving vertices
    are unchanged because every pruned vertex leaves a twin behind.
    """
    if d < 1 or r < 1:
        raise ValueError("demand and radius must be positive")
    start = time.perf_counter()
    classes = type_partition(g)
    keep: list[int] = []
    forced_pruned: list[int] = []
    for cls in classes:
        members = cls.vertices
        keep.extend(members[: 2 * d])
        dropped = members[2 * d:]
        if dropped and all(g.ball(v, r).bit_count() - 1 < d for v in members):
            forced_pruned.extend(dropped)
    vertex_map = tuple(sorted(keep))
    kernel = g.induced(vertex_map)
    report = KernelReport(
        original_n=g.n,
        original_m=g.m,
        kernel_n=kernel.n,
        kernel_m=kernel.m,
        nd=len(classes),
        d=d,
        r=r,
        bound=2 * d * len(classes),
        budget_offset=len(forced_pruned),
        forced_pruned=tuple(sorted(forced_pruned)),
        elapsed_ms=(time.perf_counter() - start) * 1000,
    )
    return kernel, vertex_map, report


def lift_kernel_solution(g: Graph, solution, vertex_map, report: KernelReport) -> tuple[int, ...]:
    """Map a kernel solution back to ``g`` without growing it (beyond pruned forced vertices).

    A plain relabelling can fail: if the kernel solution takes every kept
    member of an independent class, the pruned members of that class are
    dominated only from outside it and may fall short.  Such a class hands
    ``need`` of its chosen members back and the same number of outside
    neighbours are chosen instead; the class still supplies at least d to
    those neighbours, so the size is unchanged and nothing else breaks.
    """
    d, r = report.d, report.r
    chosen = {vertex_map[v] for v in solution} | set(report.forced_pruned)
    smask = to_mask(chosen)
    for cls in type_partition(g):
        kept, dropped = cls.vertices[: 2 * d], cls.vertices[2 * d:]
        if not dropped or not all(smask >> v & 1 for v in kept):
            continue
        if all(smask >> u & 1 or (g.ball(u, r) & smask).bit_count() >= d for u in dropped):
            continue
        outside = g.ball(kept[0], r) & ~to_mask(cls.vertices)
        need = d - (outside & smask).bit_count()
        if need <= 0:
            continue
        spare = [u for u in iter_bits(outside & ~smask)][:need]
        if len(spare) < need:
            raise InvariantError(f"class {cls.vertices} cannot be repaired")
        for v in kept[len(kept) - need:]:
            smask &= ~(1 << v)
        smask |= to_mask(spare)
    lifted = bits_to_tuple(smask)
    if not is_dr_dominating(g, d, r, lifted):
        raise InvariantError("lifted kernel solution does not dominate the input graph")
    return lifted


def class_bound_witness(g: Graph, d: int, r: int, cap: int | None = None):
    """A minimum (d,r)-dominating set meeting every twin class in at most 2d-1 vertices.

    Returns ``None`` when no minimum solution has that shape.
    """
    classes = [set(c.vertices) for c in type_partition(g)]
    for sol in all_minimum_solutions(g, d, r, cap):
        chosen = set(sol)
        if all(len(chosen & c) <= 2 * d - 1 for c in classes):
            return sol
    return None
