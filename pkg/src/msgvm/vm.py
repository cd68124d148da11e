"""Vertex mover: greedy single-vertex reassignment to neighboring communities."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .graph import Graph
from .partition import Partition, renumber


@dataclass(frozen=True)
class MoveGain:
    """Modularity change of moving ``vertex`` from ``source`` to ``target``.

    ``gain = (links_to_target - links_to_source) / L
    - vertex_degree * (target_degree - source_degree_without) / (2 L^2)``
    """

    vertex: int
    source: int
    target: int
    links_to_target: float
    links_to_source: float
    vertex_degree: float
    source_degree_without: float
    target_degree: float
    gain: float


def _gain(lt, ls, kv, dt, ds_wo, L):
    return (lt - ls) / L - kv * (dt - ds_wo) / (2.0 * L * L)


def move_gain(g: Graph, p: Partition, v: int, j: int) -> MoveGain:
    """Evaluate the gain of reassigning vertex ``v`` to community ``j``."""
    if not 0 <= v < g.n_vertices:
        raise IndexError(f"vertex {v} out of range")
    if not 0 <= j < len(p.sizes):
        raise IndexError(f"community {j} out of range")
    a = p.assignment
    i = a[v]
    lt = ls = 0.0
    for u, w in g.rows()[v]:
        c = a[u]
        if c == i:
            ls += w
        if c == j:
            lt += w
    kv = float(g.degree[v])
    ds_wo = p.community_degree[i] - kv
    dt = ds_wo if j == i else p.community_degree[j]
    L = g.total_weight
    gain = 0.0 if j == i or L == 0 else _gain(lt, ls, kv, dt, ds_wo, L)
    return MoveGain(v, i, j, lt, ls, kv, ds_wo, dt, gain)


class _Scratch:
    """Dense per-community accumulator, reset after every vertex."""

    __slots__ = ("links", "seen")

    def __init__(self, n: int):
        self.links = [0.0] * n
        self.seen = [False] * n


def _best(row, v, a, cdeg, kv, L, scratch) -> MoveGain | None:
    links = scratch.links
    seen = scratch.seen
    touched = []
    for u, w in row:
        c = a[u]
        if not seen[c]:
            seen[c] = True
            touched.append(c)
        links[c] += w
    i = a[v]
    ls = links[i]
    ds_wo = cdeg[i] - kv
    half = kv / (2.0 * L * L)
    best_c = -1
    best_gain = 0.0
    best_lt = 0.0
    for c in touched:
        if c != i:
            gain = (links[c] - ls) / L - half * (cdeg[c] - ds_wo)
            if gain > best_gain or (gain == best_gain and best_c >= 0 and c < best_c):
                best_c, best_gain, best_lt = c, gain, links[c]
        links[c] = 0.0
        seen[c] = False
    if best_c < 0:
        return None
    return MoveGain(v, i, best_c, best_lt, ls, kv, ds_wo, cdeg[best_c], best_gain)


def best_target(g: Graph, p: Partition, v: int) -> MoveGain | None:
    """Neighboring community with the largest strictly positive gain for ``v``.

    Ties go to the smallest community index. Returns ``None`` when no move
    improves modularity.
    """
    if g.total_weight == 0:
        return None
    return _best(g.rows()[v], v, p.assignment, p.community_degree,
                 float(g.degree[v]), g.total_weight, _Scratch(len(p.sizes)))


def run_vm(
    g: Graph,
    p: Partition,
    callback: Callable[[MoveGain, Partition], None] | None = None,
) -> Partition:
    """Refine ``p`` by moving single vertices until no move helps.

    Vertices are visited by increasing weighted degree, then index; each
    improving move is applied at once. Full passes repeat until one pass
    moves nothing. ``p`` is not modified; the result is renumbered.
    """
    p = p.copy()
    L = g.total_weight
    if L == 0:
        return renumber(p)
    rows = g.rows()
    kdeg = g.degree.tolist()
    order = sorted(range(g.n_vertices), key=lambda v: (kdeg[v], v))
    a = p.assignment
    cdeg = p.community_degree
    internal = p.internal_weight
    sizes = p.sizes
    scratch = _Scratch(len(sizes))
    while True:
        moved = 0
        for v in order:
            mv = _best(rows[v], v, a, cdeg, kdeg[v], L, scratch)
            if mv is None:
                continue
            i, j = mv.source, mv.target
            a[v] = j
            cdeg[i] -= mv.vertex_degree
            cdeg[j] += mv.vertex_degree
            internal[i] -= mv.links_to_source
            internal[j] += mv.links_to_target
            sizes[i] -= 1
            sizes[j] += 1
            p.modularity += mv.gain
            moved += 1
            if callback is not None:
                callback(mv, p)
        if not moved:
            break
    return renumber(p)
