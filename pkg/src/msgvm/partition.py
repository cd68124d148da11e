"""Community assignments and modularity scoring from scratch."""

from __future__ import annotations

import math
from typing import Iterable, Sequence, TextIO

import numpy as np

from .graph import Graph


class PartitionFormatError(ValueError):
    pass


def score_modularity(g: Graph, assignment: Sequence[int]) -> float:
    """Modularity of ``assignment`` computed directly from its definition.

    ``Q = sum_i [ I(i)/L - (d_i / 2L)^2 ]`` with ``I(i)`` the weight inside
    community ``i`` and ``d_i`` its summed vertex degree. Community ids may
    be any non-negative integers. A graph without edges scores 0.
    """
    a = np.asarray(assignment, dtype=np.int64)
    if a.shape != (g.n_vertices,):
        raise ValueError(
            f"assignment has length {a.size}, graph has {g.n_vertices} vertices"
        )
    L = g.total_weight
    if L == 0:
        return 0.0
    if a.size and a.min() < 0:
        raise ValueError("community ids must be non-negative")
    u, v, w = g.edge_arrays()
    same = a[u] == a[v]
    n_comm = int(a.max()) + 1 if a.size else 0
    internal = np.bincount(a[u[same]], weights=w[same], minlength=n_comm)
    degree = np.bincount(a, weights=g.degree, minlength=n_comm)
    # fsum is correctly rounded, so the result ignores community order
    return math.fsum((internal / L - (degree / (2.0 * L)) ** 2).tolist())


class Partition:
    """Vertex to community assignment with per-community bookkeeping.

    Attributes
    ----------
    assignment : list of int
        Community index of every vertex.
    internal_weight : list of float
        Weight of edges with both ends inside each community.
    community_degree : list of float
        Summed weighted degree of each community.
    sizes : list of int
        Vertex count of each community; empty communities have size 0.
    modularity : float
        Cached modularity, maintained incrementally by the optimizers.
    """

    __slots__ = ("assignment", "internal_weight", "community_degree", "sizes", "modularity")

    def __init__(self, assignment, internal_weight, community_degree, sizes, modularity):
        self.assignment = list(assignment)
        self.internal_weight = list(internal_weight)
        self.community_degree = list(community_degree)
        self.sizes = list(sizes)
        self.modularity = float(modularity)

    @classmethod
    def from_assignment(cls, g: Graph, assignment: Sequence[int]) -> "Partition":
        a = np.asarray(assignment, dtype=np.int64)
        if a.shape != (g.n_vertices,):
            raise ValueError(
                f"assignment has length {a.size}, graph has {g.n_vertices} vertices"
            )
        n_comm = int(a.max()) + 1 if a.size else 0
        u, v, w = g.edge_arrays()
        same = a[u] == a[v]
        internal = np.bincount(a[u[same]], weights=w[same], minlength=n_comm)
        degree = np.bincount(a, weights=g.degree, minlength=n_comm)
        sizes = np.bincount(a, minlength=n_comm)
        return cls(a.tolist(), internal.tolist(), degree.tolist(), sizes.tolist(),
                   score_modularity(g, a))

    @property
    def n_vertices(self) -> int:
        return len(self.assignment)

    @property
    def community_count(self) -> int:
        return sum(1 for s in self.sizes if s > 0)

    def copy(self) -> "Partition":
        return Partition(self.assignment, self.internal_weight, self.community_degree,
                         self.sizes, self.modularity)

    def communities(self) -> list[list[int]]:
        """Member lists of the non-empty communities, by community index."""
        members: list[list[int]] = [[] for _ in self.sizes]
        for v, c in enumerate(self.assignment):
            members[c].append(v)
        return [m for m in members if m]

    def __repr__(self) -> str:
        return (f"Partition(N={self.n_vertices}, N_C={self.community_count}, "
                f"Q={self.modularity:.6f})")


def singleton_partition(g: Graph) -> Partition:
    """Every vertex in its own community, ``Q0 = -sum_i d_i^2 / (4 L^2)``."""
    n = g.n_vertices
    L = g.total_weight
    d = g.degree.tolist()
    q0 = -sum(x * x for x in d) / (4.0 * L * L) if L > 0 else 0.0
    return Partition(range(n), [0.0] * n, d, [1] * n, q0)


def renumber(p: Partition) -> Partition:
    """Dense community ids in order of first appearance over the vertices."""
    remap: dict[int, int] = {}
    for c in p.assignment:
        if c not in remap:
            remap[c] = len(remap)
    k = len(remap)
    internal = [0.0] * k
    degree = [0.0] * k
    sizes = [0] * k
    for old, new in remap.items():
        internal[new] = p.internal_weight[old]
        degree[new] = p.community_degree[old]
        sizes[new] = p.sizes[old]
    return Partition([remap[c] for c in p.assignment], internal, degree, sizes, p.modularity)


def write_partition(fh: TextIO, g: Graph, p: Partition) -> None:
    """Write ``label community`` lines; ids are renumbered densely first."""
    p = renumber(p)
    fh.write(f"# Q={p.modularity!r} N_C={p.community_count}\n")
    for label, c in zip(g.labels, p.assignment):
        fh.write(f"{label} {c}\n")


def read_partition(lines: Iterable[str], g: Graph) -> list[int]:
    """Read a partition file into an assignment over ``g``'s dense indices."""
    assignment = [-1] * g.n_vertices
    labels = {str(lab): i for i, lab in enumerate(g.labels)}
    for lineno, line in enumerate(lines, start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        tokens = s.split()
        if len(tokens) != 2:
            raise PartitionFormatError(f"line {lineno}: expected 'vertex community'")
        if tokens[0] not in labels:
            raise PartitionFormatError(f"line {lineno}: unknown vertex {tokens[0]!r}")
        try:
            c = int(tokens[1])
        except ValueError:
            raise PartitionFormatError(f"line {lineno}: bad community id {tokens[1]!r}") from None
        if c < 0:
            raise PartitionFormatError(f"line {lineno}: negative community id")
        assignment[labels[tokens[0]]] = c
    for i, c in enumerate(assignment):
        if c < 0:
            raise PartitionFormatError(f"vertex {g.labels[i]!r} missing from partition")
    return assignment
