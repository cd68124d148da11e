"""Undirected weighted graphs in compressed sparse row form.

Vertices carry external labels (strings when read from an edge list) and
dense indices ``0..N-1`` assigned in order of first appearance.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Iterator, Sequence, TextIO

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components


class GraphFormatError(ValueError):
    """Raised for malformed or unsupported edge-list input."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Graph:
    """Immutable undirected weighted graph.

    Parameters
    ----------
    labels : sequence of hashable
        External vertex labels; position gives the dense index.
    indptr, indices, weights : ndarray
        Symmetric CSR adjacency with neighbor indices sorted per row.

    Use :meth:`from_edges` or :func:`parse_edge_list` rather than calling
    the constructor directly.
    """

    def __init__(self, labels: Sequence[Hashable], indptr, indices, weights):
        self.labels = tuple(labels)
        self.indptr = _readonly(np.asarray(indptr, dtype=np.int64))
        self.indices = _readonly(np.asarray(indices, dtype=np.int64))
        self.weights = _readonly(np.asarray(weights, dtype=np.float64))
        if len(self.indptr) != len(self.labels) + 1:
            raise ValueError("indptr length must be vertex count + 1")
        rows = np.repeat(np.arange(len(self.labels)), np.diff(self.indptr))
        self.degree = _readonly(
            np.bincount(rows, weights=self.weights, minlength=len(self.labels))
        )
        self.total_weight = float(self.weights[rows < self.indices].sum())
        self._index = None
        self._rows = None
        self.n_self_loops_dropped = 0

    @classmethod
    def from_edges(cls, n_vertices: int, u, v, w=None, labels=None) -> "Graph":
        """Build a graph from parallel edge arrays, summing duplicate edges."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        w = np.ones(len(u)) if w is None else np.asarray(w, dtype=np.float64)
        if not (len(u) == len(v) == len(w)):
            raise ValueError("edge arrays must have equal length")
        if len(u) and (u.min() < 0 or v.min() < 0 or max(u.max(), v.max()) >= n_vertices):
            raise ValueError("edge endpoint out of range")
        if np.any(u == v):
            raise ValueError("self-loops are not supported")
        if np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("edge weights must be finite and positive")
        adj = sp.coo_matrix(
            (np.concatenate([w, w]), (np.concatenate([u, v]), np.concatenate([v, u]))),
            shape=(n_vertices, n_vertices),
        ).tocsr()
        adj.sum_duplicates()
        adj.sort_indices()
        if labels is None:
            labels = range(n_vertices)
        return cls(labels, adj.indptr, adj.indices, adj.data)

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        """Number of distinct undirected edges."""
        return len(self.indices) // 2

    def __len__(self) -> int:
        return self.n_vertices

    def __repr__(self) -> str:
        return f"Graph(N={self.n_vertices}, M={self.n_edges}, L={self.total_weight:g})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.labels == other.labels
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_rows"] = None
        state["_index"] = None
        return state

    def index_of(self, label: Hashable) -> int:
        if self._index is None:
            self._index = {lab: i for i, lab in enumerate(self.labels)}
        return self._index[label]

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def neighbor_weights(self, v: int) -> np.ndarray:
        return self.weights[self.indptr[v]:self.indptr[v + 1]]

    def rows(self) -> list[list[tuple[int, float]]]:
        """Adjacency as Python lists of ``(neighbor, weight)``, cached.

        The inner loops of the optimizers run over these instead of the
        numpy arrays; element access on ndarrays is slow from Python.
        """
        if self._rows is None:
            idx = self.indices.tolist()
            wts = self.weights.tolist()
            ptr = self.indptr.tolist()
            self._rows = [
                list(zip(idx[ptr[v]:ptr[v + 1]], wts[ptr[v]:ptr[v + 1]]))
                for v in range(self.n_vertices)
            ]
        return self._rows

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Distinct edges ``(u, v, w)`` with ``u < v``, sorted by ``(u, v)``."""
        ptr = self.indptr
        for u in range(self.n_vertices):
            for k in range(ptr[u], ptr[u + 1]):
                v = int(self.indices[k])
                if u < v:
                    yield u, v, float(self.weights[k])

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        rows = np.repeat(np.arange(self.n_vertices), np.diff(self.indptr))
        keep = rows < self.indices
        return rows[keep], self.indices[keep].copy(), self.weights[keep].copy()

    def to_scipy(self) -> sp.csr_matrix:
        n = self.n_vertices
        return sp.csr_matrix((self.weights, self.indices, self.indptr), shape=(n, n))

    def edge_dict(self) -> dict[frozenset, float]:
        """Label-level view ``{frozenset({label_u, label_v}): w}``."""
        lab = self.labels
        return {frozenset((lab[u], lab[v])): w for u, v, w in self.edges()}

    def subgraph(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph; vertices keep their relative index order."""
        keep = np.unique(np.fromiter(vertices, dtype=np.int64))
        adj = self.to_scipy()[keep][:, keep].tocsr()
        adj.sort_indices()
        return Graph([self.labels[i] for i in keep], adj.indptr, adj.indices, adj.data)


def parse_edge_list(
    lines: Iterable[str] | TextIO,
    weighted: bool = False,
    drop_self_loops: bool = False,
) -> Graph:
    """Parse ``u v [w]`` lines into a :class:`Graph`.

    Lines starting with ``#`` and blank lines are ignored. Duplicate edges
    have their weights summed. With ``drop_self_loops`` a line ``u u`` is
    skipped and counted in ``Graph.n_self_loops_dropped``; otherwise it is
    an error.
    """
    index: dict[str, int] = {}
    us: list[int] = []
    vs: list[int] = []
    ws: list[float] = []
    n_fields = 3 if weighted else 2
    dropped = 0
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != n_fields:
            raise GraphFormatError(
                f"expected {n_fields} fields, got {len(tokens)}: {stripped!r}", lineno
            )
        a, b = tokens[0], tokens[1]
        if a == b:
            if drop_self_loops:
                dropped += 1
                continue
            raise GraphFormatError(f"self-loop on vertex {a!r}", lineno)
        w = 1.0
        if weighted:
            try:
                w = float(tokens[2])
            except ValueError:
                raise GraphFormatError(f"bad weight {tokens[2]!r}", lineno) from None
            if not np.isfinite(w) or w <= 0:
                raise GraphFormatError(f"weight must be positive, got {tokens[2]}", lineno)
        for tok in (a, b):
            if tok not in index:
                index[tok] = len(index)
        us.append(index[a])
        vs.append(index[b])
        ws.append(w)
    g = Graph.from_edges(len(index), us, vs, ws, labels=list(index))
    g.n_self_loops_dropped = dropped
    return g


def read_edge_list(path, weighted: bool = False, drop_self_loops: bool = False) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh, weighted=weighted, drop_self_loops=drop_self_loops)


def serialize_edge_list(g: Graph) -> str:
    """One ``label_u label_v w`` line per distinct edge, sorted by index pair.

    Weights use ``repr`` so that parsing with ``weighted=True`` recovers
    them bit for bit.
    """
    out = [f"# N={g.n_vertices} M={g.n_edges} L={g.total_weight!r}"]
    lab = g.labels
    for u, v, w in g.edges():
        out.append(f"{lab[u]} {lab[v]} {w!r}")
    return "\n".join(out) + "\n"


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest connected component.

    Ties go to the component containing the smallest vertex index.
    """
    if g.n_vertices == 0:
        return g
    n_comp, comp = connected_components(g.to_scipy(), directed=False)
    if n_comp == 1:
        return g
    sizes = np.bincount(comp, minlength=n_comp)
    first = np.full(n_comp, g.n_vertices)
    np.minimum.at(first, comp, np.arange(g.n_vertices))
    largest = np.flatnonzero(sizes == sizes.max())
    best = int(largest[np.argmin(first[largest])])
    return g.subgraph(np.flatnonzero(comp == best))


def permute_labels(g: Graph, seed: int) -> Graph:
    """Same topology with vertex indices shuffled by a seeded permutation.

    Vertex ``v`` of ``g`` becomes vertex ``perm[v]`` of the result and keeps
    its label, so partitions can be compared label by label.
    """
    perm = np.random.default_rng(seed).permutation(g.n_vertices)
    u, v, w = g.edge_arrays()
    labels = [None] * g.n_vertices
    for old, new in enumerate(perm.tolist()):
        labels[new] = g.labels[old]
    return Graph.from_edges(g.n_vertices, perm[u], perm[v], w, labels=labels)
