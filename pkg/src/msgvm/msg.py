"""Multistep greedy modularity optimization.

Every connected community pair ``(i, j)`` carries the modularity change
``dQ_ij`` its merge would cause. The pairs live twice: in per-community rows
(the delta-Q matrix) and in one globally ordered level set. Each iteration
takes the pairs whose positive ``dQ`` is among the ``level`` best distinct
values and merges them in order, skipping any pair with a community that was
already merged in the same iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple

from sortedcontainers import SortedList

from .graph import Graph
from .partition import Partition, renumber


@dataclass(frozen=True)
class MsgConfig:
    """Parameters of a multistep greedy run.

    level : number of best distinct positive ``dQ`` values merged per round.
    level_tolerance : relative difference under which two ``dQ`` values
        count as the same level.
    """

    level: int = 1
    level_tolerance: float = 1e-9

    def __post_init__(self):
        if isinstance(self.level, bool) or int(self.level) != self.level or self.level < 1:
            raise ValueError(f"level must be a positive integer, got {self.level!r}")
        if not self.level_tolerance >= 0:
            raise ValueError("level_tolerance must be non-negative")


class Merge(NamedTuple):
    i: int
    j: int
    delta_q: float


@dataclass
class MergeTrace:
    """Merges performed per iteration; ``depth`` is the dendrogram depth."""

    iterations: list[list[Merge]] = field(default_factory=list)
    n_updates: int = 0

    @property
    def depth(self) -> int:
        return len(self.iterations)

    @property
    def n_merges(self) -> int:
        return sum(len(it) for it in self.iterations)

    def merges(self) -> Iterator[Merge]:
        for it in self.iterations:
            yield from it


class LevelSet:
    """Triplets ``(i, j, dQ)`` with ``i < j``, ordered by decreasing ``dQ``
    and then increasing ``(i, j)``.

    Stored as a sorted list of the distinct negated ``dQ`` values plus one
    set of pairs per value; many pairs share a value on unweighted graphs.
    """

    def __init__(self, triplets=()):
        self._pairs: dict[float, set[tuple[int, int]]] = {}
        self._size = 0
        for i, j, dq in triplets:
            if i > j:
                i, j = j, i
            bucket = self._pairs.get(dq)
            if bucket is None:
                self._pairs[dq] = {(i, j)}
            else:
                bucket.add((i, j))
            self._size += 1
        self._values = SortedList(-dq for dq in self._pairs)

    def add(self, i: int, j: int, dq: float) -> None:
        if i > j:
            i, j = j, i
        bucket = self._pairs.get(dq)
        if bucket is None:
            self._pairs[dq] = {(i, j)}
            self._values.add(-dq)
        elif (i, j) in bucket:
            raise ValueError(f"triplet {(i, j, dq)} already present")
        else:
            bucket.add((i, j))
        self._size += 1

    def remove(self, i: int, j: int, dq: float) -> None:
        if i > j:
            i, j = j, i
        bucket = self._pairs[dq]
        bucket.remove((i, j))
        if not bucket:
            del self._pairs[dq]
            self._values.remove(-dq)
        self._size -= 1

    def head(self) -> tuple[int, int, float] | None:
        if not self._values:
            return None
        dq = -self._values[0]
        i, j = min(self._pairs[dq])
        return i, j, dq

    def __iter__(self) -> Iterator[tuple[int, int, float]]:
        for neg in self._values:
            dq = -neg
            for i, j in sorted(self._pairs[dq]):
                yield i, j, dq

    def __len__(self) -> int:
        return self._size

    def __contains__(self, triplet) -> bool:
        i, j, dq = triplet
        return (min(i, j), max(i, j)) in self._pairs.get(dq, ())


def _same_level(anchor: float, value: float, tol: float) -> bool:
    return abs(anchor - value) <= tol * max(abs(anchor), abs(value))


def select_merge_pairs(
    level_set: LevelSet, level: int, tolerance: float = 1e-9
) -> list[tuple[int, int, float]]:
    """Positive triplets whose ``dQ`` is among the ``level`` best levels.

    Values within ``tolerance`` (relative) of a level's first value join that
    level. The result is ordered by level and by ``(i, j)`` inside a level.
    """
    picked = []
    rank = 0
    anchor = 0.0
    for i, j, dq in level_set:
        if dq <= 0:
            break
        if rank == 0 or not _same_level(anchor, dq, tolerance):
            rank += 1
            if rank > level:
                break
            anchor = dq
        picked.append((rank, i, j, dq))
    picked.sort(key=lambda t: (t[0], t[1], t[2]))
    return [(i, j, dq) for _, i, j, dq in picked]


class MergeState:
    """Delta-Q matrix, level set and community bookkeeping of one run.

    Built from the singleton partition: ``dQ_uv = w_uv / L - d_u d_v / (2 L^2)``
    for every edge and ``Q0 = -sum d_u^2 / (4 L^2)``.
    """

    def __init__(self, g: Graph):
        n = g.n_vertices
        L = g.total_weight
        self.graph = g
        self.n_vertices = n
        self.degree = g.degree.tolist()
        self._c = 1.0 / (2.0 * L * L) if L > 0 else 0.0
        self.rows: list[dict[int, float]] = [{} for _ in range(n)]
        self.members: list[list[int]] = [[v] for v in range(n)]
        self.modularity = -sum(x * x for x in self.degree) * self._c / 2.0
        self.n_updates = 0

        d = self.degree
        c = self._c
        rows = self.rows
        triplets = []
        for u, v, w in zip(*(a.tolist() for a in g.edge_arrays())):
            dq = w / L - d[u] * d[v] * c
            rows[u][v] = dq
            rows[v][u] = dq
            triplets.append((u, v, dq))
        self.level_set = LevelSet(triplets)

    def row(self, i: int) -> list[tuple[int, float]]:
        """Row ``i`` of the delta-Q matrix sorted by neighbor index."""
        return sorted(self.rows[i].items())

    def is_live(self, i: int) -> bool:
        return bool(self.members[i])

    def merge(self, i: int, j: int) -> float:
        """Merge community ``j`` into ``i`` (the smaller index survives).

        Rows of all neighbors are patched in place: a neighbor ``k`` linked
        to both gets ``dQ_ik + dQ_jk``, one linked only to ``i`` gets
        ``dQ_ik - d_j d_k / 2L^2`` and symmetrically for ``j``. Returns the
        applied ``dQ_ij``.
        """
        if i == j:
            raise ValueError("cannot merge a community with itself")
        if i > j:
            i, j = j, i
        n = self.n_vertices
        if not (0 <= i < n and 0 <= j < n) or not self.members[i] or not self.members[j]:
            raise ValueError(f"communities {i} and {j} must both be live")
        rows = self.rows
        ri, rj = rows[i], rows[j]
        if j not in ri:
            raise ValueError(f"communities {i} and {j} are not connected")
        ls = self.level_set
        buckets = ls._pairs
        values = ls._values
        d = self.degree
        c = self._c
        di, dj = d[i], d[j]

        dq_ij = ri.pop(j)
        del rj[i]
        ls.remove(i, j, dq_ij)

        merged: dict[int, float] = {}
        for k, a in ri.items():
            b = rj.get(k)
            merged[k] = a - dj * d[k] * c if b is None else a + b
        for k, b in rj.items():
            if k not in ri:
                merged[k] = b - di * d[k] * c

        # level-set updates inlined; this loop dominates the running time
        for k, new in merged.items():
            rk = rows[k]
            for c in (i, j):
                old = rk.pop(c, None)
                if old is not None:
                    bucket = buckets[old]
                    bucket.remove((c, k) if c < k else (k, c))
                    if not bucket:
                        del buckets[old]
                        values.remove(-old)
            rk[i] = new
            pair = (i, k) if i < k else (k, i)
            bucket = buckets.get(new)
            if bucket is None:
                buckets[new] = {pair}
                values.add(-new)
            else:
                bucket.add(pair)
        ls._size -= len(ri) + len(rj) - len(merged)

        rows[i] = merged
        rows[j] = {}
        self.modularity += dq_ij
        d[i] = di + dj
        d[j] = 0.0
        mi, mj = self.members[i], self.members[j]
        if len(mi) < len(mj):
            mi, mj = mj, mi
        mi.extend(mj)
        self.members[i] = mi
        self.members[j] = []
        self.n_updates += len(merged) + 1
        return dq_ij

    def iterate(self, level: int, tolerance: float = 1e-9,
                max_merges: int | None = None) -> list[Merge]:
        """One round: select pairs, then merge those with untouched ends."""
        head = self.level_set.head()
        if head is None or head[2] <= 0:
            return []
        selected = select_merge_pairs(self.level_set, level, tolerance)
        touched = bytearray(self.n_vertices)
        done: list[Merge] = []
        for i, j, dq in selected:
            if touched[i] or touched[j]:
                continue
            self.merge(i, j)
            touched[i] = touched[j] = 1
            done.append(Merge(i, j, dq))
            if max_merges is not None and len(done) >= max_merges:
                break
        return done

    def assignment(self) -> list[int]:
        a = [0] * self.n_vertices
        for c, mem in enumerate(self.members):
            for v in mem:
                a[v] = c
        return a

    def partition(self) -> Partition:
        """Current communities as a renumbered :class:`Partition`.

        The cached modularity is the incrementally maintained value.
        """
        p = Partition.from_assignment(self.graph, self.assignment())
        p.modularity = self.modularity
        return renumber(p)


def init_delta_q(g: Graph) -> MergeState:
    return MergeState(g)


def merge_communities(state: MergeState, i: int, j: int) -> float:
    return state.merge(i, j)


def _run(g: Graph, level: int, tolerance: float, max_merges: int | None,
         callback: Callable[[MergeState, list[Merge]], None] | None):
    state = MergeState(g)
    trace = MergeTrace()
    while True:
        merges = state.iterate(level, tolerance, max_merges)
        if not merges:
            break
        trace.iterations.append(merges)
        if callback is not None:
            callback(state, merges)
    trace.n_updates = state.n_updates
    return state.partition(), trace


def run_msg(
    g: Graph,
    config: MsgConfig | None = None,
    callback: Callable[[MergeState, list[Merge]], None] | None = None,
) -> tuple[Partition, MergeTrace]:
    """Run multistep greedy merging until no merge improves modularity.

    ``callback(state, merges)`` is invoked after every iteration, mostly so
    tests can audit the incremental bookkeeping.
    """
    config = config or MsgConfig()
    return _run(g, config.level, config.level_tolerance, None, callback)

