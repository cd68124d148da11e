"""Level-parameter sweeps and label-permutation studies."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .graph import Graph, permute_labels
from .msg import MergeTrace, MsgConfig, run_msg
from .partition import Partition
from .vm import run_vm

TSV_HEADER = ("l", "Q_msg", "Q_msgvm", "n_c", "depth", "ms")


@dataclass(frozen=True)
class SweepRecord:
    level: int
    q_msg: float
    q_msgvm: float
    n_communities: int
    depth: int
    ms: float


@dataclass
class SweepResult:
    records: list[SweepRecord] = field(default_factory=list)

    @property
    def best(self) -> SweepRecord:
        """Record with the highest refined modularity; smallest level on ties."""
        if not self.records:
            raise ValueError("empty sweep")
        return min(self.records, key=lambda r: (-r.q_msgvm, r.level))

    def to_tsv(self, timing: bool = True) -> str:
        cols = TSV_HEADER if timing else TSV_HEADER[:-1]
        lines = ["\t".join(cols)]
        for r in sorted(self.records, key=lambda r: r.level):
            row = [str(r.level), f"{r.q_msg:.12f}", f"{r.q_msgvm:.12f}",
                   str(r.n_communities), str(r.depth)]
            if timing:
                row.append(f"{r.ms:.3f}")
            lines.append("\t".join(row))
        return "\n".join(lines) + "\n"


def run_msgvm(g: Graph, config: MsgConfig, refine: bool = True
              ) -> tuple[Partition, Partition, MergeTrace, float]:
    """One multistep greedy run plus optional refinement.

    Returns the raw and refined partitions, the merge trace and the wall
    time in milliseconds.
    """
    t0 = time.perf_counter()
    coarse, trace = run_msg(g, config)
    refined = run_vm(g, coarse) if refine else coarse
    ms = (time.perf_counter() - t0) * 1e3
    return coarse, refined, trace, ms


def _record(g: Graph, level: int, tolerance: float) -> SweepRecord:
    coarse, refined, trace, ms = run_msgvm(g, MsgConfig(level, tolerance))
    return SweepRecord(level, coarse.modularity, refined.modularity,
                       refined.community_count, trace.depth, ms)


_worker_graph: Graph | None = None


def _init_worker(g: Graph) -> None:
    global _worker_graph
    _worker_graph = g


def _worker_record(args) -> SweepRecord:
    level, tolerance = args
    return _record(_worker_graph, level, tolerance)


def sweep_levels(g: Graph, levels: Iterable[int], n_jobs: int = 1,
                 tolerance: float = 1e-9) -> SweepResult:
    """Run refined multistep greedy for every level; records sorted by level."""
    levels = sorted(set(int(l) for l in levels))
    if not levels:
        raise ValueError("no levels to sweep")
    if levels[0] < 1:
        raise ValueError("levels must be positive")
    if n_jobs <= 1 or len(levels) == 1:
        records = [_record(g, l, tolerance) for l in levels]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs, initializer=_init_worker,
                                 initargs=(g,)) as ex:
            records = list(ex.map(_worker_record, [(l, tolerance) for l in levels],
                                  chunksize=max(1, len(levels) // (4 * n_jobs))))
    return SweepResult(sorted(records, key=lambda r: r.level))


def default_level_range(g: Graph) -> range:
    return range(1, max(1, min(5000, g.n_edges - 1)) + 1)


@dataclass
class PermutationStudy:
    level: int
    base_q: float
    seeds: list[int]
    qs: list[float]

    @property
    def max_relative_improvement(self) -> float:
        return (max(self.qs) - self.base_q) / abs(self.base_q) if self.base_q else 0.0

    @property
    def relative_spread(self) -> float:
        return (max(self.qs) - min(self.qs)) / abs(self.base_q) if self.base_q else 0.0

    def summary(self) -> str:
        qs = np.asarray(self.qs)
        return (f"level={self.level} count={len(qs)} base_Q={self.base_q:.6f} "
                f"min_Q={qs.min():.6f} max_Q={qs.max():.6f} mean_Q={qs.mean():.6f} "
                f"max_rel_improvement={100 * self.max_relative_improvement:.3f}% "
                f"rel_spread={100 * self.relative_spread:.3f}%")


def permutation_seeds(seed: int, count: int) -> list[int]:
    """Independent per-copy seeds derived from one master seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(c.generate_state(1)[0]) for c in children]


def permutation_study(g: Graph, level: int, count: int, seed: int,
                      tolerance: float = 1e-9) -> PermutationStudy:
    """Refined runs on ``count`` seeded relabelings of ``g``."""
    if count < 1:
        raise ValueError("count must be at least 1")
    config = MsgConfig(level, tolerance)
    base = run_msgvm(g, config)[1].modularity
    seeds = permutation_seeds(seed, count)
    qs = [run_msgvm(permute_labels(g, s), config)[1].modularity for s in seeds]
    return PermutationStudy(level, base, seeds, qs)
