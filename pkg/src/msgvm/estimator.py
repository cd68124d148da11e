"""scikit-learn style estimators over adjacency matrices or graphs."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .graph import Graph
from .greedy import run_greedy
from .msg import MsgConfig, run_msg
from .sweep import default_level_range, sweep_levels
from .vm import run_vm


def check_graph(X) -> Graph:
    """Validate ``X`` and return it as a :class:`Graph`.

    Accepts a :class:`Graph`, or a square symmetric non-negative adjacency
    matrix (dense or scipy sparse) with an empty diagonal. Matrix rows
    become vertices labelled ``0..N-1``.
    """
    if isinstance(X, Graph):
        return X
    A = check_array(X, accept_sparse="csr", dtype=np.float64,
                    ensure_min_samples=1, ensure_min_features=1)
    n, m = A.shape
    if n != m:
        raise ValueError(f"adjacency matrix must be square, got shape {A.shape}")
    A = sp.csr_matrix(A)
    A.eliminate_zeros()
    if A.nnz and A.data.min() < 0:
        raise ValueError("adjacency matrix has negative entries")
    if A.diagonal().any():
        raise ValueError("adjacency matrix has self-loops on the diagonal")
    if (A != A.T).nnz:
        raise ValueError("adjacency matrix must be symmetric")
    upper = sp.triu(A, k=1).tocoo()
    return Graph.from_edges(n, upper.row, upper.col, upper.data)


class _CommunityEstimator(ClusterMixin, BaseEstimator):

    def _store(self, g, partition, trace):
        self.graph_ = g
        self.partition_ = partition
        self.labels_ = np.asarray(partition.assignment, dtype=np.int64)
        self.modularity_ = partition.modularity
        self.n_communities_ = partition.community_count
        self.merge_trace_ = trace
        self.depth_ = trace.depth

    def score(self, X=None, y=None):
        """Modularity of the fitted partition."""
        check_is_fitted(self, "labels_")
        return self.modularity_


class MultistepGreedy(_CommunityEstimator):
    """Multistep greedy modularity optimization with vertex-mover refinement.

    Parameters
    ----------
    level : int, default=1
        Number of best distinct positive merge gains merged per iteration.
    refine : bool, default=True
        Run the vertex mover after merging converges.
    level_tolerance : float, default=1e-9
        Relative difference under which merge gains share a level.

    Attributes
    ----------
    labels_ : ndarray of shape (n_vertices,)
        Community of each vertex, numbered by first appearance.
    modularity_ : float
        Modularity of ``labels_``.
    modularity_msg_ : float
        Modularity before refinement.
    n_communities_ : int
    depth_ : int
        Number of merge iterations.
    merge_trace_ : MergeTrace
    """

    def __init__(self, level=1, refine=True, level_tolerance=1e-9):
        self.level = level
        self.refine = refine
        self.level_tolerance = level_tolerance

    def fit(self, X, y=None):
        g = check_graph(X)
        coarse, trace = run_msg(g, MsgConfig(self.level, self.level_tolerance))
        self.modularity_msg_ = coarse.modularity
        self._store(g, run_vm(g, coarse) if self.refine else coarse, trace)
        return self


class GreedyModularity(_CommunityEstimator):
    """Classical greedy agglomeration, one best merge per iteration.

    Parameters
    ----------
    refine : bool, default=False
        Run the vertex mover afterwards.
    """

    def __init__(self, refine=False):
        self.refine = refine

    def fit(self, X, y=None):
        g = check_graph(X)
        part, trace = run_greedy(g)
        self._store(g, run_vm(g, part) if self.refine else part, trace)
        return self


class LevelSweep(_CommunityEstimator):
    """Refined multistep greedy over a range of levels, keeping the best.

    Parameters
    ----------
    levels : iterable of int or None
        Levels to try; ``None`` means ``1..min(5000, M - 1)``.
    n_jobs : int, default=1
        Worker processes; results do not depend on it.

    Attributes
    ----------
    best_level_ : int
        Level of the best refined modularity, smallest on ties.
    sweep_ : SweepResult
    """

    def __init__(self, levels=None, n_jobs=1, level_tolerance=1e-9):
        self.levels = levels
        self.n_jobs = n_jobs
        self.level_tolerance = level_tolerance

    def fit(self, X, y=None):
        g = check_graph(X)
        levels = default_level_range(g) if self.levels is None else self.levels
        self.sweep_ = sweep_levels(g, levels, self.n_jobs, self.level_tolerance)
        self.best_level_ = self.sweep_.best.level
        best = MultistepGreedy(self.best_level_, True, self.level_tolerance).fit(g)
        self.modularity_msg_ = best.modularity_msg_
        self._store(g, best.partition_, best.merge_trace_)
        return self
