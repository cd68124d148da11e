"""Classical greedy agglomeration baseline."""

from __future__ import annotations

from typing import Callable

from .graph import Graph
from .msg import Merge, MergeState, MergeTrace, _run
from .partition import Partition


def run_greedy(
    g: Graph,
    callback: Callable[[MergeState, list[Merge]], None] | None = None,
    tolerance: float = 1e-9,
) -> tuple[Partition, MergeTrace]:
    """Merge the single best community pair per iteration until no merge helps.

    Shares the engine of :func:`msgvm.msg.run_msg`, so ties are broken the
    same way (smallest ``(i, j)`` among the best pairs) and each merge is
    one iteration of the trace.
    """
    return _run(g, 1, tolerance, 1, callback)
