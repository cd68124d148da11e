"""Multistep greedy modularity optimization with vertex-mover refinement."""

from .estimator import GreedyModularity, LevelSweep, MultistepGreedy, check_graph
from .graph import (
    Graph,
    GraphFormatError,
    largest_component,
    parse_edge_list,
    permute_labels,
    read_edge_list,
    serialize_edge_list,
)
from .greedy import run_greedy
from .msg import LevelSet, Merge, MergeState, MergeTrace, MsgConfig, run_msg, select_merge_pairs
from .partition import Partition, renumber, score_modularity, singleton_partition
from .sweep import SweepResult, permutation_study, sweep_levels
from .vm import MoveGain, best_target, move_gain, run_vm

__version__ = "0.1.0"
