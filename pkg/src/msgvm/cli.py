"""Command-line front end: ``msgvm {run,sweep,greedy,score,permute}``."""

from __future__ import annotations

import argparse
import sys
import time

from .graph import GraphFormatError, largest_component, read_edge_list
from .greedy import run_greedy
from .msg import MsgConfig
from .partition import PartitionFormatError, read_partition, score_modularity, write_partition
from .sweep import default_level_range, permutation_study, run_msgvm, sweep_levels


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _level_range(text: str) -> range:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected MIN:MAX")
    lo, hi = _positive_int(lo), _positive_int(hi)
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty level range {text}")
    return range(lo, hi + 1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="edge list file")
    common.add_argument("--weighted", action="store_true", help="third column is the edge weight")
    common.add_argument("--drop-self-loops", action="store_true",
                        help="skip 'u u' lines instead of failing")
    common.add_argument("--component-only", action="store_true",
                        help="keep only the largest connected component")
    common.add_argument("--output", help="write the resulting partition here")

    parser = argparse.ArgumentParser(
        prog="msgvm",
        description="Multistep greedy modularity optimization with vertex-mover refinement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="single refined multistep greedy run")
    p.add_argument("--level", type=_positive_int, default=1)
    p.add_argument("--no-vm", action="store_true", help="skip vertex-mover refinement")

    p = sub.add_parser("sweep", parents=[common], help="run every level in a range")
    p.add_argument("--levels", type=_level_range, help="MIN:MAX (default 1:min(5000, M-1))")
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--report", help="TSV report path (default: stdout)")
    p.add_argument("--omit-timing", action="store_true",
                   help="drop the ms column so reports are byte-reproducible")

    sub.add_parser("greedy", parents=[common], help="classical greedy baseline")

    p = sub.add_parser("score", parents=[common], help="modularity of a partition file")
    p.add_argument("--partition", required=True)

    p = sub.add_parser("permute", parents=[common], help="label-permutation robustness study")
    p.add_argument("--level", type=_positive_int, default=1)
    p.add_argument("--count", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _load(args):
    g = read_edge_list(args.input, weighted=args.weighted, drop_self_loops=args.drop_self_loops)
    if g.n_self_loops_dropped:
        print(f"dropped {g.n_self_loops_dropped} self-loop line(s)", file=sys.stderr)
    if args.component_only:
        g = largest_component(g)
    return g


def _save(args, g, partition):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            write_partition(fh, g, partition)


def cmd_run(args) -> int:
    g = _load(args)
    coarse, refined, trace, ms = run_msgvm(g, MsgConfig(args.level), refine=not args.no_vm)
    _save(args, g, refined)
    fields = [f"Q_MSG={coarse.modularity:.6f}"]
    if not args.no_vm:
        fields.append(f"Q_MSG-VM={refined.modularity:.6f}")
    fields += [f"N_C={refined.community_count}", f"D={trace.depth}", f"time_ms={ms:.1f}"]
    print(" ".join(fields))
    return 0


def cmd_sweep(args) -> int:
    g = _load(args)
    levels = args.levels or default_level_range(g)
    result = sweep_levels(g, levels, n_jobs=args.jobs)
    report = result.to_tsv(timing=not args.omit_timing)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report)
    else:
        sys.stdout.write(report)
    best = result.best
    if args.output:
        _save(args, g, run_msgvm(g, MsgConfig(best.level))[1])
    print(f"l_opt={best.level} Q={best.q_msgvm:.6f} N_C={best.n_communities}",
          file=sys.stderr if not args.report else sys.stdout)
    return 0


def cmd_greedy(args) -> int:
    g = _load(args)
    t0 = time.perf_counter()
    part, trace = run_greedy(g)
    ms = (time.perf_counter() - t0) * 1e3
    _save(args, g, part)
    print(f"Q={part.modularity:.6f} N_C={part.community_count} D={trace.depth} time_ms={ms:.1f}")
    return 0


def cmd_score(args) -> int:
    g = _load(args)
    with open(args.partition, encoding="utf-8") as fh:
        assignment = read_partition(fh, g)
    print(f"{score_modularity(g, assignment):.6f}")
    return 0


def cmd_permute(args) -> int:
    g = _load(args)
    study = permutation_study(g, args.level, args.count, args.seed)
    print(study.summary())
    return 0


COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "greedy": cmd_greedy,
    "score": cmd_score,
    "permute": cmd_permute,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (GraphFormatError, PartitionFormatError, OSError) as exc:
        print(f"msgvm: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
