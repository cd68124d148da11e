import itertools

import pytest

from msgvm import Graph, MsgConfig, run_greedy, run_msg, run_vm, score_modularity

from conftest import er_corpus


def brute_force_agglomeration(g, tol=1e-9):
    """Merge the best pair of communities (connected or not) until none helps.

    Communities are named by their smallest vertex, which is also the index
    the engine keeps. Gains within a relative ``tol`` of the best count as
    tied and the lexicographically smallest pair wins.
    """
    a = list(range(g.n_vertices))
    q = score_modularity(g, a)
    while True:
        best = None
        for i, j in itertools.combinations(sorted(set(a)), 2):
            trial = [i if c == j else c for c in a]
            dq = score_modularity(g, trial) - q
            if best is None or dq > best[0] + tol * abs(best[0]):
                best = (dq, i, j)
        if best is None or best[0] <= 1e-12:
            return a, q
        _, i, j = best
        a = [i if c == j else c for c in a]
        q = score_modularity(g, a)


def test_k3(k3):
    p, trace = run_greedy(k3)
    assert p.community_count == 1
    assert p.modularity == pytest.approx(0.0, abs=1e-15)
    assert [m[:2] for m in trace.merges()] == [(0, 1), (0, 2)]


def test_single_vertex():
    p, trace = run_greedy(Graph.from_edges(1, [], []))
    assert p.assignment == [0] and p.modularity == 0.0 and trace.depth == 0


def test_karate(karate):
    p, trace = run_greedy(karate)
    assert p.modularity == pytest.approx(0.381, abs=0.002)
    assert p.community_count == 3
    assert trace.depth == karate.n_vertices - 3


def test_one_merge_per_iteration_and_monotone():
    for g in er_corpus(60, seed=4):
        p, trace = run_greedy(g)
        assert all(len(it) == 1 for it in trace.iterations)
        assert all(m.delta_q > 0 for m in trace.merges())
        assert trace.n_merges <= max(0, g.n_vertices - 1)
        assert p.modularity == pytest.approx(score_modularity(g, p.assignment), abs=1e-9)


def test_matches_brute_force_agglomeration():
    for g in er_corpus(80, seed=12, max_n=10):
        p, _ = run_greedy(g)
        a, q = brute_force_agglomeration(g)
        assert p.modularity == pytest.approx(q, abs=1e-9)


def test_msgvm_not_worse_than_greedy(karate):
    greedy_q = run_greedy(karate)[0].modularity
    best = max(run_vm(karate, run_msg(karate, MsgConfig(l))[0]).modularity for l in range(1, 78))
    assert best >= greedy_q
