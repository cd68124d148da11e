import numpy as np
import pytest

from msgvm import MsgConfig, Partition, best_target, move_gain, run_msg, run_vm, score_modularity

from conftest import er_corpus, from_pairs


def scratch_move(g, assignment, v, j):
    moved = list(assignment)
    moved[v] = j
    return score_modularity(g, moved) - score_modularity(g, assignment)


def test_identity_move_has_zero_gain(two_triangles):
    p = Partition.from_assignment(two_triangles, [0, 0, 0, 0, 1, 1])
    for v in range(6):
        mg = move_gain(two_triangles, p, v, p.assignment[v])
        assert mg.gain == 0.0
        assert mg.target_degree == mg.source_degree_without


def test_move_vertex_3(two_triangles):
    p = Partition.from_assignment(two_triangles, [0, 0, 0, 0, 1, 1])
    mg = move_gain(two_triangles, p, 3, 1)
    assert mg.gain == pytest.approx(23 / 98, abs=1e-15)
    assert (mg.links_to_target, mg.links_to_source, mg.vertex_degree) == (2, 1, 3)
    assert (mg.source_degree_without, mg.target_degree) == (7, 4)


def test_optimum_is_locally_stable(two_triangles):
    p = Partition.from_assignment(two_triangles, [0, 0, 0, 1, 1, 1])
    assert move_gain(two_triangles, p, 2, 1).gain < 0
    assert scratch_move(two_triangles, p.assignment, 2, 1) < 0
    assert all(best_target(two_triangles, p, v) is None for v in range(6))


def test_move_gain_range_errors(k3):
    p = Partition.from_assignment(k3, [0, 0, 1])
    with pytest.raises(IndexError):
        move_gain(k3, p, 3, 0)
    with pytest.raises(IndexError):
        move_gain(k3, p, 0, 5)


def test_best_target_single_candidate():
    g = from_pairs(3, [(0, 1), (1, 2)])
    p = Partition.from_assignment(g, [0, 1, 1])
    mg = best_target(g, p, 0)
    assert mg.target == 1
    assert mg.gain == pytest.approx(scratch_move(g, p.assignment, 0, 1))


def test_best_target_tie_goes_to_smaller_index():
    # vertex 0 sees community 2 first in its row, then community 1 with equal gain
    g = from_pairs(5, [(0, 1), (0, 2), (1, 3), (2, 4)])
    p = Partition.from_assignment(g, [0, 2, 1, 2, 1])
    g1 = move_gain(g, p, 0, 1).gain
    g2 = move_gain(g, p, 0, 2).gain
    assert g1 == g2 > 0
    assert best_target(g, p, 0).target == 1


def test_best_target_vertex_3(two_triangles):
    p = Partition.from_assignment(two_triangles, [0, 0, 0, 0, 1, 1])
    mg = best_target(two_triangles, p, 3)
    assert mg.target == 1
    assert mg.gain == pytest.approx(23 / 98, abs=1e-15)


def test_vm_fixed_point(two_triangles):
    p = Partition.from_assignment(two_triangles, [0, 0, 0, 1, 1, 1])
    moves = []
    out = run_vm(two_triangles, p, callback=lambda mg, part: moves.append(mg))
    assert moves == []
    assert out.assignment == p.assignment
    assert out.modularity == p.modularity


def test_vm_repairs_misplaced_vertex(two_triangles):
    p = Partition.from_assignment(two_triangles, [0, 0, 0, 0, 1, 1])
    moves = []
    out = run_vm(two_triangles, p, callback=lambda mg, part: moves.append(mg.vertex))
    assert moves == [3]
    assert out.assignment == [0, 0, 0, 1, 1, 1]
    assert out.modularity == pytest.approx(5 / 14, abs=1e-15)
    # input untouched
    assert p.assignment == [0, 0, 0, 0, 1, 1]


def test_vm_on_k3_singletons_is_monotone(k3):
    p = Partition.from_assignment(k3, [0, 1, 2])
    qs = [p.modularity]

    def cb(mg, part):
        assert mg.gain > 0
        assert part.modularity == pytest.approx(score_modularity(k3, part.assignment), abs=1e-12)
        qs.append(part.modularity)

    out = run_vm(k3, p, callback=cb)
    assert out.modularity >= p.modularity
    assert all(b > a for a, b in zip(qs, qs[1:]))
    assert out.modularity == pytest.approx(score_modularity(k3, out.assignment), abs=1e-12)


def test_vm_visit_order_is_degree_then_index():
    g = from_pairs(5, [(0, 1), (0, 2), (0, 3), (3, 4), (1, 2)])
    visits = []
    p = Partition.from_assignment(g, [0, 1, 2, 3, 4])
    run_vm(g, p, callback=lambda mg, part: visits.append(mg.vertex))
    kdeg = g.degree.tolist()
    first_pass = visits[: len(set(visits))]
    assert first_pass == sorted(first_pass, key=lambda v: (kdeg[v], v))


def test_move_gain_oracle():
    rng = np.random.default_rng(21)
    for g in er_corpus(100, seed=8):
        if g.total_weight == 0:
            continue
        n = g.n_vertices
        a = rng.integers(0, max(1, n // 2), n)
        p = Partition.from_assignment(g, a)
        for _ in range(5):
            v = int(rng.integers(n))
            j = int(rng.integers(len(p.sizes)))
            assert move_gain(g, p, v, j).gain == pytest.approx(scratch_move(g, a, v, j), abs=1e-9)


def test_vm_local_optimality_and_bookkeeping():
    rng = np.random.default_rng(3)
    for g in er_corpus(80, seed=31):
        if g.total_weight == 0:
            continue
        n = g.n_vertices
        start = Partition.from_assignment(g, rng.integers(0, n, n))

        def cb(mg, part):
            assert mg.gain > 0
            assert part.modularity == pytest.approx(score_modularity(g, part.assignment), abs=1e-9)
            assert sum(part.community_degree) == pytest.approx(2 * g.total_weight)

        out = run_vm(g, start, callback=cb)
        assert out.modularity >= start.modularity
        assert all(s > 0 for s in out.sizes)
        fresh = Partition.from_assignment(g, out.assignment)
        assert out.internal_weight == pytest.approx(fresh.internal_weight)
        assert out.community_degree == pytest.approx(fresh.community_degree)
        for v in range(n):
            assert best_target(g, out, v) is None
            for c in {out.assignment[u] for u in g.neighbors(v)}:
                assert scratch_move(g, out.assignment, v, c) <= 1e-12


def test_vm_after_msg_never_lowers_q(karate):
    for level in (1, 3, 10):
        p, _ = run_msg(karate, MsgConfig(level))
        out = run_vm(karate, p)
        assert out.modularity >= p.modularity
