"""Single-sender exact solver: pruning, the bound arithmetic, cyclic codes."""

from __future__ import annotations

import random

import pytest

from uniprior import (LinearIndexCode, NotSingleSenderError, WorkGraph,
                      encode_single, is_grounded, leaf_scc_sets,
                      lower_bound_single, oracle_min_linear,
                      predecessor_weight_bound, prune_all, solve_single,
                      symbol, v_out, verify_linear)
from uniprior.single import solve_arithmetic

from generators import make_instance, rand_single

EX2 = make_instance(5, [[2, 1], [3, 1], [1, 2], [3, 2], [1, 3], [2, 3], [4, 5]],
                    [[1, 2, 3, 4, 5]], q=[1, 2, 2, 2, 2])
EX1 = make_instance(4, [[4, 1], [3, 2], [1, 3], [2, 3], [1, 4], [2, 4]],
                    [[1, 2, 3, 4]])


def test_example_weighted():
    sol = solve_single(EX2)
    assert sol.optimal_length == 6
    assert sol.lower_bound == 6
    assert sol.code == LinearIndexCode((
        symbol(1, (1, 1), (2, 1)),
        symbol(1, (2, 1), (3, 1)),
        symbol(1, (2, 2)),
        symbol(1, (3, 2)),
        symbol(1, (4, 1)),
        symbol(1, (4, 2)),
    ))
    assert verify_linear(EX2, sol.code).valid
    assert solve_arithmetic(WorkGraph.from_instance(EX2)) == (9, 2, 1, 6)
    [step] = sol.trace.steps
    assert sorted(step.scc) == [1, 2, 3]
    assert step.vertex == 1
    assert step.removed_arcs == ((1, 2), (1, 3))


def test_example_binary():
    sol = solve_single(EX1)
    assert sol.optimal_length == 3
    assert solve_arithmetic(WorkGraph.from_instance(EX1)) == (4, 0, 1, 3)
    assert verify_linear(EX1, sol.code).valid


def test_two_cycle_single_xor():
    inst = make_instance(2, [[1, 2], [2, 1]], [[1, 2]])
    sol = solve_single(inst)
    assert sol.optimal_length == 1
    assert sol.code.symbols == (symbol(1, (1, 1), (2, 1)),)


def test_cyclic_code_remainder_bits():
    # one 3-cycle covering everything, q=(3,1,2): chain over the first bit,
    # then leftovers ascending by (vertex, bit)
    inst = make_instance(3, [[1, 2], [2, 3], [3, 1]], [[1, 2, 3]], q=[3, 1, 2])
    sol = solve_single(inst)
    assert sol.optimal_length == 6 - 1
    assert sol.code.symbols == (
        symbol(1, (1, 1), (2, 1)),
        symbol(1, (2, 1), (3, 1)),
        symbol(1, (1, 2)),
        symbol(1, (1, 3)),
        symbol(1, (3, 2)),
    )
    assert verify_linear(inst, sol.code).valid


def test_min_weight_vertex_pruned_with_tie_break():
    # weights 2,1,1: vertex 2 and 3 tie at weight 1; vertex 2 wins
    inst = make_instance(3, [[1, 2], [2, 3], [3, 1]], [[1, 2, 3]], q=[2, 1, 1])
    _, trace = prune_all(WorkGraph.from_instance(inst))
    [step] = trace.steps
    assert step.vertex == 2


def test_prune_all_noop_on_grounded_input():
    chain = make_instance(3, [[1, 2], [2, 3]], [[1, 2, 3]])
    g = WorkGraph.from_instance(chain)
    g2, trace = prune_all(g)
    assert g2 == g
    assert trace.steps == ()
    assert encode_single(g).symbols == (symbol(1, (1, 1)), symbol(1, (2, 1)))


def test_two_disjoint_two_cycles():
    inst = make_instance(4, [[1, 2], [2, 1], [3, 4], [4, 3]], [[1, 2, 3, 4]])
    g = WorkGraph.from_instance(inst)
    _, trace = prune_all(g)
    assert [s.vertex for s in trace.steps] == [1, 3]
    sol = solve_single(inst)
    assert sol.optimal_length == 2 == 4 - 0 - 2
    assert sol.optimal_length == oracle_min_linear(inst).length


def test_edgeless_graph_needs_nothing():
    inst = make_instance(3, [], [[1, 2, 3]], q=[2, 1, 3])
    g = WorkGraph.from_instance(inst)
    assert lower_bound_single(g) == 0
    assert solve_single(inst).code.symbols == ()


def test_binary_solution_counts_leaves_and_leaf_sccs():
    rng = random.Random(151)
    for _ in range(200):
        inst = rand_single(rng, n_max=8)
        g = WorkGraph.from_instance(inst)
        leaves = sum(1 for v in g.vertices if not g.out_neighbors(v))
        expected = inst.n - leaves - len(leaf_scc_sets(g))
        assert solve_single(inst).optimal_length == expected


def test_multi_sender_rejected():
    d1 = make_instance(3, [[1, 2], [2, 1], [3, 1]], [[1, 3], [2, 3]])
    with pytest.raises(NotSingleSenderError):
        solve_single(d1)


def test_prune_all_grounds_and_drops_one_vertex_per_leaf_scc():
    rng = random.Random(43)
    for _ in range(300):
        inst = rand_single(rng, n_max=8, q_max=3)
        g = WorkGraph.from_instance(inst)
        n_leaf = len(leaf_scc_sets(g))
        g2, trace = prune_all(g)
        assert is_grounded(g2)
        # pruning never creates leaf SCCs, so one step per original leaf SCC
        assert len(trace.steps) == n_leaf
        assert v_out(g2) == v_out(g) - n_leaf


def test_lower_bound_equals_pruned_predecessor_weight():
    rng = random.Random(47)
    for _ in range(300):
        inst = rand_single(rng, n_max=8, q_max=3)
        g = WorkGraph.from_instance(inst)
        g2, _ = prune_all(g)
        assert lower_bound_single(g) == predecessor_weight_bound(g2)


def test_encode_length_equals_lower_bound_and_verifies():
    rng = random.Random(53)
    for _ in range(150):
        inst = rand_single(rng, n_max=8, q_max=3)
        g = WorkGraph.from_instance(inst)
        code = encode_single(g)
        assert len(code) == lower_bound_single(g)
        assert verify_linear(inst, code).valid
        # leaf messages are never transmitted
        leaves = {v for v in g.vertices if not g.out_neighbors(v)}
        assert all(m not in leaves for s in code.symbols for (m, _) in s.terms)


def test_solve_matches_oracle_binary():
    rng = random.Random(59)
    for _ in range(60):
        inst = rand_single(rng, n_max=5)
        assert solve_single(inst).optimal_length == oracle_min_linear(inst).length


def test_lower_bound_monotone_under_arc_removal():
    rng = random.Random(61)
    for _ in range(200):
        inst = rand_single(rng, n_max=8, q_max=3)
        g = WorkGraph.from_instance(inst)
        keep = frozenset(a for a in g.arcs if rng.random() < 0.6)
        assert lower_bound_single(g.with_arcs(keep)) <= lower_bound_single(g)
