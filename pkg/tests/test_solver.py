from __future__ import annotations

import random

import pytest

from conftest import EXAMPLE_GRAPH, WHEEL4, random_connected, random_tree
from stablegon.construct import degree_of_alpha
from stablegon.enumerate import TupleAlpha, tf_pairs, tuple_stream
from stablegon.morphism import TreeGraph, verify_certificate
from stablegon.multigraph import (
    DisconnectedGraphError,
    Multigraph,
    banana_graph,
    complete_graph,
    cycle_graph,
)
from stablegon.solver import (
    BudgetExceeded,
    SolveOptions,
    decide,
    lower_bound,
    sgon,
    solve_fixed_tf,
    upper_bound,
)


def _check(g, res):
    target = res.certificate.graph or g
    out = verify_certificate(target, res.certificate)
    assert out.accepted, out.failure_reason
    assert out.computed_degree == res.sgon


def test_bounds_examples():
    assert upper_bound(random_tree(random.Random(0), 6)) == 1
    assert upper_bound(banana_graph(4)) == 3
    assert upper_bound(complete_graph(4)) == 3
    assert lower_bound(random_tree(random.Random(0), 6)) == 1
    assert lower_bound(cycle_graph(6)) == 2
    assert lower_bound(complete_graph(4)) == 2


@pytest.mark.parametrize(
    "g, expected",
    [(cycle_graph(k), 2) for k in range(3, 7)]
    + [(banana_graph(m), 2) for m in range(2, 5)]
    + [(complete_graph(4), 3), (EXAMPLE_GRAPH, 2), (WHEEL4, 3), (complete_graph(5), 4)],
)
def test_known_values(g, expected):
    res = sgon(g)
    assert res.sgon == expected
    _check(g, res)


def test_trees_are_one():
    rng = random.Random(12)
    for _ in range(10):
        t = random_tree(rng, rng.randint(1, 6))
        res = sgon(t)
        assert res.sgon == 1
        _check(t, res)


def test_single_vertex_and_loops():
    assert sgon(Multigraph(1)).sgon == 1
    assert sgon(Multigraph(1, ((0, 0),))).sgon == 2
    res = sgon(Multigraph(1, ((0, 0), (0, 0))))
    assert res.sgon == 2
    _check(Multigraph(1, ((0, 0), (0, 0))), res)


def _brute_sgon(g):
    """Minimum over the whole bounded tuple space, via the explicit construction."""
    return min(degree_of_alpha(g, a) for a in tuple_stream(g, upper_bound(g)))


def test_matches_brute_force_on_tiny_graphs():
    rng = random.Random(41)
    for _ in range(25):
        n = rng.randint(1, 4)
        g = random_connected(rng, n, rng.randint(n - 1, n + (1 if n == 4 else 2)))
        expected = _brute_sgon(g)
        for opts in (SolveOptions(), SolveOptions(use_reduction=False), SolveOptions(prune=False)):
            res = sgon(g, opts)
            assert res.sgon == expected
            _check(g, res)


def test_decide_examples():
    d = decide(cycle_graph(6), 2)
    assert d.holds and d.certificate is not None
    assert not decide(cycle_graph(6), 1).holds
    assert not decide(complete_graph(4), 2).holds
    d = decide(complete_graph(4), 3, SolveOptions(use_reduction=False))
    assert d.holds
    assert verify_certificate(complete_graph(4), d.certificate).accepted


def test_decide_is_monotone():
    for g in (complete_graph(4), WHEEL4, banana_graph(3), random_tree(random.Random(2), 5)):
        s = sgon(g).sgon
        for k in range(0, s + 3):
            assert decide(g, k).holds == (k >= s)


def test_fixed_tf_tree_identity():
    t = random_tree(random.Random(6), 5)
    res = solve_fixed_tf(t, TreeGraph(t.n, t.edges), tuple(range(t.n)), 1)
    assert res.exists and res.witness_r == (1,) * t.m and res.best_degree == 1


def test_fixed_tf_minimum_over_pairs_is_sgon():
    looped_triangle = Multigraph(3, ((0, 1), (1, 2), (2, 0), (0, 0)))
    for g in (complete_graph(4), cycle_graph(4), banana_graph(3), looped_triangle):
        s = sgon(g, SolveOptions(use_reduction=False)).sgon
        best = min(solve_fixed_tf(g, tree, f, 0).best_degree for tree, f in tf_pairs(g))
        assert best == s


def test_fixed_tf_reports_true_minimum_when_absent():
    g = complete_graph(4)
    for tree, f in list(tf_pairs(g))[::7]:
        res = solve_fixed_tf(g, tree, f, 0)
        assert not res.exists
        assert degree_of_alpha(g, TupleAlpha(tree, f, res.witness_r)) == res.best_degree
        again = solve_fixed_tf(g, tree, f, res.best_degree)
        assert again.exists and again.best_degree == res.best_degree


def test_neutrality_and_determinism():
    rng = random.Random(77)
    graphs = [complete_graph(4), WHEEL4, EXAMPLE_GRAPH, cycle_graph(5)]
    graphs += [random_connected(rng, n, n + rng.randint(0, 2)) for n in (3, 4, 4, 5)]
    for g in graphs:
        ref = sgon(g)
        for opts in (
            SolveOptions(prune=False, use_reduction=True),
            SolveOptions(use_reduction=False),
            SolveOptions(parallelism=3),
            SolveOptions(parallelism=8, prune=False),
        ):
            res = sgon(g, opts)
            assert res.sgon == ref.sgon
            _check(g, res)
        # same options, same answer and same search statistics
        a = sgon(g, SolveOptions(prune=False, parallelism=4))
        b = sgon(g, SolveOptions(prune=False, parallelism=1))
        assert (a.sgon, a.tuples_examined, a.alpha) == (b.sgon, b.tuples_examined, b.alpha)


def test_max_index_override():
    assert sgon(complete_graph(4), SolveOptions(max_index_override=1)).sgon == 3
    with pytest.raises(ValueError):
        SolveOptions(max_index_override=0)
    with pytest.raises(ValueError):
        SolveOptions(parallelism=0)


def test_budget():
    with pytest.raises(BudgetExceeded):
        sgon(complete_graph(4), SolveOptions(prune=False, budget=10))


def test_disconnected():
    with pytest.raises(DisconnectedGraphError):
        sgon(Multigraph(2))
    with pytest.raises(DisconnectedGraphError):
        decide(Multigraph(0), 1)
