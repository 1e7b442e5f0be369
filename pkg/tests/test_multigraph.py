from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_connected, random_tree
from stablegon.multigraph import (
    DisconnectedGraphError,
    MGFParseError,
    Multigraph,
    banana_graph,
    between_subgraph,
    betti,
    complete_graph,
    cycle_graph,
    is_tree,
    parse_mgf,
    path_graph,
    side_subgraph,
    stable_reduce,
    star_graph,
    vertex_degree,
    write_mgf,
)


def test_parse_banana():
    g = parse_mgf("mgf 2\ne 0 1\ne 0 1")
    assert (g.n, g.m) == (2, 2)
    assert g == banana_graph(2)


def test_parse_single_loop():
    g = parse_mgf("mgf 1\ne 0 0")
    assert (g.n, g.m) == (1, 1)
    assert g.has_loops()


def test_parse_out_of_range_names_line():
    with pytest.raises(MGFParseError) as info:
        parse_mgf("mgf 2\ne 0 3")
    assert info.value.lineno == 2
    assert "vertex id 3 out of range" in str(info.value)


@pytest.mark.parametrize(
    "text",
    ["", "graph 2\ne 0 1", "mgf x", "mgf 2\ne 0", "mgf 2\ne 0 one", "mgf 2\nx 0 1", "mgf -1"],
)
def test_parse_rejects_malformed(text):
    with pytest.raises(MGFParseError):
        parse_mgf(text)


def test_parse_comments_and_blank_lines():
    g = parse_mgf("# a triangle\nmgf 3\n\ne 0 1  # first\ne 1 2\ne 2 0\n")
    assert g == cycle_graph(3)


def test_write_examples():
    assert write_mgf(banana_graph(2)) == "mgf 2\ne 0 1\ne 0 1\n"
    assert write_mgf(Multigraph(1)) == "mgf 1\n"
    assert write_mgf(cycle_graph(3)).splitlines()[1:] == ["e 0 1", "e 1 2", "e 2 0"]


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=10))
))
def test_mgf_round_trip(data):
    n, edges = data
    g = Multigraph(n, tuple(edges))
    assert parse_mgf(write_mgf(g)) == g


def test_betti():
    assert betti(cycle_graph(6)) == 1
    for m in range(1, 6):
        assert betti(banana_graph(m)) == m - 1
    assert betti(path_graph(5)) == 0


def test_vertex_degree():
    assert vertex_degree(star_graph(3), 0) == 3
    assert vertex_degree(Multigraph(1, ((0, 0),)), 0) == 2
    assert vertex_degree(banana_graph(4), 0) == 4
    with pytest.raises(IndexError):
        vertex_degree(star_graph(3), 9)


def test_side_subgraph_examples():
    path = path_graph(3)  # a-b-c
    sub, mapping = side_subgraph(path, 1, 0)
    assert mapping == (0, 1) and sub.edges == ((0, 1),)
    sub, mapping = side_subgraph(star_graph(3), 0, 2)
    assert mapping == (0, 2) and sub.m == 1
    c4 = cycle_graph(4)
    sub, mapping = side_subgraph(c4, 0, 1)
    assert mapping == (0, 1, 2, 3) and sub == c4


def test_side_subgraph_errors():
    with pytest.raises(ValueError):
        side_subgraph(path_graph(3), 1, 1)
    disconnected = Multigraph(3, ((0, 1),))
    with pytest.raises(DisconnectedGraphError):
        side_subgraph(disconnected, 0, 2)


def test_between_subgraph_examples():
    sub, mapping = between_subgraph(path_graph(4), 0, 3)
    assert mapping == (0, 1, 2, 3) and sub == path_graph(4)
    sub, mapping = between_subgraph(star_graph(2), 1, 2)
    assert sorted(mapping) == [0, 1, 2] and sub.m == 2


def _component(g, start, removed):
    seen, stack = {start}, [start]
    while stack:
        x = stack.pop()
        for y in g.neighbours(x):
            if y != removed and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def test_between_subgraph_excludes_hanging_branch():
    # path 0-1-2-3 with a branch 4-5 hanging at interior vertex 1
    g = Multigraph(6, ((0, 1), (1, 2), (2, 3), (1, 4), (4, 5)))
    sub, mapping = between_subgraph(g, 0, 3)
    # oracle: vertices reachable from v avoiding u, intersected with those reachable from u avoiding v
    expected = (_component(g, 3, 0) | {0}) & (_component(g, 0, 3) | {3})
    assert set(mapping) == expected
    assert 4 in set(mapping)  # the branch hangs inside both sides of a tree


def test_stable_reduce_tree():
    rep = stable_reduce(path_graph(5))
    assert rep.reduced.n == 1 and rep.reduced.m == 0 and rep.fast_answer == 1


def test_stable_reduce_cycle():
    rep = stable_reduce(cycle_graph(6))
    assert rep.reduced == Multigraph(1, ((0, 0),))
    assert rep.betti == 1 and rep.fast_answer == 2


def test_stable_reduce_k4_unchanged():
    rep = stable_reduce(complete_graph(4))
    assert rep.reduced == complete_graph(4) and rep.fast_answer is None


def test_stable_reduce_disconnected():
    with pytest.raises(DisconnectedGraphError):
        stable_reduce(Multigraph(2))


def test_stable_reduce_properties():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randint(1, 9)
        g = random_connected(rng, n, rng.randint(n - 1, n + 4))
        rep = stable_reduce(g)
        h = rep.reduced
        assert betti(h) == betti(g)
        assert h.is_connected()
        assert stable_reduce(h).reduced == h  # idempotent
        if h.n > 1:
            for v in range(h.n):
                d = vertex_degree(h, v)
                loops = any(a == b == v for a, b in h.edges)
                assert d >= 3 or (d == 2 and loops)
        assert sorted(x for s in rep.vertex_trace.values() for x in s) == list(range(g.n))


def test_is_tree():
    rng = random.Random(3)
    for _ in range(20):
        assert is_tree(random_tree(rng, rng.randint(1, 8)))
    assert not is_tree(cycle_graph(3))
    assert not is_tree(Multigraph(3, ((0, 1),)))
