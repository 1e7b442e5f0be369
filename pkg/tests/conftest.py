from __future__ import annotations

import random

import pytest

from stablegon.multigraph import Multigraph

# v1..v6 of the worked cycle-to-path example, ids 0..5; v3 and v4 share an image
EXAMPLE_GRAPH = Multigraph(6, ((0, 1), (0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5)))
EXAMPLE_F = (0, 1, 2, 2, 3, 4)
EXAMPLE_R = (1, 1, 1, 1, 1, 1, 2)

WHEEL4 = Multigraph(5, ((0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2), (4, 3)))


def random_tree(rng: random.Random, n: int) -> Multigraph:
    return Multigraph(n, tuple((rng.randrange(v), v) for v in range(1, n)))


def random_connected(rng: random.Random, n: int, m: int, loops: bool = True) -> Multigraph:
    """Random spanning tree plus ``m - n + 1`` extra edges (parallel edges allowed)."""
    edges = list(random_tree(rng, n).edges)
    while len(edges) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v and not loops:
            continue
        edges.append((u, v))
    rng.shuffle(edges)
    return Multigraph(n, tuple(edges))


@pytest.fixture
def rng():
    return random.Random(20240601)


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
