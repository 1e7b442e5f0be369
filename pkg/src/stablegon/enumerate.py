"""Lazy streams over the bounded tuple space ``(T, f, r)``.

Surjections ``f`` are produced as a set partition of the vertices (blocks
labelled by smallest member) combined with every labelled tree on the block
labels, so each ``(T, f)`` pair appears exactly once.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .morphism import TreeGraph
from .multigraph import Multigraph, require_connected


@dataclass(frozen=True)
class TupleAlpha:
    tree: TreeGraph
    f: tuple[int, ...]
    r: tuple[int, ...]


def prufer_decode(code: Sequence[int], k: int) -> TreeGraph:
    if k < 2:
        raise ValueError("Prufer codes need k >= 2")
    if len(code) != k - 2:
        raise ValueError(f"code length {len(code)} != k - 2 = {k - 2}")
    if any(not 0 <= c < k for c in code):
        raise ValueError("code entry out of range")
    degree = [1] * k
    for c in code:
        degree[c] += 1
    leaves = [v for v in range(k) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for c in code:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, c), max(leaf, c)))
        degree[c] -= 1
        if degree[c] == 1:
            heapq.heappush(leaves, c)
    a, b = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((a, b))
    return TreeGraph(k, tuple(sorted(edges)))


def prufer_encode(t: Multigraph) -> tuple[int, ...]:
    if not isinstance(t, TreeGraph):
        t = TreeGraph(t.vertex_count, t.edges)
    k = t.n
    if k < 2:
        raise ValueError("Prufer codes need k >= 2")
    nbrs = [set(t.neighbours(v)) for v in range(k)]
    leaves = [v for v in range(k) if len(nbrs[v]) == 1]
    heapq.heapify(leaves)
    code = []
    for _ in range(k - 2):
        leaf = heapq.heappop(leaves)
        (p,) = nbrs[leaf]
        code.append(p)
        nbrs[p].discard(leaf)
        if len(nbrs[p]) == 1:
            heapq.heappush(leaves, p)
    return tuple(code)


def labelled_trees(k: int) -> Iterator[TreeGraph]:
    if k < 1:
        raise ValueError("tree size must be positive")
    if k == 1:
        yield TreeGraph(1, ())
        return
    for code in itertools.product(range(k), repeat=k - 2):
        yield prufer_decode(code, k)


def enumerate_partitions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Partitions of ``range(n)`` into ``k`` blocks as restricted growth strings.

    Entry ``v`` is the block label of vertex ``v``; labels are assigned in order
    of each block's smallest element.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    labels = [0] * n

    def extend(pos: int, used: int) -> Iterator[tuple[int, ...]]:
        if n - pos < k - used:
            return
        if pos == n:
            yield tuple(labels)
            return
        for b in range(min(used + 1, k)):
            labels[pos] = b
            yield from extend(pos + 1, max(used, b + 1))

    yield from extend(0, 0)


def enumerate_indices(m: int, i_max: int) -> Iterator[tuple[int, ...]]:
    """All maps ``E -> [1, i_max]`` in lexicographic order."""
    if i_max < 1:
        raise ValueError("i_max must be >= 1")
    return itertools.product(range(1, i_max + 1), repeat=m)


def tf_pairs(g: Multigraph) -> Iterator[tuple[TreeGraph, tuple[int, ...]]]:
    require_connected(g)
    for k in range(1, g.n + 1):
        trees = list(labelled_trees(k))
        for f in enumerate_partitions(g.n, k):
            for tree in trees:
                yield tree, f


def tuple_stream(g: Multigraph, i_max: int) -> Iterator[TupleAlpha]:
    for tree, f in tf_pairs(g):
        for r in enumerate_indices(g.m, i_max):
            yield TupleAlpha(tree, f, r)


# --------------------------------------------------------------------------
# counting


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def cayley(k: int) -> int:
    return 1 if k <= 2 else k ** (k - 2)


def pair_count(n: int) -> int:
    return sum(cayley(k) * stirling2(n, k) for k in range(1, n + 1))


def pair_bound(n: int) -> float:
    return (1.33 * n) ** (n + 1)


def stream_counts(n: int) -> list[tuple[int, int, int]]:
    """``(k, trees, partitions)`` as actually produced by the streams."""
    return [
        (k, sum(1 for _ in labelled_trees(k)), sum(1 for _ in enumerate_partitions(n, k)))
        for k in range(1, n + 1)
    ]
