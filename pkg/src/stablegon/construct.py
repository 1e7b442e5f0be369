"""Explicit construction of the refinement ``H``, tree ``T'`` and morphism for a tuple."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Optional

from .enumerate import TupleAlpha
from .morphism import (
    EXT,
    INT,
    ORIG,
    Certificate,
    FiniteMorphism,
    Provenance,
    Refinement,
    TreeGraph,
    morphism_degree,
    tree_edge_lookup,
)
from .multigraph import Multigraph, is_tree


class MalformedTupleError(ValueError):
    pass


@dataclass(frozen=True)
class ConstructionResult:
    refinement: Refinement
    tree_prime: TreeGraph
    morphism: FiniteMorphism
    degree: int

    def certificate(self, graph: Optional[Multigraph] = None) -> Certificate:
        return Certificate(self.tree_prime, self.refinement, self.morphism, self.degree, graph)


def check_tuple(g: Multigraph, alpha: TupleAlpha, i_max: Optional[int] = None) -> None:
    tree, f, r = alpha.tree, alpha.f, alpha.r
    if not is_tree(tree):
        raise MalformedTupleError("T is not a tree")
    if len(f) != g.n or any(not 0 <= x < tree.n for x in f):
        raise MalformedTupleError("f must map every vertex into the tree")
    if len(set(f)) != tree.n:
        raise MalformedTupleError("f is not surjective")
    if len(r) != g.m or any(x < 1 for x in r):
        raise MalformedTupleError("r must give every edge an index >= 1")
    if i_max is not None and any(x > i_max for x in r):
        raise MalformedTupleError(f"index exceeds the bound {i_max}")


def extend_tree(g: Multigraph, tree: Multigraph, f: tuple[int, ...]) -> tuple[TreeGraph, dict[int, int]]:
    """``T'``: one new leaf at ``f(u)`` for every edge ``uv`` with ``f(u) = f(v)``.

    Returns the tree and the map from such edge ids to their leaf.
    """
    edges = list(tree.edges)
    leaf_of = {}
    for i, (u, v) in enumerate(g.edges):
        if f[u] == f[v]:
            leaf = tree.n + len(leaf_of)
            leaf_of[i] = leaf
            edges.append((f[u], leaf))
    return TreeGraph(tree.n + len(leaf_of), tuple(edges)), leaf_of


def tree_path(tree: Multigraph, a: int, b: int) -> list[int]:
    parent = {a: a}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            break
        for y in tree.neighbours(x):
            if y not in parent:
                parent[y] = x
                queue.append(y)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    return path[::-1]


def build_phi_alpha(g: Multigraph, alpha: TupleAlpha, i_max: Optional[int] = None) -> ConstructionResult:
    check_tuple(g, alpha, i_max)
    f, r = alpha.f, alpha.r
    tprime, leaf_of = extend_tree(g, alpha.tree, f)
    lookup = tree_edge_lookup(tprime)

    tags = [Provenance(ORIG, v) for v in range(g.n)]
    image = list(f)
    hedges: list[tuple[int, int]] = []
    index: list[int] = []
    eimage: list[int] = []

    def add_vertex(kind: str, img: int) -> int:
        tags.append(Provenance(kind))
        image.append(img)
        return len(tags) - 1

    def add_edge(a: int, b: int, idx: int) -> None:
        x, y = image[a], image[b]
        hedges.append((a, b))
        index.append(idx)
        eimage.append(lookup[(min(x, y), max(x, y))])

    for i, (u, v) in enumerate(g.edges):
        if i in leaf_of:
            w = add_vertex(INT, leaf_of[i])
            add_edge(u, w, 1)
            add_edge(w, v, 1)
        else:
            prev = u
            for t in tree_path(tprime, f[u], f[v])[1:-1]:
                p = add_vertex(INT, t)
                add_edge(prev, p, r[i])
                prev = p
            add_edge(prev, v, r[i])

    # harmonize every vertex present so far; attached copies are harmonic already
    sums: list[dict[int, int]] = [defaultdict(int) for _ in tags]
    for (a, b), idx, t in zip(hedges, index, eimage):
        sums[a][t] += idx
        sums[b][t] += idx
    for w in range(len(sums)):
        x = image[w]
        dirs = sorted(tprime.incidence[x])
        if not dirs:
            continue
        top = max(sums[w].get(t, 0) for t in dirs)
        for t in dirs:
            deficit = top - sums[w].get(t, 0)
            if deficit > 0:
                _attach_copy(tprime, w, x, tprime.other_end(t, x), deficit, add_vertex, add_edge)

    host = Multigraph(len(tags), tuple(hedges))
    refinement = Refinement(host, tuple(tags), g)
    phi = FiniteMorphism(refinement, tprime, tuple(image), tuple(index), tuple(eimage))
    return ConstructionResult(refinement, tprime, phi, morphism_degree(phi))


def _attach_copy(tree, w, root, first, deficit, add_vertex, add_edge) -> None:
    """Hang a copy of ``T'_root(first)`` on ``w`` with every edge at index ``deficit``."""
    c = add_vertex(EXT, first)
    add_edge(w, c, deficit)
    stack = [(first, root, c)]
    while stack:
        y, parent, cy = stack.pop()
        for z in tree.neighbours(y):
            if z != parent:
                cz = add_vertex(EXT, z)
                add_edge(cy, cz, deficit)
                stack.append((z, y, cz))


def degree_of_alpha(g: Multigraph, alpha: TupleAlpha, i_max: Optional[int] = None) -> int:
    return build_phi_alpha(g, alpha, i_max).degree
