"""Closed-form degree of the constructed morphism for a fixed ``(T, f)``.

For a fixed tree ``T`` and surjection ``f`` the degree of the constructed
morphism only depends on the indices of edges whose endpoints have different
images.  Reading it off as the fiber over a tree edge ``t`` gives

    deg(r) = C[t] + L[t] . r + sum_v ( max_s m_s(r) - m_{dir[t, v]}(r) )

where ``m_s`` runs over the direction sums of original vertex ``v`` (one slot
per neighbour of ``f(v)`` in ``T'``) and ``dir[t, v]`` is the slot pointing
from ``f(v)`` towards ``t``.  ``L`` collects path edges crossing ``t`` and the
harmonizing copies hung on internal path vertices; every term is nonnegative,
which is what the branch and bound relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .construct import extend_tree, tree_path
from .multigraph import Multigraph


@dataclass(frozen=True)
class DegreeModel:
    m: int
    var_edge: np.ndarray  # graph edge id of each free index, in search order
    sym_prev: np.ndarray  # previous parallel copy of the same edge, or -1
    C: np.ndarray  # (nt,)
    L: np.ndarray  # (nt, nv)
    slot_u: np.ndarray  # (nv,)
    slot_v: np.ndarray  # (nv,)
    Bm: np.ndarray  # (ns,)
    slot_ptr: np.ndarray  # (n + 1,)
    dir_slot: np.ndarray  # (nt, n)
    constant: int  # degree when T' has no edges

    @property
    def n_vars(self) -> int:
        return len(self.var_edge)

    @property
    def n_tree_edges(self) -> int:
        return len(self.C)

    def full_r(self, free: np.ndarray) -> tuple[int, ...]:
        """Expand free indices to a full ``r``; same-image edges get 1."""
        r = [1] * self.m
        for j, e in enumerate(self.var_edge):
            r[int(e)] = int(free[j])
        return tuple(r)

    def free_part(self, r) -> np.ndarray:
        return np.asarray([r[int(e)] for e in self.var_edge], dtype=np.int64)


def _search_order(g: Multigraph, cross: list[int]) -> list[int]:
    """Cross edges grouped so each vertex's edges finish early; parallel copies adjacent."""
    start = max(range(g.n), key=lambda v: (len(g.incidence[v]), -v))
    pos = {start: 0}
    queue = [start]
    for x in queue:
        for y in g.neighbours(x):
            if y not in pos:
                pos[y] = len(pos)
                queue.append(y)

    def key(e: int):
        u, v = g.edges[e]
        a, b = sorted((pos[u], pos[v]))
        return (b, a, e)

    return sorted(cross, key=key)


def compile_model(g: Multigraph, tree: Multigraph, f: tuple[int, ...]) -> DegreeModel:
    tprime, leaf_of = extend_tree(g, tree, f)
    n, nt = g.n, tprime.m
    cross = [i for i in range(g.m) if i not in leaf_of]
    order = _search_order(g, cross)
    nv = len(order)

    if nt == 0:
        z = np.zeros(0, np.int64)
        return DegreeModel(
            g.m, np.asarray(order, np.int64), np.full(nv, -1, np.int64), z,
            np.zeros((0, nv), np.int64), z, z, z, np.zeros(n + 1, np.int64),
            np.zeros((0, n), np.int64), constant=n,
        )

    k2 = tprime.n
    nbrs = [tprime.neighbours(x) for x in range(k2)]
    # toward[x][y]: neighbour of x on the path to y
    toward = [[-1] * k2 for _ in range(k2)]
    for x in range(k2):
        for y in nbrs[x]:
            stack = [(y, x)]
            while stack:
                z, par = stack.pop()
                toward[x][z] = y
                stack.extend((w, z) for w in nbrs[z] if w != par)
    tedges = tprime.edges

    def dir_toward(x: int, t: int) -> int:
        a, b = tedges[t]
        if x == a:
            return b
        if x == b:
            return a
        return toward[x][a]

    slot_ptr = np.zeros(n + 1, np.int64)
    slot_of: dict[tuple[int, int], int] = {}
    for v in range(n):
        for y in nbrs[f[v]]:
            slot_of[(v, y)] = len(slot_of)
        slot_ptr[v + 1] = len(slot_of)

    Bm = np.zeros(len(slot_of), np.int64)
    C = np.zeros(nt, np.int64)
    lookup = {(min(a, b), max(a, b)): i for i, (a, b) in enumerate(tedges)}
    for e, leaf in leaf_of.items():
        u, v = g.edges[e]
        Bm[slot_of[(u, leaf)]] += 1
        Bm[slot_of[(v, leaf)]] += 1
        C[lookup[(min(f[u], leaf), max(f[u], leaf))]] += 2

    L = np.zeros((nt, nv), np.int64)
    slot_u = np.zeros(nv, np.int64)
    slot_v = np.zeros(nv, np.int64)
    sym_prev = np.full(nv, -1, np.int64)
    for j, e in enumerate(order):
        u, v = g.edges[e]
        path = tree_path(tprime, f[u], f[v])
        slot_u[j] = slot_of[(u, path[1])]
        slot_v[j] = slot_of[(v, path[-2])]
        on_path = {lookup[(min(a, b), max(a, b))] for a, b in zip(path, path[1:])}
        for t in range(nt):
            c = 1 if t in on_path else 0
            for i in range(1, len(path) - 1):
                if dir_toward(path[i], t) not in (path[i - 1], path[i + 1]):
                    c += 1
            L[t, j] = c
        if j > 0 and sorted(g.edges[order[j - 1]]) == sorted((u, v)):
            sym_prev[j] = j - 1

    dir_slot = np.zeros((nt, n), np.int64)
    for t in range(nt):
        for v in range(n):
            dir_slot[t, v] = slot_of[(v, dir_toward(f[v], t))]

    return DegreeModel(
        g.m, np.asarray(order, np.int64), sym_prev, C, L, slot_u, slot_v, Bm,
        slot_ptr, dir_slot, constant=0,
    )
