"""Finite undirected multigraphs with loops and parallel edges.

Vertices are dense integer ids ``0 .. n-1``; the i-th entry of ``edges`` is
edge ``i``.  Graphs are immutable values; every helper returns a new graph.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional


class MGFParseError(ValueError):
    """Malformed MGF text.  ``lineno`` is 1-based."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.message = message


class DisconnectedGraphError(ValueError):
    pass


@dataclass(frozen=True)
class Multigraph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        for i, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge {i} = ({u}, {v}) has an endpoint out of range")

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids at each vertex; a loop is listed twice."""
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    def other_end(self, edge_id: int, v: int) -> int:
        a, b = self.edges[edge_id]
        return b if a == v else a

    def neighbours(self, v: int) -> list[int]:
        return sorted({self.other_end(e, v) for e in self.incidence[v]})

    def edge_multiset(self) -> Counter:
        return Counter((min(u, v), max(u, v)) for u, v in self.edges)

    def is_connected(self) -> bool:
        if self.vertex_count <= 1:
            return True
        return len(_reachable(self, 0)) == self.vertex_count

    def has_loops(self) -> bool:
        return any(u == v for u, v in self.edges)


def _reachable(g: Multigraph, start: int, removed: int | None = None) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for e in g.incidence[x]:
            y = g.other_end(e, x)
            if y != removed and y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def is_tree(g: Multigraph) -> bool:
    return g.vertex_count >= 1 and g.m == g.vertex_count - 1 and not g.has_loops() and g.is_connected()


def require_connected(g: Multigraph) -> None:
    if g.vertex_count == 0:
        raise DisconnectedGraphError("graph has no vertices")
    if not g.is_connected():
        raise DisconnectedGraphError("graph is not connected")


# --------------------------------------------------------------------------
# MGF text format


def parse_mgf(text: str) -> Multigraph:
    n: Optional[int] = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n is None:
            if tokens[0] != "mgf" or len(tokens) != 2:
                raise MGFParseError(lineno, "expected header 'mgf <n>'")
            n = _parse_int(tokens[1], lineno)
            if n < 0:
                raise MGFParseError(lineno, "vertex count must be nonnegative")
            continue
        if tokens[0] != "e" or len(tokens) != 3:
            raise MGFParseError(lineno, f"expected 'e <u> <v>', got {line!r}")
        u, v = _parse_int(tokens[1], lineno), _parse_int(tokens[2], lineno)
        for x in (u, v):
            if not 0 <= x < n:
                raise MGFParseError(lineno, f"vertex id {x} out of range")
        edges.append((u, v))
    if n is None:
        raise MGFParseError(0, "missing 'mgf <n>' header")
    return Multigraph(n, tuple(edges))


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise MGFParseError(lineno, f"non-integer token {token!r}") from None


def write_mgf(g: Multigraph) -> str:
    lines = [f"mgf {g.vertex_count}"]
    lines.extend(f"e {u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# structural helpers


def betti(g: Multigraph) -> int:
    """First Betti number ``m - n + 1`` of a connected graph."""
    return g.m - g.vertex_count + 1


def vertex_degree(g: Multigraph, v: int) -> int:
    if not 0 <= v < g.vertex_count:
        raise IndexError(f"vertex id {v} out of range")
    return len(g.incidence[v])


def induced_subgraph(g: Multigraph, vertices: Iterable[int]) -> tuple[Multigraph, tuple[int, ...]]:
    """Induced subgraph, relabelled in ascending id order, plus new-to-old map."""
    keep = tuple(sorted(set(vertices)))
    index = {v: i for i, v in enumerate(keep)}
    edges = tuple((index[u], index[v]) for u, v in g.edges if u in index and v in index)
    return Multigraph(len(keep), edges), keep


def side_subgraph(g: Multigraph, v: int, u: int) -> tuple[Multigraph, tuple[int, ...]]:
    """``G_v(u)``: induced subgraph on ``v`` and the component of ``G - v`` holding ``u``."""
    if u == v:
        raise ValueError("side_subgraph needs two distinct vertices")
    for x in (u, v):
        if not 0 <= x < g.vertex_count:
            raise IndexError(f"vertex id {x} out of range")
    component = _reachable(g, u, removed=v)
    if not any(g.other_end(e, v) in component for e in g.incidence[v]):
        raise DisconnectedGraphError(f"vertex {u} is not connected to {v}")
    return induced_subgraph(g, component | {v})


def between_subgraph(g: Multigraph, u: int, v: int) -> tuple[Multigraph, tuple[int, ...]]:
    """``G_uv = (G_u(v))_v(u)``, the part of ``g`` between ``u`` and ``v``."""
    first, map1 = side_subgraph(g, u, v)
    back = {old: new for new, old in enumerate(map1)}
    second, map2 = side_subgraph(first, back[v], back[u])
    return second, tuple(map1[i] for i in map2)


# --------------------------------------------------------------------------
# stable reduction


@dataclass(frozen=True)
class ReductionReport:
    reduced: Multigraph
    betti: int
    fast_answer: Optional[int]
    vertex_trace: dict[int, frozenset[int]] = field(default_factory=dict)


def stable_reduce(g: Multigraph) -> ReductionReport:
    """Repeatedly delete leaves and suppress loop-free degree-2 vertices.

    Suppression of a vertex whose two edges go to the same neighbour creates
    a loop there.  Stops at a single vertex regardless of loops.
    """
    require_connected(g)
    b = betti(g)
    edges: dict[int, tuple[int, int]] = dict(enumerate(g.edges))
    next_id = len(edges)
    inc: dict[int, list[int]] = {v: list(g.incidence[v]) for v in range(g.vertex_count)}
    trace: dict[int, set[int]] = {v: {v} for v in range(g.vertex_count)}

    def drop_edge(e: int) -> None:
        a, c = edges.pop(e)
        inc[a].remove(e)
        inc[c].remove(e)

    progress = True
    while progress and len(inc) > 1:
        progress = False
        for v in sorted(inc):
            ev = inc[v]
            if len(ev) == 1:
                (e,) = ev
                x = edges[e][0] if edges[e][1] == v else edges[e][1]
                drop_edge(e)
                trace[x] |= trace.pop(v)
                del inc[v]
                progress = True
                break
            if len(ev) == 2 and all(edges[e][0] != edges[e][1] for e in ev):
                e1, e2 = ev
                x = edges[e1][0] if edges[e1][1] == v else edges[e1][1]
                y = edges[e2][0] if edges[e2][1] == v else edges[e2][1]
                drop_edge(e1)
                drop_edge(e2)
                edges[next_id] = (x, y)
                inc[x].append(next_id)
                inc[y].append(next_id)
                next_id += 1
                trace[x] |= trace.pop(v)
                del inc[v]
                progress = True
                break

    survivors = sorted(inc)
    relabel = {v: i for i, v in enumerate(survivors)}
    reduced = Multigraph(
        len(survivors),
        tuple((relabel[a], relabel[c]) for _, (a, c) in sorted(edges.items())),
    )
    fast = 1 if b == 0 else 2 if b == 1 else None
    return ReductionReport(
        reduced=reduced,
        betti=b,
        fast_answer=fast,
        vertex_trace={relabel[v]: frozenset(trace[v]) for v in survivors},
    )


# --------------------------------------------------------------------------
# named families used throughout the tests and CLI examples


def cycle_graph(k: int) -> Multigraph:
    return Multigraph(k, tuple((i, (i + 1) % k) for i in range(k)))


def banana_graph(m: int) -> Multigraph:
    return Multigraph(2, tuple((0, 1) for _ in range(m)))


def complete_graph(k: int) -> Multigraph:
    return Multigraph(k, tuple((i, j) for i in range(k) for j in range(i + 1, k)))


def path_graph(k: int) -> Multigraph:
    return Multigraph(k, tuple((i, i + 1) for i in range(k - 1)))


def star_graph(leaves: int) -> Multigraph:
    return Multigraph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))
