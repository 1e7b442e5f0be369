"""Finite harmonic morphisms from a refinement of a graph onto a tree.

Also holds the certificate type, its line-based file format and the
polynomial-time verifier used for the NP membership check.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Optional

from .multigraph import Multigraph, betti, is_tree

ORIG, INT, EXT = "orig", "int", "ext"


class MorphismStructureError(ValueError):
    """The map is not a finite morphism at all (as opposed to not harmonic)."""


class DegreeInconsistencyError(RuntimeError):
    """Fiber sums differ between tree edges although harmonicity passed."""


class CertificateParseError(ValueError):
    pass


class TreeGraph(Multigraph):
    """A loop-free connected multigraph with ``m = n - 1``."""

    def __post_init__(self):
        super().__post_init__()
        if not is_tree(self):
            raise ValueError("graph is not a tree")


@dataclass(frozen=True)
class Provenance:
    kind: str
    base: Optional[int] = None

    def __post_init__(self):
        if self.kind not in (ORIG, INT, EXT):
            raise ValueError(f"unknown provenance kind {self.kind!r}")
        if (self.kind == ORIG) != (self.base is not None):
            raise ValueError("exactly the original vertices carry a base id")


@dataclass(frozen=True)
class Refinement:
    host: Multigraph
    provenance: tuple[Provenance, ...]
    base: Optional[Multigraph] = None


@dataclass(frozen=True)
class FiniteMorphism:
    domain: Refinement
    codomain: Multigraph
    vertex_image: tuple[int, ...]
    edge_index: tuple[int, ...]
    edge_image: tuple[int, ...]  # tree edge id, or -1 when no such tree edge


@dataclass(frozen=True)
class Certificate:
    tree: Multigraph
    refinement: Refinement
    morphism: FiniteMorphism
    claimed_degree: int
    # the graph being witnessed when it differs from the caller's input
    graph: Optional[Multigraph] = None


@dataclass(frozen=True)
class Harmonicity:
    harmonic: bool
    index: Optional[tuple[int, ...]] = None
    vertex: Optional[int] = None
    directions: Optional[tuple[tuple[int, int], tuple[int, int]]] = None

    def __bool__(self) -> bool:
        return self.harmonic


@dataclass(frozen=True)
class VerificationResult:
    accepted: bool
    computed_degree: Optional[int] = None
    failure_reason: Optional[str] = None


def tree_edge_lookup(tree: Multigraph) -> dict[tuple[int, int], int]:
    return {(min(a, b), max(a, b)): i for i, (a, b) in enumerate(tree.edges)}


def structural_problem(phi: FiniteMorphism) -> Optional[str]:
    """First reason ``phi`` fails to be a finite morphism, or ``None``."""
    host, tree = phi.domain.host, phi.codomain
    if len(phi.vertex_image) != host.n:
        return "vertex map has the wrong length"
    if len(phi.edge_index) != host.m or len(phi.edge_image) != host.m:
        return "edge data has the wrong length"
    for x in phi.vertex_image:
        if not 0 <= x < tree.n:
            return "vertex image out of range"
    for i, (u, v) in enumerate(host.edges):
        if phi.edge_index[i] < 1:
            return "index must be ≥ 1"
        if u == v:
            return "refinement has a loop"
        a, b = phi.vertex_image[u], phi.vertex_image[v]
        t = phi.edge_image[i]
        if a == b:
            return f"edge {i} has both endpoints mapped to tree vertex {a}"
        if not 0 <= t < tree.m or {a, b} != set(tree.edges[t]):
            return f"edge image of edge {i} does not join the endpoint images"
    return None


def _direction_table(phi: FiniteMorphism) -> list[dict[int, int]]:
    table: list[dict[int, int]] = [defaultdict(int) for _ in range(phi.domain.host.n)]
    for i, (u, v) in enumerate(phi.domain.host.edges):
        t, r = phi.edge_image[i], phi.edge_index[i]
        table[u][t] += r
        table[v][t] += r
    return table


def direction_index(phi: FiniteMorphism, v: int, e: int) -> int:
    """Sum of indices of edges at ``v`` mapped onto tree edge ``e``."""
    tree = phi.codomain
    if phi.vertex_image[v] not in tree.edges[e]:
        raise ValueError(f"tree edge {e} is not incident to the image of vertex {v}")
    host = phi.domain.host
    return sum(phi.edge_index[d] for d in set(host.incidence[v]) if phi.edge_image[d] == e)


def is_harmonic(phi: FiniteMorphism) -> Harmonicity:
    problem = structural_problem(phi)
    if problem is not None:
        raise MorphismStructureError(problem)
    tree = phi.codomain
    if tree.m == 0:
        return Harmonicity(True, index=(1,) * phi.domain.host.n)
    table = _direction_table(phi)
    index = []
    for v, sums in enumerate(table):
        dirs = tree.incidence[phi.vertex_image[v]]
        first = sums.get(dirs[0], 0)
        for e in dirs[1:]:
            if sums.get(e, 0) != first:
                return Harmonicity(
                    False, vertex=v, directions=((dirs[0], first), (e, sums.get(e, 0)))
                )
        index.append(first)
    return Harmonicity(True, index=tuple(index))


def morphism_degree(phi: FiniteMorphism, harmonicity: Optional[Harmonicity] = None) -> int:
    h = harmonicity if harmonicity is not None else is_harmonic(phi)
    if not h:
        raise ValueError(f"morphism is not harmonic at vertex {h.vertex}")
    tree = phi.codomain
    if tree.m == 0:
        if phi.domain.host.m:
            raise MorphismStructureError("edges cannot map to a single-vertex tree")
        return phi.domain.host.n
    fiber = [0] * tree.m
    for i, t in enumerate(phi.edge_image):
        fiber[t] += phi.edge_index[i]
    vertex_sums = [0] * tree.n
    for v, x in enumerate(phi.vertex_image):
        vertex_sums[x] += h.index[v]
    values = set(fiber) | set(vertex_sums)
    if len(values) != 1:
        raise DegreeInconsistencyError(f"fiber sums disagree: edges {fiber}, vertices {vertex_sums}")
    return fiber[0]


def refinement_problem(g: Multigraph, ref: Refinement) -> Optional[str]:
    """Check ``ref`` against ``g`` by deleting external and suppressing internal vertices."""
    bad = "refinement does not restore base graph"
    host, tags = ref.host, ref.provenance
    if len(tags) != host.n:
        return "provenance has the wrong length"
    if not host.is_connected():
        return "refinement is disconnected"
    originals = {}
    for x, tag in enumerate(tags):
        if tag.kind == ORIG:
            if tag.base in originals or not 0 <= tag.base < g.n:
                return bad
            originals[tag.base] = x
    if len(originals) != g.n:
        return bad
    # pendant external trees are exactly what keeps the Betti number unchanged
    if betti(host) != betti(g):
        return bad

    kept = {x for x in range(host.n) if tags[x].kind != EXT}
    edges = {i: e for i, e in enumerate(host.edges) if e[0] in kept and e[1] in kept}
    inc: dict[int, list[int]] = {x: [] for x in kept}
    for i, (u, v) in edges.items():
        inc[u].append(i)
        inc[v].append(i)
    if not _connected(kept, edges):
        return bad
    next_id = host.m
    for w in sorted(x for x in kept if tags[x].kind == INT):
        if len(inc[w]) != 2 or inc[w][0] == inc[w][1]:
            return bad
        ends = []
        for e in inc.pop(w):
            u, v = edges.pop(e)
            x = v if u == w else u
            inc[x].remove(e)
            ends.append(x)
        x, y = ends
        edges[next_id] = (x, y)
        inc[x].append(next_id)
        inc[y].append(next_id)
        next_id += 1
    rebuilt = Counter()
    for u, v in edges.values():
        a, b = tags[u].base, tags[v].base
        rebuilt[(min(a, b), max(a, b))] += 1
    if rebuilt != g.edge_multiset():
        return bad
    return None


def _connected(vertices: set[int], edges: dict[int, tuple[int, int]]) -> bool:
    if not vertices:
        return False
    adj: dict[int, list[int]] = {x: [] for x in vertices}
    for u, v in edges.values():
        adj[u].append(v)
        adj[v].append(u)
    start = next(iter(vertices))
    seen, stack = {start}, [start]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(vertices)


def verify_certificate(g: Multigraph, cert: Certificate) -> VerificationResult:
    """Accept iff refinement, tree, structure and harmonicity check out and the
    computed degree is at most the claimed degree.  Never raises on bad input."""

    def reject(reason: str) -> VerificationResult:
        return VerificationResult(False, None, reason)

    try:
        phi = cert.morphism
        if (phi.domain is not cert.refinement and phi.domain != cert.refinement) or (
            phi.codomain is not cert.tree and phi.codomain != cert.tree
        ):
            return reject("certificate parts disagree")
        if not is_tree(cert.tree):
            return reject("tree is not a tree")
        problem = refinement_problem(g, cert.refinement)
        if problem is not None:
            return reject(problem)
        problem = structural_problem(phi)
        if problem is not None:
            return reject(problem)
        h = is_harmonic(phi)
        if not h:
            return reject(f"morphism is not harmonic at vertex {h.vertex}")
        degree = morphism_degree(phi, h)
    except (DegreeInconsistencyError, MorphismStructureError, ValueError, IndexError) as exc:
        return reject(str(exc))
    if degree > cert.claimed_degree:
        return VerificationResult(False, degree, "degree exceeds claim")
    return VerificationResult(True, degree, None)


# --------------------------------------------------------------------------
# certificate file format


def write_certificate(cert: Certificate) -> str:
    phi = cert.morphism
    host = cert.refinement.host
    out = ["cert 1", f"degree {cert.claimed_degree}"]
    if cert.graph is not None:
        out.append(f"graph reduced {cert.graph.n}")
        out.extend(f"ge {u} {v}" for u, v in cert.graph.edges)
    out.append(f"tree {cert.tree.n}")
    out.extend(f"t {a} {b}" for a, b in cert.tree.edges)
    out.append(f"refinement {host.n}")
    for x, tag in enumerate(cert.refinement.provenance):
        base = f" {tag.base}" if tag.kind == ORIG else ""
        out.append(f"hv {x} {tag.kind}{base} {phi.vertex_image[x]}")
    for i, (u, v) in enumerate(host.edges):
        t = phi.edge_image[i]
        a, b = cert.tree.edges[t] if 0 <= t < cert.tree.m else (-1, -1)
        out.append(f"he {u} {v} {phi.edge_index[i]} {a} {b}")
    out.append("end")
    return "\n".join(out) + "\n"


def parse_certificate(text: str) -> Certificate:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append((lineno, line.split()))
    pos = 0

    def expect(word: str, arity: int) -> tuple[int, list[int]]:
        nonlocal pos
        if pos >= len(lines):
            raise CertificateParseError(f"unexpected end of certificate, wanted {word!r}")
        lineno, toks = lines[pos]
        if toks[0] != word or len(toks) != arity + 1:
            raise CertificateParseError(f"line {lineno}: expected '{word}' with {arity} fields")
        pos += 1
        try:
            return lineno, [int(t) for t in toks[1:]]
        except ValueError:
            raise CertificateParseError(f"line {lineno}: non-integer token") from None

    def peek() -> Optional[str]:
        return lines[pos][1][0] if pos < len(lines) else None

    _, (version,) = expect("cert", 1)
    if version != 1:
        raise CertificateParseError(f"unsupported certificate version {version}")
    _, (claimed,) = expect("degree", 1)

    graph = None
    if peek() == "graph":
        lineno, toks = lines[pos]
        if len(toks) != 3 or toks[1] != "reduced":
            raise CertificateParseError(f"line {lineno}: expected 'graph reduced <n>'")
        pos += 1
        gn = _int(toks[2], lineno)
        gedges = []
        while peek() == "ge":
            lineno, (u, v) = expect("ge", 2)
            if not (0 <= u < gn and 0 <= v < gn):
                raise CertificateParseError(f"line {lineno}: vertex id out of range")
            gedges.append((u, v))
        graph = Multigraph(gn, tuple(gedges))

    _, (k,) = expect("tree", 1)
    tedges = []
    while peek() == "t":
        lineno, (a, b) = expect("t", 2)
        if not (0 <= a < k and 0 <= b < k):
            raise CertificateParseError(f"line {lineno}: tree vertex out of range")
        tedges.append((a, b))
    tree_graph = Multigraph(k, tuple(tedges))
    try:
        tree: Multigraph = TreeGraph(k, tuple(tedges))
    except ValueError:
        tree = tree_graph

    _, (h,) = expect("refinement", 1)
    tags: list[Optional[Provenance]] = [None] * h
    images = [0] * h
    for _ in range(h):
        if pos >= len(lines):
            raise CertificateParseError("unexpected end in refinement vertices")
        lineno, toks = lines[pos]
        pos += 1
        if toks[0] != "hv" or len(toks) not in (4, 5):
            raise CertificateParseError(f"line {lineno}: expected 'hv' line")
        x = _int(toks[1], lineno)
        kind = toks[2]
        if kind not in (ORIG, INT, EXT) or (kind == ORIG) != (len(toks) == 5):
            raise CertificateParseError(f"line {lineno}: bad provenance {' '.join(toks[2:-1])!r}")
        if not 0 <= x < h or tags[x] is not None:
            raise CertificateParseError(f"line {lineno}: bad or repeated vertex id {x}")
        base = _int(toks[3], lineno) if kind == ORIG else None
        tags[x] = Provenance(kind, base)
        images[x] = _int(toks[-1], lineno)

    lookup = tree_edge_lookup(tree)
    hedges, index, eimage = [], [], []
    while peek() == "he":
        lineno, (u, v, r, a, b) = expect("he", 5)
        if not (0 <= u < h and 0 <= v < h):
            raise CertificateParseError(f"line {lineno}: vertex id out of range")
        hedges.append((u, v))
        index.append(r)
        eimage.append(lookup.get((min(a, b), max(a, b)), -1))
    expect("end", 0)
    if pos != len(lines):
        raise CertificateParseError(f"line {lines[pos][0]}: trailing content after 'end'")

    ref = Refinement(Multigraph(h, tuple(hedges)), tuple(tags))
    phi = FiniteMorphism(ref, tree, tuple(images), tuple(index), tuple(eimage))
    return Certificate(tree, ref, phi, claimed, graph)


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise CertificateParseError(f"line {lineno}: non-integer token {token!r}") from None
