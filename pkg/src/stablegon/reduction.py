"""Three-dimensional matching gadget for the fixed-``(T, f)`` index problem.

Vertex layout of the gadget graph for ``k`` elements per coordinate::

    u_{i,a} = i*k + a          (i = 0, 1, 2; a in [0, k))
    v_{i,a} = 3k + i*k + a
    w_s     = 6k + s           (s indexes the triples)

The tree has vertex ``0 = w``, ``1 + i = v_i`` and ``4 + i = u_i``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .morphism import TreeGraph
from .multigraph import Multigraph


class InvalidInstanceError(ValueError):
    pass


class ThreeDMParseError(ValueError):
    pass


@dataclass(frozen=True)
class ThreeDMInstance:
    k: int
    triples: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "triples", tuple(tuple(int(x) for x in s) for s in self.triples))
        validate(self)

    def containing(self, i: int, a: int) -> int:
        return sum(1 for s in self.triples if s[i] == a)


def validate(inst: ThreeDMInstance) -> None:
    if inst.k < 1:
        raise InvalidInstanceError("k must be positive")
    if len(set(inst.triples)) != len(inst.triples):
        raise InvalidInstanceError("duplicate triple")
    for s in inst.triples:
        if len(s) != 3 or any(not 0 <= x < inst.k for x in s):
            raise InvalidInstanceError(f"triple {s} has a coordinate outside [0, {inst.k})")
    for i in range(3):
        counts = Counter(s[i] for s in inst.triples)
        for a in range(inst.k):
            if counts[a] < 2:
                raise InvalidInstanceError(
                    f"element {a} of coordinate set {i + 1} lies in {counts[a]} triples, need >= 2"
                )


@dataclass(frozen=True)
class GadgetInstance:
    graph: Multigraph
    tree: TreeGraph
    f: tuple[int, ...]
    target: int
    labels: dict[int, str]


GADGET_TREE = TreeGraph(7, ((0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)))
TREE_NAMES = ("w", "v1", "v2", "v3", "u1", "u2", "u3")


def build_gadget(inst: ThreeDMInstance) -> GadgetInstance:
    validate(inst)
    k, S = inst.k, inst.triples

    def u(i, a):
        return i * k + a

    def v(i, a):
        return 3 * k + i * k + a

    def w(s):
        return 6 * k + s

    edges = [(u(i, a), v(i, a)) for i in range(3) for a in range(k)]
    for s, triple in enumerate(S):
        edges.extend((v(i, a), w(s)) for i, a in enumerate(triple))
        edges.extend((u(i, a), v(i, a)) for i, a in enumerate(triple))

    n = 6 * k + len(S)
    f = [0] * n
    labels = {}
    for i in range(3):
        for a in range(k):
            f[u(i, a)] = 4 + i
            f[v(i, a)] = 1 + i
            labels[u(i, a)] = f"u{i + 1}_{a}"
            labels[v(i, a)] = f"v{i + 1}_{a}"
    for s in range(len(S)):
        labels[w(s)] = f"w_{s}"
    return GadgetInstance(Multigraph(n, tuple(edges)), GADGET_TREE, tuple(f), len(S) + k, labels)


def brute_force_3dm(inst: ThreeDMInstance) -> tuple[bool, Optional[tuple[tuple[int, int, int], ...]]]:
    """Exhaustive search for ``k`` pairwise disjoint triples."""
    for subset in itertools.combinations(inst.triples, inst.k):
        if all(len({s[i] for s in subset}) == inst.k for i in range(3)):
            return True, subset
    return False, None


def matching_from_witness(inst: ThreeDMInstance, gadget: GadgetInstance, r) -> list[tuple[int, int, int]]:
    """Triples whose three ``w_s`` edges all carry index 2."""
    g = gadget.graph
    w0 = 6 * inst.k
    chosen = []
    for s, triple in enumerate(inst.triples):
        idx = {r[e] for e in g.incidence[w0 + s]}
        if idx == {2}:
            chosen.append(triple)
    return chosen


def check_equivalence(inst: ThreeDMInstance) -> bool:
    from .solver import solve_fixed_tf

    gadget = build_gadget(inst)
    res = solve_fixed_tf(gadget.graph, gadget.tree, gadget.f, gadget.target)
    return res.exists == brute_force_3dm(inst)[0]


# --------------------------------------------------------------------------
# text formats


def parse_3dm(text: str) -> ThreeDMInstance:
    k = None
    triples = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        try:
            nums = [int(t) for t in toks[1:]]
        except ValueError:
            raise ThreeDMParseError(f"line {lineno}: non-integer token") from None
        if k is None:
            if toks[0] != "3dm" or len(nums) != 1:
                raise ThreeDMParseError(f"line {lineno}: expected header '3dm <k>'")
            k = nums[0]
        elif toks[0] == "s" and len(nums) == 3:
            triples.append(tuple(nums))
        else:
            raise ThreeDMParseError(f"line {lineno}: expected 's <a> <b> <c>'")
    if k is None:
        raise ThreeDMParseError("missing '3dm <k>' header")
    return ThreeDMInstance(k, tuple(triples))


def write_3dm(inst: ThreeDMInstance) -> str:
    return "".join([f"3dm {inst.k}\n"] + [f"s {a} {b} {c}\n" for a, b, c in inst.triples])


def write_tf(tree: Multigraph, f, target: int) -> str:
    """Sidecar for a fixed ``(T, f)`` problem: tree edges, vertex map and target."""
    out = [f"tree {tree.n}"]
    out += [f"t {a} {b}" for a, b in tree.edges]
    out += [f"f {x} {y}" for x, y in enumerate(f)]
    out.append(f"target {target}")
    return "\n".join(out) + "\n"


def parse_tf(text: str, n: int) -> tuple[TreeGraph, tuple[int, ...], int]:
    tree_n, tedges, fmap, target = None, [], {}, None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        try:
            nums = [int(t) for t in toks[1:]]
        except ValueError:
            raise ThreeDMParseError(f"line {lineno}: non-integer token") from None
        if toks[0] == "tree" and len(nums) == 1:
            tree_n = nums[0]
        elif toks[0] == "t" and len(nums) == 2:
            tedges.append(tuple(nums))
        elif toks[0] == "f" and len(nums) == 2:
            fmap[nums[0]] = nums[1]
        elif toks[0] == "target" and len(nums) == 1:
            target = nums[0]
        else:
            raise ThreeDMParseError(f"line {lineno}: unrecognised line {line!r}")
    if tree_n is None or target is None:
        raise ThreeDMParseError("sidecar needs 'tree <k>' and 'target <t>' lines")
    if sorted(fmap) != list(range(n)):
        raise ThreeDMParseError("sidecar must map every graph vertex exactly once")
    try:
        tree = TreeGraph(tree_n, tuple(tedges))
    except ValueError as exc:
        raise ThreeDMParseError(f"sidecar tree: {exc}") from None
    return tree, tuple(fmap[v] for v in range(n)), target
