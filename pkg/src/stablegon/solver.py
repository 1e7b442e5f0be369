"""Exact stable gonality by exhaustive search over tuples ``(T, f, r)``.

The ``(T, f)`` stream is cut into chunks that workers process independently.
For each pair the index vectors are either scanned exhaustively in
lexicographic order (``prune=False``) or searched by branch and bound against
the best degree seen so far.  Results are reduced in stream order, so the
answer and, without pruning, the tuple count do not depend on scheduling.
"""

from __future__ import annotations

import itertools
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from . import _kernels
from ._model import DegreeModel, compile_model
from .construct import MalformedTupleError, build_phi_alpha
from .enumerate import TupleAlpha, tf_pairs
from .morphism import Certificate, TreeGraph
from .multigraph import Multigraph, betti, require_connected, stable_reduce

CHUNK_PAIRS = 32
EXHAUSTIVE_BATCH = 1 << 14


class SearchFailure(RuntimeError):
    """No tuple reached the proven upper bound; indicates a bug."""


class BudgetExceeded(RuntimeError):
    def __init__(self, examined: int):
        super().__init__(f"tuple budget exhausted after {examined} tuples")
        self.examined = examined


@dataclass
class SolveOptions:
    use_reduction: bool = True
    max_index_override: Optional[int] = None
    parallelism: int = 1
    prune: bool = True
    budget: Optional[int] = None

    def __post_init__(self):
        if self.max_index_override is not None and self.max_index_override < 1:
            raise ValueError("max_index_override must be >= 1")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")


@dataclass
class SolveResult:
    sgon: int
    certificate: Certificate
    tuples_examined: int
    pruned: int
    wall_time: float
    alpha: Optional[TupleAlpha] = None
    searched: Optional[Multigraph] = None


@dataclass
class Decision:
    holds: bool
    certificate: Optional[Certificate]
    tuples_examined: int = 0
    pruned: int = 0
    wall_time: float = 0.0


@dataclass
class FixedTFResult:
    exists: bool
    best_degree: int
    witness_r: Optional[tuple[int, ...]]


def upper_bound(g: Multigraph) -> int:
    return (g.m - g.n + 4) // 2


def lower_bound(g: Multigraph) -> int:
    return 1 if betti(g) == 0 else 2


# --------------------------------------------------------------------------
# chunked search


@dataclass
class _Shared:
    best: int
    stop_chunk: int = _kernels.INF
    lock: threading.Lock = field(default_factory=threading.Lock)


@dataclass
class _ChunkResult:
    index: int
    best: int = _kernels.INF
    best_pos: int = -1
    alpha: Optional[TupleAlpha] = None
    examined: int = 0
    pruned: int = 0


def _chunks(pairs: Iterable, size: int) -> Iterator[tuple[int, list]]:
    it = iter(pairs)
    for ci in itertools.count():
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield ci, block


def _exhaustive(model: DegreeModel, m: int, i_max: int, stop_at: int) -> tuple[int, Optional[tuple], int]:
    """Scan all of ``[1, i_max]^m`` in lexicographic order; stop at the first degree ``<= stop_at``."""
    total = i_max ** m
    if total > 1 << 40:
        raise OverflowError(f"{total} index vectors is too many for an exhaustive scan")
    best, best_r, examined = _kernels.INF, None, 0
    cols = model.var_edge
    for start in range(0, total, EXHAUSTIVE_BATCH):
        block = _kernels.lexicographic_block(start, min(EXHAUSTIVE_BATCH, total - start), m, i_max)
        degs = _kernels.eval_degrees(model, block[:, cols])
        hit = np.flatnonzero(degs <= stop_at)
        if hit.size:
            i = int(hit[0])
            examined += i + 1
            if degs[i] < best:
                best, best_r = int(degs[i]), tuple(int(x) for x in block[i])
            return best, best_r, examined
        examined += len(block)
        i = int(np.argmin(degs))
        if degs[i] < best:
            best, best_r = int(degs[i]), tuple(int(x) for x in block[i])
    return best, best_r, examined


def _run_chunk(g, ci, block, i_max, incumbent0, stop_at, prune, shared: _Shared) -> _ChunkResult:
    res = _ChunkResult(ci)
    for pos, (tree, f) in enumerate(block):
        if ci > shared.stop_chunk:
            break
        model = compile_model(g, tree, f)
        if prune:
            incumbent = min(res.best, shared.best, incumbent0)
            best, found, free, nodes, leaves, cut = _kernels.branch_and_bound(
                model, i_max, incumbent, stop_at
            )
            res.examined += leaves
            res.pruned += cut
            r = model.full_r(free) if found else None
        else:
            best, r, examined = _exhaustive(model, g.m, i_max, stop_at)
            found = best < res.best
            res.examined += examined
        if found and best < res.best:
            res.best, res.best_pos = best, pos
            res.alpha = TupleAlpha(tree, f, r)
        with shared.lock:
            if res.best < shared.best:
                shared.best = res.best
            if res.best <= stop_at:
                shared.stop_chunk = min(shared.stop_chunk, ci)
        if res.best <= stop_at:
            break
    return res


def _search(g: Multigraph, opts: SolveOptions, incumbent0: int, stop_at: int) -> tuple[list[_ChunkResult], int]:
    i_max = opts.max_index_override or upper_bound(g)
    shared = _Shared(best=incumbent0)
    results: dict[int, _ChunkResult] = {}
    chunks = _chunks(tf_pairs(g), CHUNK_PAIRS)

    def check_budget():
        if opts.budget is not None:
            seen = sum(r.examined for r in results.values())
            if seen > opts.budget:
                raise BudgetExceeded(seen)

    if opts.parallelism == 1:
        for ci, block in chunks:
            if ci > shared.stop_chunk:
                break
            results[ci] = _run_chunk(g, ci, block, i_max, incumbent0, stop_at, opts.prune, shared)
            check_budget()
    else:
        with ThreadPoolExecutor(max_workers=opts.parallelism) as pool:
            pending = {}
            window = 2 * opts.parallelism
            for ci, block in chunks:
                if ci > shared.stop_chunk:
                    break
                pending[ci] = pool.submit(
                    _run_chunk, g, ci, block, i_max, incumbent0, stop_at, opts.prune, shared
                )
                while len(pending) >= window:
                    oldest = min(pending)
                    results[oldest] = pending.pop(oldest).result()
                    check_budget()
            for ci in sorted(pending):
                results[ci] = pending[ci].result()
            check_budget()
    # keep exactly what an in-order run would have produced
    kept = [results[ci] for ci in sorted(results) if ci <= shared.stop_chunk]
    return kept, i_max


def _reduce(kept: list[_ChunkResult]) -> tuple[int, Optional[TupleAlpha], int, int]:
    best, alpha = _kernels.INF, None
    for res in kept:
        if res.best < best:
            best, alpha = res.best, res.alpha
    return best, alpha, sum(r.examined for r in kept), sum(r.pruned for r in kept)


def _trivial_alpha(g: Multigraph) -> TupleAlpha:
    return TupleAlpha(TreeGraph(1, ()), (0,) * g.n, (1,) * g.m)


def _fast_certificate(g: Multigraph, reduced: Multigraph, answer: int) -> Certificate:
    if answer == 1:
        alpha = TupleAlpha(TreeGraph(g.n, g.edges), tuple(range(g.n)), (1,) * g.m)
        return build_phi_alpha(g, alpha).certificate()
    label = None if reduced == g else reduced
    return build_phi_alpha(reduced, _trivial_alpha(reduced)).certificate(label)


def sgon(g: Multigraph, opts: Optional[SolveOptions] = None) -> SolveResult:
    opts = opts or SolveOptions()
    start = time.perf_counter()
    require_connected(g)
    target = g
    if opts.use_reduction:
        rep = stable_reduce(g)
        if rep.fast_answer is not None:
            cert = _fast_certificate(g, rep.reduced, rep.fast_answer)
            return SolveResult(rep.fast_answer, cert, 0, 0, time.perf_counter() - start, None, g)
        target = rep.reduced
    label = None if target == g else target

    if target.n == 1 and target.m == 0:
        alpha = _trivial_alpha(target)
        cert = build_phi_alpha(target, alpha).certificate(label)
        return SolveResult(1, cert, 1, 0, time.perf_counter() - start, alpha, target)

    ub = upper_bound(target)
    incumbent0 = ub + 1 if (opts.prune and opts.max_index_override is None) else _kernels.INF
    kept, _ = _search(target, opts, incumbent0, lower_bound(target))
    best, alpha, examined, pruned = _reduce(kept)
    if alpha is None:
        raise SearchFailure(f"no tuple reached the upper bound {ub}")
    built = build_phi_alpha(target, alpha)
    if built.degree != best:
        raise SearchFailure(f"kernel degree {best} disagrees with construction {built.degree}")
    return SolveResult(best, built.certificate(label), examined, pruned,
                       time.perf_counter() - start, alpha, target)


def decide(g: Multigraph, k: int, opts: Optional[SolveOptions] = None) -> Decision:
    """Is ``sgon(g) <= k``?  Stops at the first tuple of degree at most ``k``."""
    opts = opts or SolveOptions()
    start = time.perf_counter()
    require_connected(g)
    target = g
    if opts.use_reduction:
        rep = stable_reduce(g)
        if rep.fast_answer is not None:
            if rep.fast_answer > k:
                return Decision(False, None, wall_time=time.perf_counter() - start)
            cert = _fast_certificate(g, rep.reduced, rep.fast_answer)
            return Decision(True, cert, wall_time=time.perf_counter() - start)
        target = rep.reduced
    label = None if target == g else target
    if k < lower_bound(target):
        return Decision(False, None, wall_time=time.perf_counter() - start)
    if target.n == 1 and target.m == 0:
        cert = build_phi_alpha(target, _trivial_alpha(target)).certificate(label)
        return Decision(True, cert, 1, 0, time.perf_counter() - start)

    kept, _ = _search(target, opts, k + 1, k)
    best, alpha, examined, pruned = _reduce(kept)
    elapsed = time.perf_counter() - start
    if alpha is None or best > k:
        return Decision(False, None, examined, pruned, elapsed)
    return Decision(True, build_phi_alpha(target, alpha).certificate(label), examined, pruned, elapsed)


def solve_fixed_tf(
    g: Multigraph,
    tree: Multigraph,
    f: tuple[int, ...],
    k: int,
    i_max: Optional[int] = None,
) -> FixedTFResult:
    """Search index maps only, with ``(T, f)`` fixed.

    ``exists`` says whether some ``r`` reaches degree ``<= k``.  When it does,
    ``best_degree`` is the degree of the witness found; otherwise it is the
    true minimum, found by raising the threshold one step at a time.
    """
    f = tuple(f)
    if len(f) != g.n or any(not 0 <= x < tree.n for x in f) or len(set(f)) != tree.n:
        raise MalformedTupleError("f must be a surjection onto the tree vertices")
    i_max = i_max or upper_bound(g)
    model = compile_model(g, tree, f)

    best, found, free, *_ = _kernels.branch_and_bound(model, i_max, k + 1, k)
    if found:
        return FixedTFResult(True, best, model.full_r(free))

    ones = np.ones((1, model.n_vars), np.int64)
    fallback = int(_kernels.eval_degrees(model, ones)[0])
    for threshold in range(k + 1, fallback):
        best, found, free, *_ = _kernels.branch_and_bound(model, i_max, threshold + 1, threshold)
        if found:
            return FixedTFResult(False, best, model.full_r(free))
    return FixedTFResult(False, fallback, (1,) * g.m)
