"""Hot loops of the search: batched degree evaluation and branch and bound.

Both kernels exist as plain Python/numpy and, when numba is importable, as
``@njit`` compilations.  Set ``STABLEGON_DISABLE_NUMBA=1`` to force the
fallback path.
"""

from __future__ import annotations

import os

import numpy as np

from ._model import DegreeModel

INF = np.iinfo(np.int64).max // 4

_disabled = os.environ.get("STABLEGON_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")
try:
    if _disabled:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _disabled


# --------------------------------------------------------------------------
# batched evaluation at tree edge 0


def eval_degrees_numpy(R, C0, L0, slot_u, slot_v, Bm, slot_ptr, dir0):
    N, nv = R.shape
    A = np.zeros((Bm.shape[0], nv), np.int64)
    cols = np.arange(nv)
    np.add.at(A, (slot_u, cols), 1)
    np.add.at(A, (slot_v, cols), 1)
    M = R @ A.T + Bm
    vmax = np.maximum.reduceat(M, slot_ptr[:-1], axis=1)
    return C0 + R @ L0 + vmax.sum(axis=1) - M[:, dir0].sum(axis=1)


def _eval_degrees_loop(R, C0, L0, slot_u, slot_v, Bm, slot_ptr, dir0):
    N, nv = R.shape
    n = slot_ptr.shape[0] - 1
    out = np.empty(N, np.int64)
    M = np.empty(Bm.shape[0], np.int64)
    for i in range(N):
        for s in range(Bm.shape[0]):
            M[s] = Bm[s]
        tot = C0
        for j in range(nv):
            x = R[i, j]
            tot += L0[j] * x
            M[slot_u[j]] += x
            M[slot_v[j]] += x
        for v in range(n):
            top = M[slot_ptr[v]]
            for s in range(slot_ptr[v] + 1, slot_ptr[v + 1]):
                if M[s] > top:
                    top = M[s]
            tot += top - M[dir0[v]]
        out[i] = tot
    return out


# --------------------------------------------------------------------------
# depth-first branch and bound over the free indices


def _bnb_py(imax, sym_prev, C, L, slot_u, slot_v, Bm, slot_ptr, dir_slot, incumbent, stop_at):
    """Minimise the degree over ``[1, imax]^nv``.

    Subtrees whose lower bound reaches ``incumbent`` are cut; the search ends
    early once a degree ``<= stop_at`` is found.  Returns
    ``(best, found, best_r, nodes, leaves, pruned)``.
    """
    nt = L.shape[0]
    nv = L.shape[1]
    n = slot_ptr.shape[0] - 1
    ns = Bm.shape[0]
    slot_vertex = np.empty(ns, np.int64)
    for v in range(n):
        for s in range(slot_ptr[v], slot_ptr[v + 1]):
            slot_vertex[s] = v
    # state with every unassigned index sitting at its minimum 1
    lsum = C.copy()
    for t in range(nt):
        for j in range(nv):
            lsum[t] += L[t, j]
    mlow = Bm.copy()
    unas = np.zeros(ns, np.int64)
    vfree = np.zeros(n, np.int64)
    for j in range(nv):
        mlow[slot_u[j]] += 1
        mlow[slot_v[j]] += 1
        unas[slot_u[j]] += 1
        unas[slot_v[j]] += 1
        vfree[slot_vertex[slot_u[j]]] += 1
        vfree[slot_vertex[slot_v[j]]] += 1
    vmax1 = np.empty(n, np.int64)
    vmax2 = np.empty(n, np.int64)
    varg1 = np.empty(n, np.int64)

    best = incumbent
    found = False
    best_r = np.zeros(nv, np.int64)
    val = np.zeros(nv, np.int64)
    nodes = 0
    leaves = 0
    pruned = 0
    level = 0
    while level >= 0:
        j = level
        old = val[j]
        if old == 0:
            new = 1 if sym_prev[j] < 0 else val[sym_prev[j]]
        else:
            new = old + 1
        if new > imax:
            if old > 0:
                delta = 1 - old
                for t in range(nt):
                    lsum[t] += L[t, j] * delta
                mlow[slot_u[j]] += delta
                mlow[slot_v[j]] += delta
                unas[slot_u[j]] += 1
                unas[slot_v[j]] += 1
                vfree[slot_vertex[slot_u[j]]] += 1
                vfree[slot_vertex[slot_v[j]]] += 1
            val[j] = 0
            level -= 1
            continue
        if old == 0:
            unas[slot_u[j]] -= 1
            unas[slot_v[j]] -= 1
            vfree[slot_vertex[slot_u[j]]] -= 1
            vfree[slot_vertex[slot_v[j]]] -= 1
            delta = new - 1
        else:
            delta = 1
        if delta != 0:
            for t in range(nt):
                lsum[t] += L[t, j] * delta
            mlow[slot_u[j]] += delta
            mlow[slot_v[j]] += delta
        val[j] = new
        nodes += 1

        for v in range(n):
            a1 = -1
            a2 = -1
            g1 = -1
            for s in range(slot_ptr[v], slot_ptr[v + 1]):
                x = mlow[s]
                if x > a1:
                    a2 = a1
                    a1 = x
                    g1 = s
                elif x > a2:
                    a2 = x
            vmax1[v] = a1
            vmax2[v] = a2
            varg1[v] = g1
        lb = -INF
        for t in range(nt):
            tot = lsum[t]
            for v in range(n):
                d = dir_slot[t, v]
                if vfree[v] == 0:
                    tot += vmax1[v] - mlow[d]
                else:
                    other = vmax2[v] if d == varg1[v] else vmax1[v]
                    hi = mlow[d] + unas[d] * (imax - 1)
                    if other > hi:
                        tot += other - hi
            if tot > lb:
                lb = tot

        if lb >= best:
            pruned += 1
            continue
        if j == nv - 1:
            leaves += 1
            best = lb
            found = True
            for i in range(nv):
                best_r[i] = val[i]
            if best <= stop_at:
                break
            continue
        level += 1
    return best, found, best_r, nodes, leaves, pruned


if HAVE_NUMBA:
    eval_degrees_numba = njit(cache=True, nogil=True)(_eval_degrees_loop)
    bnb_numba = njit(cache=True, nogil=True)(_bnb_py)
else:  # pragma: no cover
    eval_degrees_numba = None
    bnb_numba = None

eval_degrees_impl = eval_degrees_numba if USE_NUMBA else eval_degrees_numpy
bnb_impl = bnb_numba if USE_NUMBA else _bnb_py


# --------------------------------------------------------------------------
# model-level wrappers


def eval_degrees(model: DegreeModel, R: np.ndarray, impl=None) -> np.ndarray:
    """Degrees for a batch of free-index rows ``R`` (shape ``(N, n_vars)``)."""
    R = np.ascontiguousarray(R, dtype=np.int64)
    if model.n_tree_edges == 0:
        return np.full(R.shape[0], model.constant, np.int64)
    fn = impl or eval_degrees_impl
    return fn(R, int(model.C[0]), model.L[0].copy(), model.slot_u, model.slot_v, model.Bm,
              model.slot_ptr, model.dir_slot[0].copy())


def branch_and_bound(model: DegreeModel, i_max: int, incumbent: int = INF, stop_at: int = 0, impl=None):
    if model.n_tree_edges == 0:
        d = model.constant
        ok = d < incumbent
        return (d if ok else incumbent), ok, np.zeros(model.n_vars, np.int64), 0, 1, 0 if ok else 1
    if model.n_vars == 0:
        d = int(eval_degrees(model, np.zeros((1, 0), np.int64))[0])
        ok = d < incumbent
        return (d if ok else incumbent), ok, np.zeros(0, np.int64), 1, int(ok), int(not ok)
    fn = impl or bnb_impl
    best, found, r, nodes, leaves, pruned = fn(
        int(i_max), model.sym_prev, model.C, model.L, model.slot_u, model.slot_v, model.Bm,
        model.slot_ptr, model.dir_slot, int(incumbent), int(stop_at),
    )
    return int(best), bool(found), r, int(nodes), int(leaves), int(pruned)


def lexicographic_block(start: int, count: int, m: int, i_max: int) -> np.ndarray:
    """Rows ``start .. start+count-1`` of the lexicographic list of ``[1, i_max]^m``."""
    idx = np.arange(start, start + count, dtype=np.int64)
    out = np.empty((count, m), np.int64)
    for p in range(m - 1, -1, -1):
        out[:, p] = idx % i_max + 1
        idx //= i_max
    return out
