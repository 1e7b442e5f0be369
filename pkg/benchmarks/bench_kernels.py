"""Compare the numba kernels with the numpy/Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Times batched degree evaluation and a full branch and bound over every
(T, f) pair of a few small graphs.  Both paths must agree on every answer.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from stablegon import _kernels as K
from stablegon._model import compile_model
from stablegon.enumerate import tf_pairs
from stablegon.multigraph import Multigraph, complete_graph
from stablegon.solver import upper_bound

GRAPHS = {
    "K4": complete_graph(4),
    "W4": Multigraph(5, ((0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2), (4, 3))),
    "K5": complete_graph(5),
}


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def bench_eval(g, repeat):
    models = [compile_model(g, t, f) for t, f in tf_pairs(g)]
    models = [m for m in models if m.n_tree_edges and m.n_vars]
    i_max = upper_bound(g)
    rng = np.random.default_rng(0)
    batches = [rng.integers(1, i_max + 1, size=(4096, m.n_vars)) for m in models]

    def run(impl):
        return [K.eval_degrees(m, R, impl=impl) for m, R in zip(models, batches)]

    t_np, a = timed(lambda: run(K.eval_degrees_numpy), repeat)
    t_nb, b = timed(lambda: run(K.eval_degrees_numba), repeat)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    return len(models) * 4096, t_np, t_nb


def bench_bnb(g, repeat):
    models = [compile_model(g, t, f) for t, f in tf_pairs(g)]
    i_max = upper_bound(g)

    def run(impl):
        return [K.branch_and_bound(m, i_max, impl=impl)[0] for m in models]

    t_py, a = timed(lambda: run(K._bnb_py), repeat)
    t_nb, b = timed(lambda: run(K.bnb_numba), repeat)
    assert a == b
    return len(models), min(a), t_py, t_nb


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    # trigger compilation outside the timed region
    bench_eval(GRAPHS["K4"], 1)
    bench_bnb(GRAPHS["K4"], 1)

    print(f"{'graph':<6}{'kernel':<8}{'work':>10}{'fallback s':>12}{'numba s':>10}{'speedup':>9}")
    for name, g in GRAPHS.items():
        rows, t0, t1 = bench_eval(g, args.repeat)
        print(f"{name:<6}{'eval':<8}{rows:>10}{t0:>12.4f}{t1:>10.4f}{t0 / t1:>9.1f}")
        pairs, best, t0, t1 = bench_bnb(g, args.repeat)
        print(f"{name:<6}{'bnb':<8}{pairs:>10}{t0:>12.4f}{t1:>10.4f}{t0 / t1:>9.1f}   min degree {best}")


if __name__ == "__main__":
    main()
