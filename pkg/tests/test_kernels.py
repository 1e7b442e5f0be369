from __future__ import annotations

import os
import random
import subprocess
import sys

import numpy as np
import pytest

from conftest import random_connected
from stablegon import _kernels as K
from stablegon._model import compile_model
from stablegon.construct import build_phi_alpha
from stablegon.enumerate import TupleAlpha
from stablegon.morphism import TreeGraph

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not importable")


def _random_pair(rng):
    n = rng.randint(1, 5)
    g = random_connected(rng, n, rng.randint(n - 1, 7))
    k = rng.randint(1, n)
    f = list(range(k)) + [rng.randrange(k) for _ in range(n - k)]
    rng.shuffle(f)
    tree = TreeGraph(k, tuple((rng.randrange(i), i) for i in range(1, k)))
    return g, tree, tuple(f)


def test_model_matches_construction():
    """The closed-form degree must equal the degree of the explicit construction."""
    rng = random.Random(17)
    for _ in range(400):
        g, tree, f = _random_pair(rng)
        model = compile_model(g, tree, f)
        r = tuple(rng.randint(1, 4) for _ in range(g.m))
        built = build_phi_alpha(g, TupleAlpha(tree, f, model.full_r(model.free_part(r))))
        free = model.free_part(r)[None, :]
        assert int(K.eval_degrees(model, free, impl=K.eval_degrees_numpy)[0]) == built.degree
        assert int(K.eval_degrees(model, free, impl=K._eval_degrees_loop)[0]) == built.degree


def test_same_image_indices_do_not_matter():
    # the construction pins same-image edges to index 1 whatever r says
    rng = random.Random(4)
    for _ in range(100):
        g, tree, f = _random_pair(rng)
        r = tuple(rng.randint(1, 4) for _ in range(g.m))
        model = compile_model(g, tree, f)
        a = build_phi_alpha(g, TupleAlpha(tree, f, r)).degree
        b = build_phi_alpha(g, TupleAlpha(tree, f, model.full_r(model.free_part(r)))).degree
        assert a == b


@needs_numba
def test_numba_eval_matches_fallback():
    rng = random.Random(23)
    for _ in range(100):
        g, tree, f = _random_pair(rng)
        model = compile_model(g, tree, f)
        R = np.asarray([[rng.randint(1, 4) for _ in range(model.n_vars)] for _ in range(50)], np.int64)
        R = R.reshape(50, model.n_vars)
        a = K.eval_degrees(model, R, impl=K.eval_degrees_numpy)
        b = K.eval_degrees(model, R, impl=K.eval_degrees_numba)
        assert np.array_equal(a, b)


def _exhaustive_min(model, i_max):
    best = K.INF
    total = i_max ** model.n_vars
    for start in range(0, total, 4096):
        block = K.lexicographic_block(start, min(4096, total - start), model.n_vars, i_max)
        best = min(best, int(K.eval_degrees(model, block, impl=K.eval_degrees_numpy).min()))
    return best


@pytest.mark.parametrize("impl_name", ["_bnb_py", "bnb_numba"])
def test_branch_and_bound_finds_minimum(impl_name):
    impl = getattr(K, impl_name)
    if impl is None:
        pytest.skip("numba not importable")
    rng = random.Random(31)
    for _ in range(150):
        g, tree, f = _random_pair(rng)
        model = compile_model(g, tree, f)
        i_max = rng.randint(1, 3)
        best, found, free, *_ = K.branch_and_bound(model, i_max, impl=impl)
        assert found
        assert best == _exhaustive_min(model, i_max)
        r = model.full_r(free)
        assert build_phi_alpha(g, TupleAlpha(tree, f, r)).degree == best


def test_branch_and_bound_respects_incumbent_and_stop():
    rng = random.Random(8)
    for _ in range(60):
        g, tree, f = _random_pair(rng)
        model = compile_model(g, tree, f)
        best = K.branch_and_bound(model, 3)[0]
        # nothing strictly below the true minimum exists
        _, found, *_ = K.branch_and_bound(model, 3, incumbent=best)
        assert not found
        # stopping early still returns something at or below the stop level
        d, found, free, *_ = K.branch_and_bound(model, 3, incumbent=K.INF, stop_at=best + 2)
        assert found and best <= d <= best + 2


def test_lexicographic_block():
    rows = K.lexicographic_block(0, 9, 2, 3)
    assert rows.tolist() == [[a, b] for a in (1, 2, 3) for b in (1, 2, 3)]
    assert K.lexicographic_block(5, 2, 2, 3).tolist() == [[2, 3], [3, 1]]


def test_env_flag_selects_fallback():
    code = (
        "from stablegon import _kernels as K; from stablegon import sgon;"
        "from stablegon.multigraph import complete_graph;"
        "print(K.USE_NUMBA, K.bnb_impl is K._bnb_py, sgon(complete_graph(4)).sgon)"
    )
    env = dict(os.environ, STABLEGON_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True", "3"]
