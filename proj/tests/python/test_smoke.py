import math

import numpy as np
import pytest

import simplicial as sx


def standard_attention(x, wq, wk, wv):
    q, k, v = x @ wq, x @ wk, x @ wv
    s = q @ k.T / math.sqrt(x.shape[1])
    s -= s.max(axis=1, keepdims=True)
    a = np.exp(s)
    a /= a.sum(axis=1, keepdims=True)
    return a @ v


def test_order_one_matches_numpy_attention():
    rng = np.random.default_rng(0)
    x = rng.uniform(-1, 1, (5, 4))
    wq, wk, wv = (rng.uniform(-0.5, 0.5, (4, 4)) for _ in range(3))
    got = sx.forward(x, sx.Params([wq, wk], [wv]))
    assert np.max(np.abs(got - standard_attention(x, wq, wk, wv))) <= 1e-12


def test_logits_and_softmax():
    keys = [np.array([[1.0, 0.0], [0.0, 1.0]])] * 2
    logits = sx.contract_logits(keys)
    assert logits.shape == (2, 2)
    assert np.array_equal(logits, np.eye(2))
    probs = sx.softmax(np.zeros((2, 2, 2)), sx.Mask.causal(2, 2))
    assert probs[0, 0, 0] == 1.0
    assert probs[1].sum() == pytest.approx(1.0)


def test_masks():
    m = sx.Mask.causal(4, 1)
    assert len(m) == 10
    assert (2, 1) in m
    assert (1, 2) not in m
    assert m.quasi_strongly_connected()
    assert m.radius() == 1
    assert len(sx.parse_mask(str(m))) == len(m)
    with pytest.raises(ValueError):
        sx.Mask(2, 1, [(0, 5)])


def test_params_round_trip_and_errors():
    p = sx.Params.random(2, 4, heads=2, seed=3)
    assert (p.order, p.dim, p.heads, p.head_dim) == (2, 4, 2, 2)
    assert str(sx.parse_params(str(p))) == str(p)
    with pytest.raises(ValueError):
        sx.forward(np.zeros((3, 5)), p)


def test_collapse_and_reduction():
    p = sx.Params.random(2, 4, seed=1)
    rng = np.random.default_rng(1)
    x = rng.uniform(-0.1, 0.1, (4, 4))
    check = sx.cubic_bound_check(x, p)
    assert check["status"] == "holds"
    assert check["lhs"] <= check["rhs"]
    assert sx.residual_norm(np.ones((3, 2))) == 0.0
    assert sx.reduce_order_exact(p, x)


def test_rope_lipschitz_routing_curvature():
    rng = np.random.default_rng(2)
    keys = [rng.uniform(-1, 1, (3, 6)) for _ in range(3)]
    base = sx.det_logits(keys, 2, 6)
    shifted = [sx.apply_rotations(k, [5, 9, 11], 2) for k in keys]
    moved = [sx.apply_rotations(k, [15, 19, 21], 2) for k in keys]
    assert base.shape == (3, 3, 3)
    assert np.max(np.abs(sx.det_logits(shifted, 2, 6) - sx.det_logits(moved, 2, 6))) <= 1e-10

    assert sx.lipschitz_bound(2, 4, 1, 1.0, 1.0, 1.0) == pytest.approx(4 * math.sqrt(5))
    p = sx.Params.random(1, 3, seed=4)
    x = rng.uniform(-1, 1, (2, 3))
    assert np.all(sx.analytic_jvp(x, p, np.zeros((2, 3))) == 0.0)

    assert len(sx.path_sparse_mask(np.ones((3, 3)), 3, 2)) == 27
    assert sx.forman_curvature(4, [(0, 1), (1, 2), (2, 3)]) == [1.0, 0.0, 1.0]
    avg_graph, avg_line, increased = sx.curvature_increase(4, [(0, 1), (1, 2), (2, 3)], "combinatorial")
    assert avg_line > avg_graph and increased
