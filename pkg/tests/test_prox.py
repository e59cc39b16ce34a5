import numpy as np
import pytest

from proxcert.prox import (BoxProx, GroupL21Prox, L1Prox, NonnegProx,
                           ZeroProx, group_soft_threshold, project_nonneg,
                           soft_threshold)

from oracles import grid_search_prox


def test_soft_threshold_examples():
    assert np.allclose(soft_threshold([3.0, -0.5, 0.0], 1.0), [2.0, 0.0, 0.0])
    v = np.array([0.3, -2.0, 7.0])
    assert np.array_equal(soft_threshold(v, 0.0), v)
    assert soft_threshold([1.25], 1.25)[0] == 0.0
    with pytest.raises(ValueError):
        soft_threshold([1.0], -0.1)


def test_group_soft_threshold_examples():
    assert np.allclose(group_soft_threshold([3.0, 4.0], 2, 5.0), [0.0, 0.0])
    assert np.allclose(group_soft_threshold([3.0, 4.0], 2, 2.5), [1.5, 2.0])
    v = np.array([1.0, 2.0, 3.0, 4.0])
    assert np.array_equal(group_soft_threshold(v, 2, 0.0), v)
    with pytest.raises(ValueError):
        group_soft_threshold([1.0, 2.0, 3.0], 2, 1.0)


def test_group_soft_threshold_zero_block():
    out = group_soft_threshold([0.0, 0.0, 3.0, 4.0], 2, 1.0)
    assert np.allclose(out, [0.0, 0.0, 3.0 * 0.8, 4.0 * 0.8])


def test_project_nonneg():
    assert np.allclose(project_nonneg([-1.0, 2.0]), [0.0, 2.0])
    v = np.array([0.0, 3.0])
    assert np.array_equal(project_nonneg(v), v)
    assert np.allclose(project_nonneg([-3.0, -0.1, 5.0, 0.0]), [0.0, 0.0, 5.0, 0.0])


ORACLES = [
    ZeroProx(),
    L1Prox(0.7),
    L1Prox(0.5, weights=np.array([1.0, 0.0, 2.0, 1.0, 0.5])),
    NonnegProx(),
    GroupL21Prox(0.6, 1),
    BoxProx(lo=-0.5, hi=2.0),
]


@pytest.mark.parametrize("oracle", ORACLES, ids=lambda o: type(o).__name__)
def test_nonexpansiveness(oracle):
    rng = np.random.default_rng(42)
    tau = 1.3
    for _ in range(500):
        u = rng.standard_normal(5) * 3.0
        v = rng.standard_normal(5) * 3.0
        du = oracle.prox(u, tau) - oracle.prox(v, tau)
        assert np.linalg.norm(du) <= np.linalg.norm(u - v) + 1e-12


def test_group_nonexpansiveness():
    oracle = GroupL21Prox(0.8, 2)
    rng = np.random.default_rng(1)
    for _ in range(500):
        u = rng.standard_normal(6) * 2.0
        v = rng.standard_normal(6) * 2.0
        du = oracle.prox(u, 2.0) - oracle.prox(v, 2.0)
        assert np.linalg.norm(du) <= np.linalg.norm(u - v) + 1e-12


def _subgrad_residual(oracle, v, tau):
    """First-order condition tau*(v - p) in subdiff g at p, checked via the
    known closed-form characterizations."""
    p = oracle.prox(np.asarray(v, dtype=np.float64), tau)
    s = tau * (np.asarray(v) - p)  # must be a subgradient of g at p
    if isinstance(oracle, ZeroProx):
        return float(np.max(np.abs(s)))
    if isinstance(oracle, L1Prox):
        w = oracle.mu * (oracle.weights if oracle.weights is not None else np.ones(p.size))
        res = 0.0
        for i in range(p.size):
            if p[i] != 0.0:
                res = max(res, abs(s[i] - w[i] * np.sign(p[i])))
            else:
                res = max(res, max(0.0, abs(s[i]) - w[i]))
        return res
    if isinstance(oracle, NonnegProx):
        res = float(np.max(np.abs(s[p > 0]), initial=0.0))       # s_i = 0 where p_i > 0
        res = max(res, float(np.max(s[p == 0.0], initial=0.0)))  # s_i <= 0 where p_i = 0
        return res
    if isinstance(oracle, GroupL21Prox):
        res = 0.0
        for blk_p, blk_s in zip(p.reshape(-1, oracle.group_size),
                                s.reshape(-1, oracle.group_size)):
            norm_p = np.linalg.norm(blk_p)
            if norm_p > 0:
                res = max(res, float(np.linalg.norm(blk_s - oracle.mu * blk_p / norm_p)))
            else:
                res = max(res, max(0.0, float(np.linalg.norm(blk_s)) - oracle.mu))
        return res
    raise AssertionError("unhandled oracle")


@pytest.mark.parametrize("oracle", [ZeroProx(), L1Prox(0.7), NonnegProx(),
                                    GroupL21Prox(0.9, 2)],
                         ids=lambda o: type(o).__name__)
def test_prox_first_order_condition(oracle):
    rng = np.random.default_rng(3)
    for _ in range(100):
        v = rng.standard_normal(4) * 2.0
        tau = float(rng.uniform(0.2, 3.0))
        assert _subgrad_residual(oracle, v, tau) <= 1e-10


@pytest.mark.parametrize("oracle,dim", [(L1Prox(0.7), 1), (NonnegProx(), 1),
                                        (GroupL21Prox(0.9, 2), 2)],
                         ids=["l1", "nonneg", "group"])
def test_prox_matches_grid_search(oracle, dim):
    rng = np.random.default_rng(8)
    for _ in range(3):
        v = rng.standard_normal(dim) * 1.5
        tau = float(rng.uniform(0.5, 2.0))

        def objective(x):
            return oracle.value(x) + 0.5 * tau * float(np.sum((x - v) ** 2))

        best = grid_search_prox(objective, v, radius=2.5, step=1e-4 if dim == 1 else 2e-3)
        p = oracle.prox(v, tau)
        step = 1e-4 if dim == 1 else 2e-3
        assert np.max(np.abs(p - best)) <= step + 1e-12
