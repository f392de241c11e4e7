import math

import numpy as np
import pytest

from sparse_choice import (
    Permutation,
    SignatureSet,
    SparseChoiceModel,
    check_signature,
    greedy_fit,
    marginals,
    mwu_feasibility,
    recover,
    recover_search,
    recover_without_signature,
    relative_error,
)
from sparse_choice import apa
from sparse_choice.generators import planted_signature_model
from sparse_choice.recovery import ConstraintSystem, MWUState, mwu_budget, mwu_step, quantized_vectors

IDENTITY = Permutation((1, 2, 3))
CYCLE = Permutation((2, 3, 1))  # 1->2, 2->3, 3->1


def independent_linf(model, d):
    """Marginals by explicit loops, independent of the package's marginal code."""
    n = d.shape[0]
    m = [[0.0] * n for _ in range(n)]
    for p, v in model.items():
        for i, r in enumerate(p.ranks):
            m[i][r - 1] += v
    return max(abs(m[i][j] - d[i, j]) for i in range(n) for j in range(n))


def test_step_and_budget():
    assert mwu_step(0.25) == pytest.approx(1 / 32)
    assert mwu_budget(4, 0.25) == math.ceil(64 * 16 * math.log(32))
    assert mwu_budget(5, 0.25) == 4006


def test_constraint_width():
    rng = np.random.default_rng(0)
    d = marginals(planted_signature_model(4, 3, 1)).values
    sys_ = ConstraintSystem(d, 0.2)
    assert sys_.size == 32
    for _ in range(200):
        # y is the marginal of a sub-probability mixture with mass <= 1 + eps
        y = rng.random((4, 4))
        y *= 1.2 / y.sum(axis=0, keepdims=True).max()
        y = np.minimum(y, 1.2)
        s = sys_.slack(y)
        assert s.min() >= -2 and s.max() <= 2


def test_weights_positive_and_normalized():
    d = np.full((3, 3), 1 / 3)
    state = MWUState.start(ConstraintSystem(d, 0.1))
    rng = np.random.default_rng(1)
    for _ in range(500):
        state.update(rng.uniform(-2, 2, size=18))
        assert state.weights.min() > 0
        assert state.weights.sum() == pytest.approx(18)


def test_point_mass_recovery():
    p = Permutation((3, 1, 2, 4))
    res = mwu_feasibility(p.matrix(), SignatureSet(((1, 3),)), 0.3)
    assert dict(res.model.items()) == {p: 1.0}
    assert res.achieved_linf == 0


def test_planted_n3():
    d = marginals(SparseChoiceModel({IDENTITY: 0.6, CYCLE: 0.4})).values
    res = mwu_feasibility(d, SignatureSet(((1, 1), (1, 2))), 0.1)
    assert res is not None
    assert res.iterations == mwu_budget(3, 0.1)
    assert independent_linf(res.model, d) <= 0.2
    raw = res.model.scaled(res.total_mass)
    assert independent_linf(raw, d) <= 0.2
    assert 0.9 <= res.total_mass <= 1.1
    assert res.support_size <= 2 * res.iterations


def test_infeasible_by_structure():
    d = marginals(SparseChoiceModel({IDENTITY: 0.5, CYCLE: 0.5})).values
    assert mwu_feasibility(d, SignatureSet(((1, 1), (3, 3))), 0.05) is None


def test_epsilon_range():
    with pytest.raises(ValueError):
        mwu_feasibility(np.eye(2), SignatureSet(((1, 1),)), 0.5)


def test_recover_permutation_matrix():
    p = Permutation((2, 3, 1))
    res = recover(p.matrix(), 1, 0.1)
    # averaged iterates keep a tiny share of early oracle answers
    assert res.model.probability(p) >= 0.999
    assert res.signature.cells == ((1, 2),)


def test_recover_uniform_none():
    assert recover(np.full((4, 4), 0.25), 1, 0.1) is None


@pytest.mark.parametrize("n,seed", [(4, 0), (5, 3)])
def test_recover_planted(n, seed):
    d = marginals(planted_signature_model(n, 2, seed)).values
    res = recover(d, 2, 0.25)
    assert res is not None
    assert independent_linf(res.model, d) <= 0.5
    assert independent_linf(res.model.scaled(res.total_mass), d) <= 0.5
    assert res.support_size <= 2 * mwu_budget(n, 0.25)


def test_recover_deterministic_and_shard_independent():
    d = marginals(planted_signature_model(4, 2, 8)).values
    a = recover(d, 2, 0.25)
    b = recover(d, 2, 0.25)
    c = recover(d, 2, 0.25, workers=3)
    assert a.signature == b.signature == c.signature
    assert a.model == b.model == c.model


def test_recover_search_permutation_matrix():
    p = Permutation((4, 2, 3, 1))
    res = recover_search(p.matrix(), 0.25, epsilon_floor=0.25)
    assert res.k == 1 and res.epsilon == 0.25
    assert res.model.probability(p) >= 0.999
    assert res.achieved_linf <= 1e-3


def test_recover_search_planted():
    d = marginals(planted_signature_model(5, 3, 2)).values
    res = recover_search(d, 0.25, epsilon_floor=0.125)
    assert res.k <= 3
    assert res.epsilon in (0.25, 0.125)
    assert res.achieved_linf <= 2 * res.epsilon + 2 * res.epsilon**2


class TestQuantized:
    def test_grid_bound(self):
        vecs = list(quantized_vectors(2, 0.5))
        assert len(vecs) <= 25
        for v in vecs:
            assert list(v) == sorted(v)
            assert 0.5 - 1e-12 <= sum(v) <= 1.5 + 1e-12

    def test_k1_point_mass(self):
        p = Permutation((2, 1, 3))
        res = recover_without_signature(p.matrix(), 1, 0.25)
        assert res.model.probability(p) >= 0.99
        assert (1.0,) in [tuple(round(x, 12) for x in v) for v in quantized_vectors(1, 0.25)]

    def test_planted_n3(self):
        d = marginals(SparseChoiceModel({IDENTITY: 0.6, CYCLE: 0.4})).values
        res = recover_without_signature(d, 2, 0.25)
        assert res is not None
        assert independent_linf(res.model, d) <= 0.5
        assert res.candidates_tried <= (math.ceil(2 / 0.25) + 1) ** 2
        assert res.method == "quantized-mwu"


class TestGreedy:
    def test_permutation_matrix(self):
        p = Permutation((3, 1, 2))
        res = greedy_fit(p.matrix(), 0.01)
        assert dict(res.model.items()) == {p: 1.0} and res.is_signature

    def test_apa_table(self):
        d = apa.table1()
        res = greedy_fit(d, 1e-9)
        assert res.model.support_size <= 26
        assert relative_error(marginals(res.model), d) <= 0.15
        assert res.heuristic

    def test_truncation_is_shortest_prefix(self):
        d = apa.table1()
        loose = greedy_fit(d, 0.1)
        assert loose.l2_error <= 0.1
        assert greedy_fit(d, 0.1).model.support_size < greedy_fit(d, 0.01).model.support_size

    def test_planted_noiseless(self):
        m = planted_signature_model(5, 3, 0)
        res = greedy_fit(marginals(m), 1e-6)
        assert res.l2_error <= 1e-6 and res.model.support_size <= 17
        assert res.is_signature == check_signature(res.model).holds
