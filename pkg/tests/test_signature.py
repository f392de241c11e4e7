import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparse_choice import (
    SignatureSet,
    candidate_signature_sets,
    check_signature,
    random_doubly_stochastic,
    random_sparse_model,
)
from sparse_choice.generators import planted_signature_model

from helpers import perm


def literal_signature(support):
    """Definition-literal double loop: each sigma needs an i with no other tau having tau(i) = sigma(i)."""
    for sigma in support:
        if not any(
            all(tau(i) != sigma(i) for tau in support if tau != sigma) for i in range(1, sigma.n + 1)
        ):
            return False
    return True


def test_single_permutation():
    p = perm("312")
    res = check_signature([p])
    assert res.holds and res.witness[p] == (1, 2)


def test_covered_identity():
    support = [perm(s) for s in ("123", "132", "213", "321")]
    res = check_signature(support)
    assert not res.holds
    assert perm("123") in res.missing


def test_disjoint_cyclic_shifts():
    support = [perm(s) for s in ("123", "231", "312")]
    res = check_signature(support)
    assert res.holds
    assert res.witness[perm("123")] == (1, 1)


def test_agrees_with_literal_definition():
    rng = np.random.default_rng(0)
    for _ in range(300):
        n = int(rng.integers(2, 6))
        k = int(rng.integers(1, min(8, math.factorial(n)) + 1))
        model = random_sparse_model(n, k, rng)
        assert check_signature(model).holds == literal_signature(list(model))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(3, 6), k=st.integers(2, 5), mask=st.integers(1, 31))
def test_subset_closure(seed, n, k, mask):
    k = min(k, math.factorial(n) // 2)
    model = planted_signature_model(n, k, seed)
    subset = [p for idx, p in enumerate(model) if mask >> idx & 1] or [next(iter(model))]
    assert check_signature(subset).holds


class TestCandidates:
    def test_identity_k1_eps0(self):
        sets = list(candidate_signature_sets(np.eye(4), 1, 0.0))
        assert [s.cells for s in sets] == [((i, i),) for i in range(1, 5)]

    def test_uniform_filtered_out(self):
        assert list(candidate_signature_sets(np.full((3, 3), 1 / 3), 1, 0.1)) == []

    def test_count_all_pass(self):
        d = np.full((3, 3), 1 / 3)
        sets = list(candidate_signature_sets(d, 2, 1.0))
        assert len(sets) == math.comb(9, 2) == len({s.cells for s in sets})

    def test_matches_filtered_combinations(self):
        d = random_doubly_stochastic(4, 3, "balanced").values
        cells = [(i, j) for i in range(1, 5) for j in range(1, 5)]
        for k in (1, 2, 3, 4):
            for eps in (0.05, 0.2):
                expected = [
                    c for c in itertools.combinations(cells, k)
                    if 1 - eps <= sum(d[i - 1, j - 1] for i, j in c) <= 1 + eps
                ]
                got = [s.cells for s in candidate_signature_sets(d, k, eps)]
                assert got == expected

    def test_sharded_ranges_merge_to_full_stream(self):
        d = np.full((3, 3), 1 / 3)
        full = [s.cells for s in candidate_signature_sets(d, 3, 0.01)]
        merged = [s.cells for lo, hi in ((0, 3), (3, 9)) for s in candidate_signature_sets(d, 3, 0.01, range(lo, hi))]
        assert merged == full and len(full) == math.comb(9, 3)

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            list(candidate_signature_sets(np.eye(2), 5, 0.1))


def test_signature_set_validation():
    with pytest.raises(ValueError):
        SignatureSet(((1, 1), (1, 1)))
    with pytest.raises(ValueError):
        SignatureSet(())
    assert SignatureSet(((1, 2),)).values(np.array([[0.3, 0.7], [0.7, 0.3]])) == [0.7]
