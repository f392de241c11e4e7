import numpy as np
import pytest

from sparse_choice import (
    NotDoublyStochasticError,
    Permutation,
    SparseChoiceModel,
    decompose,
    marginals,
    random_doubly_stochastic,
)
from sparse_choice.birkhoff import bottleneck_matching
from sparse_choice.core import InvalidModelError


def test_permutation_matrix_single_term():
    p = Permutation((3, 1, 4, 2))
    dec = decompose(p.matrix())
    assert dec.terms == ((p, 1.0),)


def test_two_by_two_half():
    dec = decompose([[0.5, 0.5], [0.5, 0.5]])
    assert dict(dec.terms) == {Permutation((1, 2)): 0.5, Permutation((2, 1)): 0.5}


@pytest.mark.parametrize("method", ["mixture", "balanced"])
def test_random_round_trip_and_term_bound(method):
    for seed in range(30):
        d = random_doubly_stochastic(6, seed, method)
        dec = decompose(d)
        assert np.abs(dec.reconstruct() - d.values).max() <= 1e-9
        assert len(dec.terms) <= 26
        assert all(w > 0 for _, w in dec.terms)
        assert dec.total_weight == pytest.approx(1.0, abs=1e-9)
        # round trip through the model/marginals path
        assert np.abs(marginals(dec.as_model()).values - d.values).max() <= 1e-9


def test_residual_mass_strictly_decreases():
    d = random_doubly_stochastic(5, 4, "balanced").values.copy()
    dec = decompose(d)
    remaining = d.sum()
    for perm, w in dec.terms:
        d = d - w * perm.matrix()
        assert d.sum() < remaining
        remaining = d.sum()


def test_point_mass_marginals_decompose_to_itself():
    p = Permutation.from_string("52413")
    dec = decompose(marginals(SparseChoiceModel.point_mass(p)))
    assert [t[0] for t in dec.terms] == [p]


def test_bottleneck_prefers_large_entries():
    m = np.array([[0.1, 0.9, 0.0], [0.9, 0.1, 0.0], [0.0, 0.0, 1.0]])
    assert bottleneck_matching(m, 1e-12) == [1, 0, 2]


def test_lexicographic_tie_break():
    # every permutation of the uniform matrix has the same bottleneck
    dec = decompose(np.full((3, 3), 1 / 3))
    assert dec.terms[0][0] == Permutation((1, 2, 3))


def test_hall_violation_reports_witness():
    # with tol=0.3 rows 2 and 3 keep only column 3
    d = np.array([[0.5, 0.5, 0.0], [0.25, 0.25, 0.5], [0.25, 0.25, 0.5]])
    with pytest.raises(NotDoublyStochasticError) as info:
        decompose(d, tol=0.3)
    assert info.value.rows == (2, 3)
    assert info.value.columns == (3,)


def test_rejects_non_stochastic():
    with pytest.raises(InvalidModelError):
        decompose([[1.0, 1.0], [0.0, 0.0]])
