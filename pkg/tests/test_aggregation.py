import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparse_choice import Permutation, SparseChoiceModel
from sparse_choice import apa
from sparse_choice.aggregation import first_place_tally, hare
from sparse_choice.generators import random_sparse_model

from helpers import perm


def reference_hare(model):
    """Straight transcription of the elimination rule over explicit ballots."""
    n = model.n
    ballots = [(p.order(), w) for p, w in model.items()]
    remaining = list(range(1, n + 1))
    eliminated = []
    while len(remaining) > 1:
        first = {c: 0.0 for c in remaining}
        last = {c: 0.0 for c in remaining}
        for order, w in ballots:
            kept = [c for c in order if c in remaining]
            first[kept[0]] += w
            last[kept[-1]] += w
        low = min(first.values())
        tied = [c for c in remaining if abs(first[c] - low) <= 1e-12]
        tied.sort(key=lambda c: (last[c], c))
        loser = tied[-1]
        eliminated.append(loser)
        remaining.remove(loser)
    return remaining[0], tuple(eliminated)


def test_point_mass():
    p = perm("31524")
    trace = hare(SparseChoiceModel({p: 1.0}))
    assert trace.winner == 3
    assert trace.ranking_string() == "31524"
    assert trace.elimination_order == (4, 2, 5, 1)


def test_apa_model():
    trace = hare(apa.model())
    assert trace.winner == 1
    assert trace.ranking_string() == "13245"
    assert trace.elimination_order == (5, 4, 2, 3)
    first = trace.rounds[0].tallies
    assert first[1] == pytest.approx(0.197331, abs=1e-6)
    assert first[2] == pytest.approx(0.211990 + 0.062206, abs=1e-6)
    assert first[5] == pytest.approx(0.145649, abs=1e-6)


def test_first_place_tally_examples():
    m = SparseChoiceModel({perm("123"): 0.5, perm("312"): 0.3, perm("231"): 0.2})
    assert first_place_tally(m, {1, 2, 3}) == pytest.approx({1: 0.5, 2: 0.2, 3: 0.3})
    assert first_place_tally(m, {1, 2}) == pytest.approx({1: 0.8, 2: 0.2})
    assert first_place_tally(m, {2}) == pytest.approx({2: 1.0})
    with pytest.raises(ValueError):
        first_place_tally(m, set())
    with pytest.raises(ValueError):
        first_place_tally(m, {4})


def test_tie_breaks_on_last_place_then_index():
    # all three tie on first place; candidate 2 is last most often
    m = SparseChoiceModel({perm("132"): 1 / 3, perm("213"): 1 / 3, perm("312"): 1 / 3})
    assert hare(m).elimination_order[0] == 2
    # full symmetry: the largest index goes first
    cyc = SparseChoiceModel({perm("123"): 1 / 3, perm("231"): 1 / 3, perm("312"): 1 / 3})
    assert hare(cyc).elimination_order[0] == 3


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.integers(1, 8), st.integers(0, 10_000))
def test_matches_reference_and_conserves_mass(n, k, seed):
    model = random_sparse_model(n, min(k, math.factorial(n)), seed)
    trace = hare(model)
    assert (trace.winner, trace.elimination_order) == reference_hare(model)
    for rnd in trace.rounds:
        assert sum(rnd.tallies.values()) == pytest.approx(model.total_mass)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.1, 10))
def test_scale_invariance(seed, c):
    model = random_sparse_model(4, 5, seed)
    assert hare(model).ranking == hare(model.scaled(c)).ranking


@pytest.mark.parametrize("pi", list(itertools.permutations((1, 2, 3))))
def test_relabel_equivariance(pi):
    pi = Permutation(pi)
    # generic weights so no ties occur
    model = SparseChoiceModel({perm("123"): 0.41, perm("231"): 0.33, perm("321"): 0.26})
    renamed = SparseChoiceModel({p.relabel(pi): w for p, w in model.items()})
    a, b = hare(model), hare(renamed)
    assert b.winner == pi(a.winner)
    assert b.elimination_order == tuple(pi(c) for c in a.elimination_order)


def test_empty_model_rejected():
    with pytest.raises(ValueError):
        hare(SparseChoiceModel({}, n=3))
