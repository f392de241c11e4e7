"""Shared test helpers and independent brute-force oracles."""
import itertools

import numpy as np

from sparse_choice import Permutation, SparseChoiceModel


def perm(text):
    """Candidate-order string, e.g. "231" = candidate 2 first."""
    return Permutation.from_string(text)


def model_of(spec):
    return SparseChoiceModel({perm(k): v for k, v in spec.items()})


def brute_force_oracle(weights, fixed=None, forbidden=()):
    """Exhaustive search over all N! permutations; returns (best value, set of argmax)."""
    w = np.asarray(weights, dtype=float)
    n = w.shape[0]
    forbidden = set(forbidden)
    best, arg = -np.inf, set()
    for ranks in itertools.permutations(range(1, n + 1)):
        cells = list(zip(range(1, n + 1), ranks))
        if fixed is not None and fixed not in cells:
            continue
        if forbidden & set(cells):
            continue
        value = sum(w[i - 1, j - 1] for i, j in cells)
        if value > best + 1e-9:
            best, arg = value, {ranks}
        elif abs(value - best) <= 1e-9:
            arg.add(ranks)
    return (None, set()) if not arg else (best, arg)


