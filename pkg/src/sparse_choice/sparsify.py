"""Sampling sparsifier: an O(N / eps^2)-support model matching given marginals."""
from __future__ import annotations

import math
from collections import Counter
from typing import Iterable

import numpy as np

from .birkhoff import decompose
from .core import Permutation, SparseChoiceModel, as_array, stochastic_residual
from .errors import InvalidModelError


def sample_count(n: int, epsilon: float, factor: float = 1.0) -> int:
    """``ceil(factor * n / epsilon**2)``, robust to float round-off in epsilon**2."""
    raw = factor * n / (epsilon * epsilon)
    nearest = round(raw)
    if abs(raw - nearest) <= 1e-9 * max(1.0, raw):
        return int(nearest)
    return math.ceil(raw)


def empirical_distribution(samples: Iterable[Permutation]) -> SparseChoiceModel:
    samples = list(samples)
    if not samples:
        raise ValueError("need at least one sample")
    counts = Counter(samples)
    total = len(samples)
    return SparseChoiceModel({p: c / total for p, c in counts.items()})


def sample_sparsify(d, epsilon: float, rng_seed=None, factor: float = 1.0) -> SparseChoiceModel:
    """Empirical distribution of ``T = ceil(factor * N / epsilon**2)`` draws from a
    Birkhoff decomposition of ``d``.

    The expected squared l2 error of the result is at most ``N / T``.
    ``factor=4`` gives the preset whose error exceeds epsilon with
    probability at most 1/4.
    """
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    arr = as_array(d)
    if stochastic_residual(arr) > 1e-6:
        raise InvalidModelError("input is not doubly stochastic within 1e-6")
    terms = decompose(arr).terms
    perms = [p for p, _ in terms]
    cdf = np.cumsum([w for _, w in terms])
    T = sample_count(arr.shape[0], epsilon, factor)
    rng = np.random.default_rng(rng_seed)
    idx = np.searchsorted(cdf, rng.random(T) * cdf[-1], side="right")
    idx = np.minimum(idx, len(perms) - 1)
    return empirical_distribution(perms[i] for i in idx)
