"""Greedy sparse fit: truncated bottleneck Birkhoff decomposition.

A heuristic with no recovery guarantee. It keeps the heaviest terms of the
decomposition until the renormalized marginals are within ``epsilon`` (l2).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..birkhoff import decompose
from ..core import SparseChoiceModel, as_array, marginal_matrix, stochastic_residual
from ..errors import InvalidModelError
from ..signature import check_signature


@dataclass(frozen=True)
class GreedyResult:
    model: SparseChoiceModel
    l2_error: float
    is_signature: bool
    full_terms: int
    heuristic: bool = True


def greedy_fit(d, epsilon: float) -> GreedyResult:
    arr = as_array(d)
    if stochastic_residual(arr) > 1e-6:
        raise InvalidModelError("input is not doubly stochastic within 1e-6")
    terms = sorted(decompose(arr).terms, key=lambda t: -t[1])
    best = None
    for m in range(1, len(terms) + 1):
        model = SparseChoiceModel(terms[:m]).normalized()
        err = float(np.linalg.norm(marginal_matrix(model) - arr))
        if best is None or err < best[1]:
            best = (model, err)
        if err <= epsilon:
            best = (model, err)
            break
    model, err = best
    return GreedyResult(model, err, check_signature(model).holds, len(terms))
