"""Drivers over candidate signature sets and quantized probability vectors."""
from __future__ import annotations

import logging
import math
from dataclasses import replace
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator

from ..core import as_array
from ..signature import candidate_signature_sets
from .mwu import RecoveryResult, _finish, _run, mwu_feasibility

log = logging.getLogger(__name__)


def _check_epsilon(epsilon):
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")


def _recover_range(d, k, epsilon, first_cells):
    tried = 0
    for sig in candidate_signature_sets(d, k, epsilon, first_cells=first_cells):
        tried += 1
        res = mwu_feasibility(d, sig, epsilon)
        if res is not None:
            return res, tried
    return None, tried


def recover(d, k: int, epsilon: float, workers: int = 1) -> RecoveryResult | None:
    """First candidate signature set (lexicographic) on which the MWU search succeeds.

    With ``workers > 1`` the first-cell index range is split into contiguous
    shards run in separate processes; the answer is still the
    lexicographically first success.
    """
    _check_epsilon(epsilon)
    arr = as_array(d)
    size = arr.size
    if workers <= 1:
        res, tried = _recover_range(arr, k, epsilon, None)
    else:
        step = math.ceil(size / workers)
        shards = [range(s, min(s + step, size)) for s in range(0, size, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_recover_range, [arr] * len(shards), [k] * len(shards),
                                     [epsilon] * len(shards), shards))
        tried = 0
        res = None
        for found, count in outcomes:
            tried += count
            if found is not None:
                res = found
                break
    if res is None:
        return None
    return replace(res, candidates_tried=tried)


def recover_search(
    d,
    epsilon0: float,
    k_max: int | None = None,
    epsilon_floor: float | None = None,
) -> RecoveryResult | None:
    """Grow K at tolerance ``epsilon0`` until a model is found, then halve epsilon.

    Halving stops at the first failure, when the result is already exact, or
    below ``epsilon_floor`` (default ``epsilon0 / 4``; each halving quadruples
    the MWU budget).
    """
    _check_epsilon(epsilon0)
    arr = as_array(d)
    n = arr.shape[0]
    cap = (n - 1) ** 2 + 1
    k_max = cap if k_max is None else min(k_max, cap)
    floor = epsilon0 / 4 if epsilon_floor is None else epsilon_floor
    best = None
    for k in range(1, k_max + 1):
        best = recover(arr, k, epsilon0)
        if best is not None:
            break
    if best is None:
        log.warning("no signature model with K <= %d at epsilon %.3g", k_max, epsilon0)
        return None
    eps = epsilon0
    while best.achieved_linf > 0 and eps / 2 >= floor:
        eps /= 2
        nxt = recover(arr, best.k, eps)
        if nxt is None:
            break
        best = nxt
    return best


def quantized_vectors(k: int, epsilon: float) -> Iterator[tuple[float, ...]]:
    """Nondecreasing vectors of positive multiples of epsilon/k with sum in [1-eps, 1+eps]."""
    q = epsilon / k
    lo = max(k, math.ceil(k * (1 - epsilon) / epsilon - 1e-9))
    hi = math.floor(k * (1 + epsilon) / epsilon + 1e-9)

    def build(prefix, smallest, remaining_slots, total):
        if remaining_slots == 0:
            if lo <= total <= hi:
                yield tuple(m * q for m in prefix)
            return
        m = smallest
        while total + m * remaining_slots <= hi:
            yield from build(prefix + [m], m, remaining_slots - 1, total + m)
            m += 1

    yield from build([], 1, k, 0)


def recover_without_signature(d, k: int, epsilon: float) -> RecoveryResult | None:
    """Search over quantized probability vectors instead of signature cells.

    Each column of the MWU iterate is an unconstrained permutation carrying
    mass ``p_i``; the first vector whose averaged model passes the final
    error check is returned.
    """
    _check_epsilon(epsilon)
    if k < 1:
        raise ValueError("k must be >= 1")
    arr = as_array(d)
    tried = 0
    for probs in quantized_vectors(k, epsilon):
        tried += 1
        columns = [(p, None, frozenset()) for p in probs]
        state, _ = _run(arr, epsilon, columns)
        if state is None:
            continue
        res = _finish(arr, epsilon, state, k=k, probabilities=probs, candidates_tried=tried, method="quantized-mwu")
        if res is not None:
            return res
    return None
