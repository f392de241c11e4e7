"""Greedy Birkhoff-von Neumann decomposition with bottleneck matchings."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DS_TOL, Permutation, SparseChoiceModel, as_array, stochastic_residual
from .errors import InvalidModelError, NotDoublyStochasticError
from .matching import hall_witness, lex_smallest_perfect_matching, perfect_matching


@dataclass(frozen=True)
class Decomposition:
    terms: tuple[tuple[Permutation, float], ...]
    residual_norm: float

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, w in self.terms))

    def as_model(self) -> SparseChoiceModel:
        return SparseChoiceModel(self.terms, n=self.terms[0][0].n if self.terms else None)

    def reconstruct(self) -> np.ndarray:
        n = self.terms[0][0].n
        out = np.zeros((n, n))
        for perm, w in self.terms:
            out[np.arange(n), perm.zero_based()] += w
        return out


def bottleneck_matching(m: np.ndarray, tol: float) -> list[int] | None:
    """Perfect matching on entries > tol maximizing the smallest matched entry.

    Among matchings attaining the best bottleneck the lexicographically
    smallest row -> column assignment is returned.
    """
    levels = np.unique(m[m > tol])
    if levels.size == 0:
        return None
    if perfect_matching(m > tol) is None:
        return None
    lo, hi = 0, levels.size - 1  # levels[lo] always admits a matching
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if perfect_matching(m >= levels[mid]) is not None:
            lo = mid
        else:
            hi = mid - 1
    return lex_smallest_perfect_matching((m >= levels[lo]).tolist())


def decompose(d, tol: float = DS_TOL) -> Decomposition:
    """Write ``d`` as a convex combination of permutation matrices.

    Each step takes the bottleneck matching on the remaining positive entries,
    emits it with weight equal to its smallest entry and subtracts. At least
    one entry reaches zero per step, so at most ``(n-1)**2 + 1`` terms appear.
    """
    work = as_array(d).copy()
    n = work.shape[0]
    if np.any(work < -tol):
        raise InvalidModelError("matrix has negative entries")
    res = stochastic_residual(work)
    if res > max(tol, DS_TOL) * n:
        raise InvalidModelError(f"matrix is not doubly stochastic (residual {res:.3g})")
    work[work <= tol] = 0.0
    rows = np.arange(n)
    terms: list[tuple[Permutation, float]] = []
    while work.sum() > tol * n:
        match = bottleneck_matching(work, tol)
        if match is None:
            hall_rows, hall_cols = hall_witness((work > tol).tolist())
            raise NotDoublyStochasticError(
                f"no perfect matching on the positive support after {len(terms)} terms; "
                f"rows {[r + 1 for r in hall_rows]} only reach columns {[c + 1 for c in hall_cols]}",
                rows=[r + 1 for r in hall_rows],
                columns=[c + 1 for c in hall_cols],
            )
        cols = np.asarray(match)
        weight = float(work[rows, cols].min())
        work[rows, cols] -= weight
        work[work <= tol] = 0.0
        terms.append((Permutation.from_zero_based(match), weight))
    return Decomposition(tuple(terms), float(np.abs(work).max()) if n else 0.0)
