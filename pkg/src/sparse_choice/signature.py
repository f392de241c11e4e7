"""The signature condition and enumeration of candidate signature cell sets."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .core import Permutation, SparseChoiceModel, as_array

Cell = tuple[int, int]


@dataclass(frozen=True)
class SignatureSet:
    """K distinct (item, rank) cells, 1-based, in lexicographic order."""

    cells: tuple[Cell, ...]

    def __post_init__(self):
        cells = tuple((int(i), int(j)) for i, j in self.cells)
        if not cells:
            raise ValueError("a signature set needs at least one cell")
        if len(set(cells)) != len(cells):
            raise ValueError(f"duplicate cells in {cells}")
        if any(i < 1 or j < 1 for i, j in cells):
            raise ValueError("cells are 1-based")
        object.__setattr__(self, "cells", cells)

    @property
    def k(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __len__(self):
        return len(self.cells)

    def values(self, d) -> list[float]:
        arr = as_array(d)
        return [float(arr[i - 1, j - 1]) for i, j in self.cells]


@dataclass(frozen=True)
class SignatureCheck:
    holds: bool
    witness: dict  # Permutation -> first unique cell
    missing: tuple[Permutation, ...]

    def __bool__(self):
        return self.holds


def check_signature(model: SparseChoiceModel | list[Permutation]) -> SignatureCheck:
    """Does every support permutation own a cell no other support permutation hits?"""
    support = list(model.support() if isinstance(model, SparseChoiceModel) else model)
    usage = Counter(cell for perm in support for cell in perm.cells())
    witness = {}
    missing = []
    for perm in support:
        unique = [cell for cell in perm.cells() if usage[cell] == 1]
        if unique:
            witness[perm] = min(unique)
        else:
            missing.append(perm)
    return SignatureCheck(not missing, witness, tuple(missing))


def candidate_signature_sets(
    d, k: int, epsilon: float, first_cells: range | None = None, slack: float = 1e-12
) -> Iterator[SignatureSet]:
    """K-subsets of cells whose data mass lies in ``[1 - epsilon, 1 + epsilon]``.

    Subsets come out in lexicographic order of their row-major cell indices.
    ``first_cells`` restricts the row-major index of the first cell, so
    disjoint ranges can be handed to separate workers and merged in order.
    """
    arr = as_array(d)
    n = arr.shape[0]
    if not 1 <= k <= n * n:
        raise ValueError(f"k must lie in [1, {n * n}]")
    values = arr.ravel().tolist()
    size = len(values)
    lo, hi = 1.0 - epsilon - slack, 1.0 + epsilon + slack
    # best achievable mass from picking `r` cells at index >= start
    best_tail = [[0.0] * (k + 1) for _ in range(size + 1)]
    for start in range(size - 1, -1, -1):
        top = sorted(values[start:], reverse=True)
        acc = 0.0
        for r in range(1, k + 1):
            if r <= len(top):
                acc += top[r - 1]
            best_tail[start][r] = acc
    firsts = range(size) if first_cells is None else first_cells
    chosen: list[int] = []

    def extend(start: int, mass: float, stop: int):
        need = k - len(chosen)
        if need == 0:
            if lo <= mass <= hi:
                yield SignatureSet(tuple((c // n + 1, c % n + 1) for c in chosen))
            return
        for idx in range(start, min(stop, size - need + 1)):
            new_mass = mass + values[idx]
            if new_mass > hi:
                continue
            if new_mass + best_tail[idx + 1][need - 1] < lo:
                continue
            chosen.append(idx)
            yield from extend(idx + 1, new_mass, size)
            chosen.pop()

    for first in firsts:
        if first >= size - k + 1:
            break
        yield from extend(first, 0.0, first + 1)
