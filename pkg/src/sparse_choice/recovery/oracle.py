"""Best permutation for one signature column under fixed/forbidden cells."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..core import Permutation, as_array
from ..matching import max_weight_assignment

Cell = tuple[int, int]


@dataclass(frozen=True)
class OracleResult:
    permutation: Permutation
    value: float


def assignment_oracle(weights, fixed: Cell | None = None, forbidden: Iterable[Cell] = (), lexicographic: bool = True):
    """Maximum-weight permutation with ``sigma(i_fixed) = j_fixed`` avoiding ``forbidden``.

    Cells are 1-based. Solved as an assignment problem on the (N-1)x(N-1)
    matrix left after removing the fixed row and column; ties go to the
    lexicographically smallest permutation. Returns None when no permutation
    satisfies the constraints.
    """
    w = as_array(weights)
    n = w.shape[0]
    forbidden = {(int(i), int(j)) for i, j in forbidden}
    if fixed is not None:
        fi, fj = fixed
        if fixed in forbidden:
            raise ValueError(f"fixed cell {fixed} is also forbidden")
        if not (1 <= fi <= n and 1 <= fj <= n):
            raise ValueError(f"fixed cell {fixed} outside a {n}x{n} matrix")
        rows = [i for i in range(n) if i != fi - 1]
        cols = [j for j in range(n) if j != fj - 1]
    else:
        rows = cols = list(range(n))
    wl = w.tolist()
    sub = [[wl[i][j] for j in cols] for i in rows]
    allowed = None
    if forbidden:
        allowed = [[(i + 1, j + 1) not in forbidden for j in cols] for i in rows]
    solved = max_weight_assignment(sub, allowed, lexicographic=lexicographic)
    if solved is None:
        return None
    sub_match, value = solved
    ranks = [0] * n
    for r_idx, c_idx in enumerate(sub_match):
        ranks[rows[r_idx]] = cols[c_idx] + 1
    if fixed is not None:
        ranks[fi - 1] = fj
        value += wl[fi - 1][fj - 1]
    return OracleResult(Permutation(tuple(ranks)), float(value))
