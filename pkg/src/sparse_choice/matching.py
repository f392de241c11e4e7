"""Bipartite matching primitives on small dense graphs.

Rows and columns are 0-based here; callers translate to the 1-based
conventions of the public API. ``adj[i][j]`` is truthy when row ``i`` may be
matched to column ``j``.
"""
from __future__ import annotations

import math
from typing import Sequence

INF = math.inf


def _augment(adj, row, seen, match_col, banned_cols=None):
    for col, ok in enumerate(adj[row]):
        if not ok or seen[col] or (banned_cols is not None and col in banned_cols):
            continue
        seen[col] = True
        if match_col[col] < 0 or _augment(adj, match_col[col], seen, match_col, banned_cols):
            match_col[col] = row
            return True
    return False


def maximum_matching(adj: Sequence[Sequence[bool]], rows=None, banned_cols=None) -> list[int]:
    """Kuhn's algorithm. Returns ``match_col`` (column -> row or -1)."""
    ncols = len(adj[0]) if len(adj) else 0
    match_col = [-1] * ncols
    for row in range(len(adj)) if rows is None else rows:
        _augment(adj, row, [False] * ncols, match_col, banned_cols)
    return match_col


def perfect_matching(adj: Sequence[Sequence[bool]]) -> list[int] | None:
    """Row -> column assignment covering every row, or None."""
    n = len(adj)
    match_col = maximum_matching(adj)
    row_to_col = [-1] * n
    for col, row in enumerate(match_col):
        if row >= 0:
            row_to_col[row] = col
    if min(row_to_col, default=0) < 0:
        return None
    return row_to_col


def hall_witness(adj: Sequence[Sequence[bool]]) -> tuple[list[int], list[int]]:
    """Row set S and its neighbourhood with ``len(N(S)) < len(S)``.

    Only meaningful when no perfect matching exists; returns empty lists
    otherwise.
    """
    n = len(adj)
    match_col = maximum_matching(adj)
    matched_rows = {r for r in match_col if r >= 0}
    free = [r for r in range(n) if r not in matched_rows]
    if not free:
        return [], []
    rows, cols = {free[0]}, set()
    stack = [free[0]]
    while stack:
        r = stack.pop()
        for c, ok in enumerate(adj[r]):
            if ok and c not in cols:
                cols.add(c)
                nxt = match_col[c]
                if nxt >= 0 and nxt not in rows:
                    rows.add(nxt)
                    stack.append(nxt)
    return sorted(rows), sorted(cols)


def lex_smallest_perfect_matching(adj: Sequence[Sequence[bool]]) -> list[int] | None:
    """Perfect matching whose row -> column sequence is lexicographically smallest."""
    n = len(adj)
    if perfect_matching(adj) is None:
        return None
    chosen: list[int] = []
    used: set[int] = set()
    for row in range(n):
        for col in range(n):
            if not adj[row][col] or col in used:
                continue
            trial = used | {col}
            rest = range(row + 1, n)
            match_col = maximum_matching(adj, rows=rest, banned_cols=trial)
            if sum(1 for r in match_col if r >= 0) == n - row - 1:
                chosen.append(col)
                used.add(col)
                break
        else:  # pragma: no cover - guarded by the feasibility check above
            return None
    return chosen


def hungarian_min(cost: Sequence[Sequence[float]]):
    """Minimum-cost perfect assignment with ``math.inf`` marking forbidden cells.

    Returns ``(row_to_col, u, v)`` where the potentials satisfy
    ``cost[i][j] >= u[i] + v[j]`` with equality on the assignment, or None
    when no finite-cost perfect assignment exists.
    """
    n = len(cost)
    if n == 0:
        return [], [], []
    # 1-based arrays with a virtual column 0, as in the classic O(n^3) scheme
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            row = cost[i0 - 1]
            ui0 = u[i0]
            delta = INF
            j1 = -1
            for j in range(1, n + 1):
                if used[j]:
                    continue
                c = row[j - 1]
                if c != INF:
                    cur = c - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            if j1 < 0 or delta == INF:
                return None
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    row_to_col = [0] * n
    for j in range(1, n + 1):
        row_to_col[p[j] - 1] = j - 1
    return row_to_col, u[1:], v[1:]


def max_weight_assignment(weights: Sequence[Sequence[float]], allowed=None, lexicographic: bool = True):
    """Maximum-weight perfect assignment, ties broken lexicographically.

    ``allowed`` is an optional boolean mask. Returns ``(row_to_col, value)``
    or None if the allowed cells admit no perfect assignment.
    """
    n = len(weights)
    if n == 0:
        return [], 0.0
    cost = [
        [(-float(w) if allowed is None or allowed[i][j] else INF) for j, w in enumerate(row)]
        for i, row in enumerate(weights)
    ]
    solved = hungarian_min(cost)
    if solved is None:
        return None
    row_to_col, u, v = solved
    if lexicographic:
        scale = 1.0 + max(abs(c) for row in cost for c in row if c != INF)
        tol = 1e-10 * scale
        tight = [
            [cost[i][j] != INF and cost[i][j] - u[i] - v[j] <= tol for j in range(n)]
            for i in range(n)
        ]
        # one tight cell per row means the optimum is unique
        if sum(map(sum, tight)) > n:
            lex = lex_smallest_perfect_matching(tight)
            if lex is not None:
                row_to_col = lex
    value = math.fsum(float(weights[i][c]) for i, c in enumerate(row_to_col))
    return row_to_col, value
