"""Plain-text formats for models, matrices, ballots and family parameters.

Model file:   one ``<perm-string> <probability>`` line per permutation,
              probabilities with 6 decimals, heaviest first.
Matrix file:  N lines of N comma-separated decimals (item rows, rank columns).
Ballot file:  ``<perm-string>,<count>`` lines.

Blank lines and lines starting with ``#`` are ignored by every reader.
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable

import numpy as np

from .core import DS_TOL, Permutation, SparseChoiceModel, StochasticMatrix, sinkhorn_normalize, stochastic_residual
from .errors import InvalidModelError
from .generators import ExpFamParams, MNLParams


def _lines(text: str) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _read(source) -> str:
    if isinstance(source, Path):
        return source.read_text()
    if hasattr(source, "read"):
        return source.read()
    return str(source)


def parse_model(source) -> SparseChoiceModel:
    """Parse a model file. Probabilities are kept as written (not renormalized)."""
    entries: dict[Permutation, float] = {}
    for lineno, line in _lines(_read(source)):
        parts = line.split()
        if len(parts) != 2:
            raise InvalidModelError(f"line {lineno}: expected '<perm> <probability>', got {line!r}")
        perm = Permutation.from_string(parts[0])
        try:
            prob = float(parts[1])
        except ValueError:
            raise InvalidModelError(f"line {lineno}: bad probability {parts[1]!r}") from None
        if perm in entries:
            raise InvalidModelError(f"line {lineno}: duplicate permutation {parts[0]}")
        entries[perm] = prob
    if not entries:
        raise InvalidModelError("model file has no entries")
    return SparseChoiceModel(entries)


def format_model(model: SparseChoiceModel) -> str:
    rows = sorted(model.items(), key=lambda kv: (-round(kv[1], 6), kv[0].to_string()))
    return "".join(f"{perm.to_string()} {prob:.6f}\n" for perm, prob in rows)


def parse_matrix(source, percent: bool = False, tol: float = 1e-6, balance: bool = False) -> StochasticMatrix:
    """Parse a matrix file.

    With ``percent`` the entries are divided by 100 and Sinkhorn-balanced;
    ``balance`` balances without rescaling.
    Otherwise row/column sums must be within ``tol`` of one; small
    deviations above 1e-9 are removed by Sinkhorn balancing.
    """
    rows = []
    for lineno, line in _lines(_read(source)):
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError:
            raise InvalidModelError(f"line {lineno}: non-numeric entry in {line!r}") from None
    if not rows or any(len(r) != len(rows) for r in rows):
        raise InvalidModelError(f"matrix file must hold N rows of N values, got {[len(r) for r in rows]}")
    arr = np.array(rows, dtype=float)
    if percent:
        return sinkhorn_normalize(arr / 100.0)
    if balance:
        return sinkhorn_normalize(arr)
    residual = stochastic_residual(arr)
    if residual > tol:
        raise InvalidModelError(f"row/column sums deviate from 1 by {residual:.3g}; use percent mode or fix the data")
    if residual > DS_TOL:
        return sinkhorn_normalize(arr)
    return StochasticMatrix(arr)


def format_matrix(m) -> str:
    arr = np.asarray(m, dtype=float)
    return "".join(",".join(repr(float(x)) for x in row) + "\n" for row in arr)


def parse_ballots(source) -> SparseChoiceModel:
    counts: dict[Permutation, int] = {}
    for lineno, line in _lines(_read(source)):
        perm_text, _, count_text = line.rpartition(",")
        if not perm_text:
            raise InvalidModelError(f"line {lineno}: expected '<perm>,<count>'")
        try:
            count = int(count_text)
        except ValueError:
            raise InvalidModelError(f"line {lineno}: count must be an integer, got {count_text!r}") from None
        if count <= 0:
            raise InvalidModelError(f"line {lineno}: count must be positive")
        perm = Permutation.from_string(perm_text)
        counts[perm] = counts.get(perm, 0) + count
    if not counts:
        raise InvalidModelError("ballot file has no entries")
    total = sum(counts.values())
    return SparseChoiceModel({p: c / total for p, c in counts.items()})


def parse_mnl_params(source) -> MNLParams:
    values = [float(tok) for _, line in _lines(_read(source)) for tok in line.split(",")]
    return MNLParams(tuple(values))


def parse_expfam_params(source) -> ExpFamParams:
    rows = [[float(tok) for tok in line.split(",")] for _, line in _lines(_read(source))]
    return ExpFamParams(np.array(rows))


def format_cdf_csv(rows) -> str:
    out = ["index,permutation,cdf_a,cdf_b\n"]
    for index, perm, ca, cb in rows:
        out.append(f"{index},{perm},{ca!r},{cb!r}\n")
    return "".join(out)


def models_close(a: SparseChoiceModel, b: SparseChoiceModel, places: int = 6) -> bool:
    if set(a) != set(b):
        return False
    return all(math.isclose(round(a.probability(p), places), round(b.probability(p), places)) for p in a)
