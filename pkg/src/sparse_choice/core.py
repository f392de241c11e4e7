"""Permutations, sparse choice models and first-order marginal matrices.

Conventions used throughout the package:

* items and ranks are 1-based in every public surface;
* ``Permutation.ranks[i - 1]`` is the rank given to item ``i``;
* the string form lists candidates by rank position, so ``"24153"`` puts
  candidate 2 first, candidate 4 second and so on.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import ConvergenceError, DimensionError, InvalidModelError, SizeLimitError

DS_TOL = 1e-9
MAX_ENUMERATION_N = 8


@dataclass(frozen=True, order=True)
class Permutation:
    """A rank assignment: ``ranks[i-1]`` is the position of item ``i``."""

    ranks: tuple[int, ...]

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        if sorted(ranks) != list(range(1, len(ranks) + 1)):
            raise InvalidModelError(f"not a permutation of 1..{len(ranks)}: {self.ranks!r}")
        object.__setattr__(self, "ranks", ranks)

    @property
    def n(self) -> int:
        return len(self.ranks)

    def __len__(self):
        return len(self.ranks)

    def __call__(self, item: int) -> int:
        return self.ranks[item - 1]

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "Permutation":
        """Build from candidates listed by rank (``order[0]`` is ranked first)."""
        n = len(order)
        if sorted(order) != list(range(1, n + 1)):
            raise InvalidModelError(f"not an ordering of 1..{n}: {order!r}")
        ranks = [0] * n
        for position, candidate in enumerate(order, start=1):
            ranks[candidate - 1] = position
        return cls(tuple(ranks))

    @classmethod
    def from_zero_based(cls, columns: Sequence[int]) -> "Permutation":
        """Build from a 0-based item -> rank array (as matching routines return)."""
        return cls(tuple(int(c) + 1 for c in columns))

    @classmethod
    def from_string(cls, text: str) -> "Permutation":
        """Parse ``"24153"`` or ``"2,4,1,5,3"`` (candidates listed by rank)."""
        text = text.strip()
        if "," in text:
            order = [int(tok) for tok in text.split(",")]
        else:
            if not text.isdigit():
                raise InvalidModelError(f"bad permutation string {text!r}")
            order = [int(ch) for ch in text]
        return cls.from_order(order)

    def order(self) -> tuple[int, ...]:
        """Candidates listed by rank position."""
        out = [0] * self.n
        for item, rank in enumerate(self.ranks, start=1):
            out[rank - 1] = item
        return tuple(out)

    def to_string(self) -> str:
        order = self.order()
        if self.n <= 9:
            return "".join(str(c) for c in order)
        return ",".join(str(c) for c in order)

    def cells(self) -> tuple[tuple[int, int], ...]:
        """The (item, rank) cells this permutation occupies, 1-based."""
        return tuple((i, r) for i, r in enumerate(self.ranks, start=1))

    def zero_based(self) -> tuple[int, ...]:
        return tuple(r - 1 for r in self.ranks)

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n))
        m[np.arange(self.n), np.asarray(self.zero_based())] = 1.0
        return m

    def relabel(self, pi: "Permutation") -> "Permutation":
        """Rename item ``i`` to ``pi(i)`` keeping every rank."""
        ranks = [0] * self.n
        for item, rank in enumerate(self.ranks, start=1):
            ranks[pi(item) - 1] = rank
        return Permutation(tuple(ranks))

    def __str__(self):
        return self.to_string()


class SparseChoiceModel:
    """Finite map from permutations to positive probability mass.

    Zero entries are dropped on construction. The model need not be
    normalized; ``total_mass`` records the mass it carries and
    :meth:`normalized` rescales it to one.
    """

    __slots__ = ("_entries", "_n", "_total")

    def __init__(self, entries: Mapping[Permutation, float] | Iterable[tuple[Permutation, float]], n: int | None = None):
        items = entries.items() if isinstance(entries, Mapping) else entries
        merged: dict[Permutation, float] = {}
        for perm, prob in items:
            if not isinstance(perm, Permutation):
                perm = Permutation(tuple(perm))
            prob = float(prob)
            if not math.isfinite(prob) or prob < 0:
                raise InvalidModelError(f"probability for {perm} must be finite and >= 0, got {prob}")
            merged[perm] = merged.get(perm, 0.0) + prob
        merged = {p: v for p, v in merged.items() if v > 0}
        sizes = {p.n for p in merged}
        if n is None:
            if not sizes:
                raise InvalidModelError("empty model needs an explicit n")
            n = sizes.pop() if len(sizes) == 1 else -1
        if any(s != n for s in sizes) or n < 1:
            raise InvalidModelError(f"permutations of mixed or invalid size (n={n})")
        self._entries = dict(sorted(merged.items()))
        self._n = n
        self._total = math.fsum(self._entries.values())

    @property
    def n(self) -> int:
        return self._n

    @property
    def total_mass(self) -> float:
        return self._total

    @property
    def support_size(self) -> int:
        return len(self._entries)

    def __len__(self):
        return len(self._entries)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self._entries)

    def __contains__(self, perm):
        return perm in self._entries

    def items(self):
        return self._entries.items()

    def probability(self, perm: Permutation) -> float:
        return self._entries.get(perm, 0.0)

    def support(self) -> tuple[Permutation, ...]:
        return tuple(self._entries)

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self._total - 1.0) <= tol

    def normalized(self) -> "SparseChoiceModel":
        if self._total <= 0:
            raise InvalidModelError("cannot normalize a model with zero mass")
        return SparseChoiceModel({p: v / self._total for p, v in self._entries.items()}, n=self._n)

    def scaled(self, factor: float) -> "SparseChoiceModel":
        return SparseChoiceModel({p: v * factor for p, v in self._entries.items()}, n=self._n)

    def __eq__(self, other):
        if not isinstance(other, SparseChoiceModel):
            return NotImplemented
        return self._n == other._n and self._entries == other._entries

    def __repr__(self):
        body = ", ".join(f"{p}: {v:.6g}" for p, v in self._entries.items())
        return f"SparseChoiceModel(n={self._n}, {{{body}}})"

    @classmethod
    def point_mass(cls, perm: Permutation) -> "SparseChoiceModel":
        return cls({perm: 1.0})


def mixture(models: Sequence[SparseChoiceModel], weights: Sequence[float]) -> SparseChoiceModel:
    """Weighted sum ``sum_k weights[k] * models[k]`` (no renormalization)."""
    if len(models) != len(weights):
        raise DimensionError("models and weights differ in length")
    ns = {m.n for m in models}
    if len(ns) != 1:
        raise DimensionError("models of different sizes")
    pairs = [(p, w * v) for m, w in zip(models, weights) for p, v in m.items()]
    return SparseChoiceModel(pairs, n=ns.pop())


class StochasticMatrix:
    """Square nonnegative matrix whose rows and columns sum to one."""

    __slots__ = ("_values",)

    def __init__(self, values, tol: float = DS_TOL):
        arr = np.array(values, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise DimensionError(f"expected a non-empty square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidModelError("matrix has non-finite entries")
        if np.any(arr < 0):
            raise InvalidModelError("matrix has negative entries")
        res = stochastic_residual(arr)
        if res > tol:
            raise InvalidModelError(f"row/column sums deviate from 1 by {res:.3g} (tol {tol:g})")
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n(self) -> int:
        return self._values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self._values if dtype is None else self._values.astype(dtype)

    def __getitem__(self, key):
        return self._values[key]

    def cell(self, i: int, j: int) -> float:
        """Entry at 1-based (item, rank)."""
        return float(self._values[i - 1, j - 1])

    def __eq__(self, other):
        if not isinstance(other, StochasticMatrix):
            return NotImplemented
        return np.array_equal(self._values, other._values)

    def __repr__(self):
        return f"StochasticMatrix({self._values.tolist()!r})"


def stochastic_residual(m) -> float:
    """Largest deviation of any row or column sum from one."""
    arr = np.asarray(m, dtype=float)
    return float(max(np.max(np.abs(arr.sum(axis=1) - 1.0)), np.max(np.abs(arr.sum(axis=0) - 1.0))))


def as_array(m) -> np.ndarray:
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def marginal_matrix(model: SparseChoiceModel) -> np.ndarray:
    """Raw marginal sums for any (possibly unnormalized) model."""
    n = model.n
    out = np.zeros((n, n))
    rows = np.arange(n)
    for perm, prob in model.items():
        out[rows, perm.zero_based()] += prob
    return out


def marginals(model: SparseChoiceModel, tol: float = DS_TOL) -> StochasticMatrix:
    """First-order marginals: entry (i, j) is the mass ranking item i at j."""
    if abs(model.total_mass - 1.0) > tol:
        raise InvalidModelError(f"model mass is {model.total_mass!r}, expected 1 (tol {tol:g})")
    return StochasticMatrix(marginal_matrix(model), tol=tol)


def distance(a, b, norm: str = "l2") -> float:
    a, b = as_array(a), as_array(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch {a.shape} vs {b.shape}")
    diff = np.abs(a - b)
    if norm == "l2":
        return float(np.sqrt(np.sum(diff * diff)))
    if norm == "linf":
        return float(diff.max())
    raise ValueError(f"unknown norm {norm!r}")


def relative_error(approx, reference, mode: str = "mean") -> float:
    """Entrywise relative error ``sum |approx - ref| / ref``.

    ``mode="sum"`` returns the plain sum over all N^2 cells, ``"mean"``
    divides it by N^2. Cells where both matrices agree contribute zero even
    when the reference entry is zero.
    """
    a, r = as_array(approx), as_array(reference)
    if a.shape != r.shape:
        raise DimensionError(f"dimension mismatch {a.shape} vs {r.shape}")
    if mode not in ("sum", "mean"):
        raise ValueError(f"unknown mode {mode!r}")
    diff = np.abs(a - r)
    bad = np.argwhere((r == 0) & (diff > 0))
    if len(bad):
        i, j = bad[0] + 1
        raise ZeroDivisionError(f"reference entry ({i}, {j}) is zero but approx differs")
    mask = diff > 0
    total = float(np.sum(diff[mask] / r[mask]))
    return total if mode == "sum" else total / a.size


def sinkhorn_normalize(m, tol: float = 1e-12, max_iters: int = 10_000) -> StochasticMatrix:
    """Alternate row and column scaling until all sums are within ``tol`` of 1."""
    arr = as_array(m).copy()
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise InvalidModelError("sinkhorn input must be finite and nonnegative")
    if np.any(arr.sum(axis=1) <= 0) or np.any(arr.sum(axis=0) <= 0):
        raise InvalidModelError("every row and column needs a positive entry")
    residual = stochastic_residual(arr)
    for _ in range(max_iters):
        if residual <= tol:
            return StochasticMatrix(arr, tol=max(tol, DS_TOL))
        arr /= arr.sum(axis=1, keepdims=True)
        arr /= arr.sum(axis=0, keepdims=True)
        residual = stochastic_residual(arr)
    if residual <= tol:
        return StochasticMatrix(arr, tol=max(tol, DS_TOL))
    raise ConvergenceError(f"sinkhorn did not converge: residual {residual:.3g}", residual, max_iters)


def perturb(d, noise_bound: float, rng_seed=None) -> StochasticMatrix:
    """Add bounded random noise to a doubly stochastic matrix and rebalance.

    The noise has l2 norm exactly ``noise_bound`` before clipping negatives.
    If rebalancing fails or moves the result more than ``2 * noise_bound``
    from ``d`` the noise is halved and the attempt repeated.
    """
    base = as_array(d)
    if noise_bound < 0:
        raise ValueError("noise_bound must be >= 0")
    if noise_bound == 0:
        return StochasticMatrix(base)
    rng = np.random.default_rng(rng_seed)
    eta = rng.uniform(-1.0, 1.0, size=base.shape)
    norm = np.linalg.norm(eta)
    if norm == 0:
        return StochasticMatrix(base)
    eta *= noise_bound / norm
    for _ in range(60):
        noisy = np.clip(base + eta, 0.0, None)
        try:
            out = sinkhorn_normalize(noisy, max_iters=1000)
        except (ConvergenceError, InvalidModelError):
            out = None
        if out is not None and distance(out, base) <= 2 * noise_bound:
            return out
        eta *= 0.5
    return StochasticMatrix(base)


def all_permutations(n: int) -> Iterator[Permutation]:
    """Every permutation of size n in lexicographic order of ``ranks``."""
    for ranks in itertools.permutations(range(1, n + 1)):
        yield Permutation(ranks)


def sjt_orders(n: int) -> Iterator[tuple[int, ...]]:
    """Steinhaus-Johnson-Trotter: orderings of 1..n, successive ones differ by one adjacent swap."""
    perm = list(range(1, n + 1))
    direction = [-1] * n  # -1 points left
    yield tuple(perm)
    while True:
        mobile = -1
        mobile_pos = -1
        for pos, value in enumerate(perm):
            nxt = pos + direction[pos]
            if 0 <= nxt < n and perm[nxt] < value and value > mobile:
                mobile, mobile_pos = value, pos
        if mobile < 0:
            return
        nxt = mobile_pos + direction[mobile_pos]
        perm[mobile_pos], perm[nxt] = perm[nxt], perm[mobile_pos]
        direction[mobile_pos], direction[nxt] = direction[nxt], direction[mobile_pos]
        for pos, value in enumerate(perm):
            if value > mobile:
                direction[pos] = -direction[pos]
        yield tuple(perm)


def sjt_permutations(n: int) -> Iterator[Permutation]:
    if n > MAX_ENUMERATION_N:
        raise SizeLimitError(f"refusing to enumerate {n}! permutations (limit n <= {MAX_ENUMERATION_N})")
    for order in sjt_orders(n):
        yield Permutation.from_order(order)
