"""Multiplicative-weights feasibility search over signature-family models.

For a fixed set of K signature cells the unknown model is a K-column
matrix Z: column k is a permutation through cell k avoiding the other
signature cells, and it carries mass ``d[cell_k]``. The hard constraints
``|sum_k Z[:, k] d_k - d| <= eps`` (2 N^2 rows) are relaxed with
multiplicative weights; each round solves one assignment problem per column.
"""
from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..core import Permutation, SparseChoiceModel, as_array, marginal_matrix
from ..signature import SignatureSet
from .oracle import assignment_oracle

log = logging.getLogger(__name__)


def mwu_step(epsilon: float) -> float:
    return min(epsilon / 8.0, 0.5)


def mwu_budget(n: int, epsilon: float) -> int:
    """Iteration count ``ceil(64 * eps^-2 * ln(2 N^2))``."""
    raw = 64.0 * math.log(2 * n * n) / (epsilon * epsilon)
    nearest = round(raw)
    if abs(raw - nearest) <= 1e-9 * raw:
        return int(nearest)
    return math.ceil(raw)


@dataclass(frozen=True)
class ConstraintSystem:
    """Rows ``s * y(i,j) >= s * d(i,j) - eps`` for s in (+1, -1), y = Z d_sig.

    Row order: all ``+`` rows in row-major cell order, then all ``-`` rows.
    """

    d: np.ndarray
    epsilon: float

    @property
    def n(self) -> int:
        return self.d.shape[0]

    @property
    def size(self) -> int:
        return 2 * self.n * self.n

    @property
    def b(self) -> np.ndarray:
        flat = self.d.ravel()
        return np.concatenate([flat - self.epsilon, -flat - self.epsilon])

    def slack(self, y: np.ndarray) -> np.ndarray:
        """``a_l . z - b_l`` for every row, given the marginals ``y`` of z."""
        diff = (y - self.d).ravel()
        return np.concatenate([diff + self.epsilon, -diff + self.epsilon])


@dataclass
class MWUState:
    weights: np.ndarray
    step: float
    budget: int
    history: dict = field(default_factory=lambda: defaultdict(float))
    iterations: int = 0

    @classmethod
    def start(cls, system: ConstraintSystem) -> "MWUState":
        return cls(np.ones(system.size), mwu_step(system.epsilon), mwu_budget(system.n, system.epsilon))

    def update(self, slack: np.ndarray) -> None:
        self.weights *= 1.0 - self.step * slack
        total = self.weights.sum()
        if not np.all(self.weights > 0) or not math.isfinite(total):
            raise FloatingPointError("multiplicative weights left (0, inf)")
        self.weights *= self.weights.size / total
        self.iterations += 1


@dataclass(frozen=True)
class RecoveryResult:
    model: SparseChoiceModel  # normalized
    total_mass: float  # mass of the mixture before normalization
    achieved_linf: float  # ||M(model) - d||_inf, recomputed from `model`
    unnormalized_linf: float  # same for the raw mixture
    epsilon: float
    k: int
    iterations: int
    signature: SignatureSet | None = None
    probabilities: tuple[float, ...] | None = None
    candidates_tried: int = 0
    method: str = "signature-mwu"

    @property
    def support_size(self) -> int:
        return self.model.support_size


def _run(
    d: np.ndarray,
    epsilon: float,
    columns: Sequence[tuple[float, tuple[int, int] | None, frozenset]],
    budget: int | None = None,
):
    """Shared MWU loop. ``columns`` holds (mass, fixed cell, forbidden cells)."""
    system = ConstraintSystem(d, epsilon)
    state = MWUState.start(system)
    if budget is not None:
        state.budget = budget
    n = system.n
    nn = n * n
    rows = np.arange(n)
    b = system.b
    for t in range(state.budget):
        p = state.weights
        W = (p[:nn] - p[nn:]).reshape(n, n)
        y = np.zeros((n, n))
        lagrangian = 0.0
        picks = []
        cache = {}
        for mass, fixed, forbidden in columns:
            key = (fixed, forbidden)
            if key not in cache:
                cache[key] = assignment_oracle(W, fixed, forbidden)
            res = cache[key]
            if res is None:
                log.debug("column with fixed cell %s has no feasible permutation", fixed)
                return None, state
            lagrangian += mass * res.value
            y[rows, res.permutation.zero_based()] += mass
            picks.append((res.permutation, mass))
        objective = lagrangian - float(p @ b)
        if objective < -1e-12 * (1.0 + float(np.abs(p @ b))):
            log.debug("negative Lagrangian %.3g at iteration %d", objective, t)
            return None, state
        for perm, mass in picks:
            state.history[perm] += mass
        state.update(system.slack(y))
    return state, state


def _finish(d, epsilon, state, **extra) -> RecoveryResult | None:
    T = state.iterations
    mix = SparseChoiceModel({p: v / T for p, v in state.history.items()}, n=d.shape[0])
    raw_err = float(np.abs(marginal_matrix(mix) - d).max())
    model = mix.normalized()
    err = float(np.abs(marginal_matrix(model) - d).max())
    if raw_err > 2 * epsilon + 1e-12 or err > 2 * epsilon + 2 * epsilon**2:
        log.debug("final check failed: raw %.4g, normalized %.4g", raw_err, err)
        return None
    return RecoveryResult(
        model=model,
        total_mass=mix.total_mass,
        achieved_linf=err,
        unnormalized_linf=raw_err,
        epsilon=epsilon,
        iterations=T,
        **extra,
    )


def mwu_feasibility(d, sig: SignatureSet, epsilon: float, budget: int | None = None) -> RecoveryResult | None:
    """Search for a model with signature cells ``sig`` within 2*epsilon of ``d`` (l_inf).

    Returns None when the set is certified infeasible (negative Lagrangian
    objective or a column with no valid permutation) or when the averaged
    model fails the final error check.
    """
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    arr = as_array(d)
    cells = tuple(sig.cells)
    values = sig.values(arr)
    columns = [(values[k], cells[k], frozenset(cells[:k] + cells[k + 1:])) for k in range(len(cells))]
    state, _ = _run(arr, epsilon, columns, budget)
    if state is None:
        return None
    return _finish(arr, epsilon, state, k=len(cells), signature=sig)
