"""Parametric choice-model families, random instances and regularity checks."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .core import (
    MAX_ENUMERATION_N,
    Permutation,
    SparseChoiceModel,
    StochasticMatrix,
    marginals,
    sinkhorn_normalize,
)
from .errors import InvalidModelError, SizeLimitError


@dataclass(frozen=True)
class MNLParams:
    """Multinomial-logit (Plackett-Luce) weights, one per item."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if not w or any(not math.isfinite(x) or x <= 0 for x in w):
            raise InvalidModelError("MNL weights must be finite and > 0")
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class ExpFamParams:
    """Exponential family: P(sigma) proportional to exp(sum_i theta[i, sigma(i)])."""

    theta: np.ndarray = field(compare=False)

    def __post_init__(self):
        t = np.array(self.theta, dtype=float)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise InvalidModelError(f"theta must be a non-empty square matrix, got {t.shape}")
        if not np.all(np.isfinite(t)):
            raise InvalidModelError("theta has non-finite entries")
        t.setflags(write=False)
        object.__setattr__(self, "theta", t)

    @property
    def n(self) -> int:
        return self.theta.shape[0]


Family = Union[MNLParams, ExpFamParams]


@dataclass(frozen=True)
class ConditionReport:
    holds: bool
    ratio: float
    threshold: float
    detail: str


def mnl_sample(params: MNLParams, rng_seed=None) -> Permutation:
    """Fill ranks 1..N in turn, picking among remaining items in proportion to weight."""
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    remaining = list(range(1, params.n + 1))
    weights = list(params.weights)
    order = []
    while remaining:
        total = math.fsum(weights)
        u = rng.random() * total
        acc = 0.0
        pick = len(remaining) - 1
        for idx, w in enumerate(weights):
            acc += w
            if u < acc:
                pick = idx
                break
        order.append(remaining.pop(pick))
        weights.pop(pick)
    return Permutation.from_order(order)


def mnl_probability(params: MNLParams, perm: Permutation) -> float:
    w = params.weights
    prob = 1.0
    left = math.fsum(w)
    for candidate in perm.order():
        prob *= w[candidate - 1] / left
        left -= w[candidate - 1]
    return prob


def exact_distribution(family: Family) -> SparseChoiceModel:
    """Enumerate all N! permutations (N <= 8) with their exact probabilities."""
    n = family.n
    if n > MAX_ENUMERATION_N:
        raise SizeLimitError(f"exact enumeration limited to n <= {MAX_ENUMERATION_N}; sample instead")
    perms = [Permutation(r) for r in itertools.permutations(range(1, n + 1))]
    if isinstance(family, MNLParams):
        probs = np.array([mnl_probability(family, p) for p in perms])
    else:
        rows = np.arange(n)
        logits = np.array([family.theta[rows, p.zero_based()].sum() for p in perms])
        logits -= logits.max()
        probs = np.exp(logits)
    probs /= math.fsum(probs)
    return SparseChoiceModel(zip(perms, probs.tolist()), n=n)


def condition_check(
    family: Family,
    delta_exponent: float = 0.5,
    log=math.log,
    threshold_constant: float | None = None,
    epsilon: float | None = None,
) -> ConditionReport:
    """Regularity conditions under which sparse models exist for noisy data.

    MNL: with weights sorted ascending and ``L = ceil(N**delta_exponent)``,
    require ``w_max / sum(w[:N-L]) <= sqrt(log N) / N``.

    Exponential family: for any four distinct cells,
    ``exp(t1 + t2) / exp(t3 + t4) <= sqrt(log N)``; the extremal choice is the
    two largest entries over the two smallest.

    Passing ``threshold_constant`` (C) and ``epsilon`` replaces ``sqrt(log N)``
    by the weaker ``C * log N / epsilon**2``.
    """
    n = family.n
    if threshold_constant is not None:
        if epsilon is None:
            raise ValueError("epsilon is required with threshold_constant")
        base = threshold_constant * log(n) / epsilon**2
    else:
        base = math.sqrt(log(n)) if n > 1 else 0.0
    if isinstance(family, MNLParams):
        if not 0 < delta_exponent < 1:
            raise ValueError("delta_exponent must lie in (0, 1)")
        L = math.ceil(n**delta_exponent - 1e-12)
        if n - L < 1:
            raise ValueError(f"N - L = {n - L} < 1; need more items")
        w = sorted(family.weights)
        ratio = w[-1] / math.fsum(w[: n - L])
        threshold = base / n
        detail = f"L={L}"
    else:
        if n * n < 4:
            raise ValueError("need at least four distinct cells (N >= 2)")
        flat = np.sort(family.theta, axis=None)
        log_ratio = flat[-1] + flat[-2] - flat[0] - flat[1]
        ratio = float(np.exp(log_ratio)) if log_ratio < 700 else math.inf
        threshold = base
        detail = f"log_ratio={log_ratio:.6g}"
    return ConditionReport(bool(ratio <= threshold), float(ratio), float(threshold), detail)


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    return Permutation.from_zero_based(rng.permutation(n))


def random_sparse_model(n: int, k: int, rng_seed=None) -> SparseChoiceModel:
    """k distinct uniform permutations with uniform(0,1) weights normalized to 1."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    if k > math.factorial(n):
        raise ValueError(f"k={k} exceeds n!={math.factorial(n)}")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    if k > math.factorial(n) // 2:
        pool = [Permutation(r) for r in itertools.permutations(range(1, n + 1))]
        picks = [pool[i] for i in rng.choice(len(pool), size=k, replace=False)]
    else:
        seen: dict[Permutation, None] = {}
        while len(seen) < k:
            seen.setdefault(random_permutation(n, rng))
        picks = list(seen)
    raw = rng.uniform(0.0, 1.0, size=k)
    while np.any(raw <= 0):
        raw = rng.uniform(0.0, 1.0, size=k)
    probs = raw / math.fsum(raw)
    return SparseChoiceModel(zip(picks, probs.tolist()), n=n)


def random_doubly_stochastic(n: int, rng_seed=None, method: str = "mixture") -> StochasticMatrix:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return StochasticMatrix([[1.0]])
    if method == "mixture":
        k = min(2 * n, math.factorial(n))
        return marginals(random_sparse_model(n, k, rng_seed))
    if method == "balanced":
        rng = np.random.default_rng(rng_seed)
        return sinkhorn_normalize(rng.uniform(0.0, 1.0, size=(n, n)))
    raise ValueError(f"unknown method {method!r}")


def planted_signature_model(n: int, k: int, rng_seed=None, max_tries: int = 10_000) -> SparseChoiceModel:
    """Random k-sparse model whose support satisfies the signature condition."""
    from .signature import check_signature

    rng = np.random.default_rng(rng_seed)
    for _ in range(max_tries):
        model = random_sparse_model(n, k, rng)
        if check_signature(model).holds:
            return model
    raise RuntimeError(f"no signature support found for n={n}, k={k}")
