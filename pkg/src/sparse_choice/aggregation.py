"""Hare (single transferable vote) elimination over a choice model."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Permutation, SparseChoiceModel


@dataclass(frozen=True)
class TallyRound:
    tallies: dict  # candidate -> first-place mass among remaining candidates
    eliminated: int


@dataclass(frozen=True)
class TallyTrace:
    rounds: tuple[TallyRound, ...]
    ranking: Permutation

    @property
    def winner(self) -> int:
        return self.ranking.order()[0]

    @property
    def elimination_order(self) -> tuple[int, ...]:
        return tuple(r.eliminated for r in self.rounds)

    def ranking_string(self) -> str:
        return self.ranking.to_string()


def _extreme_tally(model: SparseChoiceModel, remaining: set[int], last: bool) -> dict[int, float]:
    out = {c: 0.0 for c in remaining}
    for perm, prob in model.items():
        order = perm.order()
        seq = reversed(order) if last else order
        for c in seq:
            if c in remaining:
                out[c] += prob
                break
    return out


def first_place_tally(model: SparseChoiceModel, remaining) -> dict[int, float]:
    """Mass of ballots whose highest-ranked remaining candidate is each candidate."""
    remaining = set(remaining)
    if not remaining:
        raise ValueError("remaining candidate set is empty")
    if not remaining <= set(range(1, model.n + 1)):
        raise ValueError(f"candidates must lie in 1..{model.n}")
    return _extreme_tally(model, remaining, last=False)


def hare(model: SparseChoiceModel) -> TallyTrace:
    """Eliminate the weakest candidate until one remains.

    Ties on first-place mass go to the candidate with more last-place mass,
    then to the larger candidate index. The ranking lists the winner first,
    followed by the eliminated candidates from last eliminated to first.
    """
    if model.support_size == 0:
        raise ValueError("empty model")
    remaining = set(range(1, model.n + 1))
    rounds = []
    while len(remaining) > 1:
        tallies = first_place_tally(model, remaining)
        lasts = _extreme_tally(model, remaining, last=True)
        low = min(tallies.values())
        tied = [c for c, v in tallies.items() if math.isclose(v, low, rel_tol=0.0, abs_tol=1e-12)]
        loser = max(tied, key=lambda c: (lasts[c], c))
        rounds.append(TallyRound(dict(sorted(tallies.items())), loser))
        remaining.remove(loser)
    winner = remaining.pop()
    order = [winner] + [r.eliminated for r in reversed(rounds)]
    return TallyTrace(tuple(rounds), Permutation.from_order(order))
