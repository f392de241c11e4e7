"""Embedded APA election fixture (5 candidates, 5,738 complete ballots).

``TABLE1_PERCENT[i][j]`` is the percentage of voters ranking candidate
``i + 1`` at position ``j + 1``; ``MODEL_LISTING`` is a 6-permutation sparse
fit to those marginals in the model-file format.
"""
from __future__ import annotations

import numpy as np

from .core import SparseChoiceModel, StochasticMatrix, sinkhorn_normalize
from .io import parse_model

TABLE1_PERCENT = (
    (18, 26, 23, 17, 15),
    (14, 19, 25, 24, 18),
    (28, 17, 14, 18, 23),
    (20, 17, 19, 20, 23),
    (20, 21, 20, 19, 20),
)

MODEL_LISTING = """\
24153 0.211990
32541 0.202406
15432 0.197331
43215 0.180417
51324 0.145649
23154 0.062206
"""


def table1_raw() -> np.ndarray:
    """Table 1 divided by 100; rows and columns sum to 0.98-1.01."""
    return np.array(TABLE1_PERCENT, dtype=float) / 100.0


def table1() -> StochasticMatrix:
    return sinkhorn_normalize(table1_raw())


def model(normalized: bool = True) -> SparseChoiceModel:
    raw = parse_model(MODEL_LISTING)
    return raw.normalized() if normalized else raw
