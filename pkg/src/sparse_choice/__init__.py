"""Sparse choice models: distributions over permutations fitted to first-order marginals."""
from .aggregation import TallyTrace, first_place_tally, hare
from .birkhoff import Decomposition, decompose
from .core import (
    Permutation,
    SparseChoiceModel,
    StochasticMatrix,
    distance,
    marginals,
    mixture,
    perturb,
    relative_error,
    sinkhorn_normalize,
)
from .errors import (
    ConvergenceError,
    InvalidModelError,
    NotDoublyStochasticError,
    SizeLimitError,
    SparseChoiceError,
)
from .generators import (
    ExpFamParams,
    MNLParams,
    condition_check,
    exact_distribution,
    mnl_sample,
    random_doubly_stochastic,
    random_sparse_model,
)
from .recovery import (
    RecoveryResult,
    assignment_oracle,
    greedy_fit,
    mwu_feasibility,
    recover,
    recover_search,
    recover_without_signature,
)
from .report import cdf_compare
from .signature import SignatureSet, candidate_signature_sets, check_signature
from .sparsify import empirical_distribution, sample_sparsify

__version__ = "0.1.0"
