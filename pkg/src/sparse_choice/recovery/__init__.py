from .greedy import GreedyResult, greedy_fit
from .mwu import ConstraintSystem, MWUState, RecoveryResult, mwu_budget, mwu_feasibility, mwu_step
from .oracle import OracleResult, assignment_oracle
from .search import quantized_vectors, recover, recover_search, recover_without_signature

__all__ = [
    "ConstraintSystem",
    "GreedyResult",
    "MWUState",
    "OracleResult",
    "RecoveryResult",
    "assignment_oracle",
    "greedy_fit",
    "mwu_budget",
    "mwu_feasibility",
    "mwu_step",
    "quantized_vectors",
    "recover",
    "recover_search",
    "recover_without_signature",
]
