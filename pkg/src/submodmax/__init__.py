"""Non-monotone submodular maximization under a cardinality constraint.

Interlaced and interpolated greedy algorithms, their descending-threshold
and low-adaptivity parallel versions, RandomGreedy baselines, maxcut and
revenue-maximization objectives, and a query/round ledger.
"""

from .algorithms import ALGORITHMS, run_algorithm
from .baselines import fast_random_greedy, random_greedy
from .greedy import RunRecord, interlace_greedy, interpolated_greedy
from .objectives import (
    Graph,
    RevMaxParams,
    gen_er,
    gen_revmax_params,
    load_edge_list,
    maxcut_oracle,
    revmax_oracle,
    write_edge_list,
)
from .oracle import (
    QueryLedger,
    SolutionSet,
    ValueOracle,
    brute_force_opt,
    check_submodular,
    contract,
    evaluate,
    marginal_gain,
    mark_round,
    with_dummies,
)
from .parallel import (
    PrefixMark,
    distribute,
    parallel_interlace_greedy,
    parallel_interpolated_greedy,
    pig,
    prefix_selection,
    select_subset,
    update,
)
from .threshold import fast_interlace_greedy, fast_interpolated_greedy

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "Graph", "PrefixMark", "QueryLedger", "RevMaxParams", "RunRecord", "SolutionSet",
    "ValueOracle", "brute_force_opt", "check_submodular", "contract", "distribute", "evaluate",
    "fast_interlace_greedy", "fast_interpolated_greedy", "fast_random_greedy", "gen_er",
    "gen_revmax_params", "interlace_greedy", "interpolated_greedy", "load_edge_list", "marginal_gain",
    "mark_round", "maxcut_oracle", "parallel_interlace_greedy", "parallel_interpolated_greedy", "pig",
    "prefix_selection", "random_greedy", "revmax_oracle", "run_algorithm", "select_subset", "update",
    "with_dummies", "write_edge_list",
]
