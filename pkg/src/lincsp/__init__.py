"""Constraint satisfaction problems whose constraints forbid one point each.

Core types, a resampling solver and exact oracles, a generator of
unsatisfiable ell-disjoint instances, closed-form size bounds, and the
text formats used by the ``lincsp`` command.
"""

from .bounds import (
    BoundReport,
    LinearBounds,
    bound_ml,
    complete_formula_size,
    linear_bounds,
    psz_size,
)
from .core import (
    Constraint,
    Csp,
    Literal,
    check_l_disjoint,
    degree,
    evaluate,
    frequent_threshold,
    frequent_variables,
    violated_constraints,
)
from .errors import (
    InvariantError,
    LincspError,
    MissingVariableError,
    ParameterError,
    ParseError,
    PreconditionError,
    SearchFailed,
    UnsupportedDomainError,
)
from .experiments import experiment_min_linear_2cnf
from .formats import from_dimacs, load, parse, serialize, to_dimacs
from .generator import (
    GenParams,
    Hypergraph,
    expected_sat_count,
    greedy_maximal_hypergraph,
    hypergraph_size_lower_bound,
    instantiate_random,
    search_unsat,
)
from .solver import (
    SolveOutcome,
    Status,
    count_solutions,
    exhaustive_solve,
    lll_condition,
    oracle_solve,
    reduce_frequent,
    resample_solve,
    solve_sparse_frequent,
    two_sat_solve,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "Constraint", "Csp", "GenParams", "Hypergraph", "InvariantError",
    "LincspError", "LinearBounds", "Literal", "MissingVariableError", "ParameterError",
    "ParseError", "PreconditionError", "SearchFailed", "SolveOutcome", "Status",
    "UnsupportedDomainError", "bound_ml", "check_l_disjoint", "complete_formula_size",
    "count_solutions", "degree", "evaluate", "exhaustive_solve", "expected_sat_count",
    "experiment_min_linear_2cnf", "frequent_threshold", "frequent_variables", "from_dimacs",
    "greedy_maximal_hypergraph", "hypergraph_size_lower_bound", "instantiate_random",
    "linear_bounds", "lll_condition", "load", "oracle_solve", "parse", "psz_size",
    "reduce_frequent", "resample_solve", "search_unsat", "serialize", "solve_sparse_frequent",
    "to_dimacs", "two_sat_solve", "violated_constraints",
]
