"""Covering-constrained stable matching: exact, approximate and
parameterised solvers, plus hard-instance generators."""

from .errors import (
    ParseError,
    SizeCapError,
    SmcError,
    ValidationError,
    WrongAlgorithmError,
)
from .model import (
    AlgorithmTag,
    Assignment,
    HrlqInstance,
    HrlqResult,
    Matching,
    NoSolutionWithin,
    ParamProfile,
    PersonId,
    Side,
    SmcInstance,
    SolveResult,
    blocking_pairs,
    blocking_pairs_hrlq,
    clone_hospitals,
    is_feasible,
    param_profile,
)
from .stable import gale_shapley, gale_shapley_hr, unmatched_profile
from .bipartite import cover_distinguished, max_matching, min_weight_cover_matching
from .exact import (
    enumerate_oracle,
    enumerate_oracle_hrlq,
    solve_guess_delete,
    solve_guess_delete_hrlq,
    solve_min_guess_delete,
    solve_min_guess_delete_hrlq,
    solve_paths_and_cycles,
)
from .approx import (
    hrlq_approx,
    hrlq_bound,
    smc_approx,
    smc_bound,
    solve_hrlq_budget,
    solve_smc_budget,
)
from .pathcover import (
    enumerate_aug_paths,
    build_path_graph,
    solve_men_deg2,
    solve_women_deg2_restricted,
)
from .branching import (
    BranchStats,
    classify_dependent,
    solve_women_deg2_fpt,
    solve_women_deg2_fpt_budget,
)
from .dispatch import AlgoChoice, Selection, select_algorithm
from .textio import parse, serialize, document_for

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
