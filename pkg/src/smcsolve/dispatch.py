"""Algorithm selection: route an instance profile to a solver whose
preconditions it satisfies, preferring exact polynomial routes, then the
parameterised one, then threshold dispatch, then plain guess-and-delete."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .model import ParamProfile


class AlgoChoice(enum.Enum):
    GALE_SHAPLEY = "gale-shapley"
    GUESS_DELETE = "guess-delete"
    DEGREE2 = "degree2"
    DELTA2 = "delta2"
    FPT_DELTA_W2 = "fpt-delta-w2"
    SMC_APPROX = "smc-approx"
    HRLQ_APPROX = "hrlq-approx"
    ORACLE_ONLY = "oracle-only"


@dataclass(frozen=True)
class Selection:
    choice: AlgoChoice
    swapped: bool  # run on the gender-swapped instance
    rationale: str
    warning: Optional[str] = None


def select_algorithm(
    profile: ParamProfile,
    budget: Optional[int] = None,
    const_b: int = 3,
    const_delta: int = 3,
) -> Selection:
    """Pick a solver for the given structural profile.

    ``const_b``/``const_delta`` make 'constant' concrete for the budget and
    the all-parameters-small threshold split.
    """
    if budget is not None and budget <= const_b:
        return Selection(
            AlgoChoice.GUESS_DELETE,
            False,
            f"budget {budget} is small: delete-and-stabilise over "
            f"edge subsets of size <= {budget}",
        )
    if profile.n_star_women == 0 and profile.n_star_men == 0:
        return Selection(
            AlgoChoice.GALE_SHAPLEY,
            False,
            "nobody needs covering: any stable matching is optimal",
        )
    if profile.delta_m <= 2 and profile.delta_w <= 2:
        return Selection(
            AlgoChoice.DEGREE2,
            False,
            "all lists of length <= 2: per-component scan of paths and cycles",
        )
    if profile.n_star_men == 0 and profile.delta_m <= 2:
        return Selection(
            AlgoChoice.DELTA2,
            False,
            "one-sided covering with men's lists <= 2: augmenting-path solver",
        )
    if profile.n_star_women == 0 and profile.delta_w <= 2:
        return Selection(
            AlgoChoice.DELTA2,
            True,
            "one-sided covering with women's lists <= 2: role-swapped "
            "augmenting-path solver",
        )
    if profile.delta_w <= 2:
        return Selection(
            AlgoChoice.FPT_DELTA_W2,
            False,
            "women's lists <= 2: branching over the uncovered distinguished people",
        )
    if profile.delta_m <= 2:
        return Selection(
            AlgoChoice.FPT_DELTA_W2,
            True,
            "men's lists <= 2: role-swapped branching solver",
        )
    smc1_constant = (
        profile.n_star_men == 0
        and profile.n_star_women <= const_delta
        and profile.delta_m <= const_delta
    )
    all_constant = (
        profile.n_star_women <= const_delta
        and profile.n_star_men <= const_delta
        and profile.delta_m <= const_delta
        and profile.delta_w <= const_delta
    )
    if smc1_constant or all_constant:
        bound = (profile.delta_m - 1) * profile.n_star_women + (
            profile.delta_w - 1
        ) * profile.n_star_men
        if budget is not None and budget >= bound:
            return Selection(
                AlgoChoice.SMC_APPROX,
                False,
                f"all parameters small and budget {budget} >= guarantee {bound}: "
                "reserve-and-stabilise meets it outright",
            )
        return Selection(
            AlgoChoice.GUESS_DELETE,
            False,
            f"all parameters small: optimum <= {bound}, so bounded "
            "delete-and-stabilise stays polynomial",
        )
    return Selection(
        AlgoChoice.GUESS_DELETE,
        False,
        "no structure to exploit",
        warning="this regime admits no known efficient algorithm; "
        "delete-and-stabilise may take exponential time",
    )
