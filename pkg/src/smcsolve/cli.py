"""Command-line surface: solve, check, gen, compare.

Exit codes: 0 success, 1 parse/validation/usage, 2 infeasible,
3 no solution within the budget, 4 size cap exceeded.
"""

from __future__ import annotations

import argparse
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

from .approx import hrlq_approx, smc_approx, solve_hrlq_budget, solve_smc_budget
from .branching import solve_women_deg2_fpt
from .dispatch import AlgoChoice, Selection, select_algorithm
from .errors import ParseError, SizeCapError, SmcError, ValidationError
from .exact import (
    enumerate_oracle,
    solve_guess_delete,
    solve_min_guess_delete,
    solve_min_guess_delete_hrlq,
    solve_paths_and_cycles,
)
from .model import (
    AlgorithmTag,
    Matching,
    NoSolutionWithin,
    SmcInstance,
    SolveResult,
    blocking_pairs,
    blocking_pairs_hrlq,
    is_feasible,
    make_result,
    param_profile,
)
from .pathcover import solve_men_deg2, solve_women_deg2_restricted
from .randgen import random_smc_sized
from .reductions import (
    parse_colored_graph,
    parse_graph,
    parse_x3c,
    reduce_forcing_gadget,
    reduce_multicolored_clique,
    reduce_two_women_masterlist,
    reduce_vertex_cover,
    reduce_x3c,
)
from .stable import gale_shapley
from .textio import (
    ParsedDocument,
    document_for,
    format_assignment,
    format_matching,
    parse,
    parse_matching,
    serialize,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INFEASIBLE = 2
EXIT_NO_SOLUTION = 3
EXIT_SIZE_CAP = 4


def _swap_matching(m: Matching) -> Matching:
    return Matching(m.partner_of_woman, m.partner_of_man)


def run_selection(inst: SmcInstance, sel: Selection, budget: Optional[int]):
    """Run the chosen solver; returns SolveResult or NoSolutionWithin."""
    choice = sel.choice
    if choice is AlgoChoice.GALE_SHAPLEY:
        return make_result(inst, gale_shapley(inst), AlgorithmTag.GALE_SHAPLEY, True)
    if choice is AlgoChoice.GUESS_DELETE:
        if budget is not None:
            return solve_guess_delete(inst, budget)
        return solve_min_guess_delete(inst)
    if choice is AlgoChoice.DEGREE2:
        return solve_paths_and_cycles(inst)
    if choice is AlgoChoice.DELTA2:
        return solve_women_deg2_restricted(inst) if sel.swapped else solve_men_deg2(inst)
    if choice is AlgoChoice.FPT_DELTA_W2:
        if sel.swapped:
            out = solve_women_deg2_fpt(inst.swap_genders())
            if out.infeasible:
                return SolveResult(
                    Matching.from_pairs(inst.n_men, inst.n_women, []),
                    (),
                    out.algorithm,
                    True,
                    infeasible=True,
                )
            return make_result(
                inst, _swap_matching(out.matching), out.algorithm, out.optimal
            )
        return solve_women_deg2_fpt(inst)
    if choice is AlgoChoice.SMC_APPROX:
        return smc_approx(inst)
    if choice is AlgoChoice.ORACLE_ONLY:
        return enumerate_oracle(inst)
    raise ValidationError(f"no runner for {choice}")


_ALGO_FLAGS = {
    "auto": None,
    "oracle": AlgoChoice.ORACLE_ONLY,
    "gs": AlgoChoice.GALE_SHAPLEY,
    "guess-delete": AlgoChoice.GUESS_DELETE,
    "degree2": AlgoChoice.DEGREE2,
    "delta2": AlgoChoice.DELTA2,
    "fpt": AlgoChoice.FPT_DELTA_W2,
    "approx": AlgoChoice.SMC_APPROX,
}


def _forced_selection(inst: SmcInstance, name: str) -> Selection:
    """Honor --algo but keep precondition checks on."""
    choice = _ALGO_FLAGS[name]
    profile = param_profile(inst)
    swapped = False
    if choice is AlgoChoice.DELTA2:
        if profile.n_star_men == 0 and profile.delta_m <= 2:
            swapped = False
        elif profile.n_star_women == 0 and profile.delta_w <= 2:
            swapped = True
        else:
            raise ValidationError(
                "delta2 needs one-sided covering with the other side's lists <= 2"
            )
    if choice is AlgoChoice.FPT_DELTA_W2:
        if profile.delta_w <= 2:
            swapped = False
        elif profile.delta_m <= 2:
            swapped = True
        else:
            raise ValidationError("fpt needs one side's lists of length <= 2")
    if choice is AlgoChoice.DEGREE2 and (profile.delta_m > 2 or profile.delta_w > 2):
        raise ValidationError("degree2 needs all lists of length <= 2")
    if choice is AlgoChoice.GALE_SHAPLEY and (
        profile.n_star_women or profile.n_star_men
    ):
        raise ValidationError("gs ignores covering constraints; use another solver")
    return Selection(choice, swapped, f"forced via --algo {name}")


def cmd_solve(args) -> int:
    doc = parse(Path(args.file).read_text(encoding="utf-8"))
    budget = args.budget if args.budget is not None else doc.budget
    if doc.kind == "hrlq":
        inst = doc.hrlq
        if args.algo == "approx":
            out = hrlq_approx(inst)
        elif budget is not None:
            out = solve_hrlq_budget(inst, budget)
        else:
            out = solve_min_guess_delete_hrlq(inst)
        if isinstance(out, NoSolutionWithin):
            print(f"no feasible assignment within budget {out.budget}")
            return EXIT_NO_SOLUTION
        feasible = not out.infeasible
        sys.stdout.write(
            format_assignment(
                doc, out.assignment, out.blocking, out.optimal or None, feasible
            )
        )
        return EXIT_OK if feasible else EXIT_INFEASIBLE
    inst = doc.smc
    if args.algo == "auto":
        sel = select_algorithm(
            param_profile(inst), budget, args.const_b, args.const_delta
        )
        if sel.warning:
            print(f"warning: {sel.warning}", file=sys.stderr)
    else:
        sel = _forced_selection(inst, args.algo)
    out = run_selection(inst, sel, budget)
    if isinstance(out, NoSolutionWithin):
        print(f"no feasible matching within budget {out.budget}")
        return EXIT_NO_SOLUTION
    feasible = not out.infeasible
    if feasible and budget is not None and out.n_blocking > budget:
        sys.stdout.write(
            format_matching(
                doc, out.matching, out.blocking, out.optimal or None, feasible
            )
        )
        print(f"exceeds budget {budget}")
        return EXIT_NO_SOLUTION if out.optimal else EXIT_OK
    sys.stdout.write(
        format_matching(
            doc, out.matching, out.blocking, out.optimal or None, feasible
        )
    )
    return EXIT_OK if feasible else EXIT_INFEASIBLE


def cmd_check(args) -> int:
    doc = parse(Path(args.file).read_text(encoding="utf-8"))
    text = Path(args.matchfile).read_text(encoding="utf-8")
    if doc.kind == "hrlq":
        raise ValidationError("check expects a one-to-one instance")
    matching = parse_matching(doc, text)
    inst = doc.smc
    blocked = blocking_pairs(inst, matching)
    feasible = is_feasible(inst, matching)
    sys.stdout.write(format_matching(doc, matching, blocked, None, feasible))
    return EXIT_OK if feasible else EXIT_INFEASIBLE


def cmd_gen(args) -> int:
    text = Path(args.source).read_text(encoding="utf-8")
    if args.family == "mcc":
        out = reduce_multicolored_clique(parse_colored_graph(text))
    elif args.family == "force":
        out = reduce_forcing_gadget(reduce_multicolored_clique(parse_colored_graph(text)))
    elif args.family == "two":
        out = reduce_two_women_masterlist(
            reduce_multicolored_clique(parse_colored_graph(text))
        )
    elif args.family == "vc":
        if args.k is None:
            raise ValidationError("vc needs -k (cover size)")
        out = reduce_vertex_cover(parse_graph(text), args.k)
    elif args.family == "x3c":
        universe, sets = parse_x3c(text)
        out = reduce_x3c(universe, sets)
    else:
        raise ValidationError(f"unknown family {args.family}")
    inst = out.instance
    doc = ParsedDocument(
        "smc",
        inst,
        None,
        out.budget,
        out.men_names,
        out.women_names,
    )
    payload = serialize(doc)
    if args.output:
        Path(args.output).write_text(payload, encoding="utf-8")
        print(
            f"wrote {args.output}: {inst.n_men}+{inst.n_women} people, "
            f"budget {out.budget}"
        )
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def _compare_one(inst: SmcInstance, const_b: int, const_delta: int):
    sel = select_algorithm(param_profile(inst), None, const_b, const_delta)
    got = run_selection(inst, sel, None)
    ref = enumerate_oracle(inst)
    if got.infeasible != ref.infeasible:
        return sel, got, ref, False
    if got.infeasible:
        return sel, got, ref, True
    if got.optimal:
        return sel, got, ref, got.n_blocking == ref.n_blocking
    return sel, got, ref, got.n_blocking >= ref.n_blocking


def cmd_compare(args) -> int:
    if args.fuzz is not None:
        rng = random.Random(args.seed)
        instances = [random_smc_sized(rng) for _ in range(args.fuzz)]
        results = []
        if args.threads > 1:
            with ThreadPoolExecutor(max_workers=args.threads) as pool:
                results = list(
                    pool.map(
                        lambda i: _compare_one(i, args.const_b, args.const_delta),
                        instances,
                    )
                )
        else:
            results = [
                _compare_one(i, args.const_b, args.const_delta) for i in instances
            ]
        bad = [r for r in results if not r[3]]
        print(f"compared {len(results)} fuzzed instances, {len(bad)} mismatches")
        for sel, got, ref, _ in bad[:5]:
            print(
                f"  {sel.choice.value}: got {got.n_blocking} "
                f"(infeasible={got.infeasible}), oracle {ref.n_blocking} "
                f"(infeasible={ref.infeasible})"
            )
        return EXIT_OK if not bad else EXIT_INVALID
    doc = parse(Path(args.file).read_text(encoding="utf-8"))
    if doc.kind != "smc":
        raise ValidationError("compare expects a one-to-one instance")
    sel, got, ref, ok = _compare_one(doc.smc, args.const_b, args.const_delta)
    if ref.infeasible:
        print(f"match: both infeasible ({sel.choice.value})")
    elif ok:
        print(
            f"match: optimum {got.n_blocking} = {ref.n_blocking} "
            f"({sel.choice.value} vs oracle)"
        )
    else:
        print(
            f"MISMATCH: {sel.choice.value} got {got.n_blocking}, "
            f"oracle got {ref.n_blocking}"
        )
    return EXIT_OK if ok else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="smc",
        description="Solve, check, generate and cross-check covering-"
        "constrained stable matching instances.",
    )
    p.add_argument("--const-b", type=int, default=3, help="budget treated as 'small'")
    p.add_argument(
        "--const-delta",
        type=int,
        default=3,
        help="threshold under which all structural parameters count as small",
    )
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve an instance file")
    ps.add_argument("file")
    ps.add_argument("--algo", choices=sorted(_ALGO_FLAGS), default="auto")
    ps.add_argument("--budget", type=int, default=None)
    ps.add_argument("--threads", type=int, default=1)
    ps.set_defaults(func=cmd_solve)

    pc = sub.add_parser("check", help="evaluate a matching against an instance")
    pc.add_argument("file")
    pc.add_argument("matchfile")
    pc.set_defaults(func=cmd_check)

    pg = sub.add_parser("gen", help="generate a hard instance from a source problem")
    pg.add_argument("family", choices=["mcc", "force", "two", "vc", "x3c"])
    pg.add_argument("source")
    pg.add_argument("-k", type=int, default=None, help="cover size (vc)")
    pg.add_argument("-o", "--output", default=None)
    pg.set_defaults(func=cmd_gen)

    pm = sub.add_parser("compare", help="diff a solver against the oracle")
    pm.add_argument("file", nargs="?")
    pm.add_argument("--oracle", action="store_true", help="default mode")
    pm.add_argument("--fuzz", type=int, default=None, help="number of random instances")
    pm.add_argument("--seed", type=int, default=0)
    pm.add_argument("--threads", type=int, default=1)
    pm.set_defaults(func=cmd_compare)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    try:
        if getattr(args, "command", None) == "compare" and args.fuzz is None:
            if args.file is None:
                print("compare needs FILE or --fuzz N", file=sys.stderr)
                return EXIT_INVALID
        if getattr(args, "threads", 1) < 1:
            print("--threads must be at least 1", file=sys.stderr)
            return EXIT_INVALID
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE_CAP
    except SmcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
