"""Polynomial approximation pipelines and the constant-parameter dispatchers.

The quota pipeline reserves one resident per lower-quota slot, greedily
upgrades the reserved sets until no reserved hospital prefers an outside,
unreserved resident to its worst reserved one, and completes with deferred
acceptance on the rest.  The two-sided pipeline does the analogous thing
around a matching that covers the distinguished people.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .bipartite import cover_distinguished, hopcroft_karp
from .model import (
    AlgorithmTag,
    Assignment,
    HrlqInstance,
    HrlqResult,
    Matching,
    NoSolutionWithin,
    SmcInstance,
    SolveResult,
    blocking_pairs,
    infeasible_hrlq_result,
    infeasible_result,
    is_feasible,
    make_hrlq_result,
    make_result,
)
from .stable import gale_shapley, gale_shapley_hr
from .exact import solve_guess_delete, solve_guess_delete_hrlq


@dataclass(frozen=True)
class GreedyStep:
    """One improvement step of a reservation loop (audit log entry)."""

    step: int
    pivot: str
    replaced: Optional[int]
    replacing: int


@dataclass
class HrlqApproxRun:
    """Full pipeline state, exposed for property checks."""

    result: HrlqResult
    reserved: dict[int, tuple[int, ...]]  # hospital -> reserved residents
    trace: list[GreedyStep]

    def dagger_holds(self, inst: HrlqInstance) -> bool:
        """No reserved hospital prefers an unreserved resident to its worst
        reserved one."""
        reserved_all = {r for rs in self.reserved.values() for r in rs}
        for h, rs in self.reserved.items():
            if not rs:
                continue
            worst = max(inst.rank_h[h][r] for r in rs)
            for r in inst.hospitals[h][0]:
                if inst.rank_h[h][r] < worst and r not in rs and r not in reserved_all:
                    return False
        return True


def hrlq_bound(inst: HrlqInstance) -> int:
    """Worst-case blocking-pair guarantee of the quota pipeline."""
    return max(0, (inst.max_resident_list - 1) * inst.lower_total)


def _reserve_lower_quotas(inst: HrlqInstance) -> Optional[dict[int, list[int]]]:
    """One resident per lower-quota slot via maximum matching, or None."""
    slots: list[int] = []  # slot -> hospital
    for h, (_, lo, _) in enumerate(inst.hospitals):
        slots.extend([h] * lo)
    slot_ids: dict[int, list[int]] = {}
    for j, h in enumerate(slots):
        slot_ids.setdefault(h, []).append(j)
    adj = [
        [j for h in sorted(inst.rank_r[r]) for j in slot_ids.get(h, [])]
        for r in range(inst.n_residents)
    ]
    match_left = hopcroft_karp(adj, len(slots))
    filled = [r for r, j in enumerate(match_left) if j is not None]
    if len(filled) < len(slots):
        return None
    reserved: dict[int, list[int]] = {h: [] for h in slot_ids}
    for r, j in enumerate(match_left):
        if j is not None:
            reserved[slots[j]].append(r)
    return reserved


def hrlq_approx_pipeline(inst: HrlqInstance) -> HrlqApproxRun | None:
    """Reservation pipeline; None when no feasible assignment exists."""
    reserved = _reserve_lower_quotas(inst)
    if reserved is None:
        return None
    trace: list[GreedyStep] = []
    hospitals_star = sorted(reserved)
    step = 0
    improved = True
    while improved:
        improved = False
        reserved_elsewhere = {
            r: h for h, rs in reserved.items() for r in rs
        }
        for h in hospitals_star:
            rs = reserved[h]
            if not rs:
                continue
            worst = max(rs, key=lambda r: inst.rank_h[h][r])
            for r in inst.hospitals[h][0]:
                if inst.rank_h[h][r] >= inst.rank_h[h][worst]:
                    break
                if reserved_elsewhere.get(r) is not None:
                    continue
                rs.remove(worst)
                rs.append(r)
                trace.append(GreedyStep(step, f"h{h}", worst, r))
                step += 1
                improved = True
                break
            if improved:
                break
    # Residual market: reserved residents removed, upper quotas reduced.
    reserved_rs = {r for rs in reserved.values() for r in rs}
    caps = []
    for h, (_, lo, up) in enumerate(inst.hospitals):
        caps.append(up - lo)
    deleted = frozenset(
        (r, h) for r in reserved_rs for h in inst.rank_r[r]
    )
    rest = gale_shapley_hr(inst, deleted=deleted, capacity=caps)
    hosp = list(rest.hospital_of_resident)
    for h, rs in reserved.items():
        for r in rs:
            hosp[r] = h
    result = make_hrlq_result(
        inst,
        Assignment(tuple(hosp)),
        AlgorithmTag.HRLQ_APPROX,
        optimal=False,
    )
    return HrlqApproxRun(
        result=result,
        reserved={h: tuple(sorted(rs)) for h, rs in reserved.items()},
        trace=trace,
    )


def hrlq_approx(inst: HrlqInstance) -> HrlqResult:
    """Feasible assignment with a blocking-pair count bounded by
    ``hrlq_bound``; flagged infeasible when no feasible assignment exists.

    Fast path: when the stable assignment already meets the lower quotas it
    is returned unchanged (zero blocking pairs).
    """
    stable = gale_shapley_hr(inst)
    if stable.is_feasible(inst):
        return make_hrlq_result(
            inst, stable, AlgorithmTag.HRLQ_APPROX, optimal=True
        )
    run = hrlq_approx_pipeline(inst)
    if run is None:
        return infeasible_hrlq_result(inst, AlgorithmTag.HRLQ_APPROX)
    return run.result


@dataclass
class SmcApproxRun:
    result: SolveResult
    reserved: Matching
    trace: list[GreedyStep]

    def cross_holds(self, inst: SmcInstance) -> bool:
        """At exit no distinguished person with a non-distinguished partner
        blocks together with someone whose partner is non-distinguished."""
        pm = self.reserved.partner_of_man
        pw = self.reserved.partner_of_woman
        dw, dm = inst.distinguished_women, inst.distinguished_men

        def partner_distinguished(side: str, who: int) -> bool:
            if side == "m":
                p = pm[who]
                return p is not None and p in dw
            p = pw[who]
            return p is not None and p in dm

        for m, w in blocking_pairs(inst, self.reserved):
            if m in dm and not partner_distinguished("m", m):
                if not partner_distinguished("w", w):
                    return False
            if w in dw and not partner_distinguished("w", w):
                if not partner_distinguished("m", m):
                    return False
        return True


def smc_bound(inst: SmcInstance) -> int:
    """Worst-case guarantee of the two-sided pipeline."""
    delta_m = max((len(p) for p in inst.men), default=0)
    delta_w = max((len(p) for p in inst.women), default=0)
    return max(0, (delta_w - 1)) * len(inst.distinguished_men) + max(
        0, (delta_m - 1)
    ) * len(inst.distinguished_women)


def smc_approx_pipeline(inst: SmcInstance) -> SmcApproxRun | None:
    cover = cover_distinguished(inst)
    if cover is None:
        return None
    pm = list(cover.partner_of_man)
    pw = list(cover.partner_of_woman)
    dw, dm = inst.distinguished_women, inst.distinguished_men
    trace: list[GreedyStep] = []
    step = 0

    def partner_not_dist_w(w: int) -> bool:
        return pw[w] is None or pw[w] not in dm

    def partner_not_dist_m(m: int) -> bool:
        return pm[m] is None or pm[m] not in dw

    # pivots: distinguished people currently holding a non-distinguished
    # partner; they may steal a blocking counterpart whose own partner is
    # non-distinguished (or who is unmatched)
    improved = True
    while improved:
        improved = False
        for m in sorted(dm):
            cur = pm[m]
            if cur is not None and cur in dw:
                continue
            for w in inst.men[m]:
                if cur is not None and inst.rank_m[m][w] >= inst.rank_m[m][cur]:
                    break
                if not inst.prefers_w(w, m, pw[w]):
                    continue
                if not partner_not_dist_w(w):
                    continue
                old_w = pm[m]
                old_m = pw[w]
                if old_w is not None:
                    pw[old_w] = None
                if old_m is not None:
                    pm[old_m] = None
                pm[m] = w
                pw[w] = m
                trace.append(GreedyStep(step, f"m{m}", old_w, w))
                step += 1
                improved = True
                break
            if improved:
                break
        if improved:
            continue
        for w in sorted(dw):
            cur = pw[w]
            if cur is not None and cur in dm:
                continue
            for m in inst.women[w]:
                if cur is not None and inst.rank_w[w][m] >= inst.rank_w[w][cur]:
                    break
                if not inst.prefers_m(m, w, pm[m]):
                    continue
                if not partner_not_dist_m(m):
                    continue
                old_m = pw[w]
                old_w = pm[m]
                if old_m is not None:
                    pm[old_m] = None
                if old_w is not None:
                    pw[old_w] = None
                pw[w] = m
                pm[m] = w
                trace.append(GreedyStep(step, f"w{w}", old_m, m))
                step += 1
                improved = True
                break
            if improved:
                break
    reserved = Matching(tuple(pm), tuple(pw))
    covered_m = {m for m, w in reserved.pairs()}
    covered_w = {w for _, w in reserved.pairs()}
    deleted = frozenset(
        (m, w)
        for m, w in inst.edges
        if m in covered_m or w in covered_w
    )
    rest = gale_shapley(inst, deleted=deleted)
    pairs = list(reserved.pairs()) + list(rest.pairs())
    final = Matching.from_pairs(inst.n_men, inst.n_women, pairs)
    result = make_result(inst, final, AlgorithmTag.SMC_APPROX, optimal=False)
    return SmcApproxRun(result=result, reserved=reserved, trace=trace)


def smc_approx(inst: SmcInstance) -> SolveResult:
    """Feasible matching within the ``smc_bound`` guarantee, or infeasible.

    Fast path: a feasible stable matching is returned as-is.
    """
    stable = gale_shapley(inst)
    if is_feasible(inst, stable):
        return make_result(inst, stable, AlgorithmTag.SMC_APPROX, optimal=True)
    run = smc_approx_pipeline(inst)
    if run is None:
        return infeasible_result(inst, AlgorithmTag.SMC_APPROX)
    return run.result


def solve_hrlq_budget(
    inst: HrlqInstance, budget: int
) -> HrlqResult | NoSolutionWithin:
    """Budgeted quota solving: above the pipeline's guarantee the pipeline
    itself settles the question, below it guess-and-delete decides exactly."""
    if budget >= hrlq_bound(inst):
        out = hrlq_approx(inst)
        if out.infeasible or out.n_blocking <= budget:
            return out
        return NoSolutionWithin(budget)  # unreachable per the guarantee
    return solve_guess_delete_hrlq(inst, budget)


def solve_smc_budget(
    inst: SmcInstance, budget: int
) -> SolveResult | NoSolutionWithin:
    """Budgeted two-sided solving via the same threshold split."""
    if budget >= smc_bound(inst):
        out = smc_approx(inst)
        if out.infeasible or out.n_blocking <= budget:
            return out
        return NoSolutionWithin(budget)  # unreachable per the guarantee
    return solve_guess_delete(inst, budget)
