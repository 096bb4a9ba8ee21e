"""Deferred acceptance for one-to-one and capacitated markets."""

from __future__ import annotations

import heapq
from typing import Optional

from .model import Assignment, HrlqInstance, Matching, SmcInstance, Side


def _propose_round(
    proposer_lists,
    receiver_rank,
    deleted: frozenset[tuple[int, int]] | None,
    proposer_is_man: bool,
):
    """Proposer-optimal deferred acceptance over arrays.

    ``deleted`` is an optional set of forbidden (man, woman) pairs; the
    lowest-index free proposer moves next, which pins down the run (the
    outcome is order-independent, the trace is not).
    """
    n = len(proposer_lists)
    next_choice = [0] * n
    partner_of_proposer: list[Optional[int]] = [None] * n
    partner_of_receiver: dict[int, int] = {}
    free = list(range(n))
    heapq.heapify(free)
    while free:
        p = heapq.heappop(free)
        prefs = proposer_lists[p]
        while next_choice[p] < len(prefs):
            r = prefs[next_choice[p]]
            next_choice[p] += 1
            if deleted is not None:
                pair = (p, r) if proposer_is_man else (r, p)
                if pair in deleted:
                    continue
            holder = partner_of_receiver.get(r)
            if holder is None:
                partner_of_receiver[r] = p
                partner_of_proposer[p] = r
                break
            if receiver_rank[r][p] < receiver_rank[r][holder]:
                partner_of_receiver[r] = p
                partner_of_proposer[p] = r
                partner_of_proposer[holder] = None
                heapq.heappush(free, holder)
                break
    return partner_of_proposer, partner_of_receiver


def gale_shapley(
    inst: SmcInstance,
    side: Side = Side.MAN,
    deleted: frozenset[tuple[int, int]] | None = None,
) -> Matching:
    """Proposer-optimal stable matching; ``deleted`` pairs are ignored.

    Distinguished sets play no role here.
    """
    if side is Side.MAN:
        pm, pw_map = _propose_round(inst.men, inst.rank_w, deleted, True)
        pw: list[Optional[int]] = [None] * inst.n_women
        for w, m in pw_map.items():
            pw[w] = m
        return Matching(tuple(pm), tuple(pw))
    pw2, pm_map = _propose_round(inst.women, inst.rank_m, deleted, False)
    pm2: list[Optional[int]] = [None] * inst.n_men
    for m, w in pm_map.items():
        pm2[m] = w
    return Matching(tuple(pm2), tuple(pw2))


def gale_shapley_hr(
    inst: HrlqInstance,
    deleted: frozenset[tuple[int, int]] | None = None,
    capacity: Optional[list[int]] = None,
) -> Assignment:
    """Resident-proposing deferred acceptance; lower quotas are ignored.

    ``capacity`` optionally overrides the upper quotas.
    """
    caps = (
        [up for _, _, up in inst.hospitals] if capacity is None else list(capacity)
    )
    n = inst.n_residents
    next_choice = [0] * n
    assigned: list[Optional[int]] = [None] * n
    held: list[list[int]] = [[] for _ in range(inst.n_hospitals)]
    free = [r for r in range(n)]
    heapq.heapify(free)
    while free:
        r = heapq.heappop(free)
        prefs = inst.residents[r]
        while next_choice[r] < len(prefs):
            h = prefs[next_choice[r]]
            next_choice[r] += 1
            if deleted is not None and (r, h) in deleted:
                continue
            if caps[h] == 0:
                continue
            if len(held[h]) < caps[h]:
                held[h].append(r)
                assigned[r] = h
                break
            worst = max(held[h], key=lambda x: inst.rank_h[h][x])
            if inst.rank_h[h][r] < inst.rank_h[h][worst]:
                held[h].remove(worst)
                held[h].append(r)
                assigned[r] = h
                assigned[worst] = None
                heapq.heappush(free, worst)
                break
    return Assignment(tuple(assigned))


def unmatched_profile(inst: SmcInstance) -> tuple[frozenset[int], frozenset[int]]:
    """The (men, women) left unmatched by every stable matching.

    Computed from the men-proposing run; the rural-hospitals property makes
    the answer independent of the proposing side.
    """
    m = gale_shapley(inst, Side.MAN)
    men = frozenset(i for i, w in enumerate(m.partner_of_man) if w is None)
    women = frozenset(j for j, mm in enumerate(m.partner_of_woman) if mm is None)
    return men, women
