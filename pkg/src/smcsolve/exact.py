"""Exact solvers: brute-force oracles, guess-and-delete, and the
paths-and-cycles solver for markets where everyone ranks at most two people.
"""

from __future__ import annotations

import os
from itertools import combinations
from typing import Optional

from .bipartite import cover_distinguished
from .errors import SizeCapError, WrongAlgorithmError
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
    blocking_pairs_hrlq,
    infeasible_hrlq_result,
    infeasible_result,
    is_feasible,
    make_hrlq_result,
    make_result,
)
from .stable import gale_shapley, gale_shapley_hr

DEFAULT_ORACLE_CAP = 16


def _oracle_cap(cap: Optional[int]) -> int:
    if cap is not None:
        return cap
    return int(os.environ.get("SMC_ORACLE_CAP", DEFAULT_ORACLE_CAP))


def enumerate_oracle(inst: SmcInstance, cap: Optional[int] = None) -> SolveResult:
    """Globally minimum-blocking feasible matching by exhaustive enumeration.

    This is the referee the tests hold every other solver against, so it
    stays deliberately independent of them: a recursive include/exclude
    sweep over the edge list with feasibility pruning and nothing cleverer.
    """
    limit = _oracle_cap(cap)
    if inst.n_men + inst.n_women > limit:
        raise SizeCapError(
            f"{inst.n_men + inst.n_women} people exceed the oracle cap {limit}"
        )
    edges = inst.edges
    needed_w = sorted(inst.distinguished_women)
    needed_m = sorted(inst.distinguished_men)
    # edges at or after position i that could still cover a person
    last_edge_at_w = {w: -1 for w in needed_w}
    last_edge_at_m = {m: -1 for m in needed_m}
    for i, (m, w) in enumerate(edges):
        if m in last_edge_at_m:
            last_edge_at_m[m] = i
        if w in last_edge_at_w:
            last_edge_at_w[w] = i
    if any(i < 0 for i in last_edge_at_w.values()) or any(
        i < 0 for i in last_edge_at_m.values()
    ):
        return infeasible_result(inst, AlgorithmTag.ORACLE)

    pm: list[Optional[int]] = [None] * inst.n_men
    pw: list[Optional[int]] = [None] * inst.n_women
    best: Optional[tuple[int, tuple[tuple[int, int], ...]]] = None

    def cover_possible(i: int) -> bool:
        for w in needed_w:
            if pw[w] is None and last_edge_at_w[w] < i:
                return False
        for m in needed_m:
            if pm[m] is None and last_edge_at_m[m] < i:
                return False
        return True

    def evaluate() -> None:
        nonlocal best
        chosen = tuple(
            (m, w) for m, w in enumerate(pm) if w is not None
        )
        matching = Matching.from_pairs(inst.n_men, inst.n_women, chosen)
        count = len(blocking_pairs(inst, matching))
        if best is None or count < best[0]:
            best = (count, chosen)

    def walk(i: int) -> None:
        if not cover_possible(i):
            return
        if i == len(edges):
            evaluate()
            return
        m, w = edges[i]
        if pm[m] is None and pw[w] is None:
            pm[m] = w
            pw[w] = m
            walk(i + 1)
            pm[m] = None
            pw[w] = None
        walk(i + 1)

    walk(0)
    if best is None:
        return infeasible_result(inst, AlgorithmTag.ORACLE)
    matching = Matching.from_pairs(inst.n_men, inst.n_women, best[1])
    return make_result(inst, matching, AlgorithmTag.ORACLE, optimal=True)


def solve_guess_delete(
    inst: SmcInstance, budget: int
) -> SolveResult | NoSolutionWithin:
    """Feasible matching with at most ``budget`` blocking pairs, or the
    verdict that none exists.

    Mechanism: delete every edge subset of size at most the budget
    (ascending size, lexicographic) and run deferred acceptance on the rest;
    the stable matching of the pruned market can only be blocked by deleted
    edges, and rural-hospitals transfer makes some subset work whenever any
    feasible matching within budget exists.
    """
    edges = inst.edges
    for size in range(0, budget + 1):
        for deleted in combinations(edges, size):
            dset = frozenset(deleted)
            matching = gale_shapley(inst, deleted=dset)
            if is_feasible(inst, matching):
                return make_result(
                    inst, matching, AlgorithmTag.GUESS_DELETE, optimal=False
                )
    return NoSolutionWithin(budget)


def solve_min_guess_delete(inst: SmcInstance) -> SolveResult:
    """Smallest budget at which guess-and-delete succeeds."""
    if cover_distinguished(inst) is None:
        return infeasible_result(inst, AlgorithmTag.GUESS_DELETE)
    budget = 0
    while True:
        out = solve_guess_delete(inst, budget)
        if isinstance(out, SolveResult):
            return SolveResult(
                matching=out.matching,
                blocking=out.blocking,
                algorithm=out.algorithm,
                optimal=True,
            )
        budget += 1


def _component_edges(inst: SmcInstance) -> list[list[tuple[int, int]]]:
    """Connected components of the acceptability graph as edge lists."""
    seen_m = [False] * inst.n_men
    seen_w = [False] * inst.n_women
    comps = []
    for start in range(inst.n_men):
        if seen_m[start] or not inst.men[start]:
            continue
        stack = [("m", start)]
        seen_m[start] = True
        edges = set()
        while stack:
            side, v = stack.pop()
            if side == "m":
                for w in inst.men[v]:
                    edges.add((v, w))
                    if not seen_w[w]:
                        seen_w[w] = True
                        stack.append(("w", w))
            else:
                for m in inst.women[v]:
                    edges.add((m, v))
                    if not seen_m[m]:
                        seen_m[m] = True
                        stack.append(("m", m))
        comps.append(sorted(edges))
    return comps


def _component_best(
    inst: SmcInstance, edges: list[tuple[int, int]]
) -> Optional[tuple[int, list[tuple[int, int]]]]:
    """Optimal matching of one path-or-cycle component.

    Walks the component as a vertex sequence and scans the 4 combinations of
    (previous edge, current edge) chosen-flags, which is all an edge's
    blocking status or a vertex's coverage can depend on when everyone ranks
    at most two partners.  Small components, so plain enumeration of the two
    flags per edge with pruning would also do; the scan keeps it linear.
    """
    # Build the vertex order of the path/cycle.
    adj: dict[tuple[str, int], list[tuple[int, int]]] = {}
    for m, w in edges:
        adj.setdefault(("m", m), []).append((m, w))
        adj.setdefault(("w", w), []).append((m, w))
    ends = sorted(v for v, es in adj.items() if len(es) == 1)
    is_cycle = not ends
    start = ends[0] if ends else min(adj)
    ordered_edges: list[tuple[int, int]] = []
    vertices = [start]
    prev_edge: Optional[tuple[int, int]] = None
    cur = start
    while True:
        options = [e for e in adj[cur] if e != prev_edge]
        if not options:
            break
        e = options[0]
        ordered_edges.append(e)
        nxt = ("w", e[1]) if cur[0] == "m" else ("m", e[0])
        vertices.append(nxt)
        prev_edge = e
        cur = nxt
        if is_cycle and cur == start:
            vertices.pop()
            break

    t = len(ordered_edges)

    def distinguished(v: tuple[str, int]) -> bool:
        return (
            v[1] in inst.distinguished_men
            if v[0] == "m"
            else v[1] in inst.distinguished_women
        )

    def edge_blocks(i: int, left_on: bool, on: bool, right_on: bool) -> bool:
        """Blocking status of edge i given the flags of its window.

        ``left_on`` is the edge sharing the walk's earlier endpoint,
        ``right_on`` the one sharing the later endpoint.
        """
        if on:
            return False
        m, w = ordered_edges[i]
        lo_vertex = vertices[i]
        m_other = left_on if lo_vertex[0] == "m" else right_on
        w_other = left_on if lo_vertex[0] == "w" else right_on
        # the partner an endpoint gets from its other window edge
        m_partner = None
        if m_other:
            j = i - 1 if (lo_vertex[0] == "m") else i + 1
            m_partner = ordered_edges[j % t][1]
        w_partner = None
        if w_other:
            j = i - 1 if (lo_vertex[0] == "w") else i + 1
            w_partner = ordered_edges[j % t][0]
        return inst.prefers_m(m, w, m_partner) and inst.prefers_w(w, m, w_partner)

    best: Optional[tuple[int, list[tuple[int, int]]]] = None

    if not is_cycle:
        # state: flags of edges (i-1, i); cost accounts for edges < i
        start_states = {}
        for x0 in (False, True):
            if distinguished(vertices[0]) and not x0:
                continue
            start_states[(False, x0)] = (0, (x0,))
        states = start_states
        for i in range(t):
            nxt: dict[tuple[bool, bool], tuple[int, tuple[bool, ...]]] = {}
            for (xp, xi), (cost, flags) in states.items():
                options = (False,) if (i == t - 1) else (False, True)
                for xn in options if not xi else (False,):
                    # vertex between edge i and edge i+1 (or the path end)
                    v = vertices[i + 1]
                    covered = xi or (xn if i < t - 1 else False)
                    if distinguished(v) and not covered:
                        continue
                    c = cost + (1 if edge_blocks(i, xp, xi, xn) else 0)
                    key = (xi, xn)
                    new_flags = flags + ((xn,) if i < t - 1 else ())
                    if key not in nxt or c < nxt[key][0]:
                        nxt[key] = (c, new_flags)
            states = nxt
        for (xp, xi), (cost, flags) in states.items():
            if best is None or cost < best[0]:
                best = (cost, [ordered_edges[i] for i, f in enumerate(flags) if f])
        return best

    # cycle: seed the first two flags, close the wrap-around at the end
    for seed0 in (False, True):
        for seed1 in (False, True):
            if seed0 and seed1:
                continue
            v1 = vertices[1 % len(vertices)]
            if distinguished(v1) and not (seed0 or seed1):
                continue
            states = {(seed0, seed1): (0, (seed0, seed1))}
            for i in range(1, t - 1):
                nxt = {}
                for (xp, xi), (cost, flags) in states.items():
                    for xn in (False, True):
                        if xi and xn:
                            continue
                        v = vertices[(i + 1) % len(vertices)]
                        covered = xi or xn
                        if distinguished(v) and not covered:
                            continue
                        c = cost + (1 if edge_blocks(i, xp, xi, xn) else 0)
                        key = (xi, xn)
                        new_flags = flags + (xn,)
                        if key not in nxt or c < nxt[key][0]:
                            nxt[key] = (c, new_flags)
                states = nxt
            for (xp, xl), (cost, flags) in states.items():
                # wrap checks: edge t-1 window is (xp, xl, seed0); edge 0
                # window is (xl, seed0, seed1); vertex 0 sits between them
                if xl and seed0:
                    continue
                if distinguished(vertices[0]) and not (xl or seed0):
                    continue
                c = (
                    cost
                    + (1 if edge_blocks(t - 1, xp, xl, seed0) else 0)
                    + (1 if edge_blocks(0, xl, seed0, seed1) else 0)
                )
                if best is None or c < best[0]:
                    best = (c, [ordered_edges[i] for i, f in enumerate(flags) if f])
    return best


def solve_paths_and_cycles(inst: SmcInstance) -> SolveResult:
    """Optimal solver when every preference list has length at most two.

    The acceptability graph is then a disjoint union of paths and cycles;
    component optima are independent and sum.
    """
    profile_dm = max((len(p) for p in inst.men), default=0)
    profile_dw = max((len(p) for p in inst.women), default=0)
    if profile_dm > 2 or profile_dw > 2:
        raise WrongAlgorithmError(
            "paths-and-cycles solver needs every list of length at most two"
        )
    for w in inst.distinguished_women:
        if not inst.women[w]:
            return infeasible_result(inst, AlgorithmTag.PATHS_AND_CYCLES)
    for m in inst.distinguished_men:
        if not inst.men[m]:
            return infeasible_result(inst, AlgorithmTag.PATHS_AND_CYCLES)
    pairs: list[tuple[int, int]] = []
    for comp in _component_edges(inst):
        best = _component_best(inst, comp)
        if best is None:
            return infeasible_result(inst, AlgorithmTag.PATHS_AND_CYCLES)
        pairs.extend(best[1])
    matching = Matching.from_pairs(inst.n_men, inst.n_women, pairs)
    return make_result(inst, matching, AlgorithmTag.PATHS_AND_CYCLES, optimal=True)


# ---------------------------------------------------------------------------
# Quota-instance (hospitals/residents) exact counterparts


def enumerate_oracle_hrlq(
    inst: HrlqInstance, cap: Optional[int] = None
) -> HrlqResult:
    """Brute-force minimum-blocking feasible assignment."""
    limit = _oracle_cap(cap)
    if inst.n_residents + inst.n_hospitals > limit:
        raise SizeCapError("instance exceeds the oracle cap")
    best: Optional[tuple[int, tuple[Optional[int], ...]]] = None
    load = [0] * inst.n_hospitals
    hosp: list[Optional[int]] = [None] * inst.n_residents

    def walk(r: int) -> None:
        nonlocal best
        if r == inst.n_residents:
            if all(
                lo <= load[h] for h, (_, lo, _) in enumerate(inst.hospitals)
            ):
                a = Assignment(tuple(hosp))
                count = len(blocking_pairs_hrlq(inst, a))
                if best is None or count < best[0]:
                    best = (count, tuple(hosp))
            return
        walk_options = [None] + list(inst.residents[r])
        for h in walk_options:
            if h is not None:
                if load[h] >= inst.hospitals[h][2]:
                    continue
                load[h] += 1
            hosp[r] = h
            walk(r + 1)
            hosp[r] = None
            if h is not None:
                load[h] -= 1

    walk(0)
    if best is None:
        return infeasible_hrlq_result(inst, AlgorithmTag.ORACLE)
    return make_hrlq_result(
        inst, Assignment(best[1]), AlgorithmTag.ORACLE, optimal=True
    )


def hrlq_edges(inst: HrlqInstance) -> tuple[tuple[int, int], ...]:
    return tuple(
        (r, h) for r in range(inst.n_residents) for h in sorted(inst.residents[r])
    )


def solve_guess_delete_hrlq(
    inst: HrlqInstance, budget: int
) -> HrlqResult | NoSolutionWithin:
    """Guess-and-delete, run natively on the quota instance.

    Deferred acceptance on the pruned instance assigns every hospital the
    same number of residents as any stable assignment of it does, so
    feasibility transfers exactly as in the one-to-one case.
    """
    edges = hrlq_edges(inst)
    for size in range(0, budget + 1):
        for deleted in combinations(edges, size):
            a = gale_shapley_hr(inst, deleted=frozenset(deleted))
            if a.is_feasible(inst):
                return make_hrlq_result(
                    inst, a, AlgorithmTag.GUESS_DELETE, optimal=False
                )
    return NoSolutionWithin(budget)


def solve_min_guess_delete_hrlq(inst: HrlqInstance) -> HrlqResult:
    """Smallest budget at which quota guess-and-delete succeeds."""
    # Feasibility: can every hospital fill its lower quota simultaneously?
    from .bipartite import hopcroft_karp

    slots: list[tuple[int, int]] = []
    for h, (_, lo, _) in enumerate(inst.hospitals):
        slots.extend((h, c) for c in range(lo))
    adj = [
        [j for j, (h, _) in enumerate(slots) if h in inst.rank_r[r]]
        for r in range(inst.n_residents)
    ]
    matched = sum(1 for x in hopcroft_karp(adj, len(slots)) if x is not None)
    if matched < len(slots):
        return infeasible_hrlq_result(inst, AlgorithmTag.GUESS_DELETE)
    budget = 0
    while True:
        out = solve_guess_delete_hrlq(inst, budget)
        if isinstance(out, HrlqResult):
            return HrlqResult(
                assignment=out.assignment,
                blocking=out.blocking,
                algorithm=out.algorithm,
                optimal=True,
            )
        budget += 1
