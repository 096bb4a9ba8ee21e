"""Optimal one-sided covering via augmenting paths, for markets where every
man ranks at most two women.

Relative to a stable matching, each uncovered distinguished woman can only be
re-covered by flipping an alternating path that starts at her.  When men rank
at most two women those paths form a tree per start (branching only at
women), trees of different starts are disjoint except for shared unmatched-men
endpoints, and picking one path per start reduces to a minimum-weight
bipartite matching.  A final sweep re-routes paths to absorb blocking edges
at unmatched men's second choices, which the path weights deliberately
ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .bipartite import min_weight_cover_matching
from .errors import WrongAlgorithmError
from .model import (
    AlgorithmTag,
    Matching,
    SmcInstance,
    SolveResult,
    blocking_pairs,
    infeasible_result,
    make_result,
)
from .stable import gale_shapley


@dataclass(frozen=True)
class AugPath:
    """An alternating path starting at an uncovered distinguished woman.

    ``women`` and ``men`` interleave as women[0], men[0], women[1], ...;
    the path ends at ``men[-1]`` (an unmatched man) when ``ends_at_man``,
    otherwise at ``women[-1]`` whose partner it takes away.  ``cost`` is the
    number of blocking pairs of the flipped stable matching, ``special_cost``
    the same count ignoring unmatched men's second-choice edges.
    """

    women: tuple[int, ...]
    men: tuple[int, ...]
    ends_at_man: bool
    cost: int
    special_cost: int

    @property
    def start(self) -> int:
        return self.women[0]

    @property
    def end_vertex(self) -> tuple[str, int]:
        return ("m", self.men[-1]) if self.ends_at_man else ("w", self.women[-1])

    def vertex_seq(self) -> tuple[tuple[str, int], ...]:
        out: list[tuple[str, int]] = []
        for i, w in enumerate(self.women):
            out.append(("w", w))
            if i < len(self.men):
                out.append(("m", self.men[i]))
        return tuple(out)

    def vertices(self) -> frozenset[tuple[str, int]]:
        return frozenset(self.vertex_seq())

    def edge_pairs(self) -> tuple[tuple[int, int], ...]:
        """All (man, woman) edges along the path."""
        out = []
        for i, m in enumerate(self.men):
            out.append((m, self.women[i]))
            if i + 1 < len(self.women):
                out.append((m, self.women[i + 1]))
        return tuple(out)


def flip_pairs(
    m_s: Matching, paths: Iterable[AugPath]
) -> list[tuple[int, int]]:
    """Pairs of the matching obtained by flipping ``paths`` on ``m_s``."""
    pm = list(m_s.partner_of_man)
    pw = list(m_s.partner_of_woman)
    for p in paths:
        # the flip matches men[i] with women[i]; a woman end loses her mate
        for i, m in enumerate(p.men):
            pm[m] = p.women[i]
        for i, w in enumerate(p.women):
            if i < len(p.men):
                pw[w] = p.men[i]
            else:
                pw[w] = None
    return [(m, w) for m, w in enumerate(pm) if w is not None and pw[w] == m]


def flip_matching(
    inst: SmcInstance, m_s: Matching, paths: Iterable[AugPath]
) -> Matching:
    return Matching.from_pairs(inst.n_men, inst.n_women, flip_pairs(m_s, paths))


def special_edges(inst: SmcInstance, m_s: Matching) -> tuple[tuple[int, int], ...]:
    """Unmatched men's second-choice edges, sorted."""
    out = []
    for m in range(inst.n_men):
        if m_s.partner_of_man[m] is None and len(inst.men[m]) == 2:
            out.append((m, inst.men[m][1]))
    return tuple(sorted(out))


def _path_costs(
    inst: SmcInstance,
    m_s: Matching,
    path_women: list[int],
    path_men: list[int],
    ends_at_man: bool,
    specials: frozenset[tuple[int, int]],
) -> tuple[int, int]:
    p = AugPath(tuple(path_women), tuple(path_men), ends_at_man, 0, 0)
    blocked = blocking_pairs(inst, flip_matching(inst, m_s, [p]))
    cost = len(blocked)
    special_cost = cost - sum(1 for e in blocked if e in specials)
    return cost, special_cost


def enumerate_aug_paths(
    inst: SmcInstance,
    m_s: Matching,
    starts: Optional[Iterable[int]] = None,
    forbidden_vertices: frozenset[tuple[str, int]] = frozenset(),
    forbidden_edges: frozenset[tuple[int, int]] = frozenset(),
) -> dict[int, list[AugPath]]:
    """All augmenting paths from each start woman, with costs.

    Requires men to rank at most two women, which is what makes the union of
    paths from one start a tree (every vertex has a unique predecessor) and
    lets a plain DFS with a visited set enumerate everything.  Paths never
    end at a matched distinguished woman and never touch forbidden vertices
    or traverse forbidden edges.  ``starts`` defaults to the uncovered
    distinguished women.
    """
    if any(len(p) > 2 for p in inst.men):
        raise WrongAlgorithmError("path enumeration needs men's lists of length <= 2")
    if starts is None:
        starts = [
            w
            for w in sorted(inst.distinguished_women)
            if m_s.partner_of_woman[w] is None
        ]
    specials = frozenset(special_edges(inst, m_s))
    result: dict[int, list[AugPath]] = {}
    for start in starts:
        found: list[AugPath] = []
        if ("w", start) in forbidden_vertices:
            result[start] = found
            continue

        visited_w = {start}
        visited_m: set[int] = set()

        def extend(women: list[int], men: list[int]) -> None:
            w_cur = women[-1]
            for m in sorted(inst.women[w_cur]):
                if m == m_s.partner_of_woman[w_cur]:
                    continue
                if ("m", m) in forbidden_vertices or m in visited_m:
                    continue
                if (m, w_cur) in forbidden_edges:
                    continue
                w_next = m_s.partner_of_man[m]
                if w_next is None:
                    # ends at an unmatched man; uncovering nobody.  A
                    # distinguished end would tie two covering problems
                    # together, which the callers handle separately.
                    if m not in inst.distinguished_men:
                        cost, sc = _path_costs(
                            inst, m_s, women, men + [m], True, specials
                        )
                        found.append(
                            AugPath(tuple(women), tuple(men + [m]), True, cost, sc)
                        )
                    continue
                if (
                    w_next in visited_w
                    or ("w", w_next) in forbidden_vertices
                    or (m, w_next) in forbidden_edges
                ):
                    continue
                visited_m.add(m)
                visited_w.add(w_next)
                women.append(w_next)
                men.append(m)
                if w_next not in inst.distinguished_women:
                    cost, sc = _path_costs(inst, m_s, women, men, False, specials)
                    found.append(
                        AugPath(tuple(women), tuple(men), False, cost, sc)
                    )
                extend(women, men)
                women.pop()
                men.pop()

        extend([start], [])
        result[start] = found
    return result


@dataclass(frozen=True)
class PathGraph:
    """Weighted options per start woman: unmatched-men endpoints, plus a
    private sink standing for 'end at some woman'."""

    starts: tuple[int, ...]
    adj: dict[int, dict[tuple[str, int], int]]
    representative: dict[tuple[int, tuple[str, int]], AugPath]


def build_path_graph(paths_by_start: dict[int, list[AugPath]]) -> PathGraph:
    adj: dict[int, dict[tuple[str, int], int]] = {}
    rep: dict[tuple[int, tuple[str, int]], AugPath] = {}
    for start, paths in paths_by_start.items():
        options: dict[tuple[str, int], AugPath] = {}
        for p in sorted(paths, key=lambda q: (q.special_cost, q.vertex_seq())):
            key = ("m", p.men[-1]) if p.ends_at_man else ("copy", start)
            if key not in options:
                options[key] = p
        adj[start] = {key: p.special_cost for key, p in options.items()}
        for key, p in options.items():
            rep[(start, key)] = p
    return PathGraph(tuple(sorted(paths_by_start)), adj, rep)


def min_cost_path_family(
    inst: SmcInstance,
    m_s: Matching,
    starts: Iterable[int],
    forbidden_vertices: frozenset[tuple[str, int]] = frozenset(),
    forbidden_edges: frozenset[tuple[int, int]] = frozenset(),
) -> Optional[list[AugPath]]:
    """One augmenting path per start, minimizing blocking pairs overall.

    Selects a minimum-special-cost disjoint family via bipartite matching,
    then repeatedly truncates paths to absorb any special edge that still
    blocks: re-matching the unmatched man of such an edge to its woman costs
    nothing and removes the blocker.  Returns None when some start cannot be
    covered.
    """
    starts = sorted(starts)
    if not starts:
        return []
    paths_by_start = enumerate_aug_paths(
        inst, m_s, starts, forbidden_vertices, forbidden_edges
    )
    graph = build_path_graph(paths_by_start)
    chosen = min_weight_cover_matching(graph.adj, starts)
    if chosen is None:
        return None
    family = [graph.representative[(w, key)] for w, key in sorted(chosen.items())]
    # families from distinct starts are disjoint by the tree structure; the
    # matching kept unmatched-men endpoints distinct
    _assert_disjoint(family)
    specials = [
        e
        for e in special_edges(inst, m_s)
        if ("m", e[0]) not in forbidden_vertices
        and ("w", e[1]) not in forbidden_vertices
        and e not in forbidden_edges
    ]
    rounds = 0
    max_rounds = sum(1 for m in range(inst.n_men) if m_s.partner_of_man[m] is None) + 1
    while True:
        current = flip_matching(inst, m_s, family)
        blocked = set(blocking_pairs(inst, current))
        fix = next((e for e in specials if e in blocked), None)
        if fix is None:
            break
        rounds += 1
        if rounds > max_rounds:
            raise AssertionError("special-edge elimination failed to settle")
        m_star, w_star = fix
        idx = next(
            i for i, p in enumerate(family) if ("w", w_star) in p.vertices()
        )
        p = family[idx]
        k = p.women.index(w_star)
        truncated = AugPath(
            women=p.women[: k + 1],
            men=tuple(list(p.men[:k]) + [m_star]),
            ends_at_man=True,
            cost=0,
            special_cost=0,
        )
        family[idx] = truncated
    return family


def _assert_disjoint(family: list[AugPath]) -> None:
    seen: set[tuple[str, int]] = set()
    for p in family:
        vs = p.vertices()
        if seen & vs:
            raise AssertionError("augmenting paths overlap")
        seen |= vs


def solve_men_deg2(inst: SmcInstance) -> SolveResult:
    """Optimal solver for one-sided covering with men's lists of length <= 2."""
    if inst.distinguished_men:
        raise WrongAlgorithmError("this solver handles distinguished women only")
    if any(len(p) > 2 for p in inst.men):
        raise WrongAlgorithmError("every man must rank at most two women")
    m_s = gale_shapley(inst)
    starts = [
        w for w in sorted(inst.distinguished_women) if m_s.partner_of_woman[w] is None
    ]
    family = min_cost_path_family(inst, m_s, starts)
    if family is None:
        return infeasible_result(inst, AlgorithmTag.MEN_DEG2)
    final = flip_matching(inst, m_s, family)
    return make_result(inst, final, AlgorithmTag.MEN_DEG2, optimal=True)


def solve_women_deg2_restricted(
    inst: SmcInstance,
    forbidden_vertices: frozenset[tuple[str, int]] = frozenset(),
    forbidden_edges: frozenset[tuple[int, int]] = frozenset(),
) -> SolveResult:
    """Role-swapped variant: cover the uncovered distinguished men of a
    market where every woman ranks at most two men, keeping all paths clear
    of the forbidden vertices and edges (given in original-instance terms).
    """
    if any(len(p) > 2 for p in inst.women):
        raise WrongAlgorithmError("every woman must rank at most two men")
    swapped = inst.swap_genders()
    fv = frozenset(
        ("w" if side == "m" else "m", idx) for side, idx in forbidden_vertices
    )
    fe = frozenset((w, m) for m, w in forbidden_edges)
    m_s = gale_shapley(inst)
    m_s_swapped = Matching(m_s.partner_of_woman, m_s.partner_of_man)
    starts = [
        m
        for m in sorted(inst.distinguished_men)
        if m_s.partner_of_man[m] is None and ("m", m) not in forbidden_vertices
    ]
    family = min_cost_path_family(swapped, m_s_swapped, starts, fv, fe)
    if family is None:
        return infeasible_result(inst, AlgorithmTag.WOMEN_DEG2)
    pairs = [(w, m) for m, w in flip_pairs(m_s_swapped, family)]
    final = Matching.from_pairs(inst.n_men, inst.n_women, pairs)
    return make_result(inst, final, AlgorithmTag.WOMEN_DEG2, optimal=True)
