"""Generic bipartite machinery: maximum matching, matchings saturating a
prescribed vertex set, and minimum-weight matchings covering one side."""

from __future__ import annotations

import heapq
from collections import deque
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .errors import ValidationError
from .model import Matching, SmcInstance

_INF = float("inf")


def hopcroft_karp(adj: Sequence[Sequence[int]], n_right: int) -> list[Optional[int]]:
    """Maximum matching of a bipartite graph given as left adjacency lists.

    Returns ``match_left`` with ``match_left[u]`` the right partner or None.
    Deterministic: vertices are scanned in index order.
    """
    n_left = len(adj)
    match_left: list[Optional[int]] = [None] * n_left
    match_right: list[Optional[int]] = [None] * n_right
    dist = [0] * n_left

    def bfs() -> bool:
        queue = deque()
        found = False
        for u in range(n_left):
            if match_left[u] is None:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = -1
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_right[v]
                if w is None:
                    found = True
                elif dist[w] == -1:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_right[v]
            if w is None or (dist[w] == dist[u] + 1 and dfs(w)):
                match_left[u] = v
                match_right[v] = u
                return True
        dist[u] = -1
        return False

    while bfs():
        for u in range(n_left):
            if match_left[u] is None:
                dfs(u)
    return match_left


def max_matching(inst: SmcInstance) -> Matching:
    """A maximum-cardinality matching of the acceptability graph."""
    match_left = hopcroft_karp([sorted(p) for p in inst.men], inst.n_women)
    return Matching.from_pairs(
        inst.n_men,
        inst.n_women,
        [(m, w) for m, w in enumerate(match_left) if w is not None],
    )


class _MaxFlow:
    """Tiny Dinic-style max-flow on an explicit edge list."""

    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, c: int) -> int:
        idx = len(self.to)
        self.head[u].append(idx)
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(idx + 1)
        self.to.append(u)
        self.cap.append(0)
        return idx

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for idx in self.head[u]:
                    if self.cap[idx] > 0 and level[self.to[idx]] == -1:
                        level[self.to[idx]] = level[u] + 1
                        queue.append(self.to[idx])
            if level[t] == -1:
                return flow
            it = [0] * self.n

            def dfs(u: int, pushed: int) -> int:
                if u == t:
                    return pushed
                while it[u] < len(self.head[u]):
                    idx = self.head[u][it[u]]
                    v = self.to[idx]
                    if self.cap[idx] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(pushed, self.cap[idx]))
                        if got:
                            self.cap[idx] -= got
                            self.cap[idx ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 60)
                if not pushed:
                    break
                flow += pushed


def cover_distinguished(inst: SmcInstance) -> Optional[Matching]:
    """A matching covering all distinguished people, every edge of which
    touches a distinguished person; None when no such matching exists.

    Solved as a flow with demand 1 on each distinguished person: edges
    between two non-distinguished people are useless here and dropped
    up front, then saturating-flow feasibility is checked with the usual
    excess/deficit transformation.
    """
    dw = inst.distinguished_women
    dm = inst.distinguished_men
    if not dw and not dm:
        return Matching.from_pairs(inst.n_men, inst.n_women, [])
    edges = [
        (m, w) for (m, w) in inst.edges if m in dm or w in dw
    ]
    # Node ids: source, sink, supersource, supersink, men, women.
    S, T, SS, TT = 0, 1, 2, 3
    man0 = 4
    woman0 = man0 + inst.n_men
    fl = _MaxFlow(woman0 + inst.n_women)
    demand_total = 0
    for m in range(inst.n_men):
        if m in dm:
            # lower bound 1: route the demand through the supers
            fl.add_edge(S, TT, 1)
            fl.add_edge(SS, man0 + m, 1)
            demand_total += 1
        else:
            fl.add_edge(S, man0 + m, 1)
    for w in range(inst.n_women):
        if w in dw:
            fl.add_edge(woman0 + w, TT, 1)
            fl.add_edge(SS, T, 1)
            demand_total += 1
        else:
            fl.add_edge(woman0 + w, T, 1)
    edge_ids = {}
    for m, w in edges:
        edge_ids[(m, w)] = fl.add_edge(man0 + m, woman0 + w, 1)
    fl.add_edge(T, S, 1 << 60)
    if fl.max_flow(SS, TT) < demand_total:
        return None
    pairs = [
        (m, w) for (m, w), idx in edge_ids.items() if fl.cap[idx] == 0
    ]
    return Matching.from_pairs(inst.n_men, inst.n_women, pairs)


def min_weight_cover_matching(
    adj: Mapping[Hashable, Mapping[Hashable, int]],
    must_cover: Iterable[Hashable],
) -> Optional[dict[Hashable, Hashable]]:
    """Minimum-total-weight matching saturating every ``must_cover`` vertex.

    ``adj[u][v]`` is the nonnegative integer weight of edge (u, v); only
    ``must_cover`` vertices (all on the left side) are matched.  Returns a
    left-to-right partner map, or None when some must-cover vertex cannot be
    saturated.  Successive shortest augmenting paths with potentials; the
    must-cover vertices are the only roots of augmentation.
    """
    roots = sorted(must_cover, key=repr)
    for u in roots:
        for v, wt in adj.get(u, {}).items():
            if wt < 0:
                raise ValidationError(f"negative weight on edge ({u},{v})")
    rights = sorted({v for u in roots for v in adj.get(u, {})}, key=repr)
    nl, nr = len(roots), len(rights)
    cost = [[adj[roots[i]].get(rights[j]) for j in range(nr)] for i in range(nl)]
    match_l: list[Optional[int]] = [None] * nl
    match_r: list[Optional[int]] = [None] * nr
    for start in range(nl):
        # Shortest alternating path from this root in the residual graph
        # (matched edges are traversed backwards with negated cost), found
        # by Bellman-Ford relaxation; rows are added one at a time, which
        # keeps every prefix assignment optimal.
        dist_r: list[float] = [_INF] * nr
        prev_r: list[Optional[int]] = [None] * nr
        dist_l: list[float] = [_INF] * nl
        dist_l[start] = 0
        changed = True
        while changed:
            changed = False
            for i in range(nl):
                if dist_l[i] == _INF:
                    continue
                row = cost[i]
                for j in range(nr):
                    c = row[j]
                    if c is not None and match_l[i] != j and dist_l[i] + c < dist_r[j]:
                        dist_r[j] = dist_l[i] + c
                        prev_r[j] = i
                        changed = True
            for j in range(nr):
                i = match_r[j]
                if i is not None and dist_r[j] - cost[i][j] < dist_l[i]:
                    dist_l[i] = dist_r[j] - cost[i][j]
                    changed = True
        end: Optional[int] = None
        best = _INF
        for j in range(nr):
            if match_r[j] is None and dist_r[j] < best:
                best = dist_r[j]
                end = j
        if end is None:
            return None
        # walk the augmenting path backwards, flipping as we go
        j: Optional[int] = end
        while j is not None:
            i = prev_r[j]
            prev = match_l[i]
            match_l[i] = j
            match_r[j] = i
            j = prev
    return {roots[i]: rights[j] for i, j in enumerate(match_l) if j is not None}
