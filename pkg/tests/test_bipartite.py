from __future__ import annotations

import itertools
import random

from smcsolve.bipartite import (
    cover_distinguished,
    hopcroft_karp,
    max_matching,
    min_weight_cover_matching,
)
from smcsolve.model import SmcInstance, is_feasible
from smcsolve.randgen import random_smc


def brute_force_max_matching(adj, n_right):
    edges = [(u, v) for u, nbrs in enumerate(adj) for v in nbrs]
    best = 0
    for r in range(len(edges), 0, -1):
        for chosen in itertools.combinations(edges, r):
            if len({u for u, _ in chosen}) == r and len({v for _, v in chosen}) == r:
                return r
    return best


def test_fix_a_graph_has_perfect_matching(fix_a):
    assert max_matching(fix_a).size() == 2


def test_empty_graph():
    inst = SmcInstance(men=((), ()), women=((),))
    assert max_matching(inst).size() == 0


def test_complete_3x3():
    full = tuple((0, 1, 2) for _ in range(3))
    inst = SmcInstance(men=full, women=full)
    assert max_matching(inst).size() == 3


def test_hopcroft_karp_against_brute_force():
    rng = random.Random(17)
    for _ in range(500):
        n_l, n_r = rng.randint(0, 5), rng.randint(0, 5)
        adj = [
            sorted({rng.randrange(n_r) for _ in range(rng.randint(0, n_r))})
            if n_r
            else []
            for _ in range(n_l)
        ]
        got = sum(1 for v in hopcroft_karp(adj, n_r) if v is not None)
        assert got == brute_force_max_matching(adj, n_r)


class TestCoverDistinguished:
    def test_fix_a(self, fix_a):
        out = cover_distinguished(fix_a)
        assert out.pairs() == ((0, 1),)

    def test_fix_b_infeasible(self, fix_b):
        assert cover_distinguished(fix_b) is None

    def test_no_distinguished_gives_empty(self):
        inst = SmcInstance(men=((0,),), women=((0,),))
        assert cover_distinguished(inst).pairs() == ()

    def test_random_outputs_cover_and_touch_distinguished(self):
        rng = random.Random(18)
        seen_feasible = 0
        for _ in range(400):
            inst = random_smc(
                rng,
                rng.randint(1, 6),
                rng.randint(1, 6),
                0.5,
                star_women=rng.randint(0, 3),
                star_men=rng.randint(0, 3),
            )
            out = cover_distinguished(inst)
            if out is None:
                # cross-check with brute force over all matchings
                assert not _coverable_brute_force(inst)
                continue
            seen_feasible += 1
            assert is_feasible(inst, out)
            for m, w in out.pairs():
                assert m in inst.distinguished_men or w in inst.distinguished_women
        assert seen_feasible > 50


def _coverable_brute_force(inst) -> bool:
    edges = inst.edges
    for r in range(len(edges) + 1):
        for chosen in itertools.combinations(edges, r):
            if len({m for m, _ in chosen}) < r or len({w for _, w in chosen}) < r:
                continue
            men = {m for m, _ in chosen}
            women = {w for _, w in chosen}
            if inst.distinguished_men <= men and inst.distinguished_women <= women:
                return True
    return False


class TestMinWeightCover:
    def test_star_picks_cheap_side(self):
        out = min_weight_cover_matching({"c": {"a": 3, "b": 1}}, ["c"])
        assert out == {"c": "b"}

    def test_empty_cover(self):
        assert min_weight_cover_matching({}, []) == {}

    def test_shared_single_neighbor_infeasible(self):
        adj = {"a": {"x": 1}, "b": {"x": 2}}
        assert min_weight_cover_matching(adj, ["a", "b"]) is None

    def test_against_brute_force(self):
        rng = random.Random(19)
        for _ in range(500):
            n_l, n_r = rng.randint(1, 4), rng.randint(1, 4)
            adj = {
                u: {
                    v: rng.randint(0, 9)
                    for v in range(n_r)
                    if rng.random() < 0.6
                }
                for u in range(n_l)
            }
            lefts = list(range(n_l))
            got = min_weight_cover_matching(adj, lefts)
            best = None
            rights = list(range(n_r))
            for perm in itertools.permutations(rights, n_l):
                if all(perm[u] in adj[u] for u in lefts):
                    weight = sum(adj[u][perm[u]] for u in lefts)
                    if best is None or weight < best:
                        best = weight
            if best is None:
                assert got is None
            else:
                assert got is not None
                assert sum(adj[u][v] for u, v in got.items()) == best
