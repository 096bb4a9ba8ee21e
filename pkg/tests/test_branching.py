from __future__ import annotations

import random

import pytest

from smcsolve.branching import (
    BranchStats,
    Chain,
    classify_dependent,
    elimination_paths,
    forced_chain,
    generate_guesses,
    masculine_path_to,
    solve_women_deg2_fpt,
    solve_women_deg2_fpt_budget,
    volatile_edges,
)
from smcsolve.errors import WrongAlgorithmError
from smcsolve.exact import enumerate_oracle
from smcsolve.model import (
    Matching,
    SmcInstance,
    blocking_pairs,
    is_feasible,
)
from smcsolve.randgen import random_smc
from smcsolve.stable import gale_shapley


def rand_wd2(rng, max_side=8, star_cap=3):
    inst = random_smc(
        rng,
        rng.randint(1, max_side),
        rng.randint(1, max_side),
        0.45,
        max_deg_women=2,
    )
    m_s = gale_shapley(inst)
    women0 = [w for w in range(inst.n_women) if m_s.partner_of_woman[w] is None]
    men0 = [m for m in range(inst.n_men) if m_s.partner_of_man[m] is None]
    rng.shuffle(women0)
    rng.shuffle(men0)
    picks = [("w", w) for w in women0] + [("m", m) for m in men0]
    rng.shuffle(picks)
    picks = picks[:star_cap]
    return SmcInstance(
        men=inst.men,
        women=inst.women,
        distinguished_women=frozenset(x for s, x in picks if s == "w"),
        distinguished_men=frozenset(x for s, x in picks if s == "m"),
    )


class TestSolve:
    def test_fix_e(self, fix_e):
        out = solve_women_deg2_fpt(fix_e)
        assert out.n_blocking == 1
        assert out.matching.pairs() == ((0, 1), (1, 0))

    def test_no_constraints_returns_stable(self):
        rng = random.Random(51)
        inst = random_smc(rng, 6, 6, 0.4, max_deg_women=2)
        assert solve_women_deg2_fpt(inst).n_blocking == 0

    def test_gender_swapped_one_sided_instance(self, fix_a):
        out = solve_women_deg2_fpt(fix_a.swap_genders())
        assert out.n_blocking == 1

    def test_infeasible(self, fix_b):
        assert solve_women_deg2_fpt(fix_b.swap_genders()).infeasible

    def test_precondition(self):
        wide = SmcInstance(
            men=((0,), (0,), (0,)),
            women=((0, 1, 2),),
            distinguished_women=frozenset({0}),
        )
        with pytest.raises(WrongAlgorithmError):
            solve_women_deg2_fpt(wide)

    def test_matches_oracle_on_random_instances(self):
        rng = random.Random(52)
        for _ in range(500):
            inst = rand_wd2(rng)
            a = solve_women_deg2_fpt(inst)
            b = enumerate_oracle(inst)
            assert a.infeasible == b.infeasible
            if not a.infeasible:
                assert a.n_blocking == b.n_blocking
                assert is_feasible(inst, a.matching)

    def test_budget_entry_point_and_parameter_relation(self, fix_e, fix_a):
        out = solve_women_deg2_fpt_budget(fix_e)
        assert out.n_blocking == 1
        out2 = solve_women_deg2_fpt_budget(fix_a.swap_genders())
        assert out2.n_blocking == 1
        rng = random.Random(53)
        inst = random_smc(rng, 5, 5, 0.5, max_deg_women=2)
        assert solve_women_deg2_fpt_budget(inst).n_blocking == 0


class TestChains:
    def test_forced_chain_is_deterministic_prefix_family(self):
        # nestedness: all usable paths out of one first edge are prefixes of
        # the single maximal walk
        rng = random.Random(54)
        for _ in range(200):
            inst = rand_wd2(rng)
            m_s = gale_shapley(inst)
            for w in sorted(inst.distinguished_women):
                if m_s.partner_of_woman[w] is not None:
                    continue
                for first in inst.women[w]:
                    chain = forced_chain(inst, m_s, w, first)
                    assert chain.women[0] == w
                    assert len(chain.men) in (
                        len(chain.women),
                        len(chain.women) - 1 + (1 if chain.end_kind == "closure" else 0),
                    ) or chain.end_kind == "closure"
                    # women/men interleave and the closure index points back
                    if chain.end_kind == "closure":
                        assert 0 <= chain.closure_index < len(chain.men)


class TestDependentEdges:
    def test_no_cross_edges(self, fix_e):
        m_s = gale_shapley(fix_e)
        out = solve_women_deg2_fpt(fix_e)
        assert classify_dependent(fix_e, m_s, out.matching) == []

    def test_type_b_shape(self):
        # two feminine paths; the second one's interior man offers the first
        # one's end-woman a strictly middling alternative
        inst = SmcInstance(
            men=((1, 0), (3, 2), (3, 1, 4)),
            women=((0,), (0, 2), (1,), (1, 2), (2,)),
            distinguished_women=frozenset({0, 2}),
        )
        m_s = gale_shapley(inst)
        assert m_s.pairs() == ((0, 1), (1, 3), (2, 4))
        m_opt = Matching.from_pairs(3, 5, [(0, 0), (1, 2), (2, 3)])
        found = classify_dependent(inst, m_s, m_opt)
        assert [(d.edge, d.kind) for d in found] == [((2, 1), "B")]

    def test_type_a_shape(self):
        # a feminine path's man is the second choice of a masculine path's
        # end-woman
        inst = SmcInstance(
            men=((1, 3, 0), (2, 3), (2,)),
            women=((0,), (0,), (1, 2), (1, 0)),
            distinguished_women=frozenset({0}),
            distinguished_men=frozenset({2}),
        )
        m_s = gale_shapley(inst)
        assert m_s.pairs() == ((0, 1), (1, 2))
        m_opt = Matching.from_pairs(3, 4, [(0, 0), (1, 3), (2, 2)])
        found = classify_dependent(inst, m_s, m_opt)
        assert [(d.edge, d.kind) for d in found] == [((0, 3), "A")]


class TestElimination:
    def chain_instance(self):
        # two uncovered distinguished men; fixing one volatile edge exposes
        # the next, so the closure needs both masculine paths
        return SmcInstance(
            men=((0, 3, 2), (0,), (1, 3), (1,), (4, 2)),
            women=((0, 1), (2, 3), (0, 4), (2, 0), (4,)),
            distinguished_men=frozenset({1, 3}),
        )

    def test_chained_closure(self):
        inst = self.chain_instance()
        m_s = gale_shapley(inst)
        assert m_s.pairs() == ((0, 0), (2, 1), (4, 4))
        vols = volatile_edges(inst, m_s)
        assert vols == ((0, 3), (4, 2))
        closure = elimination_paths(inst, m_s, (4, 2), frozenset(), vols)
        assert closure is not None
        assert [c.men[0] for c in closure] == [1, 3]
        assert [c.women[-1] for c in closure] == [2, 3]

    def test_single_step_closure(self):
        inst = SmcInstance(
            men=((0, 1), (0,), (2, 1)),
            women=((0, 1), (0, 2), (2,)),
            distinguished_men=frozenset({1}),
        )
        m_s = gale_shapley(inst)
        vols = volatile_edges(inst, m_s)
        assert vols == ((2, 1),)
        closure = elimination_paths(inst, m_s, (2, 1), frozenset(), vols)
        assert closure is not None and len(closure) == 1
        assert closure[0].men[0] == 1

    def test_not_eliminable(self):
        # the end-woman's first choice is matched to a woman with no other
        # suitor, so no masculine path can reach her
        inst = SmcInstance(
            men=((0, 1),),
            women=((0,), (0,)),
            distinguished_men=frozenset(),
        )
        m_s = gale_shapley(inst)
        assert (
            masculine_path_to(inst, m_s, 1, frozenset()) is None
        )


class TestOutputProperties:
    def test_no_volatile_edge_on_masculine_paths_blocks(self):
        rng = random.Random(55)
        for _ in range(300):
            inst = rand_wd2(rng)
            out = solve_women_deg2_fpt(inst)
            if out.infeasible:
                continue
            m_s = gale_shapley(inst)
            masculine_vertices = set()
            comps = _diff_comps(m_s, out.matching)
            for comp in comps:
                if any(
                    side == "m" and m_s.partner_of_man[idx] is None
                    for side, idx in comp
                ):
                    masculine_vertices |= comp
            blocked = set(out.blocking)
            for m, w in volatile_edges(inst, m_s):
                if ("m", m) in masculine_vertices or ("w", w) in masculine_vertices:
                    assert (m, w) not in blocked

    def test_components_are_load_bearing(self):
        # removing any whole component of the difference either breaks
        # feasibility or strictly increases the blocking count
        rng = random.Random(56)
        for _ in range(250):
            inst = rand_wd2(rng, max_side=6)
            out = solve_women_deg2_fpt(inst)
            if out.infeasible:
                continue
            m_s = gale_shapley(inst)
            for comp in _diff_comps(m_s, out.matching):
                reverted = _revert_component(inst, m_s, out.matching, comp)
                assert (not is_feasible(inst, reverted)) or len(
                    blocking_pairs(inst, reverted)
                ) > out.n_blocking

    def test_guess_count_depends_only_on_parameter(self):
        counts = []
        for pad in (0, 2, 4):
            inst = _two_parameter_core(pad)
            stats = BranchStats()
            out = solve_women_deg2_fpt(inst, stats)
            assert not out.infeasible
            counts.append(stats.guesses)
        assert counts[0] == counts[1] == counts[2]


def _two_parameter_core(pad: int) -> SmcInstance:
    """One uncovered distinguished woman + one uncovered distinguished man,
    plus ``pad`` mutually-first-choice couples that never interact."""
    men = [(1, 0), (2, 0), (3,), (3,)]
    women = [(0, 1), (0,), (1,), (2, 3)]
    base_m, base_w = 4, 4
    for i in range(pad):
        men.append((base_w + i,))
        women.append((base_m + i,))
    return SmcInstance(
        men=tuple(men),
        women=tuple(women),
        distinguished_women=frozenset({0}),
        distinguished_men=frozenset({3}),
    )


def _diff_comps(m_s, other):
    edges = set(m_s.pairs()) ^ set(other.pairs())
    adj = {}
    for m, w in edges:
        adj.setdefault(("m", m), set()).add(("w", w))
        adj.setdefault(("w", w), set()).add(("m", m))
    comps, seen = [], set()
    for v in sorted(adj):
        if v in seen:
            continue
        stack, comp = [v], set()
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.add(u)
            for x in adj[u]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        comps.append(frozenset(comp))
    return comps


def _revert_component(inst, m_s, matching, comp):
    pm = list(matching.partner_of_man)
    pw = list(matching.partner_of_woman)
    for side, idx in comp:
        if side == "m":
            pm[idx] = None
        else:
            pw[idx] = None
    for side, idx in comp:
        if side == "m":
            w = m_s.partner_of_man[idx]
            if w is not None and ("w", w) in comp:
                pm[idx] = w
                pw[w] = idx
    pairs = [(m, w) for m, w in enumerate(pm) if w is not None and pw[w] == m]
    return Matching.from_pairs(inst.n_men, inst.n_women, pairs)
