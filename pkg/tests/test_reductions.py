from __future__ import annotations

import random

import pytest

from smcsolve.errors import SizeCapError, ValidationError
from smcsolve.exact import enumerate_oracle
from smcsolve.model import blocking_pairs, is_feasible, param_profile
from smcsolve.reductions import (
    ColoredGraph,
    PlainGraph,
    forcing_witness,
    mcc_witness,
    parse_colored_graph,
    parse_graph,
    parse_x3c,
    reduce_forcing_gadget,
    reduce_multicolored_clique,
    reduce_two_women_masterlist,
    reduce_vertex_cover,
    reduce_x3c,
    two_women_witness,
    vc_witness,
    verify_reduction,
    x3c_witness,
)
from smcsolve.stable import unmatched_profile


def triangle():
    return ColoredGraph(
        parts=(("v1",), ("v2",), ("v3",)),
        edges=(("v1", "v2"), ("v1", "v3"), ("v2", "v3")),
    )


class TestColoredClique:
    def test_triangle_structure(self):
        out = reduce_multicolored_clique(triangle())
        inst = out.instance
        assert out.budget == 9
        assert len(inst.distinguished_women) == 42
        p = param_profile(inst)
        assert (p.delta_m, p.delta_w) == (3, 3)
        assert p.has_master_list_men and p.has_master_list_women
        assert all(len(inst.women[w]) == 1 for w in inst.distinguished_women)

    def test_stable_matching_misses_exactly_the_entry_women(self):
        out = reduce_multicolored_clique(triangle())
        _, unmatched_women = unmatched_profile(out.instance)
        s_women = {
            out.woman(n) for n in out.women_names if n.startswith("s_")
        }
        assert unmatched_women == frozenset(s_women)

    def test_advertised_master_list_is_consistent(self):
        out = reduce_multicolored_clique(triangle())
        order = {
            out.woman(name): i
            for i, name in enumerate(out.witness_map["women_master"])
        }
        for prefs in out.instance.men:
            assert all(order[a] < order[b] for a, b in zip(prefs, prefs[1:]))

    def test_witness_meets_budget_exactly(self):
        out = reduce_multicolored_clique(triangle())
        wit = mcc_witness(out, ["v1", "v2", "v3"])
        assert is_feasible(out.instance, wit)
        assert len(blocking_pairs(out.instance, wit)) == out.budget

    def test_verify_clique_instance(self):
        out = reduce_multicolored_clique(triangle())
        wit = mcc_witness(out, ["v1", "v2", "v3"])
        assert verify_reduction(out, True, witness=wit)

    def test_missing_pair_is_infeasible_and_verifies(self):
        g = ColoredGraph(
            parts=(("v1",), ("v2",), ("v3",)),
            edges=(("v1", "v2"), ("v2", "v3")),
        )
        out = reduce_multicolored_clique(g)
        assert verify_reduction(out, False)

    def test_bigger_parts_structure(self):
        g = ColoredGraph(
            parts=(("a1", "a2"), ("b1",), ("c1",)),
            edges=(
                ("a1", "b1"),
                ("a2", "b1"),
                ("a1", "c1"),
                ("b1", "c1"),
                ("a2", "c1"),
            ),
        )
        out = reduce_multicolored_clique(g)
        inst = out.instance
        k = 3
        assert out.budget == 2 * k + 3
        assert len(inst.distinguished_women) == 2 * 3 + 2 * k + k * (3 + 2 * k + 1)
        p = param_profile(inst)
        assert p.delta_m <= 3 and p.delta_w <= 3
        assert p.has_master_list_men and p.has_master_list_women
        wit = mcc_witness(out, ["a1", "b1", "c1"])
        assert len(blocking_pairs(out.instance, wit)) == out.budget
        wit2 = mcc_witness(out, ["a2", "b1", "c1"])
        assert len(blocking_pairs(out.instance, wit2)) == out.budget

    def test_rejects_malformed_colorings(self):
        with pytest.raises(ValidationError, match="isolated"):
            ColoredGraph(parts=(("a",), ("b",)), edges=())
        with pytest.raises(ValidationError, match="inside one part"):
            ColoredGraph(parts=(("a", "b"), ("c",)), edges=(("a", "b"),))
        with pytest.raises(ValidationError, match="twice"):
            ColoredGraph(parts=(("a",), ("a",)), edges=())


class TestForcingGadget:
    def test_single_distinguished_woman(self):
        base = reduce_multicolored_clique(triangle())
        out = reduce_forcing_gadget(base)
        inst = out.instance
        assert len(inst.distinguished_women) == 1
        assert out.budget == base.budget
        grown = (inst.n_men + inst.n_women) - (
            base.instance.n_men + base.instance.n_women
        )
        assert grown == 8 * 42 + 2
        only = next(iter(inst.distinguished_women))
        assert len(inst.women[only]) == 1
        assert param_profile(inst).delta_w == 3

    def test_witness_transfers(self):
        base = reduce_multicolored_clique(triangle())
        out = reduce_forcing_gadget(base)
        wit = forcing_witness(out, mcc_witness(base, ["v1", "v2", "v3"]))
        assert is_feasible(out.instance, wit)
        assert len(blocking_pairs(out.instance, wit)) == out.budget

    def test_requires_singleton_lists(self, fix_a):
        from smcsolve.reductions import ReductionOutput

        bad = ReductionOutput(
            instance=fix_a,
            budget=1,
            women_names=("w1", "w2"),
            men_names=("m1", "m2"),
            witness_map={
                "woman_index": {"w1": 0, "w2": 1},
                "man_index": {"m1": 0, "m2": 1},
            },
        )
        # w2's list is fine (length 1) but make w1 distinguished too
        import dataclasses

        inst = dataclasses.replace(fix_a, distinguished_women=frozenset({0, 1}))
        bad = dataclasses.replace(bad, instance=inst)
        with pytest.raises(ValidationError, match="single-entry"):
            reduce_forcing_gadget(bad)


class TestTwoWomen:
    def test_structure(self):
        base = reduce_multicolored_clique(triangle())
        out = reduce_two_women_masterlist(base)
        inst = out.instance
        assert len(inst.distinguished_women) == 2
        assert inst.n_women == base.instance.n_women + 2
        assert inst.n_men == base.instance.n_men + 2
        assert out.budget == base.budget
        p = param_profile(inst)
        assert p.has_master_list_men and p.has_master_list_women
        z1 = out.woman("z_1")
        assert len(inst.women[z1]) == 1

    def test_witness_transfers(self):
        base = reduce_multicolored_clique(triangle())
        out = reduce_two_women_masterlist(base)
        wit = two_women_witness(out, mcc_witness(base, ["v1", "v2", "v3"]))
        assert is_feasible(out.instance, wit)
        assert len(blocking_pairs(out.instance, wit)) == out.budget


class TestVertexCover:
    def test_k3_structure(self):
        g = PlainGraph(("a", "b", "c"), (("a", "b"), ("a", "c"), ("b", "c")))
        out = reduce_vertex_cover(g, 2)
        inst = out.instance
        assert out.budget == 3 + 3 + 2
        p = param_profile(inst)
        assert (p.delta_m, p.delta_w) == (3, 2)
        assert not inst.distinguished_men

    def test_k3_witness_and_verification(self):
        g = PlainGraph(("a", "b", "c"), (("a", "b"), ("a", "c"), ("b", "c")))
        out = reduce_vertex_cover(g, 2)
        wit = vc_witness(out, ["a", "b"])
        assert is_feasible(out.instance, wit)
        assert len(blocking_pairs(out.instance, wit)) == out.budget
        assert verify_reduction(out, True, witness=wit)

    def test_single_edge_no_cover_of_size_zero(self):
        g = PlainGraph(("a", "b"), (("a", "b"),))
        out = reduce_vertex_cover(g, 0)
        assert out.budget == 2 + 1 + 0
        assert verify_reduction(out, False)

    def test_single_edge_cover_of_size_one_is_tight(self):
        g = PlainGraph(("a", "b"), (("a", "b"),))
        out = reduce_vertex_cover(g, 1)
        wit = vc_witness(out, ["a"])
        assert len(blocking_pairs(out.instance, wit)) == out.budget
        assert verify_reduction(out, True, witness=wit)
        # the optimum really is the witness value: one below fails
        from smcsolve.exact import solve_guess_delete
        from smcsolve.model import NoSolutionWithin

        assert isinstance(
            solve_guess_delete(out.instance, out.budget - 1), NoSolutionWithin
        )

    def test_uncovered_witness_rejected(self):
        g = PlainGraph(("a", "b"), (("a", "b"),))
        out = reduce_vertex_cover(g, 1)
        with pytest.raises(ValidationError, match="uncovered"):
            vc_witness(out, [])


class TestX3c:
    def test_structure_and_witness(self):
        out = reduce_x3c(("u1", "u2", "u3"), (("u1", "u2", "u3"),))
        inst = out.instance
        assert out.budget == 2 * 1 + 2 + 1
        p = param_profile(inst)
        assert (p.delta_m, p.delta_w) == (3, 2)
        assert len(inst.distinguished_women) == 1
        wit = x3c_witness(out, [1])
        assert is_feasible(inst, wit)
        assert len(blocking_pairs(inst, wit)) == out.budget
        assert verify_reduction(out, True, witness=wit)

    def test_exact_verification_without_witness(self):
        out = reduce_x3c(("u1", "u2", "u3"), (("u1", "u2", "u3"),))
        assert verify_reduction(out, True)

    def test_multiple_sets(self):
        universe = ("u1", "u2", "u3")
        sets = (("u1", "u2", "u3"), ("u3", "u1", "u2"))
        out = reduce_x3c(universe, sets)
        assert out.budget == 2 * 2 + 2 + 1
        wit = x3c_witness(out, [2])
        assert len(blocking_pairs(out.instance, wit)) == out.budget
        assert verify_reduction(out, True, witness=wit)

    def test_validation(self):
        with pytest.raises(ValidationError, match="distinct"):
            reduce_x3c(("u1", "u2", "u3"), (("u1", "u2", "u2"),))
        with pytest.raises(ValidationError, match="divisible"):
            reduce_x3c(("u1", "u2"), (("u1", "u2", "u1"),))
        with pytest.raises(ValidationError, match="three times"):
            reduce_x3c(
                ("u1", "u2", "u3"),
                (
                    ("u1", "u2", "u3"),
                    ("u1", "u2", "u3"),
                    ("u1", "u2", "u3"),
                    ("u1", "u2", "u3"),
                ),
            )


class TestVerifier:
    def test_size_cap(self):
        g = PlainGraph(
            ("a", "b", "c", "d"),
            (("a", "b"), ("b", "c"), ("c", "d"), ("a", "d"), ("a", "c")),
        )
        out = reduce_vertex_cover(g, 3)
        with pytest.raises(SizeCapError):
            verify_reduction(out, True, work_cap=1000)

    def test_witness_must_cover(self):
        out = reduce_x3c(("u1", "u2", "u3"), (("u1", "u2", "u3"),))
        from smcsolve.model import Matching

        empty = Matching.from_pairs(out.instance.n_men, out.instance.n_women, [])
        with pytest.raises(ValidationError):
            verify_reduction(out, True, witness=empty)


class TestSourceParsers:
    def test_colored_graph(self):
        g = parse_colored_graph(
            "part 1: v1\npart 2: v2\n# c\npart 3: v3\nedge v1 v2\nedge v1 v3\nedge v2 v3\n"
        )
        assert g == triangle()

    def test_plain_graph(self):
        g = parse_graph("vertex a b\nedge a c\n")
        assert g == PlainGraph(("a", "b", "c"), (("a", "c"),))

    def test_x3c_numeric_universe(self):
        universe, sets = parse_x3c("universe 3\nset: u1 u2 u3\n")
        assert universe == ("u1", "u2", "u3")
        assert sets == (("u1", "u2", "u3"),)

    def test_reserved_characters_rejected(self):
        with pytest.raises(ValidationError, match="names may not contain"):
            parse_graph("edge a^ b\n")


def test_structural_posts_hold_on_random_sources():
    rng = random.Random(61)
    for _ in range(25):
        # random colored graph, parts of size <= 2, k = 3
        parts = tuple(
            tuple(f"p{i}v{j}" for j in range(rng.randint(1, 2))) for i in range(3)
        )
        edges = []
        for i in range(3):
            for j in range(i + 1, 3):
                for u in parts[i]:
                    for v in parts[j]:
                        if rng.random() < 0.8:
                            edges.append((u, v))
        try:
            g = ColoredGraph(parts, tuple(edges))
        except ValidationError:
            continue
        out = reduce_multicolored_clique(g)
        p = param_profile(out.instance)
        k = 3
        m = len(edges)
        assert out.budget == 2 * k + 3
        assert len(out.instance.distinguished_women) == (
            2 * 3 + 2 * k + k * (3 + 2 * k + 1)
        )
        assert p.delta_m <= 3 and p.delta_w <= 3
        assert p.has_master_list_men and p.has_master_list_women
    for _ in range(25):
        n = rng.randint(2, 5)
        verts = tuple(f"x{i}" for i in range(n))
        edges = tuple(
            (verts[i], verts[j])
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < 0.5
        )
        k = rng.randint(0, 3)
        out = reduce_vertex_cover(PlainGraph(verts, edges), k)
        p = param_profile(out.instance)
        assert out.budget == n + len(edges) + k
        assert p.delta_w <= 2 and p.delta_m <= 3
