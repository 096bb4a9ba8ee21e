from __future__ import annotations

import random

from smcsolve.approx import (
    hrlq_approx,
    hrlq_approx_pipeline,
    hrlq_bound,
    smc_approx,
    smc_approx_pipeline,
    smc_bound,
    solve_hrlq_budget,
    solve_smc_budget,
)
from smcsolve.exact import enumerate_oracle, enumerate_oracle_hrlq
from smcsolve.model import (
    HrlqInstance,
    NoSolutionWithin,
    SmcInstance,
    is_feasible,
)
from smcsolve.randgen import random_hrlq, random_smc


class TestHrlqApprox:
    def test_fix_c_bound_and_output(self, fix_c):
        assert hrlq_bound(fix_c) == 2  # one spare choice per reserved resident
        out = hrlq_approx(fix_c)
        assert not out.infeasible
        assert out.assignment.is_feasible(fix_c)
        assert out.n_blocking == 1

    def test_zero_lower_quotas_return_the_stable_assignment(self):
        rng = random.Random(21)
        inst = random_hrlq(rng, 5, 3)
        inst = HrlqInstance(
            residents=inst.residents,
            hospitals=tuple((p, 0, up) for p, _, up in inst.hospitals),
        )
        out = hrlq_approx(inst)
        assert out.n_blocking == 0

    def test_over_demand_is_infeasible(self):
        inst = HrlqInstance(
            residents=((0,),),
            hospitals=(((0,), 2, 2),),
        )
        assert hrlq_approx(inst).infeasible

    def test_bounds_and_reserved_property_on_random_instances(self):
        rng = random.Random(22)
        ran_pipeline = 0
        for _ in range(400):
            inst = random_hrlq(rng, rng.randint(1, 6), rng.randint(1, 3))
            out = hrlq_approx(inst)
            ref = enumerate_oracle_hrlq(inst)
            assert out.infeasible == ref.infeasible
            if out.infeasible:
                continue
            assert out.assignment.is_feasible(inst)
            assert out.n_blocking <= hrlq_bound(inst)
            assert len({r for r, _ in out.blocking}) <= inst.lower_total
            run = hrlq_approx_pipeline(inst)
            if run is not None:
                ran_pipeline += 1
                assert run.dagger_holds(inst)
                assert len(run.trace) <= (
                    inst.n_residents * max(1, inst.max_resident_list)
                )
        assert ran_pipeline > 100


class TestSmcApprox:
    def test_fix_a(self, fix_a):
        assert smc_bound(fix_a) == 1
        out = smc_approx(fix_a)
        assert out.n_blocking == 1  # hits the oracle optimum here

    def test_no_constraints(self):
        rng = random.Random(23)
        inst = random_smc(rng, 5, 5, 0.5)
        assert smc_approx(inst).n_blocking == 0

    def test_fix_b_infeasible(self, fix_b):
        assert smc_approx(fix_b).infeasible

    def test_bound_and_exit_property_on_random_instances(self):
        rng = random.Random(24)
        for _ in range(400):
            inst = random_smc(
                rng,
                rng.randint(1, 6),
                rng.randint(1, 6),
                0.5,
                star_women=rng.randint(0, 3),
                star_men=rng.randint(0, 3),
            )
            out = smc_approx(inst)
            ref = enumerate_oracle(inst)
            assert out.infeasible == ref.infeasible
            if out.infeasible:
                continue
            assert is_feasible(inst, out.matching)
            assert out.n_blocking <= smc_bound(inst)
            run = smc_approx_pipeline(inst)
            if run is not None:
                assert run.cross_holds(inst)
                deltas = max(
                    [len(p) for p in inst.men] + [len(p) for p in inst.women],
                    default=0,
                )
                assert len(run.trace) <= (inst.n_men + inst.n_women) * max(1, deltas)


class TestBudgetDispatch:
    def test_fix_c_threshold_cases(self, fix_c):
        out = solve_hrlq_budget(fix_c, 2)  # at the guarantee: pipeline settles it
        assert not isinstance(out, NoSolutionWithin)
        assert out.n_blocking <= 2
        assert solve_hrlq_budget(fix_c, 0) == NoSolutionWithin(0)
        out1 = solve_hrlq_budget(fix_c, 1)
        assert not isinstance(out1, NoSolutionWithin)
        assert out1.n_blocking == 1

    def test_fix_a_cases(self, fix_a):
        out = solve_smc_budget(fix_a, 1)  # budget meets the guarantee
        assert not isinstance(out, NoSolutionWithin)
        assert out.n_blocking == 1
        assert solve_smc_budget(fix_a, 0) == NoSolutionWithin(0)

    def test_fix_e_guarantee_branch(self, fix_e):
        assert smc_bound(fix_e) == 1
        out = solve_smc_budget(fix_e, 1)
        assert not isinstance(out, NoSolutionWithin)
        assert out.n_blocking == 1

    def test_agrees_with_brute_force(self):
        rng = random.Random(25)
        for _ in range(150):
            inst = random_hrlq(rng, rng.randint(1, 5), rng.randint(1, 3))
            ref = enumerate_oracle_hrlq(inst)
            for b in range(0, 4):
                got = solve_hrlq_budget(inst, b)
                want = (not ref.infeasible) and ref.n_blocking <= b
                if isinstance(got, NoSolutionWithin):
                    assert not want
                elif got.infeasible:
                    assert ref.infeasible
                else:
                    assert want and got.n_blocking <= b
