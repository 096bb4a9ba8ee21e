from __future__ import annotations

import random

import pytest

from smcsolve.model import HrlqInstance, SmcInstance


@pytest.fixture
def fix_a() -> SmcInstance:
    # men m1,m2 / women w1,w2; one-sided covering of w2
    return SmcInstance(
        men=((0, 1), (0,)),
        women=((0, 1), (0,)),
        distinguished_women=frozenset({1}),
    )


@pytest.fixture
def fix_b() -> SmcInstance:
    # one man, two distinguished women: infeasible
    return SmcInstance(
        men=((0, 1),),
        women=((0,), (0,)),
        distinguished_women=frozenset({0, 1}),
    )


@pytest.fixture
def fix_c() -> HrlqInstance:
    # two residents, two unit hospitals, both with lower quota 1
    return HrlqInstance(
        residents=((0, 1), (0,)),
        hospitals=(((0, 1), 1, 1), ((0,), 1, 1)),
    )


@pytest.fixture
def fix_e() -> SmcInstance:
    # mirror of fix_a: the covering constraint sits on man m2
    return SmcInstance(
        men=((0, 1), (0,)),
        women=((0, 1), (0,)),
        distinguished_men=frozenset({1}),
    )


def seeded(seed: int) -> random.Random:
    return random.Random(seed)
