"""Seeded random instance generators for fuzzing and the test suites."""

from __future__ import annotations

import random
from typing import Optional

from .model import HrlqInstance, SmcInstance


def random_smc(
    rng: random.Random,
    n_men: int,
    n_women: int,
    edge_prob: float = 0.5,
    max_deg_men: Optional[int] = None,
    max_deg_women: Optional[int] = None,
    star_women: int = 0,
    star_men: int = 0,
) -> SmcInstance:
    """Random market with optional per-side list-length caps.

    Degree caps are respected by sampling men's lists first and trimming
    women's overfull lists (removing the edge on both sides).
    """
    men = [[] for _ in range(n_men)]
    women = [[] for _ in range(n_women)]
    for m in range(n_men):
        for w in range(n_women):
            if rng.random() < edge_prob:
                men[m].append(w)
                women[w].append(m)
    if max_deg_men is not None:
        for m in range(n_men):
            while len(men[m]) > max_deg_men:
                w = men[m].pop(rng.randrange(len(men[m])))
                women[w].remove(m)
    if max_deg_women is not None:
        for w in range(n_women):
            while len(women[w]) > max_deg_women:
                m = women[w].pop(rng.randrange(len(women[w])))
                men[m].remove(w)
    for m in range(n_men):
        rng.shuffle(men[m])
    for w in range(n_women):
        rng.shuffle(women[w])
    sw = rng.sample(range(n_women), min(star_women, n_women))
    sm = rng.sample(range(n_men), min(star_men, n_men))
    return SmcInstance(
        men=tuple(tuple(p) for p in men),
        women=tuple(tuple(p) for p in women),
        distinguished_women=frozenset(sw),
        distinguished_men=frozenset(sm),
    )


def random_smc_sized(rng: random.Random, max_side: int = 8) -> SmcInstance:
    """A generically shaped random instance for fuzz sweeps."""
    n_m = rng.randint(1, max_side)
    n_w = rng.randint(1, max_side)
    return random_smc(
        rng,
        n_m,
        n_w,
        edge_prob=rng.choice([0.3, 0.5, 0.7]),
        star_women=rng.randint(0, max(1, n_w // 2)),
        star_men=rng.randint(0, max(1, n_m // 2)),
    )


def random_hrlq(
    rng: random.Random,
    n_residents: int,
    n_hospitals: int,
    edge_prob: float = 0.6,
    max_upper: int = 2,
) -> HrlqInstance:
    residents = [[] for _ in range(n_residents)]
    hospitals = []
    for h in range(n_hospitals):
        accept = [r for r in range(n_residents) if rng.random() < edge_prob]
        rng.shuffle(accept)
        up = rng.randint(1, max_upper)
        lo = rng.randint(0, up)
        hospitals.append((accept, lo, up))
        for r in accept:
            residents[r].append(h)
    for r in range(n_residents):
        rng.shuffle(residents[r])
    return HrlqInstance(
        residents=tuple(tuple(p) for p in residents),
        hospitals=tuple((tuple(p), lo, up) for p, lo, up in hospitals),
    )
