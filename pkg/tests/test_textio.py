from __future__ import annotations

import random

import pytest

from smcsolve.errors import ParseError
from smcsolve.randgen import random_hrlq, random_smc
from smcsolve.textio import (
    ParsedDocument,
    document_for,
    format_matching,
    parse,
    parse_matching,
    serialize,
)

FIX_A_TEXT = """\
kind: smc
men: m1 m2
women: w1 w2
pref m1: w1 w2
pref m2: w1
pref w1: m1 m2
pref w2: m1
star-women: w2
star-men:
"""


def test_round_trip_is_canonical():
    doc = parse(FIX_A_TEXT)
    assert serialize(doc) == FIX_A_TEXT
    assert doc.smc.distinguished_women == frozenset({1})


def test_comments_and_blank_lines_normalise_away():
    text = "# header\n" + FIX_A_TEXT.replace("men: m1 m2", "men: m1 m2  # the men")
    assert serialize(parse(text)) == FIX_A_TEXT


def test_budget_line_round_trips():
    doc = parse(FIX_A_TEXT + "budget: 1\n")
    assert doc.budget == 1
    assert serialize(doc).endswith("budget: 1\n")


def test_unknown_name_is_reported():
    with pytest.raises(ParseError, match="w9"):
        parse(FIX_A_TEXT.replace("pref m2: w1", "pref m2: w9"))


def test_non_mutual_acceptability_names_the_pair():
    text = FIX_A_TEXT.replace("pref w2: m1", "pref w2:")
    with pytest.raises(ParseError, match=r"\(m1, w2\)"):
        parse(text)


def test_missing_kind():
    with pytest.raises(ParseError, match="kind"):
        parse("men: a\nwomen: b\n")


def test_hrlq_parse_and_round_trip(fix_c):
    text = (
        "kind: hrlq\n"
        "residents: r1 r2\n"
        "hospitals: h1[1,1] h2[1,1]\n"
        "pref r1: h1 h2\n"
        "pref r2: h1\n"
        "pref h1: r1 r2\n"
        "pref h2: r1\n"
    )
    doc = parse(text)
    assert doc.hrlq == fix_c
    assert serialize(doc) == text


def test_bad_quota_annotation():
    with pytest.raises(ParseError, match="quota"):
        parse("kind: hrlq\nresidents: r\nhospitals: h\npref r:\npref h:\n")


def test_matching_block_round_trip(fix_a):
    doc = document_for(fix_a)
    from smcsolve.exact import enumerate_oracle

    out = enumerate_oracle(fix_a)
    block = format_matching(doc, out.matching, out.blocking, True, True)
    assert block.splitlines()[:4] == ["m1 w2", "m2 w1", "blocking: 1", "m1 w1"]
    assert parse_matching(doc, block).pairs() == out.matching.pairs()


def test_random_instances_round_trip():
    rng = random.Random(12)
    for _ in range(80):
        inst = random_smc(
            rng,
            rng.randint(1, 6),
            rng.randint(1, 6),
            0.5,
            star_women=rng.randint(0, 3),
            star_men=rng.randint(0, 2),
        )
        doc = document_for(inst)
        text = serialize(doc)
        again = parse(text)
        assert again.smc == inst
        assert serialize(again) == text
