import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import fixture_path, load
from strongstable.instance import (
    GenParams,
    Instance,
    Matching,
    ValidationError,
    format_matching,
    generate_random,
    parse_instance,
    parse_matching,
    serialize_instance,
    signature,
)

F2_TEXT = fixture_path("F2").read_text()


def test_single_edge_ranks():
    inst = load("F1")
    assert inst.num_edges == 1
    assert inst.men_rank[0][0] == 1 and inst.women_rank[0][0] == 1


def test_tie_gives_equal_rank():
    inst = load("F3")
    assert inst.women_rank[0][0] == inst.women_rank[0][1] == 1


def test_asymmetric_edge_rejected():
    bad = F2_TEXT.replace("w1: m2 m1", "w1: m2")
    with pytest.raises(ValidationError, match="asymmetric"):
        parse_instance(bad)


@pytest.mark.parametrize("text, fragment", [
    ("men: m1\nwomen: w1\nm1: w1 w1\nw1: m1\n", "duplicate vertex .w1."),
    ("men: m1\nwomen: w1\nm1: w9\nw1: m1\n", "unknown"),
    ("men: m1\nwomen: w1\nm1: (w1\nw1: m1\n", "unclosed"),
    ("men: m1\nwomen: w1\nm1: w1)\nw1: m1\n", "unbalanced"),
    ("men: m1 m1\nwomen: w1\n", "duplicate vertex declaration"),
    ("men: m1\nmen: m2\nwomen: w1\n", "declared twice"),
    ("men: a\nwomen: a\n", "duplicate vertex declaration"),
    ("men: m1\nwomen: w1\nx9: w1\n", "unknown"),
    ("m1: w1\n", "must come first"),
    ("", "missing"),
])
def test_validation_errors(text, fragment):
    with pytest.raises(ValidationError, match=fragment):
        parse_instance(text)


def test_error_carries_line_number():
    with pytest.raises(ValidationError) as info:
        parse_instance("# comment\nmen: m1\nwomen: w1\nm1: (w1\n")
    assert info.value.line == 4


def test_comments_and_blank_lines_ignored():
    text = "# header\n\nmen: m1\n\nwomen: w1\n# prefs\nm1: w1\nw1: m1\n"
    assert parse_instance(text) == load("F1")


def test_serialize_empty_instance():
    assert serialize_instance(load("F0")) == "men:\nwomen:\n"


@pytest.mark.parametrize("name", ["F0", "F1", "F2", "F3", "F4", "F6"])
def test_round_trip_fixtures(name):
    inst = load(name)
    assert parse_instance(serialize_instance(inst)) == inst


def test_ties_printed_in_parentheses():
    text = serialize_instance(load("F4"))
    assert "m1: (w1 w2)" in text and "w2: (m1 m2)" in text


def test_generator_deterministic_and_complete():
    a = generate_random(GenParams(2, 2, 1.0, 0.0, 7))
    b = generate_random(GenParams(2, 2, 1.0, 0.0, 7))
    assert serialize_instance(a) == serialize_instance(b)
    assert a.num_edges == 4
    assert all(len(t) == 1 for ties in a.men_prefs + a.women_prefs for t in ties)


def test_generator_small_and_empty():
    inst = generate_random(GenParams(5, 5, 0.5, 0.3, 1))
    assert parse_instance(serialize_instance(inst)) == inst
    empty = generate_random(GenParams(0, 0, 1.0, 1.0, 0))
    assert empty == load("F0")


def test_bad_params():
    with pytest.raises(ValueError):
        GenParams(1, 1, 1.5, 0.0, 0)
    with pytest.raises(ValueError):
        GenParams(-1, 1, 0.5, 0.0, 0)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 7), st.integers(0, 7), st.floats(0, 1), st.floats(0, 1),
       st.integers(0, 2**63 - 1))
def test_generated_instances_are_valid(men, women, density, ties, seed):
    inst = generate_random(GenParams(men, women, density, ties, seed))
    assert parse_instance(serialize_instance(inst)) == inst
    for m in range(inst.num_men):
        for w, r in inst.men_rank[m].items():
            assert 1 <= r <= len(inst.men_prefs[m])
            assert m in inst.women_rank[w]


def test_matching_format_round_trip():
    inst = load("F2")
    M = Matching.from_pairs(inst, [(0, 1), (1, 0)])
    text = format_matching(inst, M)
    assert text == "m1 w2\nm2 w1\n"
    assert parse_matching(inst, text) == M
    assert format_matching(inst, None) == "NONE\n"
    assert parse_matching(inst, "NONE\n") is None
    assert signature(inst, M) == (2, 2)


def test_matching_rejects_shared_woman():
    with pytest.raises(ValueError):
        Matching([0, 0], 2)


def test_parse_matching_errors():
    inst = load("F2")
    with pytest.raises(ValidationError):
        parse_matching(inst, "m1\n")
    with pytest.raises(ValidationError):
        parse_matching(inst, "m1 w9\n")


def test_restrict_and_swap():
    inst = load("F2")
    sub = inst.restrict([(0, 1)])
    assert sub.edges() == [(0, 1)]
    sw = inst.swapped()
    assert sw.men == inst.women and sw.swapped() == inst
    assert isinstance(sub, Instance)
