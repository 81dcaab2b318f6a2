import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import load
from strongstable.instance import GenParams, Matching, generate_random, signature
from strongstable.lattice import sig_dominates
from strongstable.oracle import oracle_enumerate
from strongstable.solver import blocking_edges, is_blocking, man_optimal, woman_optimal


def M(inst, *pairs):
    return Matching.from_pairs(inst, [(inst.man_index(a), inst.woman_index(b)) for a, b in pairs])


def test_empty_matching_blocked_by_only_edge():
    inst = load("F1")
    assert blocking_edges(inst, Matching.empty(inst)).edges == {(0, 0)}


def test_f2_man_optimal_has_no_blocking_edge():
    inst = load("F2")
    assert not blocking_edges(inst, M(inst, ("m1", "w1"), ("m2", "w2")))


def test_free_man_blocks_indifferent_woman():
    inst = load("F3")
    report = blocking_edges(inst, M(inst, ("m1", "w1")))
    assert report.edges == {(1, 0)}


def test_non_edge_rejected():
    inst = load("F2")
    other = load("F1")
    with pytest.raises(ValueError):
        blocking_edges(other, Matching([1], 2))
    bad = Matching([None, None], 2)
    assert blocking_edges(inst, bad)


def test_man_optimal_examples():
    assert man_optimal(load("F0")) == Matching([], 0)
    f2 = load("F2")
    assert man_optimal(f2) == M(f2, ("m1", "w1"), ("m2", "w2"))
    assert man_optimal(load("F3")) is None
    f4 = load("F4")
    assert man_optimal(f4) in (M(f4, ("m1", "w1"), ("m2", "w2")), M(f4, ("m1", "w2"), ("m2", "w1")))


def test_woman_optimal_examples():
    f2 = load("F2")
    assert woman_optimal(f2) == M(f2, ("m1", "w2"), ("m2", "w1"))
    f1 = load("F1")
    assert woman_optimal(f1) == M(f1, ("m1", "w1"))
    assert woman_optimal(load("F3")) is None


def test_blocking_predicate_is_symmetric():
    inst = generate_random(GenParams(5, 5, 0.8, 0.5, 3))
    sw = inst.swapped()
    wife = [None] * inst.num_men
    used = set()
    for m, w in inst.edges():
        if wife[m] is None and w not in used and (m + w) % 2 == 0:
            wife[m] = w
            used.add(w)
    mt = Matching(wife, inst.num_women)
    for m, w in inst.edges():
        assert is_blocking(inst, mt, m, w) == is_blocking(sw, mt.swapped(), w, m)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.sampled_from([0.3, 0.6, 1.0]),
       st.sampled_from([0.0, 0.3, 0.7]), st.integers(0, 10**9))
def test_extremes_against_oracle(men, women, density, ties, seed):
    inst = generate_random(GenParams(men, women, density, ties, seed))
    truth = oracle_enumerate(inst)
    top, bottom = man_optimal(inst), woman_optimal(inst)
    if not truth.classes:
        assert top is None and bottom is None
        return
    assert not blocking_edges(inst, top) and not blocking_edges(inst, bottom)
    for sig in truth.classes:
        assert sig_dominates(signature(inst, top), sig)
        assert sig_dominates(sig, signature(inst, bottom))
