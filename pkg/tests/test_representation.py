import pytest

from helpers import load, planted_corpus
from strongstable.instance import Matching, signature
from strongstable.lattice import MatchingClass
from strongstable.oracle import oracle_enumerate
from strongstable.representation import (
    class_of_closed_set,
    closure,
    enumerate_classes,
    expand_class,
    format_poset,
    irreducible_classes,
    is_closed,
    iter_closed_sets,
    support,
)
from strongstable.solver import NoSolution


def test_single_edge_poset():
    P = irreducible_classes(load("F1"))
    assert len(P) == 1 and P.covers() == []


def test_f2_poset():
    P = irreducible_classes(load("F2"))
    assert [c.signature for c in P.elements] == [(1, 1), (2, 2)]
    assert P.witnesses == (((0, 0), (1, 1)), ((0, 1), (1, 0)))
    assert P.dominates(0, 1) and not P.dominates(1, 0)
    assert P.covers() == [(0, 1)]


def test_product_poset_has_top_and_two_middles():
    # the bottom class of the product is not M(e) for any single edge
    P = irreducible_classes(load("F6"))
    assert [c.signature for c in P.elements] == [(1, 1, 1, 1), (1, 1, 2, 2), (2, 2, 1, 1)]
    assert P.covers() == [(0, 1), (0, 2)]
    assert not P.dominates(1, 2) and not P.dominates(2, 1)


def test_no_solution():
    with pytest.raises(NoSolution):
        irreducible_classes(load("F3"))
    with pytest.raises(NoSolution):
        list(enumerate_classes(load("F3")))


def test_support_and_closure_f2():
    inst = load("F2")
    P = irreducible_classes(inst)
    MA, MB = Matching([0, 1], 2), Matching([1, 0], 2)
    assert support(inst, MA, P) == {0}
    assert support(inst, MB, P) == {1}
    assert closure(P, {0}) == {0}
    assert closure(P, {1}) == {0, 1}
    assert closure(P, set()) == frozenset()
    f1 = load("F1")
    assert support(f1, Matching([0], 1), irreducible_classes(f1)) == {0}


def test_class_of_closed_set_examples():
    inst = load("F2")
    P = irreducible_classes(inst)
    assert class_of_closed_set(inst, P, {0}).signature == (1, 1)
    assert class_of_closed_set(inst, P, {0, 1}).signature == (2, 2)
    with pytest.raises(ValueError):
        class_of_closed_set(inst, P, {1})
    with pytest.raises(ValueError):
        class_of_closed_set(inst, P, set())
    f6 = load("F6")
    P6 = irreducible_classes(f6)
    assert class_of_closed_set(f6, P6, {0, 2}).signature == (2, 2, 1, 1)


def test_enumerate_counts():
    assert len(list(enumerate_classes(load("F2")))) == 2
    assert len(list(enumerate_classes(load("F4")))) == 1
    assert len(list(enumerate_classes(load("F6")))) == 4
    (only,) = enumerate_classes(load("F0"))
    assert only.signature == ()


def test_expand_examples():
    f4 = load("F4")
    (X,) = enumerate_classes(f4)
    assert set(expand_class(f4, X, 10)) == {Matching([0, 1], 2), Matching([1, 0], 2)}
    assert list(expand_class(f4, X, 0)) == []
    f2 = load("F2")
    top = MatchingClass.of(f2, Matching([0, 1], 2))
    assert list(expand_class(f2, top, 10)) == [Matching([0, 1], 2)]


def test_format():
    text = format_poset(irreducible_classes(load("F2")))
    assert text == "class 0: m1=1 m2=1\nclass 1: m1=2 m2=2\ncover 0 -> 1\n"


@pytest.mark.parametrize("label, inst", planted_corpus(), ids=lambda x: x if isinstance(x, str) else "")
def test_bijection_and_round_trip(label, inst):
    truth = oracle_enumerate(inst)
    if not truth.classes:
        return
    P = irreducible_classes(inst)
    closed = list(iter_closed_sets(P))
    assert all(is_closed(P, S) for S in closed)
    assert len(closed) == len(truth.classes)
    got = [c.signature for c in enumerate_classes(inst)]
    assert sorted(got) == sorted(truth.classes) and len(set(got)) == len(got)
    for M in truth.all_stable:
        S = closure(P, support(inst, M, P))
        assert class_of_closed_set(inst, P, S).signature == signature(inst, M)
    for sig, members in truth.classes.items():
        X = MatchingClass(members[0], sig)
        assert set(expand_class(inst, X, 1000)) == set(members)
