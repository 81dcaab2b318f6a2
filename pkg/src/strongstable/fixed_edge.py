"""Strongly stable matchings forced to contain a given edge.

For an edge ``(m, w)`` we delete every edge that cannot coexist with it in a
strongly stable matching; strongly stable matchings of the reduced graph then
correspond one-to-one to strongly stable matchings of the original instance
containing ``(m, w)``, provided the man-optimal one extends without blocking.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set

from .instance import Edge, Instance, Matching
from .solver import blocking_edges, man_optimal, woman_optimal


@dataclass(frozen=True)
class AuxiliaryInstance:
    base: Instance
    fixed_edge: Edge
    reduced: Instance
    # removed edge -> index (1..7) of the first construction rule that removed it
    removed: Dict[Edge, int] = field(repr=False)


def build_auxiliary(inst: Instance, e: Edge) -> AuxiliaryInstance:
    m, w = e
    if not inst.has_edge(m, w):
        raise ValueError(f"({m}, {w}) is not an edge")
    mr, wr = inst.men_rank, inst.women_rank
    removed: Dict[Edge, int] = {}

    def rm(edge: Edge, rule: int) -> None:
        removed.setdefault(edge, rule)

    rm(e, 1)
    for m2, r in wr[w].items():
        if m2 == m:
            continue
        w_rank = mr[m2][w]
        if wr[w][m] < r:  # w prefers m to m2
            rm((m2, w), 2)
        elif wr[w][m] == r:
            rm((m2, w), 3)
            for w2, r2 in mr[m2].items():
                if r2 > w_rank:
                    rm((m2, w2), 3)
        else:
            rm((m2, w), 4)
            for w2, r2 in mr[m2].items():
                if r2 >= w_rank and w2 != w:
                    rm((m2, w2), 4)
    for w2, r in mr[m].items():
        if w2 == w:
            continue
        m_rank = wr[w2][m]
        if mr[m][w] < r:  # m prefers w to w2
            rm((m, w2), 5)
        elif mr[m][w] == r:
            rm((m, w2), 6)
            for m2, r2 in wr[w2].items():
                if r2 > m_rank:
                    rm((m2, w2), 6)
        else:
            rm((m, w2), 7)
            for m2, r2 in wr[w2].items():
                if r2 >= m_rank and m2 != m:
                    rm((m2, w2), 7)
    keep = [edge for edge in inst.edges() if edge not in removed]
    return AuxiliaryInstance(inst, e, inst.restrict(keep), removed)


def optimal_with_edge(inst: Instance, e: Edge) -> Optional[Matching]:
    """Man-optimal strongly stable matching containing ``e``, or ``None``."""
    aux = build_auxiliary(inst, e)
    sub = man_optimal(aux.reduced)
    if sub is None:
        return None
    m, w = e
    wife = list(sub.wife)
    assert wife[m] is None and sub.husband[w] is None
    wife[m] = w
    candidate = Matching(wife, inst.num_women)
    if blocking_edges(inst, candidate):
        return None
    return candidate


def candidate_pairs(inst: Instance) -> List[Edge]:
    """Edges whose ranks lie between the man-optimal and woman-optimal ones.

    Every stable pair is among them; the list is empty when the instance has
    no strongly stable matching.
    """
    top = man_optimal(inst)
    if top is None:
        return []
    bottom = woman_optimal(inst)
    assert bottom is not None
    mr, wr = inst.men_rank, inst.women_rank
    out = []
    for m, w in inst.edges():
        if top.wife[m] is None or bottom.husband[w] is None:
            continue
        if not mr[m][top.wife[m]] <= mr[m][w] <= mr[m][bottom.wife[m]]:
            continue
        if not wr[w][bottom.husband[w]] <= wr[w][m] <= wr[w][top.husband[w]]:
            continue
        out.append((m, w))
    return out


def stable_pairs(inst: Instance, prune: bool = True) -> Set[Edge]:
    """Edges contained in at least one strongly stable matching.

    Each edge is decided independently.  With ``prune`` only edges inside
    the rank window of the two extreme matchings are examined, which never
    changes the answer.
    """
    edges = candidate_pairs(inst) if prune else inst.edges()
    return {e for e in edges if optimal_with_edge(inst, e) is not None}
