"""Man-optimal and woman-optimal strongly stable matchings.

The man-optimal matching is found by a proposal algorithm with ties: a free man
proposes to every woman of his best remaining tie; a woman who receives a
proposal drops every man she ranks strictly below the proposer.  Whenever a
set of engaged men cannot all be matched inside the engagement graph, the
women they can reach lose their worst remaining tie.  Every deleted pair
belongs to no strongly stable matching, so once all engaged men can be
matched the resulting matching is the only candidate; it is verified
explicitly before being returned.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Set

from .instance import Edge, Instance, Matching


class NoSolution(Exception):
    """The instance admits no strongly stable matching."""


@dataclass(frozen=True)
class BlockingReport:
    edges: FrozenSet[Edge]

    def __bool__(self) -> bool:
        return bool(self.edges)

    def __len__(self) -> int:
        return len(self.edges)


def is_blocking(inst: Instance, matching: Matching, m: int, w: int) -> bool:
    """Whether the edge ``(m, w)`` blocks ``matching``.

    One endpoint must strictly gain and the other must not lose; an unmatched
    vertex strictly prefers any neighbour.
    """
    if matching.wife[m] == w:
        return False
    cur_w = matching.wife[m]
    cur_m = matching.husband[w]
    rm = inst.men_rank[m][w]
    rw = inst.women_rank[w][m]
    pm = None if cur_w is None else inst.men_rank[m][cur_w]
    pw = None if cur_m is None else inst.women_rank[w][cur_m]
    m_strict = pm is None or rm < pm
    w_strict = pw is None or rw < pw
    if m_strict and w_strict:
        return True
    m_weak = m_strict or rm == pm
    w_weak = w_strict or rw == pw
    return (m_strict and w_weak) or (m_weak and w_strict)


def blocking_edges(inst: Instance, matching: Matching) -> BlockingReport:
    """All edges of ``inst`` that block ``matching``.

    Raises ``ValueError`` if the matching uses a pair that is not an edge.
    """
    matching.check_edges(inst)
    found = set()
    for m, ranks in enumerate(inst.men_rank):
        for w in ranks:
            if is_blocking(inst, matching, m, w):
                found.add((m, w))
    return BlockingReport(frozenset(found))


def is_strongly_stable(inst: Instance, matching: Matching) -> bool:
    return not blocking_edges(inst, matching)


def man_optimal(inst: Instance) -> Optional[Matching]:
    """A man-optimal strongly stable matching, or ``None`` if none exists."""
    n_men, n_women = inst.num_men, inst.num_women
    men_prefs, women_prefs = inst.men_prefs, inst.women_prefs
    men_rank, women_rank = inst.men_rank, inst.women_rank

    # pair (m, w) is alive iff women_rank[w][m] <= cutoff[w]
    cutoff = [len(p) for p in women_prefs]
    ptr = [-1] * n_men  # index of the man's current head tie
    head: List[Set[int]] = [set() for _ in range(n_men)]
    engaged: List[Set[int]] = [set() for _ in range(n_women)]
    mate_m: List[Optional[int]] = [None] * n_men
    mate_w: List[Optional[int]] = [None] * n_women
    free = deque(range(n_men))

    def drop(m: int, w: int) -> None:
        # remove an engagement whose pair has just been deleted
        head[m].discard(w)
        engaged[w].discard(m)
        if mate_m[m] == w:
            mate_m[m] = None
            mate_w[w] = None
        if not head[m]:
            free.append(m)

    def cut(w: int, new_cutoff: int) -> None:
        for r in range(new_cutoff, cutoff[w]):
            for m in women_prefs[w][r]:
                if m in engaged[w]:
                    drop(m, w)
        cutoff[w] = new_cutoff

    def propose(m: int) -> None:
        ties = men_prefs[m]
        while not head[m]:
            ptr[m] += 1
            if ptr[m] >= len(ties):
                return
            head[m] = {w for w in ties[ptr[m]] if women_rank[w][m] <= cutoff[w]}
        for w in sorted(head[m]):
            if w not in head[m]:
                continue
            engaged[w].add(m)
            r = women_rank[w][m]
            if r < cutoff[w]:
                cut(w, r)

    def augment(root: int) -> Optional[Set[int]]:
        """Try to match ``root``; on failure return the reachable men."""
        parent_w = {}
        seen_men = {root}
        stack = [root]
        while stack:
            x = stack.pop()
            for w in sorted(head[x]):
                if w in parent_w:
                    continue
                parent_w[w] = x
                y = mate_w[w]
                if y is None:
                    while True:
                        x2 = parent_w[w]
                        prev = mate_m[x2]
                        mate_m[x2] = w
                        mate_w[w] = x2
                        if x2 == root:
                            return None
                        w = prev
                if y not in seen_men:
                    seen_men.add(y)
                    stack.append(y)
        return seen_men

    while True:
        while free:
            m = free.popleft()
            if not head[m]:
                propose(m)
        stuck = None
        for m in range(n_men):
            if head[m] and mate_m[m] is None:
                z = augment(m)
                if z is not None:
                    stuck = z
                    break
        if stuck is None:
            break
        neighbours = {w for x in stuck for w in head[x]}
        for w in sorted(neighbours):
            cut(w, cutoff[w] - 1)

    result = Matching(mate_m, n_women)
    if blocking_edges(inst, result):
        return None
    return result


def woman_optimal(inst: Instance) -> Optional[Matching]:
    """A woman-optimal strongly stable matching, or ``None`` if none exists."""
    swapped = man_optimal(inst.swapped())
    return None if swapped is None else swapped.swapped()
