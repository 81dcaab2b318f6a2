"""Exhaustive ground truth for small instances.

Everything here is deliberately naive and shares no code with the solver:
matchings are enumerated by backtracking over men and tested against a
separately written blocking predicate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .instance import Instance, Matching

DEFAULT_CAP = 2_000_000

Signature = Tuple[Optional[int], ...]


class CapExceeded(RuntimeError):
    """The enumeration would visit more partial matchings than allowed."""


@dataclass(frozen=True)
class OracleResult:
    all_stable: FrozenSet[Matching]
    classes: Dict[Signature, Tuple[Matching, ...]]
    order: FrozenSet[Tuple[Signature, Signature]]  # (X, Y) means X dominates Y

    @property
    def signatures(self) -> List[Signature]:
        return sorted(self.classes, key=sig_key)

    def dominates(self, x: Signature, y: Signature) -> bool:
        return (x, y) in self.order


def sig_key(sig: Signature):
    return tuple(-1 if r is None else r for r in sig)


def _improves(rank: Dict[int, int], new: int, cur: Optional[int]) -> Tuple[bool, bool]:
    """(strictly better, at least as good) for moving from ``cur`` to ``new``."""
    if cur is None:
        return True, True
    return rank[new] < rank[cur], rank[new] <= rank[cur]


def oracle_blocks(inst: Instance, wife: Sequence[Optional[int]],
                  husband: Sequence[Optional[int]], m: int, w: int) -> bool:
    if wife[m] == w:
        return False
    ms, mw = _improves(inst.men_rank[m], w, wife[m])
    ws, ww = _improves(inst.women_rank[w], m, husband[w])
    return (ms and ww) or (mw and ws)


def all_matchings_stable(inst: Instance, cap: int = DEFAULT_CAP,
                         men_order: Optional[Sequence[int]] = None) -> List[Matching]:
    """Every strongly stable matching, by backtracking with exact early pruning.

    A partial assignment is abandoned as soon as an edge between two vertices
    whose partners are already final blocks it.  ``cap`` bounds the number of
    visited partial matchings.
    """
    n, k = inst.num_men, inst.num_women
    order = list(range(n)) if men_order is None else list(men_order)
    # position after which a woman's partner can no longer change
    last = [-1] * k
    for pos, m in enumerate(order):
        for w in inst.men_rank[m]:
            last[w] = pos
    wife: List[Optional[int]] = [None] * n
    husband: List[Optional[int]] = [None] * k
    found: List[Matching] = []
    visited = 0

    def settled_ok(pos: int) -> bool:
        m = order[pos]
        # man m is settled; women already taken are settled too
        for w in inst.men_rank[m]:
            if husband[w] is not None or last[w] <= pos:
                if oracle_blocks(inst, wife, husband, m, w):
                    return False
        # women that just became settled against earlier men
        for w in inst.men_rank[m]:
            if husband[w] == m or last[w] == pos:
                for j in range(pos):
                    mj = order[j]
                    if w in inst.men_rank[mj] and oracle_blocks(inst, wife, husband, mj, w):
                        return False
        return True

    def rec(pos: int) -> None:
        nonlocal visited
        visited += 1
        if visited > cap:
            raise CapExceeded(f"more than {cap} partial matchings")
        if pos == n:
            found.append(Matching(list(wife), k))
            return
        m = order[pos]
        options: List[Optional[int]] = [None]
        options += [w for w in inst.men_rank[m] if husband[w] is None]
        for w in options:
            wife[m] = w
            if w is not None:
                husband[w] = m
            if settled_ok(pos):
                rec(pos + 1)
            if w is not None:
                husband[w] = None
            wife[m] = None

    rec(0)
    # women adjacent to nobody are trivially fine; final full check for safety
    return [M for M in found if not any(
        oracle_blocks(inst, M.wife, M.husband, m, w)
        for m in range(n) for w in inst.men_rank[m])]


def _signature(inst: Instance, M: Matching) -> Signature:
    return tuple(None if w is None else inst.men_rank[m][w] for m, w in enumerate(M.wife))


def _sig_dominates(x: Signature, y: Signature) -> bool:
    # unmatched ranks below every partner
    for a, b in zip(x, y):
        if a is None:
            if b is not None:
                return False
        elif b is not None and a > b:
            return False
    return True


def oracle_enumerate(inst: Instance, cap: int = DEFAULT_CAP,
                     men_order: Optional[Sequence[int]] = None) -> OracleResult:
    stable = all_matchings_stable(inst, cap, men_order)
    classes: Dict[Signature, List[Matching]] = {}
    for M in stable:
        classes.setdefault(_signature(inst, M), []).append(M)
    sigs = list(classes)
    order = frozenset((x, y) for x in sigs for y in sigs if _sig_dominates(x, y))
    return OracleResult(
        frozenset(stable),
        {s: tuple(sorted(ms, key=lambda M: [(-1 if w is None else w) for w in M.wife]))
         for s, ms in classes.items()},
        order,
    )
