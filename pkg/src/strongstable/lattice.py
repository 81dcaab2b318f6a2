"""Dominance, equivalence and the lattice operations on strongly stable matchings.

Ranks are compared per man; an unmatched man is worse off than with any
partner.  ``join_men`` hands every man the better of his two partners and
``meet_men`` the worse one.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .instance import Instance, Matching, signature

Signature = Tuple[Optional[int], ...]

_UNMATCHED = float("inf")


def _r(rank: Optional[int]):
    return _UNMATCHED if rank is None else rank


@dataclass(frozen=True)
class MatchingClass:
    """An equivalence class of matchings that give every man equally ranked partners."""

    representative: Matching
    signature: Signature

    @classmethod
    def of(cls, inst: Instance, matching: Matching) -> "MatchingClass":
        return cls(matching, signature(inst, matching))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatchingClass):
            return NotImplemented
        return self.signature == other.signature

    def __hash__(self) -> int:
        return hash(self.signature)

    def rank_of(self, m: int) -> Optional[int]:
        return self.signature[m]


def sig_key(sig: Signature):
    """Sort key putting better signatures (smaller ranks) first."""
    return tuple(_r(r) for r in sig)


def sig_dominates(a: Signature, b: Signature) -> bool:
    return all(_r(x) <= _r(y) for x, y in zip(a, b))


def dominates(inst: Instance, M: Matching, N: Matching) -> bool:
    """True iff every man weakly prefers his partner in ``M`` to the one in ``N``."""
    return sig_dominates(signature(inst, M), signature(inst, N))


def equivalent(inst: Instance, M: Matching, N: Matching) -> bool:
    return signature(inst, M) == signature(inst, N)


def _combine(inst: Instance, M: Matching, N: Matching, better: bool) -> Matching:
    wife: List[Optional[int]] = []
    for m in range(inst.num_men):
        a, b = M.wife[m], N.wife[m]
        ra = _r(None if a is None else inst.men_rank[m][a])
        rb = _r(None if b is None else inst.men_rank[m][b])
        if better:
            wife.append(a if ra <= rb else b)
        else:
            wife.append(a if ra >= rb else b)
    return Matching(wife, inst.num_women)


def join_men(inst: Instance, M: Matching, N: Matching) -> Matching:
    """Each man keeps the partner he weakly prefers (ties resolved towards ``M``)."""
    return _combine(inst, M, N, better=True)


def meet_men(inst: Instance, M: Matching, N: Matching) -> Matching:
    """Each man keeps the partner he weakly likes less (ties resolved towards ``M``)."""
    return _combine(inst, M, N, better=False)


class CycleKind(enum.Enum):
    INDIFFERENT = "indifferent"
    MEN_WORSE_WOMEN_BETTER = "men-worse-women-better"
    MEN_BETTER_WOMEN_WORSE = "men-better-women-worse"


class ClassificationError(ValueError):
    """An alternating cycle fits none of the three admissible patterns."""


@dataclass(frozen=True)
class AltCycle:
    """Alternating cycle ``m0, w0, m1, w1, ...`` of ``M xor N``.

    ``wi`` is the partner of ``mi`` in ``M`` and ``w(i+1)`` is his partner in
    ``N``; the kind describes the move from ``M`` to ``N``.
    """

    vertices: Tuple[int, ...]  # alternating man, woman indices
    kind: CycleKind

    @property
    def men(self) -> Tuple[int, ...]:
        return self.vertices[0::2]

    @property
    def women(self) -> Tuple[int, ...]:
        return self.vertices[1::2]


def _classify(inst: Instance, men: List[int], women: List[int]) -> CycleKind:
    k = len(men)
    man_moves = set()
    woman_moves = set()
    for i in range(k):
        m, w_old, w_new = men[i], women[i], women[(i + 1) % k]
        a, b = inst.men_rank[m][w_old], inst.men_rank[m][w_new]
        man_moves.add((b > a) - (b < a))  # +1: man worse off in N
        w = women[i]
        m_old, m_new = men[i], men[i - 1]
        a, b = inst.women_rank[w][m_old], inst.women_rank[w][m_new]
        woman_moves.add((b > a) - (b < a))
    if man_moves == {0} and woman_moves == {0}:
        return CycleKind.INDIFFERENT
    if man_moves == {1} and woman_moves == {-1}:
        return CycleKind.MEN_WORSE_WOMEN_BETTER
    if man_moves == {-1} and woman_moves == {1}:
        return CycleKind.MEN_BETTER_WOMEN_WORSE
    raise ClassificationError(
        f"cycle through {[inst.men[m] for m in men]} has mixed moves"
    )


def sym_diff_cycles(inst: Instance, M: Matching, N: Matching) -> List[AltCycle]:
    """Decompose ``M xor N`` into classified alternating cycles.

    Raises :class:`ClassificationError` if the difference contains a path or a
    cycle with mixed moves, neither of which occurs between strongly stable
    matchings.
    """
    cycles = []
    done = set()
    for start in range(inst.num_men):
        if start in done or M.wife[start] == N.wife[start]:
            continue
        men: List[int] = []
        women: List[int] = []
        m = start
        while True:
            w = M.wife[m]
            if w is None or N.wife[m] is None:
                raise ClassificationError("symmetric difference contains a path")
            men.append(m)
            women.append(w)
            done.add(m)
            m = M.husband[N.wife[m]]
            if m is None:
                raise ClassificationError("symmetric difference contains a path")
            if m == start:
                break
        # women[i] = M(men[i]); N(men[i]) = women[i+1]
        kind = _classify(inst, men, women)
        verts: List[int] = []
        for a, b in zip(men, women):
            verts += [a, b]
        cycles.append(AltCycle(tuple(verts), kind))
    for w in range(inst.num_women):
        if (M.husband[w] is None) != (N.husband[w] is None):
            raise ClassificationError("symmetric difference contains a path")
    return cycles
