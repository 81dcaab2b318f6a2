"""Irreducible classes and enumeration of all strongly stable matchings.

For every stable pair ``(m, w)`` the man-optimal class among matchings
containing it is computed; the distinct classes, ordered by dominance, form a
poset whose nonempty upward-closed subsets are in bijection with the
equivalence classes of strongly stable matchings.  A closed set maps to the
class obtained by giving every man the worst partner he has in its members.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

from .fixed_edge import candidate_pairs, optimal_with_edge
from .instance import Edge, Instance, Matching
from .lattice import MatchingClass, meet_men, sig_dominates, sig_key
from .solver import NoSolution, is_blocking, man_optimal

ClosedSet = FrozenSet[int]


@dataclass(frozen=True)
class IrreduciblePoset:
    """Irreducible classes, best first, with their full dominance relation.

    ``above[i]`` is a bitmask of the elements dominating element ``i`` and
    ``below[i]`` of those it dominates; both include ``i`` itself.
    """

    instance: Instance
    elements: Tuple[MatchingClass, ...]
    witnesses: Tuple[Tuple[Edge, ...], ...]
    above: Tuple[int, ...]
    below: Tuple[int, ...]
    element_of_edge: Dict[Edge, int]

    def __len__(self) -> int:
        return len(self.elements)

    def dominates(self, i: int, j: int) -> bool:
        return bool(self.below[i] >> j & 1)

    def covers(self) -> List[Tuple[int, int]]:
        """Pairs ``(i, j)``: ``i`` dominates ``j`` with nothing strictly between."""
        out = []
        for i in range(len(self)):
            strictly_below = self.below[i] & ~(1 << i)
            for j in _bits(strictly_below):
                between = strictly_below & self.above[j] & ~(1 << j)
                if not between:
                    out.append((i, j))
        return out


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _members(mask: int) -> FrozenSet[int]:
    return frozenset(_bits(mask))


def irreducible_classes(inst: Instance) -> IrreduciblePoset:
    """Compute every class ``M(m, w)`` for stable pairs and order them by dominance."""
    if man_optimal(inst) is None:
        raise NoSolution("instance has no strongly stable matching")
    by_sig: Dict[tuple, Tuple[Matching, List[Edge]]] = {}
    for e in candidate_pairs(inst):
        best = optimal_with_edge(inst, e)
        if best is None:
            continue
        cls = MatchingClass.of(inst, best)
        by_sig.setdefault(cls.signature, (best, []))[1].append(e)
    sigs = sorted(by_sig, key=sig_key)
    elements = tuple(MatchingClass(by_sig[s][0], s) for s in sigs)
    witnesses = tuple(tuple(sorted(by_sig[s][1])) for s in sigs)
    n = len(sigs)
    above = [0] * n
    below = [0] * n
    for i in range(n):
        for j in range(n):
            if sig_dominates(sigs[i], sigs[j]):
                below[i] |= 1 << j
                above[j] |= 1 << i
    element_of_edge = {e: i for i, ws in enumerate(witnesses) for e in ws}
    return IrreduciblePoset(inst, elements, witnesses, tuple(above), tuple(below),
                            element_of_edge)


def support(inst: Instance, M: Matching, poset: IrreduciblePoset) -> FrozenSet[int]:
    """Indices of the classes ``M(m, w)`` over the pairs ``(m, w)`` of ``M``."""
    try:
        return frozenset(poset.element_of_edge[e] for e in M.pairs())
    except KeyError as exc:
        raise ValueError(f"{exc.args[0]} is not a stable pair") from None


def closure(poset: IrreduciblePoset, S: Iterable[int]) -> ClosedSet:
    """Smallest superset of ``S`` containing everything that dominates a member."""
    mask = 0
    for i in S:
        mask |= poset.above[i]
    return _members(mask)


def is_closed(poset: IrreduciblePoset, S: Iterable[int]) -> bool:
    S = frozenset(S)
    return closure(poset, S) == S


def class_of_closed_set(inst: Instance, poset: IrreduciblePoset,
                        S: Iterable[int]) -> MatchingClass:
    S = sorted(S)
    if not S:
        raise ValueError("closed set must be nonempty")
    if not is_closed(poset, S):
        raise ValueError("set is not closed")
    M = poset.elements[S[0]].representative
    for i in S[1:]:
        M = meet_men(inst, M, poset.elements[i].representative)
    return MatchingClass.of(inst, M)


def iter_closed_sets(poset: IrreduciblePoset) -> Iterator[ClosedSet]:
    """All nonempty closed subsets, with polynomial delay.

    Elements are decided in index order (a linear extension, best first):
    including an element pulls in everything above it, excluding it rules out
    everything below it, and both branches always lead to a closed set.
    """
    n = len(poset)
    if n == 0:
        return
    full = (1 << n) - 1
    stack = [(full, 0)]  # (undecided, included)
    while stack:
        undecided, included = stack.pop()
        if not undecided:
            if included:
                yield _members(included)
            continue
        x = (undecided & -undecided).bit_length() - 1
        stack.append((undecided & ~poset.below[x], included))
        stack.append((undecided & ~poset.above[x], included | poset.above[x]))


def enumerate_classes(inst: Instance, ordered: bool = True) -> Iterator[MatchingClass]:
    """Every equivalence class of strongly stable matchings exactly once.

    With ``ordered`` the classes are sorted by signature, best first; this
    materialises them.  Otherwise they stream in closed-set order.
    Raises :class:`NoSolution` if there is no strongly stable matching.
    """
    poset = irreducible_classes(inst)
    if len(poset) == 0:
        # no edges at all: only the empty matching
        yield MatchingClass.of(inst, Matching.empty(inst))
        return
    gen = (class_of_closed_set(inst, poset, S) for S in iter_closed_sets(poset))
    if ordered:
        yield from sorted(gen, key=lambda c: sig_key(c.signature))
    else:
        yield from gen


def expand_class(inst: Instance, X: MatchingClass, limit: int) -> Iterator[Matching]:
    """Distinct strongly stable matchings with the signature of ``X``, at most ``limit``."""
    if limit <= 0:
        return
    sig = X.signature
    women_used = {w for w in X.representative.wife if w is not None}
    men = [m for m in range(inst.num_men) if sig[m] is not None]
    options = {
        m: sorted(w for w in inst.men_prefs[m][sig[m] - 1] if w in women_used)
        for m in men
    }
    wife: List[Optional[int]] = [None] * inst.num_men
    taken = set()
    emitted = 0

    def rec(k: int) -> Iterator[Matching]:
        if k == len(men):
            M = Matching(list(wife), inst.num_women)
            if not any(is_blocking(inst, M, m, w)
                       for m in range(inst.num_men) for w in inst.men_rank[m]):
                yield M
            return
        m = men[k]
        for w in options[m]:
            if w in taken:
                continue
            wife[m] = w
            taken.add(w)
            yield from rec(k + 1)
            taken.discard(w)
            wife[m] = None

    for M in rec(0):
        yield M
        emitted += 1
        if emitted >= limit:
            return


def format_poset(poset: IrreduciblePoset) -> str:
    inst = poset.instance
    lines = []
    for k, cls in enumerate(poset.elements):
        ranks = " ".join(f"{inst.men[m]}={r}" for m, r in enumerate(cls.signature)
                         if r is not None)
        lines.append(f"class {k}: {ranks}".rstrip())
    for i, j in poset.covers():
        lines.append(f"cover {i} -> {j}")
    return "".join(line + "\n" for line in lines)
