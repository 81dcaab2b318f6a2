"""Rotations between consecutive classes and the precedence order on them.

A rotation is the set of alternating cycles separating two consecutive
strongly stable matchings; along it every moved man gets strictly worse and
every moved woman strictly better.  A rotation is identified by the rank
change it makes for each moved man; the same rotation can be applied at
several places of the lattice, with different source and target classes.

The distinct rotations are read off the irreducible classes: for an
irreducible class ``X`` the closed set of classes dominating it, minus ``X``
itself, gives the class ``X+`` right above it, and ``X+ -> X`` is the rotation
that first reaches ``X``.  Precedence is ``r1 <= r2`` iff every class in which
``r2`` has been applied also has ``r1`` applied.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .instance import Instance, Matching, signature
from .lattice import AltCycle, CycleKind, ClassificationError, MatchingClass, meet_men, sym_diff_cycles
from .maxseq import MaximalSequence
from .representation import (
    class_of_closed_set,
    enumerate_classes,
    irreducible_classes,
)

Signature = Tuple[Optional[int], ...]

# above this many classes the order is taken over irreducible classes only
DEFAULT_CLASS_LIMIT = 4096


@dataclass(frozen=True)
class Rotation:
    source: Signature
    target: Signature
    cycles: Tuple[AltCycle, ...]
    moved_men: Dict[int, Tuple[int, int]]  # man -> (rank before, rank after)

    @property
    def key(self) -> Tuple[Tuple[int, int, int], ...]:
        return tuple((m, a, b) for m, (a, b) in sorted(self.moved_men.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Rotation):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


def make_rotation(inst: Instance, before: Matching, after: Matching) -> Rotation:
    """Rotation from ``before`` to ``after``; they must differ by men-worse cycles only."""
    cycles = sym_diff_cycles(inst, before, after)
    if not cycles:
        raise ClassificationError("matchings are identical")
    for c in cycles:
        if c.kind is not CycleKind.MEN_WORSE_WOMEN_BETTER:
            raise ClassificationError(f"cycle of kind {c.kind.value} in a rotation")
    src, dst = signature(inst, before), signature(inst, after)
    moved = {m: (src[m], dst[m]) for m in range(inst.num_men) if src[m] != dst[m]}
    return Rotation(src, dst, tuple(cycles), moved)


def extract_rotations(inst: Instance, seq: MaximalSequence) -> List[Rotation]:
    return [make_rotation(inst, a, b) for a, b in zip(seq.matchings, seq.matchings[1:])]


def applied(rho: Rotation, X) -> bool:
    """Whether every man moved by ``rho`` is at or below his new rank in ``X``."""
    sig = X.signature if isinstance(X, MatchingClass) else X
    for m, (_, after) in rho.moved_men.items():
        r = sig[m]
        if r is None or r < after:
            return False
    return True


@dataclass(frozen=True)
class RotationPoset:
    """Distinct rotations with their precedence.

    ``below[i]`` is a bitmask of the rotations that must precede rotation
    ``i`` (itself included).  ``exact`` is false when the order was derived
    from irreducible classes only.
    """

    instance: Instance
    top: Signature
    elements: Tuple[Rotation, ...]
    below: Tuple[int, ...]
    exact: bool = True

    def __len__(self) -> int:
        return len(self.elements)

    def precedes(self, i: int, j: int) -> bool:
        return bool(self.below[j] >> i & 1)

    def covers(self) -> List[Tuple[int, int]]:
        """Pairs ``(i, j)`` with ``i`` immediately preceding ``j``."""
        out = []
        n = len(self)
        for j in range(n):
            strict = self.below[j] & ~(1 << j)
            for i in range(n):
                if strict >> i & 1 and not any(
                    k != i and strict >> k & 1 and self.below[k] >> i & 1 for k in range(n)
                ):
                    out.append((i, j))
        return sorted(out)

    def is_closed(self, S) -> bool:
        mask = sum(1 << i for i in S)
        return all(self.below[i] & mask == self.below[i] for i in S)

    def closed_subsets(self) -> Iterator[FrozenSet[int]]:
        """Every subset closed under predecessors, the empty set included."""
        n = len(self)
        above = [0] * n
        for j in range(n):
            for i in range(n):
                if self.below[j] >> i & 1:
                    above[i] |= 1 << j
        stack = [((1 << n) - 1, 0)]
        while stack:
            undecided, chosen = stack.pop()
            if not undecided:
                yield frozenset(i for i in range(n) if chosen >> i & 1)
                continue
            x = (undecided & -undecided).bit_length() - 1
            stack.append((undecided & ~above[x], chosen))
            stack.append((undecided & ~self.below[x], chosen | self.below[x]))

    def replay(self, S) -> Signature:
        """Signature reached from the top class by applying the rotations of ``S``."""
        return replay(self.top, [self.elements[i] for i in self.linear_order(S)])

    def linear_order(self, S=None) -> List[int]:
        """Indices of ``S`` (default: all) listed so that predecessors come first."""
        items = range(len(self)) if S is None else sorted(S)
        return sorted(items, key=lambda i: bin(self.below[i]).count("1"))

    def applied_set(self, X) -> FrozenSet[int]:
        return frozenset(i for i, r in enumerate(self.elements) if applied(r, X))


def replay(start: Signature, rotations: Sequence[Rotation]) -> Signature:
    """Apply rotations in order; each must find its moved men at their old ranks."""
    sig = list(start)
    for r in rotations:
        for m, (before, after) in r.moved_men.items():
            if sig[m] != before:
                raise ValueError(f"rotation {r.key} applied out of order")
            sig[m] = after
    return tuple(sig)


def rotation_poset(inst: Instance, class_limit: int = DEFAULT_CLASS_LIMIT) -> RotationPoset:
    """Distinct rotations of the instance and their precedence.

    Raises :class:`NoSolution` when there is no strongly stable matching.
    """
    poset = irreducible_classes(inst)
    if len(poset) == 0:
        return RotationPoset(inst, signature(inst, Matching.empty(inst)), (), ())
    top = poset.elements[0].signature
    rotations: List[Rotation] = []
    for x in range(1, len(poset)):
        members = [i for i in range(len(poset)) if poset.above[x] >> i & 1 and i != x]
        upper = class_of_closed_set(inst, poset, members)
        lower = meet_men(inst, upper.representative, poset.elements[x].representative)
        rotations.append(make_rotation(inst, upper.representative, lower))
    seen: Dict[tuple, int] = {}
    unique: List[Rotation] = []
    for r in rotations:
        if r.key not in seen:
            seen[r.key] = len(unique)
            unique.append(r)

    classes: List[Signature] = []
    exact = True
    for cls in enumerate_classes(inst, ordered=False):
        classes.append(cls.signature)
        if len(classes) > class_limit:
            exact = False
            classes = [c.signature for c in poset.elements]
            break
    applied_mask = []
    for r in unique:
        mask = 0
        for k, sig in enumerate(classes):
            if applied(r, sig):
                mask |= 1 << k
        applied_mask.append(mask)
    n = len(unique)
    below = []
    for j in range(n):
        b = 0
        for i in range(n):
            # r_i <= r_j iff wherever r_j is applied, r_i is too
            if applied_mask[j] & ~applied_mask[i] == 0:
                b |= 1 << i
        below.append(b)
    return RotationPoset(inst, top, tuple(unique), tuple(below), exact)


def format_rotations(inst: Instance, rp: RotationPoset) -> str:
    lines = []
    for k, r in enumerate(rp.elements):
        parts = " ".join(f"{inst.men[m]} {a} {b}" for m, (a, b) in sorted(r.moved_men.items()))
        lines.append(f"rotation {k}: {parts}")
    for i, j in rp.covers():
        lines.append(f"prec {i} <= {j}")
    if not rp.exact:
        lines.append("approximate order")
    return "".join(line + "\n" for line in lines)
