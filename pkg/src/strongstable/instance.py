"""Preference instances with ties: data model, text format and random generation.

Vertices are referred to by integer indices everywhere inside the library:
men are ``0 .. num_men - 1`` and women ``0 .. num_women - 1``, assigned in
declaration order.  Names only matter at the text boundary.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

Tie = Tuple[int, ...]
PrefList = Tuple[Tie, ...]
Edge = Tuple[int, int]


class ValidationError(ValueError):
    """Raised when an instance or matching description is malformed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _rank_table(prefs: Sequence[PrefList]) -> Tuple[Dict[int, int], ...]:
    return tuple(
        {u: r for r, tie in enumerate(ties, 1) for u in tie} for ties in prefs
    )


@dataclass(frozen=True, eq=False)
class Instance:
    """A bipartite graph where every vertex ranks its neighbours by ordered ties.

    ``men_prefs[m]`` is the list of ties of man ``m`` (each tie a tuple of
    woman indices, best tie first); ``women_prefs`` is the converse.  Use
    :meth:`from_prefs` to build a validated instance.
    """

    men: Tuple[str, ...]
    women: Tuple[str, ...]
    men_prefs: Tuple[PrefList, ...]
    women_prefs: Tuple[PrefList, ...]
    men_rank: Tuple[Dict[int, int], ...] = field(repr=False)
    women_rank: Tuple[Dict[int, int], ...] = field(repr=False)

    @classmethod
    def from_prefs(
        cls,
        men: Sequence[str],
        women: Sequence[str],
        men_prefs: Sequence[Sequence[Iterable[int]]],
        women_prefs: Sequence[Sequence[Iterable[int]]],
    ) -> "Instance":
        """Build an instance from index-based tie lists, checking every invariant."""
        men = tuple(men)
        women = tuple(women)
        if len(set(men)) != len(men) or len(set(women)) != len(women):
            raise ValidationError("duplicate vertex declaration")
        if set(men) & set(women):
            raise ValidationError("men and women must be disjoint")
        if len(men_prefs) != len(men) or len(women_prefs) != len(women):
            raise ValidationError("one preference list per vertex is required")
        mp = tuple(tuple(tuple(t) for t in ties) for ties in men_prefs)
        wp = tuple(tuple(tuple(t) for t in ties) for ties in women_prefs)
        for own, other, prefs in ((men, women, mp), (women, men, wp)):
            for v, ties in enumerate(prefs):
                seen = set()
                for tie in ties:
                    if not tie:
                        raise ValidationError(f"empty tie on the list of {own[v]}")
                    for u in tie:
                        if not 0 <= u < len(other):
                            raise ValidationError(f"unknown vertex on the list of {own[v]}")
                        if u in seen:
                            raise ValidationError(
                                f"duplicate vertex {other[u]} in the list of {own[v]}"
                            )
                        seen.add(u)
        inst = cls(men, women, mp, wp, _rank_table(mp), _rank_table(wp))
        for m, ranks in enumerate(inst.men_rank):
            for w in ranks:
                if m not in inst.women_rank[w]:
                    raise ValidationError(f"asymmetric edge ({men[m]}, {women[w]})")
        for w, ranks in enumerate(inst.women_rank):
            for m in ranks:
                if w not in inst.men_rank[m]:
                    raise ValidationError(f"asymmetric edge ({men[m]}, {women[w]})")
        return inst

    @property
    def num_men(self) -> int:
        return len(self.men)

    @property
    def num_women(self) -> int:
        return len(self.women)

    def edges(self) -> List[Edge]:
        """All edges ``(m, w)`` in man order, then in the man's list order."""
        return [(m, w) for m, ties in enumerate(self.men_prefs) for t in ties for w in t]

    @property
    def num_edges(self) -> int:
        return sum(len(r) for r in self.men_rank)

    def has_edge(self, m: int, w: int) -> bool:
        return w in self.men_rank[m]

    def man_index(self, name: str) -> int:
        try:
            return self.men.index(name)
        except ValueError:
            raise ValidationError(f"unknown man {name!r}") from None

    def woman_index(self, name: str) -> int:
        try:
            return self.women.index(name)
        except ValueError:
            raise ValidationError(f"unknown woman {name!r}") from None

    def swapped(self) -> "Instance":
        """The same instance with the roles of men and women exchanged."""
        return Instance(
            self.women, self.men, self.women_prefs, self.men_prefs,
            self.women_rank, self.men_rank,
        )

    def restrict(self, keep: Iterable[Edge]) -> "Instance":
        """Sub-instance on the given edges, preserving order and tie structure."""
        keep = set(keep)
        mp = [
            [t2 for t2 in (tuple(w for w in t if (m, w) in keep) for t in ties) if t2]
            for m, ties in enumerate(self.men_prefs)
        ]
        wp = [
            [t2 for t2 in (tuple(m for m in t if (m, w) in keep) for t in ties) if t2]
            for w, ties in enumerate(self.women_prefs)
        ]
        return Instance.from_prefs(self.men, self.women, mp, wp)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.men == other.men
            and self.women == other.women
            and _canonical(self.men_prefs) == _canonical(other.men_prefs)
            and _canonical(self.women_prefs) == _canonical(other.women_prefs)
        )

    def __hash__(self) -> int:
        return hash((self.men, self.women, _canonical(self.men_prefs)))


def _canonical(prefs: Sequence[PrefList]):
    return tuple(tuple(tuple(sorted(t)) for t in ties) for ties in prefs)


class Matching:
    """A set of vertex-disjoint edges, with partner lookup on both sides.

    ``wife[m]`` is the partner of man ``m`` (``None`` when unmatched) and
    ``husband[w]`` the partner of woman ``w``.
    """

    __slots__ = ("wife", "husband")

    def __init__(self, wife: Sequence[Optional[int]], num_women: int):
        husband: List[Optional[int]] = [None] * num_women
        for m, w in enumerate(wife):
            if w is None:
                continue
            if husband[w] is not None:
                raise ValueError(f"woman {w} matched twice")
            husband[w] = m
        self.wife: Tuple[Optional[int], ...] = tuple(wife)
        self.husband: Tuple[Optional[int], ...] = tuple(husband)

    @classmethod
    def from_pairs(cls, inst: Instance, pairs: Iterable[Edge]) -> "Matching":
        wife: List[Optional[int]] = [None] * inst.num_men
        for m, w in pairs:
            if wife[m] is not None:
                raise ValueError(f"man {m} matched twice")
            wife[m] = w
        return cls(wife, inst.num_women)

    @classmethod
    def empty(cls, inst: Instance) -> "Matching":
        return cls([None] * inst.num_men, inst.num_women)

    def pairs(self) -> List[Edge]:
        return [(m, w) for m, w in enumerate(self.wife) if w is not None]

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.pairs())

    def __len__(self) -> int:
        return sum(w is not None for w in self.wife)

    def __contains__(self, edge: object) -> bool:
        m, w = edge  # type: ignore[misc]
        return 0 <= m < len(self.wife) and self.wife[m] == w

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return self.wife == other.wife

    def __hash__(self) -> int:
        return hash(self.wife)

    def __repr__(self) -> str:
        return f"Matching({self.pairs()})"

    def swapped(self) -> "Matching":
        """The matching seen from the women's side (for a swapped instance)."""
        return Matching(self.husband, len(self.wife))

    def check_edges(self, inst: Instance) -> None:
        """Raise :class:`ValueError` unless every pair is an edge of ``inst``."""
        if len(self.wife) != inst.num_men or len(self.husband) != inst.num_women:
            raise ValueError("matching does not fit the instance")
        for m, w in self.pairs():
            if not inst.has_edge(m, w):
                raise ValueError(f"({inst.men[m]}, {inst.women[w]}) is not an edge")


def signature(inst: Instance, matching: Matching) -> Tuple[Optional[int], ...]:
    """Rank of every man's partner, ``None`` for unmatched men."""
    return tuple(
        None if w is None else inst.men_rank[m][w] for m, w in enumerate(matching.wife)
    )


# -- text format -------------------------------------------------------------


def _tokens(line: str, lineno: int) -> List[object]:
    """Split a preference line into bare ids and parenthesised tie groups."""
    out: List[object] = []
    group: Optional[List[str]] = None
    for tok in line.replace("(", " ( ").replace(")", " ) ").split():
        if tok == "(":
            if group is not None:
                raise ValidationError("nested tie bracket", lineno)
            group = []
        elif tok == ")":
            if group is None:
                raise ValidationError("unbalanced ')'", lineno)
            if not group:
                raise ValidationError("empty tie", lineno)
            out.append(group)
            group = None
        elif group is not None:
            group.append(tok)
        else:
            out.append([tok])
    if group is not None:
        raise ValidationError("unclosed '('", lineno)
    return out


def parse_instance(text: str) -> Instance:
    """Parse the line-oriented instance format.

    ``men:`` and ``women:`` declare the vertices; each further line
    ``<id>: <entry> ...`` gives a preference list, best first, where an entry is a
    bare id or a parenthesised tie.  Vertices without a line have empty lists.
    """
    men: Optional[List[str]] = None
    women: Optional[List[str]] = None
    lists: Dict[str, Tuple[int, List[object]]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, rest = line.partition(":")
        head = head.strip()
        if not sep or not head or len(head.split()) != 1:
            raise ValidationError("expected '<id>: ...'", lineno)
        if head in ("men", "women"):
            if (men if head == "men" else women) is not None:
                raise ValidationError(f"'{head}:' declared twice", lineno)
            if lists:
                raise ValidationError("declarations must precede preference lines", lineno)
            ids = rest.split()
            if any(c in i for i in ids for c in "():#"):
                raise ValidationError("invalid vertex id", lineno)
            if len(set(ids)) != len(ids):
                raise ValidationError("duplicate vertex declaration", lineno)
            if head == "men":
                men = ids
            else:
                women = ids
            continue
        if men is None or women is None:
            raise ValidationError("'men:' and 'women:' must come first", lineno)
        if head in lists:
            raise ValidationError(f"second preference line for {head}", lineno)
        lists[head] = (lineno, _tokens(rest, lineno))
    if men is None or women is None:
        raise ValidationError("missing 'men:' or 'women:' declaration")
    if set(men) & set(women):
        raise ValidationError("duplicate vertex declaration: id used on both sides")

    man_idx = {name: i for i, name in enumerate(men)}
    woman_idx = {name: i for i, name in enumerate(women)}
    men_prefs: List[List[Tuple[int, ...]]] = [[] for _ in men]
    women_prefs: List[List[Tuple[int, ...]]] = [[] for _ in women]
    line_of: Dict[Tuple[str, int], int] = {}
    for name, (lineno, entries) in lists.items():
        if name in man_idx:
            own, other, target = man_idx[name], woman_idx, men_prefs
            side = "m"
        elif name in woman_idx:
            own, other, target = woman_idx[name], man_idx, women_prefs
            side = "w"
        else:
            raise ValidationError(f"unknown vertex {name!r}", lineno)
        line_of[(side, own)] = lineno
        seen = set()
        for group in entries:
            tie = []
            for u in group:  # type: ignore[union-attr]
                if u not in other:
                    raise ValidationError(f"unknown vertex {u!r} on the list of {name}", lineno)
                if u in seen:
                    raise ValidationError(f"duplicate vertex {u!r} on the list of {name}", lineno)
                seen.add(u)
                tie.append(other[u])
            target[own].append(tuple(tie))

    for m, ties in enumerate(men_prefs):
        for tie in ties:
            for w in tie:
                if not any(m in t for t in women_prefs[w]):
                    raise ValidationError(
                        f"asymmetric edge: {women[w]} is on the list of {men[m]} but not vice versa",
                        line_of.get(("m", m)),
                    )
    for w, ties in enumerate(women_prefs):
        for tie in ties:
            for m in tie:
                if not any(w in t for t in men_prefs[m]):
                    raise ValidationError(
                        f"asymmetric edge: {men[m]} is on the list of {women[w]} but not vice versa",
                        line_of.get(("w", w)),
                    )
    return Instance.from_prefs(men, women, men_prefs, women_prefs)


def _format_list(ties: PrefList, names: Sequence[str]) -> str:
    parts = []
    for tie in ties:
        if len(tie) == 1:
            parts.append(names[tie[0]])
        else:
            parts.append("(" + " ".join(names[u] for u in tie) + ")")
    return " ".join(parts)


def serialize_instance(inst: Instance) -> str:
    lines = ["men: " + " ".join(inst.men), "women: " + " ".join(inst.women)]
    for m, ties in enumerate(inst.men_prefs):
        lines.append(f"{inst.men[m]}: {_format_list(ties, inst.women)}")
    for w, ties in enumerate(inst.women_prefs):
        lines.append(f"{inst.women[w]}: {_format_list(ties, inst.men)}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def format_matching(inst: Instance, matching: Optional[Matching]) -> str:
    """Render a matching in the one-pair-per-line format, ``NONE`` for no solution."""
    if matching is None:
        return "NONE\n"
    return "".join(f"{inst.men[m]} {inst.women[w]}\n" for m, w in matching.pairs())


def parse_matching(inst: Instance, text: str) -> Optional[Matching]:
    """Inverse of :func:`format_matching`; returns ``None`` for ``NONE``."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "NONE":
            return None
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError("expected '<man> <woman>'", lineno)
        try:
            pairs.append((inst.man_index(parts[0]), inst.woman_index(parts[1])))
        except ValidationError as exc:
            raise ValidationError(str(exc), lineno) from None
    try:
        matching = Matching.from_pairs(inst, pairs)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    return matching


# -- random generation -------------------------------------------------------


@dataclass(frozen=True)
class GenParams:
    men_count: int
    women_count: int
    edge_density: float
    tie_rate: float
    seed: int

    def __post_init__(self):
        if self.men_count < 0 or self.women_count < 0:
            raise ValueError("vertex counts must be non-negative")
        for p in (self.edge_density, self.tie_rate):
            if not 0.0 <= p <= 1.0:
                raise ValueError("probabilities must lie in [0, 1]")


def _random_ties(rng: random.Random, items: List[int], tie_rate: float) -> List[Tie]:
    rng.shuffle(items)
    ties: List[List[int]] = []
    for u in items:
        if ties and rng.random() < tie_rate:
            ties[-1].append(u)
        else:
            ties.append([u])
    return [tuple(t) for t in ties]


def generate_random(p: GenParams) -> Instance:
    """Seeded random instance: independent edges, shuffled lists, merged ties."""
    rng = random.Random(p.seed)
    men = [f"m{i + 1}" for i in range(p.men_count)]
    women = [f"w{j + 1}" for j in range(p.women_count)]
    adj_m: List[List[int]] = [[] for _ in men]
    adj_w: List[List[int]] = [[] for _ in women]
    for m in range(p.men_count):
        for w in range(p.women_count):
            if rng.random() < p.edge_density:
                adj_m[m].append(w)
                adj_w[w].append(m)
    men_prefs = [_random_ties(rng, adj, p.tie_rate) for adj in adj_m]
    women_prefs = [_random_ties(rng, adj, p.tie_rate) for adj in adj_w]
    return Instance.from_prefs(men, women, men_prefs, women_prefs)
