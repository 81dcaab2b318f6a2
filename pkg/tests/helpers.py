"""Shared test utilities: fixtures, seeded corpora and a classical oracle.

The classical oracle handles strict preferences only and is written from
scratch: textbook deferred acceptance for the two extreme matchings, and
exposed-rotation elimination to walk the whole lattice.
"""
from __future__ import annotations

import random
from collections import deque
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Tuple

from strongstable.instance import GenParams, Instance, generate_random, parse_instance

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"
FIXTURE_NAMES = ("F0", "F1", "F2", "F3", "F4", "F6")

DENSITIES = (0.3, 0.6, 1.0)
TIE_RATES = (0.0, 0.3, 0.7)


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.txt"


def load(name: str) -> Instance:
    return parse_instance(fixture_path(name).read_text())


def corpus(per_cell: int = 60) -> List[Tuple[str, Instance]]:
    """Seeded random instances with at most 6 men and 6 women."""
    out = []
    for d in DENSITIES:
        for t in TIE_RATES:
            for s in range(per_cell):
                men = 1 + s % 6
                women = 1 + (s * 7 // 6) % 6
                seed = 1000 * int(d * 10) + 100 * int(t * 10) + s
                out.append((f"{men}x{women} d={d} t={t} s={seed}",
                            generate_random(GenParams(men, women, d, t, seed))))
    return out


def planted(seed: int, blocks: int, sizes=(2, 3), cross: float = 0.2,
            tie: float = 0.2) -> Instance:
    """Disjoint cyclic blocks (many stable matchings each) plus random noise.

    Each block of size ``s`` has men ranking the women cyclically and women
    ranking men cyclically shifted by one, which gives ``s`` stable matchings
    per block.  Extra edges are inserted at random positions and adjacent
    entries are merged into ties with probability ``tie``.
    """
    rng = random.Random(seed)
    mp: Dict[str, List[str]] = {}
    wp: Dict[str, List[str]] = {}
    men: List[str] = []
    women: List[str] = []
    base = 0
    for _ in range(blocks):
        s = rng.choice(sizes)
        ms = [f"m{base + i + 1}" for i in range(s)]
        ws = [f"w{base + i + 1}" for i in range(s)]
        men += ms
        women += ws
        for i, m in enumerate(ms):
            mp[m] = [ws[(i + j) % s] for j in range(s)]
        for i, w in enumerate(ws):
            wp[w] = [ms[(i + 1 + j) % s] for j in range(s)]
        base += s
    for m in men:
        for w in women:
            if w not in mp[m] and rng.random() < cross:
                mp[m].insert(rng.randrange(len(mp[m]) + 1), w)
                wp[w].insert(rng.randrange(len(wp[w]) + 1), m)

    def entries(lst):
        groups: List[List[str]] = []
        for x in lst:
            if groups and rng.random() < tie:
                groups[-1].append(x)
            else:
                groups.append([x])
        return " ".join(g[0] if len(g) == 1 else "(" + " ".join(g) + ")" for g in groups)

    lines = ["men: " + " ".join(men), "women: " + " ".join(women)]
    lines += [f"{v}: {entries(l)}" for v, l in list(mp.items()) + list(wp.items())]
    return parse_instance("\n".join(lines) + "\n")


def planted_corpus() -> List[Tuple[str, Instance]]:
    out = []
    for blocks in (1, 2, 3):
        for cross in (0.0, 0.2):
            for tie in (0.0, 0.15, 0.3):
                for s in range(8):
                    out.append((f"planted b={blocks} c={cross} t={tie} s={s}",
                                planted(s, blocks, (2, 3), cross, tie)))
    return out


def strict_corpus(count: int = 240, planted_count: int = 60) -> List[Tuple[str, Instance]]:
    out = []
    for s in range(count):
        men = 1 + s % 8
        women = 1 + (s * 5 // 8) % 8
        d = DENSITIES[s % 3]
        out.append((f"strict {men}x{women} d={d} s={s}",
                    generate_random(GenParams(men, women, d, 0.0, 50_000 + s))))
    # strict instances with many stable matchings
    for s in range(planted_count):
        blocks, sizes = ((2, (2, 3)), (3, (2,)), (4, (2,)), (2, (4,)))[s % 4]
        out.append((f"strict planted b={blocks} s={s}",
                    planted(70_000 + s, blocks, sizes, cross=0.1, tie=0.0)))
    return out


# -- classical oracle for strict preferences ------------------------------------

def _strict_lists(inst: Instance):
    men = [[t[0] for t in ties] for ties in inst.men_prefs]
    women = [[t[0] for t in ties] for ties in inst.women_prefs]
    assert all(len(t) == 1 for ties in inst.men_prefs + inst.women_prefs for t in ties)
    return men, women


def deferred_acceptance(inst: Instance, proposers: str = "men") -> Tuple[Optional[int], ...]:
    """Classical proposal algorithm; returns each man's partner index."""
    men, women = _strict_lists(inst)
    if proposers == "women":
        men, women = women, men
    rank = [{m: i for i, m in enumerate(lst)} for lst in women]
    nxt = [0] * len(men)
    holds: List[Optional[int]] = [None] * len(women)
    free = deque(range(len(men)))
    while free:
        m = free.popleft()
        if nxt[m] >= len(men[m]):
            continue
        w = men[m][nxt[m]]
        nxt[m] += 1
        cur = holds[w]
        if cur is None:
            holds[w] = m
        elif rank[w][m] < rank[w][cur]:
            holds[w] = m
            free.append(cur)
        else:
            free.append(m)
    if proposers == "men":
        wife: List[Optional[int]] = [None] * len(men)
        for w, m in enumerate(holds):
            if m is not None:
                wife[m] = w
        return tuple(wife)
    return tuple(holds)


RotationKey = FrozenSet[Tuple[int, int, int]]  # (man, rank before, rank after)


def classical_lattice(inst: Instance):
    """Walk every stable matching by eliminating exposed rotations.

    Returns ``(eliminated, rotations, top, bottom)``: ``eliminated`` maps the
    wife tuple of every stable matching to the rotations eliminated to reach
    it, and each rotation is keyed by its per-man rank change.
    """
    men, women = _strict_lists(inst)
    mrank = [{w: i + 1 for i, w in enumerate(lst)} for lst in men]
    wrank = [{m: i + 1 for i, m in enumerate(lst)} for lst in women]
    top = deferred_acceptance(inst, "men")
    bottom = deferred_acceptance(inst, "women")

    def exposed(wife):
        husband = {w: m for m, w in enumerate(wife) if w is not None}
        succ = {}
        for m, w in enumerate(wife):
            if w is None or w == bottom[m]:
                continue
            for w2 in men[m][mrank[m][w]:]:
                h = husband.get(w2)
                if h is not None and wrank[w2][m] < wrank[w2][h]:
                    succ[m] = w2
                    break
        nxt = {m: husband[w2] for m, w2 in succ.items()}
        cycles = []
        state: Dict[int, int] = {}
        for start in sorted(nxt):
            path = []
            m = start
            while m in nxt and m not in state:
                state[m] = 1
                path.append(m)
                m = nxt[m]
            if m in path:
                cyc = path[path.index(m):]
                cycles.append({x: succ[x] for x in cyc})
            for x in path:
                state[x] = 2
        return cycles

    seen: Dict[tuple, FrozenSet[RotationKey]] = {top: frozenset()}
    rotations = set()
    queue = deque([top])
    while queue:
        wife = queue.popleft()
        for cyc in exposed(wife):
            key = frozenset((m, mrank[m][wife[m]], mrank[m][w]) for m, w in cyc.items())
            rotations.add(key)
            new = list(wife)
            for m, w in cyc.items():
                new[m] = w
            new = tuple(new)
            if new not in seen:
                seen[new] = seen[wife] | {key}
                queue.append(new)
    return seen, rotations, top, bottom


def classical_precedence(eliminated: Dict[tuple, FrozenSet[RotationKey]], rotations):
    """``(a, b)`` with ``a`` preceding ``b``: every matching past ``b`` is past ``a``."""
    out = set()
    for a in rotations:
        for b in rotations:
            if all(a in E for E in eliminated.values() if b in E):
                out.add((a, b))
    return out
