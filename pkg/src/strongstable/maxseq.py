"""A maximal chain of strongly stable matchings from man-optimal to woman-optimal.

Starting from the man-optimal matching ``M``, two graphs are maintained:

* the dependency graph ``G_d`` on all vertices.  Matched edges point from the
  woman to the man and every other edge from the man to the woman; an arc
  ``x -> y`` means that ``y`` must change rank whenever ``x`` does, in any
  successor of ``M``.
* the candidate graph ``G_c``: for each man, the best edges strictly below
  his current partner that can still appear in a successor.

A strongly connected component of ``G_d`` without outgoing arcs that is
perfectly matched by a matching ``M'`` of ``G_c`` yields the next matching of
the chain.  Men in closed components with no candidate edges promote their
next tie; free men of ``M'`` augment along level-maximal alternating paths,
and when they cannot, the women they reach lose their lowest edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .instance import Instance, Matching, format_matching, signature
from .solver import man_optimal, woman_optimal

_INF = float("inf")


class InvariantError(RuntimeError):
    """Internal consistency check failed; the run cannot continue."""


@dataclass(frozen=True)
class MaximalSequence:
    matchings: Tuple[Matching, ...]

    @property
    def z(self) -> int:
        return len(self.matchings) - 1

    def __len__(self) -> int:
        return len(self.matchings)

    def __iter__(self):
        return iter(self.matchings)

    def __getitem__(self, i):
        return self.matchings[i]


def _tarjan(n_vertices: int, succ) -> List[int]:
    """Component id per vertex, iterative Tarjan."""
    index = [-1] * n_vertices
    low = [0] * n_vertices
    on_stack = [False] * n_vertices
    comp = [-1] * n_vertices
    stack: List[int] = []
    counter = 0
    n_comp = 0
    for root in range(n_vertices):
        if index[root] != -1:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for u in it:
                if index[u] == -1:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on_stack[u] = True
                    work.append((u, iter(succ(u))))
                    advanced = True
                    break
                if on_stack[u] and index[u] < low[v]:
                    low[v] = index[u]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                while True:
                    u = stack.pop()
                    on_stack[u] = False
                    comp[u] = n_comp
                    if u == v:
                        break
                n_comp += 1
    return comp


@dataclass
class SuccessorState:
    """Mutable state of the chain computation; see the module docstring.

    ``pool`` holds the undirected edges not yet promoted (per man and per
    woman), ``ed`` the non-matching arcs of ``G_d`` per man, ``ec`` the
    candidate edges, ``mp`` the matching ``M'`` and ``level`` the phase in
    which each candidate edge first appeared.
    """

    inst: Instance
    target: Matching
    wife: List[Optional[int]]
    husband: List[Optional[int]]
    order: List[int]
    pool_m: List[Set[int]]
    pool_w: List[Set[int]]
    ed_m: List[Set[int]]
    pending: List[Set[int]]
    ec_m: List[Set[int]]
    ec_w: List[Set[int]]
    mp_m: List[Optional[int]]
    mp_w: List[Optional[int]]
    level: Dict[Tuple[int, int], int] = field(default_factory=dict)
    phase: int = 1
    index: int = 1
    debug: bool = False
    comp: List[int] = field(default_factory=list)
    closed: List[bool] = field(default_factory=list)
    dirty: bool = True
    # debug: (emission index, best reachable rank per man) after each emission
    reach_log: List[Tuple[int, Tuple[float, ...]]] = field(default_factory=list)
    _runner: Optional[Iterator[Matching]] = field(default=None, repr=False)

    # -- construction --------------------------------------------------------

    @classmethod
    def initial(cls, inst: Instance, start: Optional[Matching] = None,
                target: Optional[Matching] = None, order: Optional[Sequence[int]] = None,
                debug: bool = False) -> Optional["SuccessorState"]:
        """State at the man-optimal matching (or at ``start``); ``None`` if unsolvable."""
        if start is None:
            start = man_optimal(inst)
            if start is None:
                return None
        if target is None:
            target = woman_optimal(inst)
            if target is None:
                return None
        n, k = inst.num_men, inst.num_women
        mr, wr = inst.men_rank, inst.women_rank
        wife, husband = list(start.wife), list(start.husband)
        pool_m: List[Set[int]] = [set() for _ in range(n)]
        pool_w: List[Set[int]] = [set() for _ in range(k)]
        for m in range(n):
            cur = wife[m]
            if cur is None:
                continue
            for w, r in mr[m].items():
                h = husband[w]
                if w == cur or h is None:
                    continue
                # drop edges a successor can never use
                if r < mr[m][cur] or wr[w][m] > wr[w][h]:
                    continue
                pool_m[m].add(w)
                pool_w[w].add(m)
        state = cls(
            inst=inst, target=target, wife=wife, husband=husband,
            order=list(range(n)) if order is None else list(order),
            pool_m=pool_m, pool_w=pool_w,
            ed_m=[set() for _ in range(n)], pending=[set() for _ in range(n)],
            ec_m=[set() for _ in range(n)], ec_w=[set() for _ in range(k)],
            mp_m=[None] * n, mp_w=[None] * k, debug=debug,
        )
        for m in range(n):
            if wife[m] is not None and state.is_final(m):
                state._add_ec(m, wife[m])
                state._mp_set(m, wife[m])
        return state

    # -- small helpers -------------------------------------------------------

    def rank_m(self, m: int) -> Optional[int]:
        w = self.wife[m]
        return None if w is None else self.inst.men_rank[m][w]

    def rank_w(self, w: int) -> Optional[int]:
        m = self.husband[w]
        return None if m is None else self.inst.women_rank[w][m]

    def is_final(self, m: int) -> bool:
        t = self.target.wife[m]
        if self.wife[m] is None or t is None:
            return self.wife[m] is None and t is None
        return self.inst.men_rank[m][self.wife[m]] == self.inst.men_rank[m][t]

    def current(self) -> Matching:
        return Matching(list(self.wife), self.inst.num_women)

    def done(self) -> bool:
        return all(self.is_final(m) for m in range(self.inst.num_men))

    def reach(self, m: int) -> float:
        """Best rank among the man's unpromoted and candidate edges."""
        mr = self.inst.men_rank[m]
        best = _INF
        for w in self.pool_m[m]:
            if mr[w] < best:
                best = mr[w]
        for w in self.ec_m[m]:
            if mr[w] < best:
                best = mr[w]
        return best

    def _ed_valid(self, m: int, w: int, reach: Optional[float] = None) -> bool:
        """Whether the arc ``m -> w`` is a sound dependency for the current state."""
        inst = self.inst
        h = self.husband[w]
        if h is None:
            return False
        rw, cur_w = inst.women_rank[w][m], inst.women_rank[w][h]
        if rw > cur_w:
            return False
        if rw < cur_w:
            return True
        r = inst.men_rank[m][w]
        if r <= self.rank_m(m):
            return True
        if reach is None:
            reach = self.reach(m)
        return r < reach

    def _add_ec(self, m: int, w: int) -> None:
        self.ec_m[m].add(w)
        self.ec_w[w].add(m)
        self.level.setdefault((m, w), self.phase)

    def _del_ec(self, m: int, w: int) -> None:
        self.ec_m[m].discard(w)
        self.ec_w[w].discard(m)
        if self.mp_m[m] == w:
            self.mp_m[m] = None
            self.mp_w[w] = None

    def _mp_set(self, m: int, w: int) -> None:
        self.mp_m[m] = w
        self.mp_w[w] = m

    def _del_pool(self, m: int, w: int) -> None:
        self.pool_m[m].discard(w)
        self.pool_w[w].discard(m)

    def woman_level(self, w: int) -> int:
        return min(self.level[(m, w)] for m in self.ec_w[w])

    # -- dependency graph ----------------------------------------------------

    def _succ(self, v: int) -> List[int]:
        n = self.inst.num_men
        if v < n:
            cur = self.wife[v]
            return [n + w for w in self.ed_m[v] if w != cur]
        h = self.husband[v - n]
        return [] if h is None else [h]

    def refresh_components(self) -> None:
        if not self.dirty:
            return
        n, k = self.inst.num_men, self.inst.num_women
        comp = _tarjan(n + k, self._succ)
        closed = [True] * (max(comp) + 1 if comp else 0)
        for v in range(n + k):
            for u in self._succ(v):
                if comp[u] != comp[v]:
                    closed[comp[v]] = False
        self.comp, self.closed, self.dirty = comp, closed, False

    def is_closed_man(self, m: int) -> bool:
        return self.closed[self.comp[m]]

    def _flush_pending(self, m: int) -> None:
        if not self.pending[m]:
            return
        reach = self.reach(m)
        for w in sorted(self.pending[m]):
            h = self.husband[w]
            if h is None or self.inst.women_rank[w][m] > self.inst.women_rank[w][h]:
                self.pending[m].discard(w)
            elif self._ed_valid(m, w, reach):
                self.pending[m].discard(w)
                if w not in self.ed_m[m]:
                    self.ed_m[m].add(w)
                    self.dirty = True

    # -- the three stages of a phase -------------------------------------------

    def _promote(self) -> bool:
        """Promote top ties of idle men in closed components."""
        inst = self.inst
        mr, wr = inst.men_rank, inst.women_rank
        changed = False
        while True:
            self.refresh_components()
            batch = []
            for m in self.order:
                if (self.wife[m] is None or self.is_final(m) or self.ec_m[m]
                        or not self.is_closed_man(m)):
                    continue
                if not self.pool_m[m]:
                    raise InvariantError(
                        f"man {inst.men[m]} is stuck above his final rank with no edges left")
                top = min(mr[m][w] for w in self.pool_m[m])
                tie = sorted(w for w in self.pool_m[m] if mr[m][w] == top)
                self._flush_pending(m)
                cur = self.rank_m(m)
                for w in tie:
                    if top > cur and wr[w][m] == self.rank_w(w):
                        self.pending[m].add(w)
                    elif w not in self.ed_m[m]:
                        self.ed_m[m].add(w)
                        self.dirty = True
                batch.append((m, tie))
            if not batch:
                return changed
            changed = True
            self.refresh_components()
            for m, tie in batch:
                if not self.is_closed_man(m):
                    continue
                cur = self.rank_m(m)
                for w in tie:
                    self._del_pool(m, w)
                    if not (wr[w][m] < self.rank_w(w) and mr[m][w] > cur):
                        continue
                    rank_new = wr[w][m]
                    if any(wr[w][x] < rank_new for x in self.ec_w[w]):
                        continue  # dominated by an existing candidate
                    for x in [x for x in self.ec_w[w] if wr[w][x] > rank_new]:
                        self._del_ec(x, w)
                    self._add_ec(m, w)
                self._flush_pending(m)

    def _augment(self) -> bool:
        """Grow ``M'`` along level-maximal alternating paths; prune on failure."""
        inst = self.inst
        wr = inst.women_rank
        changed = False
        progress = True
        while progress:
            progress = False
            for m in self.order:
                if self.mp_m[m] is not None or not self.ec_m[m] or not self.is_closed_man(m):
                    continue
                parent: Dict[int, int] = {}
                seen_men = {m}
                queue = [m]
                free_women = []
                qi = 0
                while qi < len(queue):
                    x = queue[qi]
                    qi += 1
                    for w in sorted(self.ec_m[x]):
                        if w in parent:
                            continue
                        parent[w] = x
                        y = self.mp_w[w]
                        if y is None:
                            free_women.append(w)
                        elif y not in seen_men:
                            seen_men.add(y)
                            queue.append(y)
                if free_women:
                    w = max(free_women, key=lambda u: (self.woman_level(u), -u))
                    while True:
                        x = parent[w]
                        prev = self.mp_m[x]
                        self._mp_set(x, w)
                        if x == m:
                            break
                        w = prev
                    if self.debug:
                        self._audit_level_maximal()
                else:
                    for w in sorted(parent):
                        thr = min(wr[w][x] for x in self.ec_w[w])
                        for x in list(self.ec_w[w]):
                            self._del_ec(x, w)
                        for x in [x for x in self.pool_w[w] if wr[w][x] >= thr]:
                            self._del_pool(x, w)
                changed = progress = True
                break
        return changed

    def _emit(self) -> Iterator[Matching]:
        inst = self.inst
        n = inst.num_men
        while True:
            self.refresh_components()
            members: Dict[int, List[int]] = {}
            for v, c in enumerate(self.comp):
                if self.closed[c]:
                    members.setdefault(c, []).append(v)
            chosen = None
            for c, verts in sorted(members.items(), key=lambda kv: kv[1][0]):
                men = [v for v in verts if v < n]
                if not any(not self.is_final(m) for m in men):
                    continue
                ok = True
                for v in verts:
                    partner = self.mp_m[v] if v < n else self.mp_w[v - n]
                    if partner is None or self.comp[partner + (n if v < n else 0)] != c:
                        ok = False
                        break
                if ok:
                    chosen = verts
                    break
            if chosen is None:
                return
            yield self._apply(chosen)

    def _apply(self, verts: List[int]) -> Matching:
        inst = self.inst
        n = inst.num_men
        mr, wr = inst.men_rank, inst.women_rank
        men = [v for v in verts if v < n]
        women = [v - n for v in verts if v >= n]
        if self.debug:
            self._audit_changed_set(men)
        for m in men:
            self.wife[m] = self.mp_m[m]
        for m in men:
            self.husband[self.wife[m]] = m
        emitted = self.current()
        self.index += 1
        for m in men:
            for w in list(self.ec_m[m]):
                self._del_ec(m, w)
        for w in women:
            if self.ec_w[w]:
                raise InvariantError("candidate edge leaves an emitted component")
        for m in men:
            if self.is_final(m):
                self._add_ec(m, self.wife[m])
                self._mp_set(m, self.wife[m])
        # prune edges no later successor can use
        for w in women:
            cur = wr[w][self.husband[w]]
            for x in [x for x in self.pool_w[w] if wr[w][x] > cur]:
                self._del_pool(x, w)
        for m in men:
            cur = mr[m][self.wife[m]]
            for w in [w for w in self.pool_m[m] if mr[m][w] <= cur]:
                self._del_pool(m, w)
        # keep only dependency arcs that are still sound
        affected = set(men)
        for w in women:
            affected.update(x for x in range(n) if w in self.ed_m[x])
        for x in sorted(affected):
            reach = self.reach(x)
            for w in list(self.ed_m[x]):
                if w == self.wife[x]:
                    continue
                if not self._ed_valid(x, w, reach):
                    self.ed_m[x].discard(w)
            self._flush_pending(x)
        for x in range(n):
            if self.pending[x] and (x in affected or any(w in women for w in self.pending[x])):
                self._flush_pending(x)
        # matched edges are always arcs
        for m in range(n):
            if self.wife[m] is not None:
                self.ed_m[m].add(self.wife[m])
        self.dirty = True
        if self.debug:
            self._audit_facts()
            self.reach_log.append((self.index - 1, tuple(self.reach(m) for m in range(n))))
        return emitted

    # -- main loop -----------------------------------------------------------

    def run(self) -> Iterator[Matching]:
        """Yield every matching after the starting one until the target is reached."""
        for m in range(self.inst.num_men):
            if self.wife[m] is not None:
                self.ed_m[m].add(self.wife[m])
        self.dirty = True
        while not self.done():
            changed = self._promote()
            self.refresh_components()
            changed |= self._augment()
            emitted = False
            for M in self._emit():
                emitted = True
                yield M
            if not (changed or emitted):
                raise InvariantError(f"no progress in phase {self.phase}")
            self.phase += 1

    # -- debug audits --------------------------------------------------------

    def _audit_facts(self) -> None:
        inst = self.inst
        self.refresh_components()
        for m in range(inst.num_men):
            for w in self.ec_m[m]:
                if w not in self.ed_m[m]:
                    raise InvariantError("candidate edge missing from the dependency graph")
            for w in self.ed_m[m]:
                if w == self.wife[m]:
                    continue
                if inst.men_rank[m][w] < self.rank_m(m):
                    raise InvariantError("arc to a woman the man prefers to his partner")
                if inst.women_rank[w][m] > self.rank_w(w):
                    raise InvariantError("arc to a woman who prefers her partner")

    def _audit_changed_set(self, men: List[int]) -> None:
        # men whose rank changes, with their partners, must form closed components
        n = self.inst.num_men
        moved = {m for m in men if self.mp_m[m] != self.wife[m]}
        verts = set(moved) | {n + self.mp_m[m] for m in moved} | {n + self.wife[m] for m in moved}
        for v in verts:
            if not self.closed[self.comp[v]]:
                raise InvariantError("changed vertex outside a closed component")
        touched = {self.comp[v] for v in verts}
        for v, c in enumerate(self.comp):
            if c in touched and v not in verts:
                raise InvariantError("changed set splits a component")

    def _audit_level_maximal(self) -> None:
        # no alternating path from a free woman to a woman of lower level
        for w0 in range(self.inst.num_women):
            if self.mp_w[w0] is not None or not self.ec_w[w0]:
                continue
            lvl = self.woman_level(w0)
            seen = {w0}
            stack = [w0]
            while stack:
                w = stack.pop()
                for x in self.ec_w[w]:
                    w2 = self.mp_m[x]
                    if w2 is None or w2 in seen:
                        continue
                    if self.woman_level(w2) < lvl:
                        raise InvariantError("matching M' is not level-maximal")
                    seen.add(w2)
                    stack.append(w2)


def strict_successor(state: SuccessorState) -> Optional[Tuple[Matching, SuccessorState]]:
    """Advance to the next matching of the chain, or ``None`` when finished."""
    if state._runner is None:
        state._runner = state.run()
    try:
        M = next(state._runner)
    except StopIteration:
        return None
    return M, state


def maximal_sequence(inst: Instance, order: Optional[Sequence[int]] = None,
                     debug: bool = False) -> Optional[MaximalSequence]:
    """Chain ``M0 > M1 > ... > Mz`` of strict successors, or ``None`` if unsolvable.

    ``order`` fixes the priority in which men are processed; it only changes
    which of several valid chains is produced.
    """
    state = SuccessorState.initial(inst, order=order, debug=debug)
    if state is None:
        return None
    out = [state.current()]
    while True:
        step = strict_successor(state)
        if step is None:
            break
        out.append(step[0])
    if signature(inst, out[-1]) != signature(inst, state.target):
        raise InvariantError("chain did not reach the woman-optimal class")
    if debug:
        _audit_reach(inst, out, state.reach_log)
    return MaximalSequence(tuple(out))


def _audit_reach(inst: Instance, chain: List[Matching], log) -> None:
    """A man who moves later never ends above his best remaining edge."""
    sigs = [signature(inst, M) for M in chain]
    for i, reach in log:
        for k in range(i + 1, len(sigs)):
            for m, r in enumerate(sigs[k]):
                if r != sigs[k - 1][m] and r < reach[m]:
                    raise InvariantError(
                        f"{inst.men[m]} reaches rank {r} above his bound {reach[m]}")


def has_intermediate(inst: Instance) -> bool:
    """Whether some class is neither the man-optimal nor the woman-optimal one."""
    from .solver import NoSolution

    seq = maximal_sequence(inst)
    if seq is None:
        raise NoSolution("instance has no strongly stable matching")
    return seq.z >= 2


def format_sequence(inst: Instance, seq: Optional[MaximalSequence]) -> str:
    if seq is None:
        return "NONE\n"
    return "\n".join(format_matching(inst, M) for M in seq)
