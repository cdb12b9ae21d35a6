"""Bounded reachability-graph construction and language queries.

The labeled transition system built here is shared by every later stage: the
full reachability graph, the basis reachability graph, and its reverse all
use the same :class:`Lts` carrier.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable

from .errors import BoundExceeded
from .net import LabeledPetriNet, Marking, enabled, fire

EPSILON = None  # edge label of unobservable moves


@dataclass(frozen=True)
class Edge:
    src: int
    label: str | None
    dst: int
    trans: str | None = None  # firing transition id, when built from a net


@dataclass(frozen=True)
class Lts:
    """A labeled transition system with hashable state payloads.

    Payloads are markings for net-derived graphs but can be any hashable
    value. Edge labels are alphabet letters or ``None`` for silent moves.
    """

    states: tuple[Hashable, ...]
    events: tuple[str, ...]
    edges: tuple[Edge, ...]
    initial: frozenset[int]

    @cached_property
    def index(self) -> dict[Hashable, int]:
        return {payload: i for i, payload in enumerate(self.states)}

    @cached_property
    def _succ(self) -> dict[tuple[int, str | None], tuple[int, ...]]:
        table: dict[tuple[int, str | None], list[int]] = {}
        for e in self.edges:
            table.setdefault((e.src, e.label), []).append(e.dst)
        return {k: tuple(v) for k, v in table.items()}

    def step(self, sources: Iterable[int], letter: str) -> frozenset[int]:
        """States reached by one ``letter`` edge from any source."""
        out = set()
        for i in sources:
            out.update(self._succ.get((i, letter), ()))
        return frozenset(out)

    def epsilon_closure(self, sources: Iterable[int]) -> frozenset[int]:
        """Sources plus everything reachable through silent edges only."""
        seen = set(sources)
        queue = deque(seen)
        while queue:
            i = queue.popleft()
            for j in self._succ.get((i, EPSILON), ()):
                if j not in seen:
                    seen.add(j)
                    queue.append(j)
        return frozenset(seen)


@dataclass(frozen=True)
class BoundConfig:
    """Exploration caps standing in for an a-priori boundedness proof.

    ``max_states`` caps how many distinct markings may be materialized;
    ``max_token``, when set, caps every place of every visited marking.
    Tripping either raises :class:`BoundExceeded`.
    """

    max_states: int = 10_000
    max_token: int | None = None

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("max_states must be at least 1")

    def check_tokens(self, m: Marking) -> None:
        if self.max_token is not None and any(c > self.max_token for c in m.counts):
            raise BoundExceeded("tokens", self.max_token)


DEFAULT_BOUNDS = BoundConfig()


def build_rg(lpn: LabeledPetriNet, cfg: BoundConfig = DEFAULT_BOUNDS) -> Lts:
    """Explore all reachable markings breadth-first into an Lts.

    Edges carry the firing transition id and its label (None when silent).
    Newly discovered markings are numbered level by level in lexicographic
    order, so the state numbering is reproducible byte-for-byte.
    """
    net = lpn.net
    cfg.check_tokens(lpn.initial)
    states: list[Marking] = [lpn.initial]
    index: dict[Marking, int] = {lpn.initial: 0}
    raw_edges: list[tuple[int, str | None, Marking, str]] = []
    frontier: list[Marking] = [lpn.initial]
    while frontier:
        discovered: list[Marking] = []
        for m in frontier:
            src = index[m]
            for t in net.transitions:
                if not enabled(net, m, t):
                    continue
                m2 = fire(net, m, t)
                cfg.check_tokens(m2)
                raw_edges.append((src, lpn.label_of(t), m2, t))
                if m2 not in index and m2 not in discovered:
                    discovered.append(m2)
        discovered.sort(key=lambda mk: mk.counts)
        for m2 in discovered:
            if len(states) >= cfg.max_states:
                raise BoundExceeded("states", cfg.max_states)
            index[m2] = len(states)
            states.append(m2)
        frontier = discovered
    edges = tuple(Edge(src, lab, index[m2], t) for src, lab, m2, t in raw_edges)
    return Lts(tuple(states), lpn.alphabet, edges, frozenset({0}))


def unobservable_reach(
    lpn: LabeledPetriNet, m: Marking, cfg: BoundConfig = DEFAULT_BOUNDS
) -> frozenset[Marking]:
    """All markings reachable from ``m`` firing unobservable transitions only."""
    net = lpn.net
    cfg.check_tokens(m)
    seen = {m}
    queue = deque([m])
    while queue:
        cur = queue.popleft()
        for t in lpn.unobservable:
            if not enabled(net, cur, t):
                continue
            nxt = fire(net, cur, t)
            cfg.check_tokens(nxt)
            if nxt not in seen:
                if len(seen) >= cfg.max_states:
                    raise BoundExceeded("states", cfg.max_states)
                seen.add(nxt)
                queue.append(nxt)
    return frozenset(seen)


def consistent_markings(lpn: LabeledPetriNet, rg: Lts, w: Iterable[str]) -> frozenset[Marking]:
    """Markings reachable by some firing sequence observed exactly as ``w``.

    Computed by folding one observable step plus silent closure per letter
    over the reachability graph; a letter outside the alphabet yields the
    empty set.
    """
    current = rg.epsilon_closure(rg.initial)
    for letter in w:
        current = rg.epsilon_closure(rg.step(current, letter))
        if not current:
            return frozenset()
    return frozenset(rg.states[i] for i in current)


def language_upto(lts: Lts, sources: Iterable[int], depth: int) -> set[tuple[str, ...]]:
    """All observation words of length <= depth from any source state.

    Silent edges consume no length. Words are deduplicated by working on
    state subsets rather than individual paths, so shared suffixes are only
    expanded once per (subset, remaining-depth) pair.
    """
    start = lts.epsilon_closure(frozenset(sources))
    if not start:
        return set()
    memo: dict[tuple[frozenset[int], int], set[tuple[str, ...]]] = {}

    def words(subset: frozenset[int], remaining: int) -> set[tuple[str, ...]]:
        key = (subset, remaining)
        cached = memo.get(key)
        if cached is not None:
            return cached
        out: set[tuple[str, ...]] = {()}
        if remaining > 0:
            for letter in lts.events:
                nxt = lts.epsilon_closure(lts.step(subset, letter))
                if nxt:
                    out.update((letter,) + w for w in words(nxt, remaining - 1))
        memo[key] = out
        return out

    return words(start, depth)
