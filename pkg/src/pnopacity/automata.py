"""Reverse automaton, subset-construction observer, and deterministic runs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import EmptyInitial
from .reachability import Edge, Lts


@dataclass(frozen=True)
class Dfa:
    """Determinization of an Lts: states are canonical sorted index sets.

    ``delta`` is a partial map; a missing (state, letter) entry means the
    letter cannot occur there. Only states reachable from ``initial`` exist.
    """

    states: tuple[tuple[int, ...], ...]
    events: tuple[str, ...]
    delta: Mapping[tuple[int, str], int]
    initial: int = 0


def reverse(lts: Lts) -> Lts:
    """Flip every edge; the initial set becomes the whole state space."""
    flipped = tuple(Edge(e.dst, e.label, e.src, e.trans) for e in lts.edges)
    return Lts(lts.states, lts.events, flipped, frozenset(range(len(lts.states))))


def observer(lts: Lts, init: Iterable[int]) -> Dfa:
    """Classic subset construction over ``lts`` starting from ``init``.

    The start state is the silent closure of ``init``; each move is one
    observable letter followed by silent closure. Transitions exist only for
    letters with a non-empty successor set, and state sets are kept sorted so
    numbering is reproducible.
    """
    init = frozenset(init)
    if not init:
        raise EmptyInitial("observer construction needs a non-empty initial set")
    start = tuple(sorted(lts.epsilon_closure(init)))
    states: list[tuple[int, ...]] = [start]
    index: dict[tuple[int, ...], int] = {start: 0}
    delta: dict[tuple[int, str], int] = {}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        subset = frozenset(states[i])
        for letter in lts.events:
            nxt = lts.epsilon_closure(lts.step(subset, letter))
            if not nxt:
                continue
            key = tuple(sorted(nxt))
            j = index.get(key)
            if j is None:
                j = len(states)
                index[key] = j
                states.append(key)
                queue.append(j)
            delta[(i, letter)] = j
    return Dfa(tuple(states), lts.events, delta, 0)


def run(dfa: Dfa, word: Iterable[str]) -> tuple[int, ...] | None:
    """Fold ``delta`` over ``word``; None means the run is undefined."""
    cur = dfa.initial
    for letter in word:
        nxt = dfa.delta.get((cur, letter))
        if nxt is None:
            return None
        cur = nxt
    return dfa.states[cur]
