"""Independent reference implementations used to cross-check the package.

Everything here recomputes results from first principles (raw sequence
enumeration, path search) without going through the code paths under test,
so a bug in the package cannot hide by agreeing with itself.
"""

from __future__ import annotations

from collections import deque

from pnopacity import Dfa, LabeledPetriNet, Lts, Marking


def _enabled(lpn: LabeledPetriNet, counts: tuple[int, ...], j: int) -> bool:
    return all(counts[i] >= lpn.net.pre[i][j] for i in range(len(counts)))


def _fire(lpn: LabeledPetriNet, counts: tuple[int, ...], j: int) -> tuple[int, ...]:
    return tuple(
        c - lpn.net.pre[i][j] + lpn.net.post[i][j] for i, c in enumerate(counts)
    )


def firing_sequences(lpn: LabeledPetriNet, max_len: int):
    """Yield (sequence of transition indices, reached counts) up to max_len."""
    start = lpn.initial.counts
    frontier = [((), start)]
    yield (), start
    for _ in range(max_len):
        grown = []
        for seq, counts in frontier:
            for j in range(len(lpn.net.transitions)):
                if _enabled(lpn, counts, j):
                    item = (seq + (j,), _fire(lpn, counts, j))
                    grown.append(item)
                    yield item
        frontier = grown


def observation_of(lpn: LabeledPetriNet, seq: tuple[int, ...]) -> tuple[str, ...]:
    labels = [lpn.labeling[lpn.net.transitions[j]] for j in seq]
    return tuple(lab for lab in labels if lab is not None)


def consistent_by_enumeration(
    lpn: LabeledPetriNet, w: tuple[str, ...], max_len: int
) -> frozenset[Marking]:
    """Markings reachable by some sequence observed as ``w`` (raw enumeration)."""
    hits = set()
    for seq, counts in firing_sequences(lpn, max_len):
        if observation_of(lpn, seq) == tuple(w):
            hits.add(Marking(counts))
    return frozenset(hits)


def words_by_enumeration(
    lpn: LabeledPetriNet, sources: set[tuple[int, ...]], depth: int
) -> set[tuple[str, ...]]:
    """Observation words of length <= depth from the given count vectors."""
    words: set[tuple[str, ...]] = set()
    seen: set[tuple[tuple[int, ...], tuple[str, ...]]] = set()
    frontier = deque((counts, ()) for counts in sources)
    for counts in sources:
        words.add(())
        seen.add((counts, ()))
    while frontier:
        counts, word = frontier.popleft()
        for j in range(len(lpn.net.transitions)):
            if not _enabled(lpn, counts, j):
                continue
            label = lpn.labeling[lpn.net.transitions[j]]
            nxt_word = word + (label,) if label is not None else word
            if len(nxt_word) > depth:
                continue
            item = (_fire(lpn, counts, j), nxt_word)
            if item not in seen:
                seen.add(item)
                words.add(nxt_word)
                frontier.append(item)
    return words


def nd_observation_reach(lts: Lts, init, w: tuple[str, ...]) -> frozenset[int]:
    """States reachable from ``init`` by a path observed as ``w``.

    Plain search over (state, letters consumed) pairs; silent edges keep the
    position, labeled edges must match the next letter. Independent of the
    package's closure/subset machinery.
    """
    w = tuple(w)
    succ: dict[int, list[tuple[str | None, int]]] = {}
    for e in lts.edges:
        succ.setdefault(e.src, []).append((e.label, e.dst))
    seen = {(i, 0) for i in init}
    queue = deque(seen)
    while queue:
        state, pos = queue.popleft()
        for label, dst in succ.get(state, ()):
            if label is None:
                item = (dst, pos)
            elif pos < len(w) and label == w[pos]:
                item = (dst, pos + 1)
            else:
                continue
            if item not in seen:
                seen.add(item)
                queue.append(item)
    return frozenset(state for state, pos in seen if pos == len(w))


def unmodified_two_way(bo: Dfa, be: Dfa):
    """Plain concurrent composition: both move kinds closed from every state.

    Comparison baseline for the transition-count advantage of the two-phase
    construction; returns (state pair set, delta dict).
    """
    q0 = (bo.initial, be.initial)
    states = {q0}
    delta = {}
    queue = deque([q0])
    while queue:
        first, second = queue.popleft()
        for letter in be.events:
            j = be.delta.get((second, letter))
            if j is not None:
                q2 = (first, j)
                delta[((first, second), (None, letter))] = q2
                if q2 not in states:
                    states.add(q2)
                    queue.append(q2)
        for letter in bo.events:
            j = bo.delta.get((first, letter))
            if j is not None:
                q2 = (j, second)
                delta[((first, second), (letter, None))] = q2
                if q2 not in states:
                    states.add(q2)
                    queue.append(q2)
    return states, delta
