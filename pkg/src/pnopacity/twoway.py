"""Two-way observer construction and the opacity decision procedures.

The two-way observer pairs a forward observer (current-state estimate) with
an estimator built on the reversed graph (which states could have produced a
reversed suffix). A paired state whose components intersect in a non-empty
set of exclusively secret markings certifies that an intruder can pin the
system to the secret at some past instant.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .automata import Dfa
from .basis import SecretBasisSplit, SecretClosureReport
from .errors import NoViolation, SecretClosureRequired

TaggedEvent = tuple[str | None, str | None]  # (letter, None) or (None, letter)


def format_tagged(ev: TaggedEvent) -> str:
    first = ev[0] if ev[0] is not None else "λ"
    second = ev[1] if ev[1] is not None else "λ"
    return f"({first},{second})"


@dataclass(frozen=True)
class TwState:
    """Indices into the observer and estimator state tables."""

    first: int
    second: int


@dataclass(frozen=True)
class TwObserver:
    """Product-style graph over observer/estimator state pairs.

    Events are tagged: ``(letter, None)`` moves only the first component,
    ``(None, letter)`` only the second. ``k`` is None for the unrestricted
    build and the estimator-step budget for the k-reduced build.
    """

    states: tuple[TwState, ...]
    events: tuple[TaggedEvent, ...]
    delta: Mapping[tuple[TwState, TaggedEvent], TwState]
    initial: TwState
    k: int | None
    observer: Dfa
    estimator: Dfa

    def component_sets(self, q: TwState) -> tuple[frozenset[int], frozenset[int]]:
        return (
            frozenset(self.observer.states[q.first]),
            frozenset(self.estimator.states[q.second]),
        )


@dataclass(frozen=True)
class StateViolation:
    """A paired state whose component intersection lies inside the secret."""

    state: TwState
    intersection: tuple[int, ...]  # basis-graph state indices


@dataclass(frozen=True)
class OpacityVerdict:
    """Outcome of an opacity check.

    ``certified_depth`` is None for the complete graph-based procedures; the
    bounded oracle sets it to its exploration depth. ``complete`` records
    whether the underlying search saturated, i.e. the verdict could not
    change at any greater depth.
    """

    opaque: bool
    property: str
    violations: tuple = ()
    certified_depth: int | None = None
    complete: bool = True


def build_two_way(bo: Dfa, be: Dfa, k: int | None = None) -> TwObserver:
    """Two-phase closure of the paired observer/estimator graph.

    Phase one repeatedly applies estimator moves from the initial pair,
    pinning the first component; with ``k`` set, only pairs within ``k``
    estimator steps are kept. Phase two closes the accumulated states under
    observer moves, re-queueing states discovered along the way. The result
    (unrestricted) is exactly the product of the two reachable state spaces,
    but with estimator moves confined to the first phase's states.
    """
    if k is not None and k < 0:
        raise ValueError("k must be non-negative")
    q0 = TwState(bo.initial, be.initial)
    states: list[TwState] = [q0]
    seen = {q0}
    delta: dict[tuple[TwState, TaggedEvent], TwState] = {}
    distance = {q0: 0}
    queue = deque([q0])
    while queue:
        q = queue.popleft()
        if k is not None and distance[q] >= k:
            continue
        for letter in be.events:
            j = be.delta.get((q.second, letter))
            if j is None:
                continue
            q2 = TwState(q.first, j)
            delta[(q, (None, letter))] = q2
            if q2 not in seen:
                seen.add(q2)
                states.append(q2)
                distance[q2] = distance[q] + 1
                queue.append(q2)
    queue = deque(states)
    while queue:
        q = queue.popleft()
        for letter in bo.events:
            j = bo.delta.get((q.first, letter))
            if j is None:
                continue
            q2 = TwState(j, q.second)
            delta[(q, (letter, None))] = q2
            if q2 not in seen:
                seen.add(q2)
                states.append(q2)
                queue.append(q2)
    events = tuple((e, None) for e in bo.events) + tuple((None, e) for e in be.events)
    return TwObserver(tuple(states), events, delta, q0, k, bo, be)


def _scan(tw: TwObserver, split: SecretBasisSplit, closure: SecretClosureReport,
          prop: str) -> OpacityVerdict:
    if closure is None or not closure.holds:
        raise SecretClosureRequired(
            "secret closure under unobservable reach was not verified")
    secret = frozenset(split.secret)
    violations = []
    for q in tw.states:
        first, second = tw.component_sets(q)
        intersection = first & second
        if intersection and intersection <= secret:
            violations.append(StateViolation(q, tuple(sorted(intersection))))
    return OpacityVerdict(not violations, prop, tuple(violations))


def check_infinite_step(
    tw: TwObserver, split: SecretBasisSplit, closure: SecretClosureReport
) -> OpacityVerdict:
    """Decide infinite-step opacity: no pair may intersect inside the secret.

    An empty intersection never counts as a violation; the intersection must
    be non-empty and consist of secret basis markings only.
    """
    if tw.k is not None:
        raise ValueError("infinite-step check needs the unrestricted two-way observer")
    return _scan(tw, split, closure, "infinite")


def check_k_step(
    tw: TwObserver, split: SecretBasisSplit, closure: SecretClosureReport
) -> OpacityVerdict:
    """Decide k-step opacity on a k-reduced two-way observer."""
    if tw.k is None:
        raise ValueError("k-step check needs a k-reduced two-way observer")
    return _scan(tw, split, closure, f"{tw.k}-step")


@dataclass(frozen=True)
class WitnessPath:
    """Shortest tagged path from the initial pair to a violating state.

    ``revealed_prefix`` is the observation after which the intersection is
    certainly secret; ``exposing_suffix`` is the (re-reversed) continuation
    the estimator used to expose it.
    """

    state: TwState
    events: tuple[TaggedEvent, ...]
    revealed_prefix: tuple[str, ...]
    exposing_suffix: tuple[str, ...]

    def describe(self) -> str:
        u = "".join(self.revealed_prefix) or "ε"
        v = "".join(self.exposing_suffix) or "ε"
        return f"prefix {u!r} reveals the secret; suffix {v!r} extends it"


def extract_witness(verdict: OpacityVerdict, tw: TwObserver) -> tuple[WitnessPath, ...]:
    """Tagged-event paths witnessing every violation of a non-opaque verdict."""
    if verdict.opaque:
        raise NoViolation("the verdict is opaque; there is nothing to witness")
    adjacency: dict[TwState, list[tuple[TaggedEvent, TwState]]] = {}
    for (q, ev), q2 in tw.delta.items():
        adjacency.setdefault(q, []).append((ev, q2))
    parent: dict[TwState, tuple[TwState, TaggedEvent] | None] = {tw.initial: None}
    queue = deque([tw.initial])
    while queue:
        q = queue.popleft()
        for ev, q2 in adjacency.get(q, ()):
            if q2 not in parent:
                parent[q2] = (q, ev)
                queue.append(q2)
    witnesses = []
    for violation in verdict.violations:
        target = violation.state
        path: list[TaggedEvent] = []
        cur = target
        while parent[cur] is not None:
            prev, ev = parent[cur]
            path.append(ev)
            cur = prev
        path.reverse()
        u = tuple(ev[0] for ev in path if ev[0] is not None)
        v = tuple(ev[1] for ev in path if ev[1] is not None)
        witnesses.append(WitnessPath(target, tuple(path), u, tuple(reversed(v))))
    return tuple(witnesses)
