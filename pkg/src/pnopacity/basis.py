"""Basis markings: explanations, the basis reachability graph, secrets.

A basis marking is reached from another basis marking by one observable
transition preceded by a minimal silent enabling sequence. Keeping only those
markings compresses the reachability graph while preserving the observed
language, which is what the opacity decision procedures run on.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .errors import BoundExceeded, CyclicUnobservableSubnet, UnknownTransition
from .net import (
    LabeledPetriNet,
    Marking,
    SubnetView,
    enabled,
    fire,
    is_acyclic,
    unobservable_subnet,
)
from .reachability import BoundConfig, DEFAULT_BOUNDS, Edge, Lts, unobservable_reach


@dataclass(frozen=True)
class Explanation:
    """A silent firing-count vector enabling an observable transition.

    ``vector`` is indexed by the subnet's kept-transition order; ``witness``
    is one concrete silent sequence realizing it.
    """

    vector: tuple[int, ...]
    witness: tuple[str, ...]


@dataclass(frozen=True)
class EdgeOrigin:
    """Why a basis edge exists: minimal vector, observable transition, witness."""

    vector: tuple[int, ...]
    transition: str
    witness: tuple[str, ...]


@dataclass(frozen=True)
class Brg:
    """The basis reachability graph plus per-edge justification metadata.

    ``graph`` is nondeterministic in general: one letter may lead a basis
    marking to several successors. ``origin`` maps (src index, label, dst
    index) to every (vector, transition) pair that justified the edge.
    """

    graph: Lts
    origin: Mapping[tuple[int, str, int], tuple[EdgeOrigin, ...]]


@dataclass(frozen=True)
class Secret:
    """An explicit set of secret markings."""

    members: frozenset[Marking]

    def __contains__(self, m: Marking) -> bool:
        return m in self.members


@dataclass(frozen=True)
class SecretClosureReport:
    """Escapes of the secret through silent firings, per secret basis marking.

    Each violation is a pair (secret basis marking, marking in its
    unobservable reach that is not in the secret). Graph-based opacity
    verdicts are only valid when this report is clean.
    """

    violations: tuple[tuple[Marking, Marking], ...]

    @property
    def holds(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class SecretBasisSplit:
    """Basis-graph state indices partitioned into secret and non-secret."""

    secret: tuple[int, ...]
    nonsecret: tuple[int, ...]


def _explore_vectors(
    lpn: LabeledPetriNet,
    sub: SubnetView,
    m: Marking,
    t: str,
    cfg: BoundConfig,
    prune_dominated: bool,
) -> dict[tuple[int, ...], tuple[str, ...]]:
    """Breadth-first search over silent firing-count vectors from ``m``.

    Returns every distinct vector after which ``t`` is enabled, with one
    witness each. With ``prune_dominated`` the search drops any vector that
    componentwise dominates an already-found hit; extensions only grow the
    vector, so nothing minimal is lost.
    """
    net = lpn.net
    pre_t = net.column(net.pre, t)
    kept = sub.kept
    zero = (0,) * len(kept)
    found: dict[tuple[int, ...], tuple[str, ...]] = {}
    visited = {zero}
    queue = deque([(zero, m, ())])
    while queue:
        vector, cur, witness = queue.popleft()
        if cur.covers(pre_t):
            found.setdefault(vector, witness)
            if prune_dominated:
                continue
        if prune_dominated and any(
            all(a <= b for a, b in zip(hit, vector)) for hit in found if hit != vector
        ):
            continue
        for pos, tu in enumerate(kept):
            if not enabled(net, cur, tu):
                continue
            grown = tuple(v + 1 if j == pos else v for j, v in enumerate(vector))
            if grown in visited:
                continue
            if len(visited) >= cfg.max_states:
                raise BoundExceeded("states", cfg.max_states)
            nxt = fire(net, cur, tu)
            cfg.check_tokens(nxt)
            visited.add(grown)
            queue.append((grown, nxt, witness + (tu,)))
    return found


def _require_searchable(lpn: LabeledPetriNet, t: str) -> SubnetView:
    if t not in lpn.net.transition_index:
        raise UnknownTransition(f"unknown transition id {t!r}")
    if lpn.labeling.get(t) is None:
        raise UnknownTransition(f"transition {t!r} is unobservable")
    sub = unobservable_subnet(lpn)
    if not is_acyclic(sub):
        raise CyclicUnobservableSubnet(
            "the unobservable-transition subnet has a directed cycle")
    return sub


def explanations(
    lpn: LabeledPetriNet, m: Marking, t: str, cfg: BoundConfig = DEFAULT_BOUNDS
) -> tuple[Explanation, ...]:
    """All silent sequences (one witness per distinct vector) enabling ``t`` at ``m``."""
    sub = _require_searchable(lpn, t)
    found = _explore_vectors(lpn, sub, m, t, cfg, prune_dominated=False)
    return tuple(Explanation(v, found[v]) for v in sorted(found))


def minimal_explanations(
    lpn: LabeledPetriNet, m: Marking, t: str, cfg: BoundConfig = DEFAULT_BOUNDS
) -> tuple[Explanation, ...]:
    """The componentwise-minimal explanations of ``t`` at ``m``."""
    sub = _require_searchable(lpn, t)
    found = _explore_vectors(lpn, sub, m, t, cfg, prune_dominated=True)
    return _minima(found)


def _minima(found: dict[tuple[int, ...], tuple[str, ...]]) -> tuple[Explanation, ...]:
    vectors = list(found)
    keep = [
        v for v in vectors
        if not any(o != v and all(a <= b for a, b in zip(o, v)) for o in vectors)
    ]
    return tuple(Explanation(v, found[v]) for v in sorted(keep))


def basis_successors(
    lpn: LabeledPetriNet, m: Marking, t: str, cfg: BoundConfig = DEFAULT_BOUNDS
) -> frozenset[Marking]:
    """Markings reached by firing a minimal explanation of ``t`` and then ``t``."""
    net = lpn.net
    out = set()
    for expl in minimal_explanations(lpn, m, t, cfg):
        cur = m
        for tu in expl.witness:
            cur = fire(net, cur, tu)
        out.add(fire(net, cur, t))
    return frozenset(out)


def build_brg(lpn: LabeledPetriNet, cfg: BoundConfig = DEFAULT_BOUNDS) -> Brg:
    """Fixed-point closure of the basis marking set into a labeled graph.

    Starting from the initial marking, every observable transition with a
    minimal explanation contributes successors; states merge by marking and
    parallel justifications accumulate on the edge's origin metadata.
    """
    sub = unobservable_subnet(lpn)
    if not is_acyclic(sub):
        raise CyclicUnobservableSubnet(
            "the unobservable-transition subnet has a directed cycle")
    net = lpn.net
    cfg.check_tokens(lpn.initial)
    states: list[Marking] = [lpn.initial]
    index: dict[Marking, int] = {lpn.initial: 0}
    raw_edges: list[tuple[int, str, Marking]] = []
    origins: dict[tuple[int, str, Marking], list[EdgeOrigin]] = {}
    frontier: list[Marking] = [lpn.initial]
    while frontier:
        discovered: list[Marking] = []
        for m in frontier:
            src = index[m]
            for t in lpn.observable:
                found = _explore_vectors(lpn, sub, m, t, cfg, prune_dominated=True)
                label = lpn.label_of(t)
                for expl in _minima(found):
                    cur = m
                    for tu in expl.witness:
                        cur = fire(net, cur, tu)
                    m2 = fire(net, cur, t)
                    cfg.check_tokens(m2)
                    key = (src, label, m2)
                    if key not in origins:
                        origins[key] = []
                        raw_edges.append(key)
                    origins[key].append(EdgeOrigin(expl.vector, t, expl.witness))
                    if m2 not in index and m2 not in discovered:
                        discovered.append(m2)
        discovered.sort(key=lambda mk: mk.counts)
        for m2 in discovered:
            if len(states) >= cfg.max_states:
                raise BoundExceeded("states", cfg.max_states)
            index[m2] = len(states)
            states.append(m2)
        frontier = discovered
    edges = tuple(Edge(src, label, index[m2]) for src, label, m2 in raw_edges)
    origin = {
        (src, label, index[m2]): tuple(sorted(
            origins[(src, label, m2)], key=lambda o: (o.vector, o.transition)))
        for src, label, m2 in raw_edges
    }
    graph = Lts(tuple(states), lpn.alphabet, edges, frozenset({0}))
    return Brg(graph, origin)


def check_secret_closure(
    lpn: LabeledPetriNet, brg: Brg, secret: Secret, cfg: BoundConfig = DEFAULT_BOUNDS
) -> SecretClosureReport:
    """Verify that silent moves cannot leave the secret from a secret basis marking.

    For every basis marking inside the secret, its whole unobservable reach
    must lie inside the secret as well; each escaping marking is reported.
    """
    violations = []
    for m in brg.graph.states:
        if m not in secret:
            continue
        for reached in sorted(unobservable_reach(lpn, m, cfg), key=lambda mk: mk.counts):
            if reached not in secret:
                violations.append((m, reached))
    return SecretClosureReport(tuple(violations))


def secret_basis_partition(brg: Brg, secret: Secret) -> SecretBasisSplit:
    """Split basis-graph state indices by secret membership."""
    secret_idx = []
    nonsecret_idx = []
    for i, m in enumerate(brg.graph.states):
        (secret_idx if m in secret else nonsecret_idx).append(i)
    return SecretBasisSplit(tuple(secret_idx), tuple(nonsecret_idx))
