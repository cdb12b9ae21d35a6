"""Petri net structure, firing semantics, labeling, and the unobservable subnet.

Everything here is an immutable value; the operations are pure functions, so
nets and markings can be shared freely between threads.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import NotEnabled, UnknownTransition

Matrix = tuple[tuple[int, ...], ...]


def _matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


@dataclass(frozen=True)
class Marking:
    """Token counts per place, in the net's place order."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(x) for x in self.counts))

    def covers(self, demand: Sequence[int]) -> bool:
        """True iff this marking has at least ``demand`` tokens everywhere."""
        return all(c >= d for c, d in zip(self.counts, demand))

    def add(self, delta: Sequence[int]) -> "Marking":
        return Marking(tuple(c + d for c, d in zip(self.counts, delta)))

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.counts) + ")"


def format_marking(m: Marking, places: Sequence[str]) -> str:
    """Render a marking as a weighted sum of place names, e.g. ``2p1+p3``."""
    parts = []
    for count, place in zip(m.counts, places):
        if count == 1:
            parts.append(place)
        elif count > 1:
            parts.append(f"{count}{place}")
    return "+".join(parts) if parts else "0"


@dataclass(frozen=True)
class PetriNet:
    """Net structure: places, transitions, and dense pre/post arc matrices.

    ``pre`` and ``post`` are places x transitions matrices of arc weights.
    Construction only normalizes the data; structural invariants are checked
    by :func:`validate_net` so that malformed inputs can be reported instead
    of raising here.
    """

    places: tuple[str, ...]
    transitions: tuple[str, ...]
    pre: Matrix
    post: Matrix

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(self.places))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "pre", _matrix(self.pre))
        object.__setattr__(self, "post", _matrix(self.post))

    @cached_property
    def transition_index(self) -> dict[str, int]:
        return {t: j for j, t in enumerate(self.transitions)}

    @cached_property
    def place_index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.places)}

    @cached_property
    def incidence(self) -> Matrix:
        """post - pre, entrywise."""
        return tuple(
            tuple(po - pr for po, pr in zip(po_row, pr_row))
            for po_row, pr_row in zip(self.post, self.pre)
        )

    def column(self, matrix: Matrix, t: str) -> tuple[int, ...]:
        j = self.transition_index.get(t)
        if j is None:
            raise UnknownTransition(f"unknown transition id {t!r}")
        return tuple(row[j] for row in matrix)


@dataclass(frozen=True)
class LabeledPetriNet:
    """A net system plus an alphabet and a transition labeling.

    ``labeling`` maps every transition id to a label from ``alphabet`` or to
    None for unobservable (silent) transitions.
    """

    net: PetriNet
    initial: Marking
    alphabet: tuple[str, ...]
    labeling: Mapping[str, str | None]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "labeling", dict(self.labeling))

    @cached_property
    def observable(self) -> tuple[str, ...]:
        return tuple(t for t in self.net.transitions if self.labeling.get(t) is not None)

    @cached_property
    def unobservable(self) -> tuple[str, ...]:
        return tuple(t for t in self.net.transitions if self.labeling.get(t) is None)

    def label_of(self, t: str) -> str | None:
        return self.labeling[t]


@dataclass(frozen=True)
class SubnetView:
    """The parent net restricted to its unobservable transitions."""

    parent: LabeledPetriNet
    kept: tuple[str, ...]
    incidence_u: Matrix


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[ValidationIssue, ...]
    warnings: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_net(lpn: LabeledPetriNet) -> ValidationReport:
    """Report every violated structural invariant of a labeled net.

    Report-only: an empty ``errors`` tuple means the net is well-formed.
    Unused alphabet letters are reported as warnings, not errors.
    """
    net = lpn.net
    m, n = len(net.places), len(net.transitions)
    errors: list[ValidationIssue] = []
    warnings: list[ValidationIssue] = []

    for name, ident_list in (("place", net.places), ("transition", net.transitions)):
        for ident, count in Counter(ident_list).items():
            if count > 1:
                errors.append(ValidationIssue(
                    "duplicate-id", f"{name} id {ident!r} declared {count} times"))

    for name, matrix in (("pre", net.pre), ("post", net.post)):
        if len(matrix) != m:
            errors.append(ValidationIssue(
                "dimension-mismatch",
                f"{name} matrix has {len(matrix)} rows, expected {m}"))
        for i, row in enumerate(matrix):
            if len(row) != n:
                errors.append(ValidationIssue(
                    "dimension-mismatch",
                    f"{name} row {i} has {len(row)} entries, expected {n}"))
            for x in row:
                if x < 0:
                    errors.append(ValidationIssue(
                        "negative-weight", f"{name} row {i} contains {x}"))
                    break

    if len(lpn.initial.counts) != m:
        errors.append(ValidationIssue(
            "dimension-mismatch",
            f"initial marking has {len(lpn.initial.counts)} entries, expected {m}"))
    if any(c < 0 for c in lpn.initial.counts):
        errors.append(ValidationIssue("negative-tokens", "initial marking has a negative entry"))

    for t in net.transitions:
        if t not in lpn.labeling:
            errors.append(ValidationIssue("missing-label", f"transition {t!r} has no labeling entry"))
        else:
            lab = lpn.labeling[t]
            if lab is not None and lab not in lpn.alphabet:
                errors.append(ValidationIssue(
                    "unknown-label", f"transition {t!r} labeled {lab!r}, not in the alphabet"))

    used = {lab for lab in lpn.labeling.values() if lab is not None}
    for letter in lpn.alphabet:
        if letter not in used:
            warnings.append(ValidationIssue(
                "unused-label", f"alphabet letter {letter!r} labels no transition"))

    return ValidationReport(tuple(errors), tuple(warnings))


def enabled(net: PetriNet, m: Marking, t: str) -> bool:
    """True iff ``m`` covers the pre-weights of ``t``."""
    return m.covers(net.column(net.pre, t))


def fire(net: PetriNet, m: Marking, t: str) -> Marking:
    """Fire ``t`` at ``m``, yielding m + incidence(., t)."""
    if not enabled(net, m, t):
        raise NotEnabled(t)
    return m.add(net.column(net.incidence, t))


def fire_sequence(net: PetriNet, m: Marking, seq: Sequence[str]) -> Marking:
    """Fold :func:`fire` over ``seq``; the empty sequence returns ``m``."""
    cur = m
    for i, t in enumerate(seq):
        if not enabled(net, cur, t):
            raise NotEnabled(t, index=i)
        cur = cur.add(net.column(net.incidence, t))
    return cur


def parikh(seq: Sequence[str], transitions: Sequence[str]) -> tuple[int, ...]:
    """Occurrence counts of ``seq`` against the given transition ordering."""
    counts = Counter(seq)
    unknown = set(counts) - set(transitions)
    if unknown:
        raise UnknownTransition(f"unknown transition ids {sorted(unknown)!r}")
    return tuple(counts.get(t, 0) for t in transitions)


def observe(lpn: LabeledPetriNet, seq: Sequence[str]) -> tuple[str, ...]:
    """Project a firing sequence to its observation word (silent steps vanish)."""
    word = []
    for t in seq:
        lab = lpn.labeling[t]
        if lab is not None:
            word.append(lab)
    return tuple(word)


def unobservable_subnet(lpn: LabeledPetriNet) -> SubnetView:
    """Restrict the net to its unobservable transitions (column selection)."""
    kept = lpn.unobservable
    cols = [lpn.net.transition_index[t] for t in kept]
    incidence_u = tuple(tuple(row[j] for j in cols) for row in lpn.net.incidence)
    return SubnetView(lpn, kept, incidence_u)


def is_acyclic(sub: SubnetView) -> bool:
    """Decide acyclicity of the subnet's bipartite place/transition graph.

    Nodes are the places plus the kept transitions; a nonzero pre entry gives
    a place->transition arc and a nonzero post entry a transition->place arc.
    Kahn's algorithm: acyclic iff every node can be topologically ordered.
    """
    net = sub.parent.net
    places = [("p", i) for i in range(len(net.places))]
    trans = [("t", t) for t in sub.kept]
    succ: dict[tuple, list[tuple]] = {v: [] for v in places + trans}
    indeg = {v: 0 for v in succ}
    for t in sub.kept:
        j = net.transition_index[t]
        for i in range(len(net.places)):
            if net.pre[i][j] > 0:
                succ[("p", i)].append(("t", t))
                indeg[("t", t)] += 1
            if net.post[i][j] > 0:
                succ[("t", t)].append(("p", i))
                indeg[("p", i)] += 1
    queue = deque(v for v, d in indeg.items() if d == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == len(indeg)
