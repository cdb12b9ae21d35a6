"""Definition-level opacity checking on reachability graphs.

These checks evaluate the language-containment characterization of opacity
directly, bounded by an explicit depth, and exist to cross-validate the
graph-based decision procedures. A "not opaque" answer is definitive; an
"opaque" answer is certified up to the stated depth unless the search
saturated first, in which case it is complete.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .basis import Brg, Secret, SecretClosureReport
from .errors import BoundExceeded, SecretClosureRequired
from .net import LabeledPetriNet, Marking
from .reachability import BoundConfig, DEFAULT_BOUNDS, Lts, build_rg, consistent_markings
from .twoway import OpacityVerdict

# Safety valve for the synchronized subset searches; desk-scale instances stay
# far below it, anything near it signals a pathological input.
_SUBSET_CAP = 250_000


@dataclass(frozen=True)
class SecretPartition:
    """Consistent markings of one observation, split by secret membership."""

    secret_consistent: frozenset[Marking]
    nonsecret_consistent: frozenset[Marking]


@dataclass(frozen=True)
class WordViolation:
    """An observation whose secret explanations generate an unmatched suffix."""

    observation: tuple[str, ...]
    suffix: tuple[str, ...]


def secret_partition(
    lpn: LabeledPetriNet, rg: Lts, secret: Secret, w: Iterable[str]
) -> SecretPartition:
    """Split the markings consistent with ``w`` into secret and non-secret."""
    consistent = consistent_markings(lpn, rg, w)
    inside = frozenset(m for m in consistent if m in secret)
    return SecretPartition(inside, consistent - inside)


def _consistent_sets(lts: Lts) -> tuple[list[tuple[frozenset[int], tuple[str, ...], int]], int]:
    """Every distinct consistent state-set with a shortest witness word.

    Returns (entries, max_level) where each entry is (subset, word, level)
    in breadth-first order. Two observations with the same consistent set
    are interchangeable for containment checks, so enumerating subsets
    covers all observations without enumerating words.
    """
    start = lts.epsilon_closure(lts.initial)
    entries = [(start, (), 0)]
    seen = {start}
    frontier: list[tuple[frozenset[int], tuple[str, ...]]] = [(start, ())]
    level = 0
    while frontier:
        level += 1
        grown: list[tuple[frozenset[int], tuple[str, ...]]] = []
        for subset, word in frontier:
            for letter in lts.events:
                nxt = lts.epsilon_closure(lts.step(subset, letter))
                if nxt and nxt not in seen:
                    if len(seen) >= _SUBSET_CAP:
                        raise BoundExceeded("states", _SUBSET_CAP)
                    seen.add(nxt)
                    entries.append((nxt, word + (letter,), level))
                    grown.append((nxt, word + (letter,)))
        frontier = grown
    return entries, level - 1


def _suffix_containment(
    lts: Lts,
    sources_a: Iterable[int],
    sources_b: Iterable[int],
    cap: int,
) -> tuple[tuple[str, ...] | None, bool]:
    """Search for a word of length <= cap generable from A but not from B.

    Runs a synchronized subset search: a pair (A-set, B-set) with a letter
    continuing A but emptying B yields the violating suffix. Returns
    (suffix or None, saturated); ``saturated`` means every reachable pair was
    expanded within the cap, so no deeper suffix could change the outcome.
    """
    a = lts.epsilon_closure(frozenset(sources_a))
    if not a:
        return None, True
    b = lts.epsilon_closure(frozenset(sources_b))
    if not b:
        return (), True
    start = (a, b)
    seen = {start}
    frontier: list[tuple[tuple[frozenset[int], frozenset[int]], tuple[str, ...]]] = [
        (start, ())
    ]
    for _ in range(cap):
        grown = []
        for (cur_a, cur_b), word in frontier:
            for letter in lts.events:
                nxt_a = lts.epsilon_closure(lts.step(cur_a, letter))
                if not nxt_a:
                    continue
                nxt_b = lts.epsilon_closure(lts.step(cur_b, letter))
                if not nxt_b:
                    return word + (letter,), True
                key = (nxt_a, nxt_b)
                if key not in seen:
                    if len(seen) >= _SUBSET_CAP:
                        raise BoundExceeded("states", _SUBSET_CAP)
                    seen.add(key)
                    grown.append((key, word + (letter,)))
        frontier = grown
        if not frontier:
            break
    return None, not frontier


def _bounded_containment(
    lts: Lts,
    secret_members: frozenset[Marking],
    outer_depth: int,
    suffix_cap: int,
    prop: str,
    suffix_cap_is_semantic: bool,
) -> OpacityVerdict:
    # For k-step properties the suffix cap IS the property, so hitting it
    # never makes the verdict incomplete; for infinite-step it is a
    # truncation and only a saturated search is complete.
    secret_idx = frozenset(
        i for i, payload in enumerate(lts.states) if payload in secret_members
    )
    entries, max_level = _consistent_sets(lts)
    violations = []
    saturated = max_level <= outer_depth
    for subset, word, level in entries:
        if level > outer_depth:
            break
        inside = subset & secret_idx
        if not inside:
            continue
        outside = subset - secret_idx
        suffix, inner_saturated = _suffix_containment(lts, inside, outside, suffix_cap)
        if not suffix_cap_is_semantic:
            saturated = saturated and inner_saturated
        if suffix is not None:
            violations.append(WordViolation(word, suffix))
    return OpacityVerdict(
        opaque=not violations,
        property=prop,
        violations=tuple(violations),
        certified_depth=outer_depth,
        complete=saturated,
    )


def brute_force_infinite_step(
    lpn: LabeledPetriNet, secret: Secret, depth: int, cfg: BoundConfig = DEFAULT_BOUNDS
) -> OpacityVerdict:
    """Check, up to ``depth``, that secret explanations never generate more.

    For every observation of length <= depth, every suffix of length <=
    depth generable from its secret-consistent markings must also be
    generable from its non-secret-consistent markings.
    """
    rg = build_rg(lpn, cfg)
    return _bounded_containment(rg, secret.members, depth, depth, "infinite",
                                suffix_cap_is_semantic=False)


def brute_force_k_step(
    lpn: LabeledPetriNet,
    secret: Secret,
    k: int,
    depth: int,
    cfg: BoundConfig = DEFAULT_BOUNDS,
) -> OpacityVerdict:
    """Like the infinite-step check but with suffixes capped at ``k`` letters."""
    if depth < k:
        raise ValueError("depth must be at least k")
    rg = build_rg(lpn, cfg)
    return _bounded_containment(rg, secret.members, depth, k, f"{k}-step",
                                suffix_cap_is_semantic=True)


def basis_containment_check(
    brg: Brg,
    secret: Secret,
    depth: int,
    closure: SecretClosureReport,
    k: int | None = None,
) -> OpacityVerdict:
    """Run the same bounded containment directly on the basis graph.

    Valid only when the secret is closed under unobservable reach; the
    consistent sets here range over basis markings only.
    """
    if closure is None or not closure.holds:
        raise SecretClosureRequired(
            "secret closure under unobservable reach was not verified")
    suffix_cap = depth if k is None else k
    prop = "infinite" if k is None else f"{k}-step"
    return _bounded_containment(brg.graph, secret.members, depth, suffix_cap, prop,
                                suffix_cap_is_semantic=k is not None)
