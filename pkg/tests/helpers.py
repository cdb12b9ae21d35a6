"""Shared builders for the hand-crafted demo net used across the suite.

The demo net is a seven-place chain that forks after one silent step into
two branches distinguishable only by their second observable letter, and
rejoins on a self-looping final place. It exercises every interesting case:
silent enabling sequences, nondeterministic observations, and a secret that
is closed under silent reach.
"""

from __future__ import annotations

from pathlib import Path

from pnopacity import LabeledPetriNet, Marking, PetriNet, Secret

DATA_DIR = Path(__file__).parent / "data"
DEMO_PATH = DATA_DIR / "demo_net.json"

PLACES = ("p1", "p2", "p3", "p4", "p5", "p6", "p7")
TRANSITIONS = ("t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8")

# pre/post arcs as (place, transition, weight) triples
_PRE = [("p1", "t1", 1), ("p2", "t2", 1), ("p2", "t3", 1), ("p3", "t4", 1),
        ("p4", "t5", 1), ("p5", "t6", 1), ("p6", "t7", 1), ("p7", "t8", 1)]
_POST = [("p2", "t1", 1), ("p3", "t2", 1), ("p4", "t3", 1), ("p5", "t4", 1),
         ("p6", "t5", 1), ("p7", "t6", 1), ("p7", "t7", 1), ("p7", "t8", 1)]

LABELING = {"t1": None, "t2": "a", "t3": "a", "t4": None,
            "t5": None, "t6": "a", "t7": "b", "t8": "a"}


def marking(**tokens: int) -> Marking:
    return Marking(tuple(tokens.get(p, 0) for p in PLACES))


def chain_marking(i: int) -> Marking:
    """The marking with a single token in place p(i+1); index 0 is initial."""
    return marking(**{f"p{i + 1}": 1})


def arcs_to_matrix(triples) -> tuple[tuple[int, ...], ...]:
    rows = [[0] * len(TRANSITIONS) for _ in PLACES]
    for place, trans, weight in triples:
        rows[PLACES.index(place)][TRANSITIONS.index(trans)] = weight
    return tuple(tuple(row) for row in rows)


def demo_lpn() -> LabeledPetriNet:
    net = PetriNet(PLACES, TRANSITIONS, arcs_to_matrix(_PRE), arcs_to_matrix(_POST))
    return LabeledPetriNet(net, chain_marking(0), ("a", "b"), LABELING)


def demo_secret() -> Secret:
    return Secret(frozenset({chain_marking(2), chain_marking(4)}))
